#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/core.hpp"

namespace corpuskit::pagemerge {

enum class PageLabel { content, boilerplate, unlabeled };

struct Page {
    std::size_t index = 0;
    std::string text;
    PageLabel label = PageLabel::unlabeled;
};

enum class MergeAction {
    drop_footer,
    drop_header,
    join_hyphenated,
    join_same_paragraph,
    separate,
};

std::string_view to_string(MergeAction action);
MergeAction merge_action_from_string(std::string_view name);  // throws DataError

// Digits with decoration ("14", "- 14 -", "[14]", "3/12"), "Stran N", roman
// numerals.
bool looks_like_page_number(std::string_view text);

struct BoundaryContext {
    std::string doc_id;
    std::size_t boundary = 0;  // index of the left page among content pages
    std::size_t step = 0;      // nth decision at this boundary
    std::string_view last_par;
    std::string_view first_par;
};

// Decision source for classification and boundary merging. Implementations
// must be deterministic. begin_document runs once per document before any
// queries, letting providers learn per-document state.
class DecisionProvider {
  public:
    virtual ~DecisionProvider() = default;
    virtual void begin_document(const std::string& doc_id, const std::vector<Page>& pages);
    virtual PageLabel classify(const Page& page) const = 0;
    virtual MergeAction decide(const BoundaryContext& ctx) const = 0;
};

// Default rule provider. Classification: boilerplate iff alphanumeric ratio
// < 0.2, or shorter than 25 chars, or a bare page-number line. Boundary
// rules in priority order: footer, header, hyphenated word, sentence
// continuation, separate. A line repeated as the page edge on >= 3
// consecutive pages is treated as a running header/footer.
class HeuristicProvider : public DecisionProvider {
  public:
    void begin_document(const std::string& doc_id, const std::vector<Page>& pages) override;
    PageLabel classify(const Page& page) const override;
    MergeAction decide(const BoundaryContext& ctx) const override;

  private:
    std::vector<std::string> running_lines_;
};

// Replays decisions precomputed elsewhere (e.g. by a model), keyed by
// (doc_id, boundary, step); boundaries without an entry fall back to the
// heuristic rules.
class ReplayProvider : public DecisionProvider {
  public:
    static ReplayProvider load(const std::filesystem::path& path);

    void add(const std::string& doc_id, std::size_t boundary, std::size_t step,
             MergeAction action);
    void begin_document(const std::string& doc_id, const std::vector<Page>& pages) override;
    PageLabel classify(const Page& page) const override;
    MergeAction decide(const BoundaryContext& ctx) const override;

  private:
    std::map<std::tuple<std::string, std::size_t, std::size_t>, MergeAction> decisions_;
    HeuristicProvider fallback_;
};

// Free-function defaults for one-off use.
PageLabel classify_page(const Page& page, const std::vector<Page>& context = {});
MergeAction decide_merge(std::string_view last_par, std::string_view first_par);

struct MergeLogEntry {
    std::size_t boundary = 0;
    std::size_t step = 0;
    MergeAction action;
};

// Removes boilerplate pages, then folds left to right deciding each page
// boundary. Empty page set after removal yields an empty document.
Document merge_pages(const std::string& doc_id, const std::vector<Page>& pages,
                     DecisionProvider& provider, std::vector<MergeLogEntry>* log = nullptr);

}  // namespace corpuskit::pagemerge
