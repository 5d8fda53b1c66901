#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/core.hpp"

namespace corpuskit::evalmetrics {

struct TranslationPair {
    std::string id;
    std::string original;
    std::string translated;
    std::string dataset;                          // optional grouping key
    std::map<std::string, double> external_scores;  // ingested, never computed
};

TranslationPair parse_translation_record(std::string_view line);

// True iff chars(translated) / chars(original) < 0.7 (unicode scalar counts).
// Throws DataError for an empty original.
bool truncation_flag(const TranslationPair& pair, double threshold = 0.7);

// True iff lo <= ratio <= hi (closed interval).
bool length_ratio_keep(const TranslationPair& pair, double lo = 0.73, double hi = 1.35);

enum class MdKind {
    heading,
    code_fence,
    list,
    blockquote,
    link,
    image,
    table,
    math,
    html_tag,
    horizontal_rule,
    paragraph_break,
};

std::string_view to_string(MdKind kind);

// One structural item; which fields matter depends on kind. Block items
// (heading, list, blockquote, paragraph_break) also carry per-block inline
// style counts.
struct MdElement {
    MdKind kind;
    int level = 0;               // heading level / blockquote depth / list max nesting
    bool ordered = false;        // list
    std::size_t item_count = 0;  // list
    std::string text_attr;       // fence language / url / html tag name
    std::size_t rows = 0;        // table data rows
    std::size_t cols = 0;        // table columns
    bool has_header = false;     // table
    bool display = false;        // math: $$...$$ vs $...$
    std::size_t bold = 0;
    std::size_t italic = 0;
    std::size_t strike = 0;
    std::size_t inline_code = 0;

    std::string describe() const;
};

// Ordered structural skeleton of a markdown document; text content excluded.
struct MarkdownOutline {
    std::vector<MdElement> elements;

    // Block-level structural elements (paragraph_break is a boundary, not a
    // structural element).
    std::size_t structural_count() const;
};

MarkdownOutline markdown_outline(std::string_view text);

struct Mismatch {
    std::size_t position = 0;
    std::string expected;
    std::string found;
};

struct FormatVerdict {
    bool good = false;
    std::vector<Mismatch> mismatches;
};

// Element-by-element outline comparison: kinds, heading levels, fence counts
// and languages, list shape, URLs, table shape, math delimiters, HTML tags,
// block boundaries, and per-block style counts. Intra-paragraph whitespace
// and all text content are ignored.
FormatVerdict markdown_match(std::string_view original, std::string_view translated);

class LanguageDetector {
  public:
    virtual ~LanguageDetector() = default;
    virtual std::string detect(std::string_view text) const = 0;
};

// Naive stopword-frequency sl/en detector. Demo quality: ships for plumbing
// tests only, not an identification model.
class StopwordDetector final : public LanguageDetector {
  public:
    std::string detect(std::string_view text) const override;
};

struct DatasetStats {
    std::size_t pairs = 0;
    std::size_t truncated = 0;
    std::size_t format_bad = 0;
    std::size_t lang_errors = 0;
    double score_sum = 0.0;
    std::size_t score_count = 0;

    double truncation_rate_pct() const;
    double format_error_rate_pct() const;
    double lang_error_rate_pct() const;
    std::optional<double> mean_score() const;
};

struct EvalReport {
    DatasetStats overall;
    std::map<std::string, DatasetStats> per_dataset;
    bool language_checked = false;
};

struct EvalOptions {
    const LanguageDetector* detector = nullptr;  // required when check_language
    bool check_language = false;
    std::string target_lang = "sl";
};

// Aggregates truncation, markdown-format and (optionally) language error
// rates plus means of ingested external scores. Order-invariant.
EvalReport eval_translations(const std::vector<TranslationPair>& pairs,
                             const EvalOptions& options = {});

std::string format_report(const EvalReport& report);

}  // namespace corpuskit::evalmetrics
