#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/core.hpp"

namespace corpuskit::filters {

// Every filter is a pure, idempotent text -> text function.

std::string remove_images(std::string_view text);
std::string normalize_newlines(std::string_view text);

// Replacement table for byte sequences produced by decoding UTF-8 with the
// wrong codec. Entries are matched longest-first.
class MojibakeMap {
  public:
    // UTF-8-as-Latin-1 and UTF-8-as-CP1250 misdecodings of c/s/z carons and
    // common Latin letters.
    static const MojibakeMap& defaults();

    void add(std::string bad, std::string good);
    void load(const std::filesystem::path& path);  // lines: <bad>\t<good>
    std::string apply(std::string_view text) const;
    bool empty() const { return entries_.empty(); }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;  // longest-first
};

std::string reformat_unicode(std::string_view text);
std::string reformat_unicode(std::string_view text, const MojibakeMap& map);

std::string correct_diacritics(std::string_view text);

std::string filter_long_paragraphs(std::string_view text, std::size_t max_chars = 15000);
std::string collapse_repeated_paragraphs(std::string_view text, std::size_t max_repeats = 100);

struct FilterReport {
    std::size_t docs_in = 0;
    std::size_t docs_out = 0;
    std::size_t paragraphs_removed = 0;
    std::size_t chars_changed = 0;
    std::map<std::string, std::size_t> per_filter;  // filter name -> documents modified

    void merge(const FilterReport& other);
    std::string to_json() const;
};

struct FilterSpec {
    std::string name;
    std::map<std::string, std::string> params;
};

class FilterPipeline {
  public:
    // Unknown filter names or parameters raise ConfigError.
    static FilterPipeline from_names(const std::vector<std::string>& names);
    static FilterPipeline from_specs(const std::vector<FilterSpec>& specs);

    static std::vector<std::string> default_order();
    static std::vector<std::string> nanonets_profile();
    static bool is_known(std::string_view name);

    Document apply(const Document& doc, FilterReport& report) const;
    std::string apply_text(std::string_view text) const;
    const std::vector<std::string>& names() const { return names_; }

  private:
    std::vector<std::string> names_;
    std::vector<std::function<std::string(std::string_view)>> fns_;
    std::vector<bool> counts_paragraphs_;
};

}  // namespace corpuskit::filters
