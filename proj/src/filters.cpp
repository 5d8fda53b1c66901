#include "corpuskit/filters.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "corpuskit/unicode.hpp"

namespace corpuskit::filters {

namespace {

// Runs a shrinking rewrite until it stabilizes, making the filter idempotent
// even when a removal juxtaposes text into a fresh match. Capped in case a
// user-configured mapping oscillates.
template <typename Fn>
std::string to_fixpoint(std::string_view text, Fn&& step) {
    std::string current(text);
    for (int round = 0; round < 16; ++round) {
        std::string next = step(std::string_view(current));
        if (next == current) break;
        current = std::move(next);
    }
    return current;
}

std::string remove_images_once(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '!' && i + 1 < text.size() && text[i + 1] == '[') {
            std::size_t close = text.find(']', i + 2);
            if (close != std::string_view::npos && close + 1 < text.size() &&
                text[close + 1] == '(') {
                std::size_t paren = text.find(')', close + 2);
                if (paren != std::string_view::npos) {
                    i = paren + 1;  // drop the whole ![alt](url) span
                    continue;
                }
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

}  // namespace

std::string remove_images(std::string_view text) {
    return to_fixpoint(text, remove_images_once);
}

std::string normalize_newlines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '\n') {
            std::size_t run = 0;
            while (i < text.size() && text[i] == '\n') { ++run; ++i; }
            out.append(run >= 3 ? 2 : run, '\n');
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

void MojibakeMap::add(std::string bad, std::string good) {
    entries_.emplace_back(std::move(bad), std::move(good));
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

void MojibakeMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mojibake map " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError("mojibake map " + path.string() + ": line missing tab separator");
        add(line.substr(0, tab), line.substr(tab + 1));
    }
}

const MojibakeMap& MojibakeMap::defaults() {
    static const MojibakeMap map = [] {
        MojibakeMap m;
        // UTF-8 bytes of the correct character, re-decoded as Latin-1.
        const std::pair<const char*, const char*> latin1[] = {
            {"Ä", "č"}, {"Å¡", "š"}, {"Å¾", "ž"},
            {"Ä", "Č"}, {"Å ", "Š"}, {"Å½", "Ž"},
            {"Ä", "ć"}, {"Ä", "đ"}, {"Ä", "Ć"},
            {"Ä", "Đ"}, {"Ã¤", "ä"}, {"Ã¶", "ö"},
            {"Ã¼", "ü"}, {"Ã©", "é"}, {"Ã¨", "è"},
            {"Ã¡", "á"}, {"Ã­", "í"}, {"Ã³", "ó"},
            {"Ãº", "ú"}, {"Ã±", "ñ"},
        };
        // The same, re-decoded as CP1250.
        const std::pair<const char*, const char*> cp1250[] = {
            {"ÄŤ", "č"}, {"Ĺˇ", "š"}, {"Ĺľ", "ž"},
            {"ÄŚ", "Č"}, {"Ĺ ", "Š"}, {"Ĺ˝", "Ž"},
            {"Ä‡", "ć"}, {"Ä‘", "đ"}, {"Ä†", "Ć"},
            {"Ă¤", "ä"}, {"Ă¶", "ö"}, {"ĂĽ", "ü"},
            {"Ă©", "é"}, {"Ă¨", "è"}, {"Ăˇ", "á"},
            {"Ă­", "í"}, {"Ăł", "ó"}, {"Ăş", "ú"},
            {"Ăą", "ù"}, {"Ă±", "ñ"},
        };
        for (const auto& [bad, good] : latin1) m.add(bad, good);
        for (const auto& [bad, good] : cp1250) m.add(bad, good);
        return m;
    }();
    return map;
}

std::string MojibakeMap::apply(std::string_view text) const {
    if (entries_.empty()) return std::string(text);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        bool matched = false;
        for (const auto& [bad, good] : entries_) {
            if (text.compare(i, bad.size(), bad) == 0) {
                out += good;
                i += bad.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

std::string reformat_unicode(std::string_view text) {
    return reformat_unicode(text, MojibakeMap::defaults());
}

std::string reformat_unicode(std::string_view text, const MojibakeMap& map) {
    // map first, then canonical composition; composition may expose a mapped
    // sequence, so iterate until stable
    return to_fixpoint(text, [&](std::string_view t) { return uni::nfc(map.apply(t)); });
}

namespace {

// Spacing caron U+02C7, UTF-8 CB 87.
constexpr std::string_view kCaron = "\xCB\x87";

char32_t caron_target(char c) {
    switch (c) {
        case 'c': return U'č';
        case 's': return U'š';
        case 'z': return U'ž';
        case 'C': return U'Č';
        case 'S': return U'Š';
        case 'Z': return U'Ž';
    }
    return 0;
}

}  // namespace

namespace {

std::string correct_diacritics_once(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        // caron before letter: "ˇc" -> "č"
        if (text.compare(i, kCaron.size(), kCaron) == 0 && i + kCaron.size() < text.size()) {
            if (char32_t composed = caron_target(text[i + kCaron.size()]); composed != 0) {
                uni::append_utf8(out, composed);
                i += kCaron.size() + 1;
                continue;
            }
        }
        // letter followed by caron: "sˇ" -> "š"
        if (char32_t composed = caron_target(text[i]); composed != 0) {
            if (text.compare(i + 1, kCaron.size(), kCaron) == 0) {
                uni::append_utf8(out, composed);
                i += 1 + kCaron.size();
                continue;
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    // combining-caron decompositions (c + U+030C) compose via NFC
    return uni::nfc(out);
}

}  // namespace

std::string correct_diacritics(std::string_view text) {
    return to_fixpoint(text, correct_diacritics_once);
}

namespace {

// Blank-line paragraph split consuming exactly two newlines per delimiter, so
// that rejoining kept paragraphs with "\n\n" is lossless when nothing is
// removed.
std::vector<std::string_view> paragraph_views(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find("\n\n", start);
        if (pos == std::string_view::npos) break;
        parts.push_back(text.substr(start, pos - start));
        start = pos + 2;
    }
    parts.push_back(text.substr(start));
    return parts;
}

std::string join_paragraphs(const std::vector<std::string_view>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string filter_long_paragraphs(std::string_view text, std::size_t max_chars) {
    if (max_chars == 0) throw ConfigError("filter_long_paragraphs: max_chars must be positive");
    auto parts = paragraph_views(text);
    std::vector<std::string_view> kept;
    kept.reserve(parts.size());
    for (auto p : parts) {
        if (uni::codepoint_count(p) <= max_chars) kept.push_back(p);
    }
    if (kept.size() == parts.size()) return std::string(text);
    return join_paragraphs(kept);
}

std::string collapse_repeated_paragraphs(std::string_view text, std::size_t max_repeats) {
    if (max_repeats == 0)
        throw ConfigError("collapse_repeated_paragraphs: max_repeats must be positive");
    auto parts = paragraph_views(text);
    std::unordered_map<std::string_view, std::size_t> total;
    for (auto p : parts) ++total[p];
    bool any = false;
    for (const auto& [p, n] : total) {
        if (n > max_repeats) { any = true; break; }
    }
    if (!any) return std::string(text);
    std::unordered_map<std::string_view, bool> seen;
    std::vector<std::string_view> kept;
    kept.reserve(parts.size());
    for (auto p : parts) {
        if (total[p] > max_repeats) {
            if (seen[p]) continue;  // only the first occurrence survives
            seen[p] = true;
        }
        kept.push_back(p);
    }
    return join_paragraphs(kept);
}

void FilterReport::merge(const FilterReport& other) {
    docs_in += other.docs_in;
    docs_out += other.docs_out;
    paragraphs_removed += other.paragraphs_removed;
    chars_changed += other.chars_changed;
    for (const auto& [name, n] : other.per_filter) per_filter[name] += n;
}

std::string FilterReport::to_json() const {
    nlohmann::json j;
    j["docs_in"] = docs_in;
    j["docs_out"] = docs_out;
    j["paragraphs_removed"] = paragraphs_removed;
    j["chars_changed"] = chars_changed;
    j["per_filter"] = per_filter;
    return j.dump();
}

namespace {

struct FilterDef {
    std::function<std::string(std::string_view, const std::map<std::string, std::string>&)> make;
    bool paragraphs;
};

std::size_t param_count(const std::map<std::string, std::string>& params, const std::string& key,
                        std::size_t fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        long long v = std::stoll(it->second);
        if (v <= 0) throw std::invalid_argument("nonpositive");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("filter parameter " + key + "='" + it->second +
                          "' is not a positive integer");
    }
}

const std::map<std::string, FilterDef>& registry() {
    static const std::map<std::string, FilterDef> reg = {
        {"remove_images",
         {[](std::string_view t, const auto&) { return remove_images(t); }, false}},
        {"normalize_newlines",
         {[](std::string_view t, const auto&) { return normalize_newlines(t); }, false}},
        {"reformat_unicode",
         {[](std::string_view t, const auto&) { return reformat_unicode(t); }, false}},
        {"correct_diacritics",
         {[](std::string_view t, const auto&) { return correct_diacritics(t); }, false}},
        {"filter_long_paragraphs",
         {[](std::string_view t, const std::map<std::string, std::string>& params) {
              return filter_long_paragraphs(t, param_count(params, "max_chars", 15000));
          },
          true}},
        {"collapse_repeated_paragraphs",
         {[](std::string_view t, const std::map<std::string, std::string>& params) {
              return collapse_repeated_paragraphs(t, param_count(params, "max_repeats", 100));
          },
          true}},
    };
    return reg;
}

std::size_t paragraph_count(std::string_view text) {
    return paragraph_views(text).size();
}

}  // namespace

bool FilterPipeline::is_known(std::string_view name) {
    return registry().count(std::string(name)) > 0;
}

std::vector<std::string> FilterPipeline::default_order() {
    return {"remove_images", "normalize_newlines", "reformat_unicode", "correct_diacritics"};
}

std::vector<std::string> FilterPipeline::nanonets_profile() {
    auto names = default_order();
    names.push_back("filter_long_paragraphs");
    names.push_back("collapse_repeated_paragraphs");
    return names;
}

FilterPipeline FilterPipeline::from_names(const std::vector<std::string>& names) {
    std::vector<FilterSpec> specs;
    specs.reserve(names.size());
    for (const auto& n : names) specs.push_back({n, {}});
    return from_specs(specs);
}

FilterPipeline FilterPipeline::from_specs(const std::vector<FilterSpec>& specs) {
    FilterPipeline p;
    const auto& reg = registry();
    for (const auto& spec : specs) {
        auto it = reg.find(spec.name);
        if (it == reg.end()) throw ConfigError("unknown filter '" + spec.name + "'");
        // bind parameters now so bad values fail before any data is read
        auto params = spec.params;
        for (const auto& [key, value] : params) {
            (void)value;
            if (spec.name == "filter_long_paragraphs" && key != "max_chars")
                throw ConfigError("filter " + spec.name + ": unknown parameter '" + key + "'");
            if (spec.name == "collapse_repeated_paragraphs" && key != "max_repeats")
                throw ConfigError("filter " + spec.name + ": unknown parameter '" + key + "'");
            if (spec.name == "reformat_unicode" && key != "map_file")
                throw ConfigError("filter " + spec.name + ": unknown parameter '" + key + "'");
            if (spec.name != "filter_long_paragraphs" &&
                spec.name != "collapse_repeated_paragraphs" && spec.name != "reformat_unicode")
                throw ConfigError("filter " + spec.name + ": takes no parameters");
        }
        if (spec.name == "filter_long_paragraphs") param_count(params, "max_chars", 15000);
        if (spec.name == "collapse_repeated_paragraphs") param_count(params, "max_repeats", 100);
        if (spec.name == "reformat_unicode" && params.count("map_file")) {
            auto map = std::make_shared<MojibakeMap>(MojibakeMap::defaults());
            map->load(params.at("map_file"));  // loaded once, before any data flows
            p.fns_.push_back([map](std::string_view t) { return reformat_unicode(t, *map); });
        } else {
            auto make = it->second.make;
            p.fns_.push_back([make, params](std::string_view t) { return make(t, params); });
        }
        p.names_.push_back(spec.name);
        p.counts_paragraphs_.push_back(it->second.paragraphs);
    }
    return p;
}

Document FilterPipeline::apply(const Document& doc, FilterReport& report) const {
    report.docs_in += 1;
    Document out = doc;
    for (std::size_t k = 0; k < fns_.size(); ++k) {
        std::string next = fns_[k](out.text);
        if (next != out.text) {
            report.per_filter[names_[k]] += 1;
            std::size_t before = uni::codepoint_count(out.text);
            std::size_t after = uni::codepoint_count(next);
            report.chars_changed += before > after ? before - after : after - before;
            if (counts_paragraphs_[k]) {
                std::size_t pb = paragraph_count(out.text);
                std::size_t pa = paragraph_count(next);
                if (pb > pa) report.paragraphs_removed += pb - pa;
            }
            out.text = std::move(next);
        } else if (report.per_filter.find(names_[k]) == report.per_filter.end()) {
            report.per_filter[names_[k]] = 0;
        }
    }
    report.docs_out += 1;
    return out;
}

std::string FilterPipeline::apply_text(std::string_view text) const {
    std::string out(text);
    for (const auto& fn : fns_) out = fn(out);
    return out;
}

}  // namespace corpuskit::filters
