#include "corpuskit/core.hpp"

#include <json.hpp>

#include "corpuskit/unicode.hpp"

namespace corpuskit {

using nlohmann::json;

void validate(const Document& doc) {
    if (doc.id.empty()) throw DataError("document validation: empty id");
    if (!doc.lang.empty()) {
        bool ok = doc.lang.size() == 2 && doc.lang[0] >= 'a' && doc.lang[0] <= 'z' &&
                  doc.lang[1] >= 'a' && doc.lang[1] <= 'z';
        if (!ok)
            throw DataError("document validation: lang '" + doc.lang +
                            "' does not match [a-z]{2} (document " + doc.id + ")");
    }
    if (!uni::is_valid_utf8(doc.text))
        throw DataError("document validation: text is not valid UTF-8 (document " + doc.id + ")");
}

Document parse_record(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("record parse error: ") + e.what());
    }
    if (!j.is_object()) throw DataError("record parse error: line is not an object");

    Document doc;
    auto require_string = [&](const char* field, bool required) -> std::string {
        auto it = j.find(field);
        if (it == j.end()) {
            if (required)
                throw DataError(std::string("record parse error: missing field '") + field + "'");
            return {};
        }
        if (!it->is_string())
            throw DataError(std::string("record parse error: field '") + field +
                            "' is not a string");
        return it->get<std::string>();
    };
    doc.id = require_string("id", true);
    doc.text = require_string("text", true);
    doc.lang = require_string("lang", false);
    if (auto it = j.find("meta"); it != j.end()) {
        if (!it->is_object())
            throw DataError("record parse error: field 'meta' is not an object");
        for (const auto& [k, v] : it->items()) {
            if (!v.is_string())
                throw DataError("record parse error: field 'meta." + k + "' is not a string");
            doc.meta[k] = v.get<std::string>();
        }
    }
    validate(doc);
    return doc;
}

std::string serialize_record(const Document& doc) {
    validate(doc);
    json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    if (!doc.lang.empty()) j["lang"] = doc.lang;
    if (!doc.meta.empty()) j["meta"] = doc.meta;
    try {
        return j.dump();  // json object keys are sorted; output is byte-stable
    } catch (const json::type_error& e) {
        throw DataError(std::string("record serialization error: ") + e.what());
    }
}

UnitKind unit_kind_from_string(std::string_view name) {
    if (name == "sentence") return UnitKind::sentence;
    if (name == "paragraph") return UnitKind::paragraph;
    if (name == "section") return UnitKind::section;
    throw ConfigError("unknown unit strategy '" + std::string(name) + "'");
}

std::string_view to_string(UnitKind kind) {
    switch (kind) {
        case UnitKind::sentence: return "sentence";
        case UnitKind::paragraph: return "paragraph";
        case UnitKind::section: return "section";
    }
    return "?";
}

std::string_view unit_joiner(UnitKind kind) {
    switch (kind) {
        case UnitKind::sentence: return " ";
        case UnitKind::paragraph: return "\n\n";
        case UnitKind::section: return "\n";
    }
    return "";
}

namespace {

std::vector<UnitSpan> split_paragraph_spans(std::string_view text) {
    std::vector<UnitSpan> spans;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find("\n\n", start);
        if (pos == std::string_view::npos) break;
        spans.push_back({start, pos});
        start = pos + 2;  // consume exactly the blank-line delimiter
    }
    spans.push_back({start, text.size()});
    return spans;
}

std::vector<UnitSpan> split_section_spans(std::string_view text) {
    std::vector<UnitSpan> spans;
    std::size_t start = 0;
    std::size_t line_start = 0;
    while (line_start < text.size()) {
        if (text[line_start] == '#' && line_start > 0) {
            // split before the heading line, consuming one preceding newline
            std::size_t prev_end = (text[line_start - 1] == '\n') ? line_start - 1 : line_start;
            if (line_start > start) {
                spans.push_back({start, prev_end});
                start = line_start;
            }
        }
        std::size_t nl = text.find('\n', line_start);
        if (nl == std::string_view::npos) break;
        line_start = nl + 1;
    }
    spans.push_back({start, text.size()});
    return spans;
}

bool is_sentence_final(char c) { return c == '.' || c == '?' || c == '!'; }

// Best-effort abbreviation guard: a period after a short capitalized word
// ("Dr.", "G.", "Št.") is not a sentence boundary.
bool looks_like_abbreviation(std::string_view text, std::size_t period_pos) {
    std::size_t begin = period_pos;
    while (begin > 0) {
        std::size_t p = begin - 1;
        while (p > 0 && (static_cast<unsigned char>(text[p]) & 0xC0) == 0x80) --p;
        std::size_t probe = p;
        char32_t cp = uni::next_codepoint(text, probe);
        if (probe != begin || !uni::is_letter(cp)) break;
        begin = p;
    }
    if (begin == period_pos) return false;
    std::size_t len = 0;
    bool first_upper = false;
    for (std::size_t p = begin; p < period_pos; ++len) {
        char32_t cp = uni::next_codepoint(text, p);
        if (len == 0) first_upper = uni::is_upper(cp);
    }
    return first_upper && len <= 3;
}

std::vector<UnitSpan> split_sentence_spans(std::string_view text) {
    std::vector<UnitSpan> spans;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_sentence_final(text[i])) {
            ++i;
            continue;
        }
        std::size_t after = i + 1;
        std::size_t ws = after;
        while (ws < text.size() && (text[ws] == ' ' || text[ws] == '\t' || text[ws] == '\n' ||
                                    text[ws] == '\r')) {
            ++ws;
        }
        if (ws == after || ws >= text.size()) {  // no whitespace run or text ends
            ++i;
            continue;
        }
        std::size_t probe = ws;
        char32_t cp = uni::next_codepoint(text, probe);
        if (uni::is_upper(cp) && !(text[i] == '.' && looks_like_abbreviation(text, i))) {
            spans.push_back({start, after});
            start = ws;
        }
        i = ws;
    }
    spans.push_back({start, text.size()});
    return spans;
}

}  // namespace

std::vector<UnitSpan> split_unit_spans(std::string_view text, UnitKind kind) {
    if (text.empty()) return {};
    switch (kind) {
        case UnitKind::paragraph: return split_paragraph_spans(text);
        case UnitKind::section: return split_section_spans(text);
        case UnitKind::sentence: return split_sentence_spans(text);
    }
    return {};
}

std::vector<Unit> split_units(const Document& doc, UnitKind kind) {
    std::vector<Unit> units;
    auto spans = split_unit_spans(doc.text, kind);
    units.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        units.push_back(Unit{std::string(doc.text.substr(spans[i].begin,
                                                         spans[i].end - spans[i].begin)),
                             kind, doc.id, i});
    }
    return units;
}

std::vector<int> ByteTokenizer::encode(std::string_view text) const {
    std::vector<int> ids;
    ids.reserve(text.size());
    for (unsigned char c : text) ids.push_back(static_cast<int>(c) + 3);
    return ids;
}

std::string ByteTokenizer::decode(std::span<const int> ids) const {
    std::string out;
    out.reserve(ids.size());
    for (int id : ids) {
        if (id == bos_id() || id == eos_id()) continue;
        if (id < 3 || id > 258)
            throw DataError("byte tokenizer: token id " + std::to_string(id) + " out of range");
        out.push_back(static_cast<char>(id - 3));
    }
    return out;
}

WordTokenizer WordTokenizer::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tokenizer file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError("tokenizer file " + path.string() + ": " + e.what());
    }
    WordTokenizer t;
    t.bos_ = j.value("bos_id", 1);
    t.eos_ = j.value("eos_id", 2);
    t.unk_ = j.value("unk_id", -1);
    if (t.bos_ == t.eos_) throw ConfigError("tokenizer: bos_id must differ from eos_id");
    int max_id = std::max(t.bos_, t.eos_);
    if (!j.contains("vocab") || !j["vocab"].is_object())
        throw DataError("tokenizer file " + path.string() + ": missing 'vocab' object");
    for (const auto& [word, id] : j["vocab"].items()) {
        int v = id.get<int>();
        t.vocab_[word] = v;
        t.reverse_[v] = word;
        max_id = std::max(max_id, v);
    }
    t.vocab_size_ = max_id + 1;
    return t;
}

std::vector<int> WordTokenizer::encode(std::string_view text) const {
    std::vector<int> ids;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        auto it = vocab_.find(text.substr(start, i - start));
        if (it != vocab_.end()) {
            ids.push_back(it->second);
        } else if (unk_ >= 0) {
            ids.push_back(unk_);
        } else {
            throw DataError("word tokenizer: unknown word '" +
                            std::string(text.substr(start, i - start)) + "'");
        }
    }
    return ids;
}

std::string WordTokenizer::decode(std::span<const int> ids) const {
    std::string out;
    for (int id : ids) {
        if (id == bos_ || id == eos_) continue;
        auto it = reverse_.find(id);
        if (it == reverse_.end())
            throw DataError("word tokenizer: token id " + std::to_string(id) + " not in vocab");
        if (!out.empty()) out.push_back(' ');
        out += it->second;
    }
    return out;
}

std::unique_ptr<TokenizerInterface> make_tokenizer(std::string_view spec) {
    if (spec == "reference") return std::make_unique<ByteTokenizer>();
    constexpr std::string_view prefix = "external:";
    if (spec.substr(0, prefix.size()) == prefix) {
        auto path = spec.substr(prefix.size());
        return std::make_unique<WordTokenizer>(WordTokenizer::load(std::filesystem::path(path)));
    }
    throw ConfigError("unknown tokenizer spec '" + std::string(spec) +
                      "' (expected 'reference' or 'external:<vocab.json>')");
}

RecordReader::RecordReader(const std::filesystem::path& path)
    : in_(path), path_(path.string()) {
    if (!in_) throw IoError("cannot open " + path_);
}

std::optional<Document> RecordReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (line.empty()) continue;
        try {
            return parse_record(line);
        } catch (const DataError& e) {
            throw DataError(path_ + ":" + std::to_string(line_no_) + ": " + e.what());
        }
    }
    return std::nullopt;
}

RecordWriter::RecordWriter(const std::filesystem::path& path)
    : out_(path), path_(path.string()) {
    if (!out_) throw IoError("cannot open " + path_ + " for writing");
}

void RecordWriter::write(const Document& doc) {
    out_ << serialize_record(doc) << '\n';
    if (!out_) throw IoError("write failed on " + path_);
}

std::vector<Document> read_records(const std::filesystem::path& path) {
    RecordReader reader(path);
    std::vector<Document> docs;
    while (auto doc = reader.next()) docs.push_back(std::move(*doc));
    return docs;
}

void write_records(const std::filesystem::path& path, const std::vector<Document>& docs) {
    RecordWriter writer(path);
    for (const auto& doc : docs) writer.write(doc);
}

}  // namespace corpuskit
