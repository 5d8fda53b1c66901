#include "corpuskit/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corpuskit/unicode.hpp"

namespace corpuskit::evalmetrics {

TranslationPair parse_translation_record(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("translation record parse error: ") + e.what());
    }
    TranslationPair pair;
    try {
        pair.id = j.at("id").get<std::string>();
        pair.original = j.at("original").get<std::string>();
        pair.translated = j.at("translated").get<std::string>();
        pair.dataset = j.value("dataset", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("translation record parse error: ") + e.what());
    }
    if (pair.id.empty()) throw DataError("translation record: empty id");
    return pair;
}

namespace {

double char_ratio(const TranslationPair& pair) {
    std::size_t orig = uni::codepoint_count(pair.original);
    if (orig == 0)
        throw DataError("translation pair " + pair.id + ": empty original, ratio undefined");
    return static_cast<double>(uni::codepoint_count(pair.translated)) /
           static_cast<double>(orig);
}

}  // namespace

bool truncation_flag(const TranslationPair& pair, double threshold) {
    return char_ratio(pair) < threshold;
}

bool length_ratio_keep(const TranslationPair& pair, double lo, double hi) {
    double r = char_ratio(pair);
    return lo <= r && r <= hi;
}

std::string_view to_string(MdKind kind) {
    switch (kind) {
        case MdKind::heading: return "heading";
        case MdKind::code_fence: return "code_fence";
        case MdKind::list: return "list";
        case MdKind::blockquote: return "blockquote";
        case MdKind::link: return "link";
        case MdKind::image: return "image";
        case MdKind::table: return "table";
        case MdKind::math: return "math";
        case MdKind::html_tag: return "html_tag";
        case MdKind::horizontal_rule: return "horizontal_rule";
        case MdKind::paragraph_break: return "paragraph_break";
    }
    return "?";
}

std::string MdElement::describe() const {
    std::ostringstream out;
    out << to_string(kind);
    switch (kind) {
        case MdKind::heading: out << "(level=" << level; break;
        case MdKind::code_fence: out << "(lang=" << text_attr; break;
        case MdKind::list:
            out << "(" << (ordered ? "ordered" : "unordered") << ",nesting=" << level
                << ",items=" << item_count;
            break;
        case MdKind::blockquote: out << "(depth=" << level; break;
        case MdKind::link:
        case MdKind::image: out << "(url=" << text_attr; break;
        case MdKind::table:
            out << "(rows=" << rows << ",cols=" << cols
                << ",header=" << (has_header ? "yes" : "no");
            break;
        case MdKind::math: out << "(" << (display ? "display" : "inline"); break;
        case MdKind::html_tag: out << "(tag=" << text_attr; break;
        default: out << "(";
    }
    bool block = kind == MdKind::heading || kind == MdKind::list ||
                 kind == MdKind::blockquote || kind == MdKind::paragraph_break;
    if (block) {
        out << (kind == MdKind::paragraph_break ? "" : ",") << "bold=" << bold
            << ",italic=" << italic << ",strike=" << strike << ",code=" << inline_code;
    }
    out << ")";
    return out.str();
}

std::size_t MarkdownOutline::structural_count() const {
    return static_cast<std::size_t>(
        std::count_if(elements.begin(), elements.end(), [](const MdElement& e) {
            return e.kind != MdKind::paragraph_break;
        }));
}

namespace {

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_blank(std::string_view line) { return trim_view(line).empty(); }

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::size_t leading_spaces(std::string_view line) {
    std::size_t n = 0;
    for (char c : line) {
        if (c == ' ') ++n;
        else if (c == '\t') n += 4;
        else break;
    }
    return n;
}

// fence opener: <=3 leading spaces, then >=3 backticks or tildes
bool fence_open(std::string_view line, char& fence_char, std::size_t& fence_len,
                std::string& language) {
    if (leading_spaces(line) > 3) return false;
    std::string_view t = line.substr(line.find_first_not_of(' ') == std::string_view::npos
                                         ? line.size()
                                         : line.find_first_not_of(' '));
    if (t.size() < 3 || (t[0] != '`' && t[0] != '~')) return false;
    char c = t[0];
    std::size_t n = 0;
    while (n < t.size() && t[n] == c) ++n;
    if (n < 3) return false;
    fence_char = c;
    fence_len = n;
    std::string_view info = trim_view(t.substr(n));
    std::size_t space = info.find_first_of(" \t");
    language = std::string(space == std::string_view::npos ? info : info.substr(0, space));
    return true;
}

bool fence_close(std::string_view line, char fence_char, std::size_t fence_len) {
    std::string_view t = trim_view(line);
    if (t.size() < fence_len) return false;
    return std::all_of(t.begin(), t.end(), [&](char c) { return c == fence_char; });
}

// ATX heading: <=3 spaces, #{1,6} followed by space/tab or end of line
int atx_level(std::string_view line, std::string_view& content) {
    if (leading_spaces(line) > 3) return 0;
    std::string_view t = trim_view(line);
    std::size_t n = 0;
    while (n < t.size() && t[n] == '#') ++n;
    if (n == 0 || n > 6) return 0;
    if (n < t.size() && t[n] != ' ' && t[n] != '\t') return 0;
    content = trim_view(t.substr(n));
    return static_cast<int>(n);
}

bool all_of_char(std::string_view s, char c) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [&](char x) { return x == c; });
}

// setext underline: a run of '=' (level 1) or '-' (level 2), at least 2 chars
int setext_level(std::string_view line) {
    std::string_view t = trim_view(line);
    if (t.size() < 2) return 0;
    if (all_of_char(t, '=')) return 1;
    if (all_of_char(t, '-')) return 2;
    return 0;
}

bool horizontal_rule_line(std::string_view line) {
    std::string_view t = trim_view(line);
    char mark = 0;
    std::size_t count = 0;
    for (char c : t) {
        if (c == ' ' || c == '\t') continue;
        if (c != '-' && c != '*' && c != '_') return false;
        if (mark == 0) mark = c;
        if (c != mark) return false;
        ++count;
    }
    return count >= 3;
}

// list item marker: [-*+] or 1-9 digits followed by . or ), then space or EOL
bool list_item(std::string_view line, bool& ordered, std::size_t& indent,
               std::string_view& content) {
    indent = leading_spaces(line);
    std::string_view t = trim_view(line);
    if (t.empty()) return false;
    if ((t[0] == '-' || t[0] == '*' || t[0] == '+') &&
        (t.size() == 1 || t[1] == ' ' || t[1] == '\t')) {
        if (horizontal_rule_line(line)) return false;
        ordered = false;
        content = t.size() > 1 ? trim_view(t.substr(2)) : std::string_view{};
        return true;
    }
    std::size_t d = 0;
    while (d < t.size() && t[d] >= '0' && t[d] <= '9') ++d;
    if (d >= 1 && d <= 9 && d < t.size() && (t[d] == '.' || t[d] == ')')) {
        if (d + 1 == t.size() || t[d + 1] == ' ' || t[d + 1] == '\t') {
            ordered = true;
            content = d + 1 < t.size() ? trim_view(t.substr(d + 2)) : std::string_view{};
            return true;
        }
    }
    return false;
}

std::size_t quote_depth(std::string_view line) {
    std::size_t depth = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '>') {
            ++depth;
            ++i;
            if (i < line.size() && line[i] == ' ') ++i;
        } else if (line[i] == ' ' && depth == 0 && i < 3) {
            ++i;
        } else {
            break;
        }
    }
    return depth;
}

std::string_view strip_quote_marks(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '>') {
            ++i;
            if (i < line.size() && line[i] == ' ') ++i;
        } else if (line[i] == ' ') {
            ++i;
        } else {
            break;
        }
    }
    return line.substr(i);
}

bool table_delimiter_row(std::string_view line) {
    std::string_view t = trim_view(line);
    if (t.find('-') == std::string_view::npos) return false;
    bool has_pipe = false;
    for (char c : t) {
        if (c == '|') has_pipe = true;
        else if (c != '-' && c != ':' && c != ' ' && c != '\t') return false;
    }
    return has_pipe || !t.empty();
}

std::size_t table_cols(std::string_view line) {
    std::string_view t = trim_view(line);
    if (!t.empty() && t.front() == '|') t.remove_prefix(1);
    if (!t.empty() && t.back() == '|') t.remove_suffix(1);
    if (trim_view(t).empty()) return 0;
    return static_cast<std::size_t>(std::count(t.begin(), t.end(), '|')) + 1;
}

struct InlineScan {
    std::vector<MdElement> elements;  // links, images, math, html tags in order
    std::size_t bold = 0, italic = 0, strike = 0, inline_code = 0;
};

bool scheme_url(std::string_view s) {
    std::size_t colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0) return false;
    for (std::size_t i = 0; i < colon; ++i) {
        char c = s[i];
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '+' && c != '-') return false;
    }
    return colon + 2 < s.size() && s[colon + 1] == '/' && s[colon + 2] == '/';
}

std::string link_url(std::string_view inside_parens) {
    std::string_view t = trim_view(inside_parens);
    std::size_t space = t.find_first_of(" \t");  // optional "title" part dropped
    return std::string(space == std::string_view::npos ? t : trim_view(t.substr(0, space)));
}

void count_emphasis(std::string_view text, InlineScan& scan) {
    // strike: non-overlapping "~~" pairs
    std::size_t pos = 0, tildes = 0;
    while ((pos = text.find("~~", pos)) != std::string_view::npos) {
        ++tildes;
        pos += 2;
    }
    scan.strike += tildes / 2;

    std::size_t double_star = 0, single_star = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] != '*') {
            ++i;
            continue;
        }
        std::size_t run = 0;
        while (i + run < text.size() && text[i + run] == '*') ++run;
        double_star += run / 2;
        single_star += run % 2;
        i += run;
    }
    auto alnum_at = [&](std::size_t i) {
        return i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]));
    };
    std::size_t double_under = 0, single_under = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] != '_') {
            ++i;
            continue;
        }
        std::size_t run = 0;
        while (i + run < text.size() && text[i + run] == '_') ++run;
        // intra-word underscores (snake_case) are not emphasis
        bool intra_word = (i > 0 && alnum_at(i - 1)) && alnum_at(i + run);
        if (!intra_word) {
            double_under += run / 2;
            single_under += run % 2;
        }
        i += run;
    }
    scan.bold += double_star / 2 + double_under / 2;
    scan.italic += single_star / 2 + single_under / 2;
}

InlineScan scan_inline(std::string_view text) {
    InlineScan scan;
    std::string stripped;  // emphasis-countable residue
    stripped.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\\' && i + 1 < text.size()) {
            i += 2;  // escaped char: not structure, not emphasis
            continue;
        }
        if (c == '`') {
            std::size_t run = 0;
            while (i + run < text.size() && text[i + run] == '`') ++run;
            std::string closer(run, '`');
            std::size_t close = text.find(closer, i + run);
            // an exact-length closing run (not part of a longer one)
            while (close != std::string_view::npos &&
                   close + run < text.size() && text[close + run] == '`') {
                std::size_t extended = close;
                while (extended < text.size() && text[extended] == '`') ++extended;
                close = text.find(closer, extended);
            }
            if (close != std::string_view::npos) {
                ++scan.inline_code;
                i = close + run;
                continue;
            }
            i += run;
            continue;
        }
        if (c == '$') {
            bool display = i + 1 < text.size() && text[i + 1] == '$';
            std::string_view delim = display ? "$$" : "$";
            std::size_t close = text.find(delim, i + delim.size());
            if (!display) {
                // inline math must close on the same line and be non-empty
                std::size_t nl = text.find('\n', i + 1);
                if (close == i + 1) close = std::string_view::npos;
                if (close != std::string_view::npos &&
                    (nl != std::string_view::npos && nl < close))
                    close = std::string_view::npos;
            }
            if (close != std::string_view::npos) {
                MdElement e;
                e.kind = MdKind::math;
                e.display = display;
                scan.elements.push_back(e);
                i = close + delim.size();
                continue;
            }
            ++i;
            stripped.push_back(c);
            continue;
        }
        if (c == '!' && i + 1 < text.size() && text[i + 1] == '[') {
            std::size_t close = text.find(']', i + 2);
            if (close != std::string_view::npos && close + 1 < text.size() &&
                text[close + 1] == '(') {
                std::size_t paren = text.find(')', close + 2);
                if (paren != std::string_view::npos) {
                    MdElement e;
                    e.kind = MdKind::image;
                    e.text_attr = link_url(text.substr(close + 2, paren - close - 2));
                    scan.elements.push_back(e);
                    i = paren + 1;
                    continue;
                }
            }
            ++i;
            continue;
        }
        if (c == '[') {
            std::size_t close = text.find(']', i + 1);
            if (close != std::string_view::npos && close + 1 < text.size() &&
                text[close + 1] == '(') {
                std::size_t paren = text.find(')', close + 2);
                if (paren != std::string_view::npos) {
                    MdElement e;
                    e.kind = MdKind::link;
                    e.text_attr = link_url(text.substr(close + 2, paren - close - 2));
                    scan.elements.push_back(e);
                    stripped.append(text.substr(i + 1, close - i - 1));  // link text
                    i = paren + 1;
                    continue;
                }
            }
            stripped.push_back(c);
            ++i;
            continue;
        }
        if (c == '<') {
            std::size_t close = text.find('>', i + 1);
            std::size_t nl = text.find('\n', i + 1);
            if (close != std::string_view::npos &&
                (nl == std::string_view::npos || close < nl)) {
                std::string_view inside = text.substr(i + 1, close - i - 1);
                if (scheme_url(inside)) {
                    MdElement e;
                    e.kind = MdKind::link;
                    e.text_attr = std::string(inside);
                    scan.elements.push_back(e);
                    i = close + 1;
                    continue;
                }
                std::string_view name = inside;
                bool closing = !name.empty() && name.front() == '/';
                if (closing) name.remove_prefix(1);
                std::size_t n = 0;
                while (n < name.size() &&
                       (std::isalnum(static_cast<unsigned char>(name[n])))) ++n;
                if (n > 0 && std::isalpha(static_cast<unsigned char>(name[0])) &&
                    (n == name.size() || name[n] == ' ' || name[n] == '/' ||
                     name[n] == '\t')) {
                    MdElement e;
                    e.kind = MdKind::html_tag;
                    std::string tag(name.substr(0, n));
                    std::transform(tag.begin(), tag.end(), tag.begin(),
                                   [](unsigned char ch) { return std::tolower(ch); });
                    e.text_attr = (closing ? "/" : "") + tag;
                    scan.elements.push_back(e);
                    i = close + 1;
                    continue;
                }
            }
            stripped.push_back(c);
            ++i;
            continue;
        }
        stripped.push_back(c);
        ++i;
    }
    count_emphasis(stripped, scan);
    return scan;
}

class OutlineBuilder {
  public:
    MarkdownOutline build(std::string_view text) {
        auto lines = split_lines(text);
        std::size_t i = 0;
        while (i < lines.size()) {
            std::string_view line = lines[i];
            if (in_fence_) {
                if (fence_close(line, fence_char_, fence_len_)) in_fence_ = false;
                ++i;
                continue;
            }
            if (is_blank(line)) {
                flush_paragraph();
                ++i;
                continue;
            }
            char fc;
            std::size_t fl;
            std::string lang;
            if (fence_open(line, fc, fl, lang)) {
                flush_paragraph();
                MdElement e;
                e.kind = MdKind::code_fence;
                e.text_attr = lang;
                outline_.elements.push_back(e);
                in_fence_ = true;
                fence_char_ = fc;
                fence_len_ = fl;
                ++i;
                continue;
            }
            if (int lvl = setext_level(line); lvl != 0 && !paragraph_.empty()) {
                emit_block(MdKind::heading, paragraph_text(), lvl);
                paragraph_.clear();
                ++i;
                continue;
            }
            if (horizontal_rule_line(line)) {
                flush_paragraph();
                MdElement e;
                e.kind = MdKind::horizontal_rule;
                outline_.elements.push_back(e);
                ++i;
                continue;
            }
            std::string_view content;
            if (int lvl = atx_level(line, content); lvl != 0) {
                flush_paragraph();
                emit_block(MdKind::heading, std::string(content), lvl);
                ++i;
                continue;
            }
            if (quote_depth(line) > 0) {
                flush_paragraph();
                i = consume_quote(lines, i);
                continue;
            }
            bool ordered;
            std::size_t indent;
            std::string_view item_text;
            if (list_item(line, ordered, indent, item_text)) {
                flush_paragraph();
                i = consume_list(lines, i);
                continue;
            }
            if (line.find('|') != std::string_view::npos && i + 1 < lines.size() &&
                table_delimiter_row(lines[i + 1]) &&
                lines[i + 1].find('|') != std::string_view::npos) {
                flush_paragraph();
                i = consume_table(lines, i);
                continue;
            }
            if (!paragraph_.empty()) paragraph_ += '\n';
            paragraph_ += line;
            ++i;
        }
        flush_paragraph();
        return std::move(outline_);
    }

  private:
    std::string paragraph_text() { return paragraph_; }

    void emit_block(MdKind kind, const std::string& text, int level, bool ordered = false,
                    std::size_t item_count = 0) {
        MdElement e;
        e.kind = kind;
        e.level = level;
        e.ordered = ordered;
        e.item_count = item_count;
        InlineScan scan = scan_inline(text);
        e.bold = scan.bold;
        e.italic = scan.italic;
        e.strike = scan.strike;
        e.inline_code = scan.inline_code;
        outline_.elements.push_back(e);
        for (auto& el : scan.elements) outline_.elements.push_back(std::move(el));
    }

    void flush_paragraph() {
        if (paragraph_.empty()) return;
        emit_block(MdKind::paragraph_break, paragraph_, 0);
        paragraph_.clear();
    }

    std::size_t consume_quote(const std::vector<std::string_view>& lines, std::size_t i) {
        int depth = 0;
        std::string text;
        while (i < lines.size() && quote_depth(lines[i]) > 0) {
            depth = std::max(depth, static_cast<int>(quote_depth(lines[i])));
            if (!text.empty()) text += '\n';
            text += strip_quote_marks(lines[i]);
            ++i;
        }
        emit_block(MdKind::blockquote, text, depth);
        return i;
    }

    std::size_t consume_list(const std::vector<std::string_view>& lines, std::size_t i) {
        bool ordered_first = false;
        bool first = true;
        std::size_t items = 0;
        std::size_t max_depth = 0;
        std::size_t base_indent = 0;
        std::string text;
        while (i < lines.size() && !is_blank(lines[i])) {
            bool ordered;
            std::size_t indent;
            std::string_view item_text;
            if (list_item(lines[i], ordered, indent, item_text)) {
                if (first) {
                    ordered_first = ordered;
                    base_indent = indent;
                    first = false;
                }
                ++items;
                std::size_t rel = indent > base_indent ? indent - base_indent : 0;
                max_depth = std::max(max_depth, rel / 2);
                if (!text.empty()) text += '\n';
                text += item_text;
            } else if (leading_spaces(lines[i]) > base_indent) {
                if (!text.empty()) text += '\n';
                text += trim_view(lines[i]);  // continuation line
            } else {
                break;
            }
            ++i;
        }
        emit_block(MdKind::list, text, static_cast<int>(max_depth), ordered_first, items);
        return i;
    }

    std::size_t consume_table(const std::vector<std::string_view>& lines, std::size_t i) {
        MdElement e;
        e.kind = MdKind::table;
        e.cols = table_cols(lines[i]);
        e.has_header = true;
        i += 2;  // header + delimiter
        while (i < lines.size() && !is_blank(lines[i]) &&
               lines[i].find('|') != std::string_view::npos) {
            ++e.rows;
            ++i;
        }
        outline_.elements.push_back(e);
        return i;
    }

    MarkdownOutline outline_;
    std::string paragraph_;
    bool in_fence_ = false;
    char fence_char_ = '`';
    std::size_t fence_len_ = 3;
};

}  // namespace

MarkdownOutline markdown_outline(std::string_view text) {
    OutlineBuilder builder;
    return builder.build(text);
}

namespace {

bool same_element(const MdElement& a, const MdElement& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case MdKind::heading:
            if (a.level != b.level) return false;
            break;
        case MdKind::code_fence: return a.text_attr == b.text_attr;
        case MdKind::list:
            if (a.ordered != b.ordered || a.level != b.level || a.item_count != b.item_count)
                return false;
            break;
        case MdKind::blockquote:
            if (a.level != b.level) return false;
            break;
        case MdKind::link:
        case MdKind::image: return a.text_attr == b.text_attr;  // URL targets must match
        case MdKind::table:
            return a.rows == b.rows && a.cols == b.cols && a.has_header == b.has_header;
        case MdKind::math: return a.display == b.display;
        case MdKind::html_tag: return a.text_attr == b.text_attr;
        case MdKind::horizontal_rule: return true;
        case MdKind::paragraph_break: break;
    }
    // block elements: inline style counts must match
    return a.bold == b.bold && a.italic == b.italic && a.strike == b.strike &&
           a.inline_code == b.inline_code;
}

}  // namespace

FormatVerdict markdown_match(std::string_view original, std::string_view translated) {
    MarkdownOutline a = markdown_outline(original);
    MarkdownOutline b = markdown_outline(translated);
    FormatVerdict verdict;
    std::size_t common = std::min(a.elements.size(), b.elements.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (!same_element(a.elements[i], b.elements[i])) {
            verdict.mismatches.push_back(
                {i, a.elements[i].describe(), b.elements[i].describe()});
        }
    }
    for (std::size_t i = common; i < a.elements.size(); ++i) {
        verdict.mismatches.push_back({i, a.elements[i].describe(), "(missing)"});
    }
    for (std::size_t i = common; i < b.elements.size(); ++i) {
        verdict.mismatches.push_back({i, "(nothing)", b.elements[i].describe()});
    }
    verdict.good = verdict.mismatches.empty();
    return verdict;
}

namespace {

const std::set<std::string_view>& sl_stopwords() {
    static const std::set<std::string_view> words = {
        "je",   "se",   "da",  "ki",   "pa",  "še", "že", "ali",  "tudi",
        "kot",  "smo",  "ni",  "bo",   "bi",  "lahko",   "med",     "zelo", "bil",
        "bila", "sem",  "so",  "na",   "za",  "ne",      "po",      "pri",  "iz",
        "svoj", "njen", "kar", "če",
    };
    return words;
}

const std::set<std::string_view>& en_stopwords() {
    static const std::set<std::string_view> words = {
        "the",   "and",   "was",  "are",   "with", "this",  "that",  "have", "from",
        "they",  "will",  "would", "there", "their", "been", "which", "when", "what",
        "your",  "about", "were", "into",  "them",  "then", "than",  "some", "its",
        "has",   "had",   "not",  "you",   "but",   "his",  "her",
    };
    return words;
}

}  // namespace

std::string StopwordDetector::detect(std::string_view text) const {
    std::size_t sl = 0, en = 0;
    std::string lowered = uni::lowercase(text);
    std::string_view view(lowered);
    std::size_t i = 0;
    while (i < view.size()) {
        while (i < view.size() && std::isspace(static_cast<unsigned char>(view[i]))) ++i;
        std::size_t start = i;
        while (i < view.size() && !std::isspace(static_cast<unsigned char>(view[i]))) ++i;
        if (i == start) break;
        std::string_view word = view.substr(start, i - start);
        while (!word.empty() && std::ispunct(static_cast<unsigned char>(word.back())))
            word.remove_suffix(1);
        while (!word.empty() && std::ispunct(static_cast<unsigned char>(word.front())))
            word.remove_prefix(1);
        if (sl_stopwords().count(word)) ++sl;
        if (en_stopwords().count(word)) ++en;
    }
    if (sl == 0 && en == 0) return "";
    return sl >= en ? "sl" : "en";
}

double DatasetStats::truncation_rate_pct() const {
    return pairs == 0 ? 0.0 : 100.0 * static_cast<double>(truncated) / static_cast<double>(pairs);
}
double DatasetStats::format_error_rate_pct() const {
    return pairs == 0 ? 0.0
                      : 100.0 * static_cast<double>(format_bad) / static_cast<double>(pairs);
}
double DatasetStats::lang_error_rate_pct() const {
    return pairs == 0 ? 0.0
                      : 100.0 * static_cast<double>(lang_errors) / static_cast<double>(pairs);
}
std::optional<double> DatasetStats::mean_score() const {
    if (score_count == 0) return std::nullopt;
    return score_sum / static_cast<double>(score_count);
}

EvalReport eval_translations(const std::vector<TranslationPair>& pairs,
                             const EvalOptions& options) {
    if (options.check_language && options.detector == nullptr)
        throw ConfigError("eval_translations: language metric requested without a detector");
    EvalReport report;
    report.language_checked = options.check_language;
    auto update = [&](DatasetStats& stats, const TranslationPair& pair) {
        ++stats.pairs;
        if (truncation_flag(pair)) ++stats.truncated;
        if (!markdown_match(pair.original, pair.translated).good) ++stats.format_bad;
        if (options.check_language) {
            if (options.detector->detect(pair.translated) != options.target_lang)
                ++stats.lang_errors;
        }
        for (const auto& [name, value] : pair.external_scores) {
            (void)name;
            stats.score_sum += value;
            ++stats.score_count;
        }
    };
    for (const auto& pair : pairs) {
        update(report.overall, pair);
        update(report.per_dataset[pair.dataset.empty() ? "default" : pair.dataset], pair);
    }
    return report;
}

std::string format_report(const EvalReport& report) {
    std::ostringstream out;
    auto row = [&](const std::string& name, const DatasetStats& s) {
        char buf[160];
        std::string lang = "-";
        if (report.language_checked) {
            char pct[32];
            std::snprintf(pct, sizeof pct, "%.2f%%", s.lang_error_rate_pct());
            lang = pct;
        }
        std::string score = "-";
        if (auto mean = s.mean_score()) {
            char val[32];
            std::snprintf(val, sizeof val, "%.6f", *mean);
            score = val;
        }
        std::snprintf(buf, sizeof buf,
                      "%-16s pairs=%-6zu score=%-10s lang_err=%-8s trunc_err=%.2f%% "
                      "markdown_err=%.2f%%",
                      name.c_str(), s.pairs, score.c_str(), lang.c_str(),
                      s.truncation_rate_pct(), s.format_error_rate_pct());
        out << buf << '\n';
    };
    row("overall", report.overall);
    for (const auto& [name, stats] : report.per_dataset) row(name, stats);
    return out.str();
}

}  // namespace corpuskit::evalmetrics
