#include "corpuskit/pagemerge.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "corpuskit/unicode.hpp"

namespace corpuskit::pagemerge {

std::string_view to_string(MergeAction action) {
    switch (action) {
        case MergeAction::drop_footer: return "drop_footer";
        case MergeAction::drop_header: return "drop_header";
        case MergeAction::join_hyphenated: return "join_hyphenated";
        case MergeAction::join_same_paragraph: return "join_same_paragraph";
        case MergeAction::separate: return "separate";
    }
    return "?";
}

MergeAction merge_action_from_string(std::string_view name) {
    if (name == "drop_footer") return MergeAction::drop_footer;
    if (name == "drop_header") return MergeAction::drop_header;
    if (name == "join_hyphenated") return MergeAction::join_hyphenated;
    if (name == "join_same_paragraph") return MergeAction::join_same_paragraph;
    if (name == "separate") return MergeAction::separate;
    throw DataError("unknown merge action '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_decoration(std::string_view s) {
    static const std::string_view marks[] = {" ",  "\t", "-", "–", "—", ".",
                                             "[",  "]",  "(", ")",      "|",      "·",
                                             "*"};
    bool changed = true;
    while (changed && !s.empty()) {
        changed = false;
        for (auto m : marks) {
            if (s.substr(0, m.size()) == m) {
                s.remove_prefix(m.size());
                changed = true;
            }
            if (s.size() >= m.size() && s.substr(s.size() - m.size()) == m) {
                s.remove_suffix(m.size());
                changed = true;
            }
        }
    }
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

bool roman_numeral(std::string_view s) {
    if (s.empty() || s.size() > 8) return false;
    for (char c : s) {
        switch (std::tolower(static_cast<unsigned char>(c))) {
            case 'i': case 'v': case 'x': case 'l': case 'c': case 'd': case 'm': break;
            default: return false;
        }
    }
    return true;
}

}  // namespace

bool looks_like_page_number(std::string_view text) {
    std::string_view s = strip_decoration(trim(text));
    if (s.empty()) return false;
    if (all_digits(s)) return true;
    if (std::size_t slash = s.find('/'); slash != std::string_view::npos) {
        if (all_digits(s.substr(0, slash)) && all_digits(s.substr(slash + 1))) return true;
    }
    if (roman_numeral(s)) return true;
    // "Stran 12" / "stran 12"
    if (s.size() > 6 && (s.substr(0, 6) == "Stran " || s.substr(0, 6) == "stran ") &&
        all_digits(trim(s.substr(6))))
        return true;
    return false;
}

void DecisionProvider::begin_document(const std::string&, const std::vector<Page>&) {}

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
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

std::string_view edge_line(std::string_view text, bool first) {
    auto lines = lines_of(text);
    if (first) {
        for (auto l : lines) {
            if (!trim(l).empty()) return trim(l);
        }
    } else {
        for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
            if (!trim(*it).empty()) return trim(*it);
        }
    }
    return {};
}

void learn_running(std::vector<std::string>& out, const std::vector<std::string>& edges) {
    std::size_t i = 0;
    while (i < edges.size()) {
        std::size_t j = i;
        while (j + 1 < edges.size() && !edges[j + 1].empty() && edges[j + 1] == edges[i]) ++j;
        if (!edges[i].empty() && j - i + 1 >= 3) {
            if (std::find(out.begin(), out.end(), edges[i]) == out.end()) out.push_back(edges[i]);
        }
        i = j + 1;
    }
}

constexpr std::string_view kSentenceFinal[] = {
    ".", "!", "?", ":", "\"", "'", "»", "«",
    "“", "”", "‘", "’", "…",
};

bool ends_with_sentence_final(std::string_view par) {
    std::string_view t = trim(par);
    for (auto f : kSentenceFinal) {
        if (t.size() >= f.size() && t.substr(t.size() - f.size()) == f) return true;
    }
    return false;
}

bool starts_lowercase(std::string_view par) {
    std::string_view t = trim(par);
    if (t.empty()) return false;
    std::size_t i = 0;
    char32_t cp = uni::next_codepoint(t, i);
    return uni::is_lower(cp);
}

bool ends_hyphenated(std::string_view par) {
    std::string_view t = trim(par);
    if (t.size() < 2 || t.back() != '-') return false;
    // the '-' must directly follow a letter
    std::string_view before = t.substr(0, t.size() - 1);
    std::size_t i = 0;
    char32_t last = 0;
    while (i < before.size()) last = uni::next_codepoint(before, i);
    return uni::is_letter(last);
}

}  // namespace

void HeuristicProvider::begin_document(const std::string&, const std::vector<Page>& pages) {
    running_lines_.clear();
    std::vector<std::string> firsts, lasts;
    firsts.reserve(pages.size());
    lasts.reserve(pages.size());
    for (const auto& page : pages) {
        firsts.emplace_back(edge_line(page.text, true));
        lasts.emplace_back(edge_line(page.text, false));
    }
    learn_running(running_lines_, firsts);
    learn_running(running_lines_, lasts);
}

PageLabel HeuristicProvider::classify(const Page& page) const {
    std::size_t total = uni::codepoint_count(page.text);
    if (total < 25) return PageLabel::boilerplate;
    std::size_t alnum = 0;
    for (std::size_t i = 0; i < page.text.size();) {
        if (uni::is_alnum(uni::next_codepoint(page.text, i))) ++alnum;
    }
    if (static_cast<double>(alnum) / static_cast<double>(total) < 0.2)
        return PageLabel::boilerplate;
    if (looks_like_page_number(page.text)) return PageLabel::boilerplate;
    return PageLabel::content;
}

MergeAction HeuristicProvider::decide(const BoundaryContext& ctx) const {
    if (trim(ctx.last_par).empty() || trim(ctx.first_par).empty())
        throw DataError("decide_merge: boundary paragraphs must be non-empty");
    auto is_running = [&](std::string_view par) {
        std::string_view t = trim(par);
        return std::find(running_lines_.begin(), running_lines_.end(), t) !=
               running_lines_.end();
    };
    if (looks_like_page_number(ctx.last_par) || is_running(ctx.last_par))
        return MergeAction::drop_footer;
    if (looks_like_page_number(ctx.first_par) || is_running(ctx.first_par))
        return MergeAction::drop_header;
    if (ends_hyphenated(ctx.last_par) && starts_lowercase(ctx.first_par))
        return MergeAction::join_hyphenated;
    if (!ends_with_sentence_final(ctx.last_par) && starts_lowercase(ctx.first_par))
        return MergeAction::join_same_paragraph;
    return MergeAction::separate;
}

ReplayProvider ReplayProvider::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open replay file " + path.string());
    ReplayProvider provider;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            provider.add(j.at("doc_id").get<std::string>(), j.at("boundary").get<std::size_t>(),
                         j.value("seq", std::size_t{0}),
                         merge_action_from_string(j.at("action").get<std::string>()));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("replay file " + path.string() + ":" + std::to_string(line_no) +
                            ": " + e.what());
        }
    }
    return provider;
}

void ReplayProvider::add(const std::string& doc_id, std::size_t boundary, std::size_t step,
                         MergeAction action) {
    decisions_[{doc_id, boundary, step}] = action;
}

void ReplayProvider::begin_document(const std::string& doc_id, const std::vector<Page>& pages) {
    fallback_.begin_document(doc_id, pages);
}

PageLabel ReplayProvider::classify(const Page& page) const { return fallback_.classify(page); }

MergeAction ReplayProvider::decide(const BoundaryContext& ctx) const {
    auto it = decisions_.find({ctx.doc_id, ctx.boundary, ctx.step});
    if (it != decisions_.end()) return it->second;
    return fallback_.decide(ctx);
}

PageLabel classify_page(const Page& page, const std::vector<Page>&) {
    HeuristicProvider provider;
    return provider.classify(page);
}

MergeAction decide_merge(std::string_view last_par, std::string_view first_par) {
    HeuristicProvider provider;
    BoundaryContext ctx;
    ctx.last_par = last_par;
    ctx.first_par = first_par;
    return provider.decide(ctx);
}

namespace {

std::string_view last_paragraph(std::string_view text) {
    std::size_t pos = text.rfind("\n\n");
    return pos == std::string_view::npos ? text : text.substr(pos + 2);
}

void remove_last_paragraph(std::string& text) {
    std::size_t pos = text.rfind("\n\n");
    text.resize(pos == std::string::npos ? 0 : pos);
}

std::string_view first_paragraph(std::string_view text) {
    std::size_t pos = text.find("\n\n");
    return pos == std::string_view::npos ? text : text.substr(0, pos);
}

std::string_view after_first_paragraph(std::string_view text) {
    std::size_t pos = text.find("\n\n");
    return pos == std::string_view::npos ? std::string_view{} : text.substr(pos + 2);
}

void strip_trailing_hyphen(std::string& text) {
    std::string_view t = trim(text);
    if (!t.empty() && t.back() == '-') {
        std::size_t pos = text.rfind('-');
        text.erase(pos, 1);  // exactly one '-'
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
            text.pop_back();
    }
}

}  // namespace

Document merge_pages(const std::string& doc_id, const std::vector<Page>& pages,
                     DecisionProvider& provider, std::vector<MergeLogEntry>* log) {
    provider.begin_document(doc_id, pages);

    std::vector<std::string> content;
    for (const auto& page : pages) {
        PageLabel label = page.label;
        if (label == PageLabel::unlabeled) label = provider.classify(page);
        if (label == PageLabel::content) content.emplace_back(trim(page.text));
    }

    Document out;
    out.id = doc_id;
    if (content.empty()) {
        out.meta["empty"] = "all_pages_boilerplate";
        return out;
    }

    std::string acc = content[0];
    for (std::size_t b = 0; b + 1 < content.size(); ++b) {
        std::string cur = content[b + 1];
        std::size_t step = 0;
        while (true) {
            while (!acc.empty() && std::isspace(static_cast<unsigned char>(acc.back())))
                acc.pop_back();
            std::size_t lead = 0;
            while (lead < cur.size() && std::isspace(static_cast<unsigned char>(cur[lead])))
                ++lead;
            if (lead > 0) cur.erase(0, lead);
            if (acc.empty()) {
                acc = cur;
                break;
            }
            if (cur.empty()) break;
            std::string_view last = last_paragraph(acc);
            std::string_view first = first_paragraph(cur);
            MergeAction action =
                provider.decide({doc_id, b, step, last, first});
            if (log) log->push_back({b, step, action});
            ++step;
            if (action == MergeAction::drop_footer) {
                remove_last_paragraph(acc);
                continue;
            }
            if (action == MergeAction::drop_header) {
                cur = std::string(after_first_paragraph(cur));
                continue;
            }
            if (action == MergeAction::join_hyphenated) {
                strip_trailing_hyphen(acc);
                acc += first;
            } else if (action == MergeAction::join_same_paragraph) {
                acc += ' ';
                acc += first;
            } else {  // separate
                acc += "\n\n";
                acc += first;
            }
            std::string_view rest = after_first_paragraph(cur);
            if (!rest.empty()) {
                acc += "\n\n";
                acc += rest;
            }
            break;
        }
    }
    out.text = std::move(acc);
    return out;
}

}  // namespace corpuskit::pagemerge
