#include "corpuskit/packer.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace corpuskit::packer {

namespace {

void check_context_length(std::size_t context_length) {
    if (context_length < 8)
        throw ConfigError("context_length must be at least 8 (BOS + content + EOS)");
}

// Hard-split an oversized token run into capacity-sized chunks.
void emit_chunks(std::vector<Subdocument>& out, std::vector<int>&& tokens,
                 const std::string& doc_id, std::size_t unit_begin, std::size_t unit_end,
                 std::size_t capacity) {
    if (tokens.size() <= capacity) {
        out.push_back({std::move(tokens), {SourceRef{doc_id, unit_begin, unit_end, 0}}});
        return;
    }
    std::size_t part = 0;
    for (std::size_t off = 0; off < tokens.size(); off += capacity, ++part) {
        std::size_t len = std::min(capacity, tokens.size() - off);
        Subdocument sub;
        sub.token_ids.assign(tokens.begin() + static_cast<std::ptrdiff_t>(off),
                             tokens.begin() + static_cast<std::ptrdiff_t>(off + len));
        sub.sources = {SourceRef{doc_id, unit_begin, unit_end, part}};
        out.push_back(std::move(sub));
    }
}

}  // namespace

std::vector<Subdocument> make_subdocuments(const Document& doc, std::size_t context_length,
                                           const TokenizerInterface& tokenizer,
                                           UnitKind strategy) {
    check_context_length(context_length);
    const std::size_t capacity = capacity_for(context_length);

    std::vector<Subdocument> out;
    std::vector<int> whole = tokenizer.encode(doc.text);
    auto spans = split_unit_spans(doc.text, strategy);
    std::size_t total_units = spans.empty() ? 1 : spans.size();
    if (whole.size() <= capacity) {
        out.push_back({std::move(whole), {SourceRef{doc.id, 0, total_units, 0}}});
        return out;
    }

    // Segment boundaries are unit starts; each segment's text runs from its
    // first unit through the joiner before the next segment, so segment
    // tokenizations concatenate to the whole document's.
    std::vector<std::size_t> starts;
    starts.reserve(spans.size());
    for (const auto& s : spans) starts.push_back(s.begin);

    auto segment_text = [&](std::size_t unit_a, std::size_t unit_b) {  // units [a, b)
        std::size_t begin = starts[unit_a];
        std::size_t end = unit_b < starts.size() ? starts[unit_b] : doc.text.size();
        return std::string_view(doc.text).substr(begin, end - begin);
    };

    std::vector<std::size_t> seg_tokens(spans.size());
    for (std::size_t u = 0; u < spans.size(); ++u)
        seg_tokens[u] = tokenizer.encode(segment_text(u, u + 1)).size();

    std::size_t first = 0;
    while (first < spans.size()) {
        std::size_t last = first;
        std::size_t total = seg_tokens[first];
        while (last + 1 < spans.size() && total + seg_tokens[last + 1] <= capacity) {
            ++last;
            total += seg_tokens[last];
        }
        emit_chunks(out, tokenizer.encode(segment_text(first, last + 1)), doc.id, first, last + 1,
                    capacity);
        first = last + 1;
    }
    return out;
}

std::vector<PackedExample> pack(std::vector<Subdocument> subdocs, std::size_t context_length,
                                const TokenizerInterface& tokenizer) {
    check_context_length(context_length);
    const std::size_t capacity = capacity_for(context_length);
    for (const auto& sub : subdocs) {
        if (sub.length() > capacity)
            throw DataError("pack: subdocument of " + std::to_string(sub.length()) +
                            " tokens exceeds capacity " + std::to_string(capacity));
    }

    auto key = [](const Subdocument& s) {
        static const SourceRef none{};
        const SourceRef& r = s.sources.empty() ? none : s.sources.front();
        return std::tuple<std::size_t, const std::string&, std::size_t, std::size_t>(
            s.length(), r.doc_id, r.unit_begin, r.part);
    };
    std::stable_sort(subdocs.begin(), subdocs.end(), [&](const auto& a, const auto& b) {
        auto ka = key(a), kb = key(b);
        if (std::get<0>(ka) != std::get<0>(kb)) return std::get<0>(ka) > std::get<0>(kb);
        return ka < kb;
    });

    const int bos = tokenizer.bos_id();
    const int eos = tokenizer.eos_id();
    // budget per example after BOS; a member of length L consumes L + 1 (EOS)
    const std::size_t budget = context_length - 1;

    struct Bin {
        std::vector<int> tokens;
        std::vector<PackedMember> members;
        std::size_t used = 0;
    };
    std::vector<Bin> bins;
    for (auto& sub : subdocs) {
        std::size_t need = sub.length() + 1;
        Bin* target = nullptr;
        for (auto& bin : bins) {
            if (bin.used + need <= budget) {
                target = &bin;
                break;
            }
        }
        if (!target) {
            bins.emplace_back();
            target = &bins.back();
        }
        target->tokens.insert(target->tokens.end(), sub.token_ids.begin(), sub.token_ids.end());
        target->tokens.push_back(eos);
        target->used += need;
        target->members.push_back({std::move(sub.sources), sub.length()});
    }

    std::vector<PackedExample> out;
    out.reserve(bins.size());
    for (auto& bin : bins) {
        PackedExample ex;
        ex.token_ids.reserve(context_length);
        ex.token_ids.push_back(bos);
        ex.token_ids.insert(ex.token_ids.end(), bin.tokens.begin(), bin.tokens.end());
        ex.content_len = ex.token_ids.size();
        ex.token_ids.resize(context_length, eos);
        ex.members = std::move(bin.members);
        out.push_back(std::move(ex));
    }
    return out;
}

namespace {

void add_violation(VerifyReport& report, std::size_t index, std::string kind,
                   std::string detail) {
    report.violations.push_back({std::move(kind), std::move(detail), index});
}

}  // namespace

VerifyReport verify_pack(const std::vector<PackedExample>& examples,
                         const std::vector<Document>& docs,
                         const TokenizerInterface& tokenizer, std::size_t context_length) {
    VerifyReport report;
    report.examples = examples.size();
    report.documents = docs.size();
    const int bos = tokenizer.bos_id();
    const int eos = tokenizer.eos_id();

    // member token slices per document, keyed for (unit, part) ordering
    struct Fragment {
        std::size_t unit_begin, part;
        std::vector<int> tokens;
    };
    std::map<std::string, std::vector<Fragment>> fragments;

    for (std::size_t e = 0; e < examples.size(); ++e) {
        const auto& ex = examples[e];
        if (ex.token_ids.size() != context_length) {
            add_violation(report, e, "length",
                          "example has " + std::to_string(ex.token_ids.size()) +
                              " tokens, expected " + std::to_string(context_length));
            continue;
        }
        if (ex.token_ids.empty() || ex.token_ids[0] != bos) {
            add_violation(report, e, "missing BOS", "token_ids[0] != bos_id");
        }
        for (std::size_t i = 1; i < ex.token_ids.size(); ++i) {
            if (ex.token_ids[i] == bos) {
                add_violation(report, e, "BOS not only-first",
                              "bos_id at position " + std::to_string(i));
                break;
            }
        }
        std::size_t pos = 1;
        bool structure_ok = true;
        for (const auto& member : ex.members) {
            if (pos + member.length + 1 > ex.token_ids.size()) {
                add_violation(report, e, "member overflow",
                              "members exceed example length at position " + std::to_string(pos));
                structure_ok = false;
                break;
            }
            if (ex.token_ids[pos + member.length] != eos) {
                add_violation(report, e, "missing separator",
                              "no EOS after member ending at position " +
                                  std::to_string(pos + member.length));
                structure_ok = false;
            }
            if (structure_ok) {
                for (const auto& src : member.sources) {
                    fragments[src.doc_id].push_back(
                        {src.unit_begin, src.part,
                         std::vector<int>(ex.token_ids.begin() + static_cast<std::ptrdiff_t>(pos),
                                          ex.token_ids.begin() +
                                              static_cast<std::ptrdiff_t>(pos + member.length))});
                }
            }
            pos += member.length + 1;
        }
        if (structure_ok && pos != ex.content_len) {
            add_violation(report, e, "content_len",
                          "content_len " + std::to_string(ex.content_len) +
                              " does not match member layout end " + std::to_string(pos));
        }
        for (std::size_t i = ex.content_len; i < ex.token_ids.size(); ++i) {
            if (ex.token_ids[i] != eos) {
                add_violation(report, e, "padding",
                              "non-EOS token at padded position " + std::to_string(i));
                break;
            }
        }
    }

    for (const auto& doc : docs) {
        auto expected = tokenizer.encode(doc.text);
        auto it = fragments.find(doc.id);
        std::vector<int> actual;
        if (it != fragments.end()) {
            std::stable_sort(it->second.begin(), it->second.end(),
                             [](const Fragment& a, const Fragment& b) {
                                 return std::tie(a.unit_begin, a.part) <
                                        std::tie(b.unit_begin, b.part);
                             });
            for (const auto& frag : it->second)
                actual.insert(actual.end(), frag.tokens.begin(), frag.tokens.end());
            fragments.erase(it);
        }
        if (actual != expected) {
            add_violation(report, 0, "token conservation",
                          "document " + doc.id + ": reassembled " +
                              std::to_string(actual.size()) + " tokens, expected " +
                              std::to_string(expected.size()));
        }
    }
    for (const auto& [doc_id, _] : fragments) {
        add_violation(report, 0, "unknown document",
                      "examples reference document " + doc_id + " not in the input corpus");
    }
    return report;
}

std::string serialize_example(const PackedExample& example) {
    nlohmann::json j;
    j["token_ids"] = example.token_ids;
    j["content_len"] = example.content_len;
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : example.members) {
        nlohmann::json jm;
        jm["len"] = m.length;
        nlohmann::json sources = nlohmann::json::array();
        for (const auto& s : m.sources) {
            sources.push_back({{"doc", s.doc_id},
                               {"units", {s.unit_begin, s.unit_end}},
                               {"part", s.part}});
        }
        jm["sources"] = sources;
        members.push_back(jm);
    }
    j["members"] = members;
    return j.dump();
}

PackedExample parse_example(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("packed example parse error: ") + e.what());
    }
    PackedExample ex;
    try {
        ex.token_ids = j.at("token_ids").get<std::vector<int>>();
        ex.content_len = j.at("content_len").get<std::size_t>();
        for (const auto& jm : j.at("members")) {
            PackedMember m;
            m.length = jm.at("len").get<std::size_t>();
            for (const auto& js : jm.at("sources")) {
                SourceRef s;
                s.doc_id = js.at("doc").get<std::string>();
                s.unit_begin = js.at("units").at(0).get<std::size_t>();
                s.unit_end = js.at("units").at(1).get<std::size_t>();
                s.part = js.at("part").get<std::size_t>();
                m.sources.push_back(std::move(s));
            }
            ex.members.push_back(std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("packed example parse error: ") + e.what());
    }
    return ex;
}

}  // namespace corpuskit::packer
