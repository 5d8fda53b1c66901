#include "corpuskit/align.hpp"

namespace corpuskit::align {

void validate(const ParallelPair& pair) {
    if (pair.pair_id.empty()) throw DataError("parallel pair: empty pair_id");
    if (pair.src.lang == pair.tgt.lang)
        throw DataError("parallel pair " + pair.pair_id + ": src and tgt share language '" +
                        pair.src.lang + "'");
}

namespace {

std::vector<std::string_view> paragraphs_of(const std::string& text) {
    std::vector<std::string_view> parts;
    std::string_view view(text);
    std::size_t start = 0;
    while (true) {
        std::size_t pos = view.find("\n\n", start);
        if (pos == std::string_view::npos) break;
        parts.push_back(view.substr(start, pos - start));
        start = pos + 2;
    }
    parts.push_back(view.substr(start));
    return parts;
}

}  // namespace

Document interleave_paragraphs(const ParallelPair& pair) {
    validate(pair);
    auto src_pars = paragraphs_of(pair.src.text);
    auto tgt_pars = paragraphs_of(pair.tgt.text);
    if (src_pars.size() != tgt_pars.size())
        throw DataError("alignment error for pair " + pair.pair_id + ": src has " +
                        std::to_string(src_pars.size()) + " paragraphs, tgt has " +
                        std::to_string(tgt_pars.size()));
    std::string text;
    for (std::size_t i = 0; i < src_pars.size(); ++i) {
        if (i > 0) text += "\n\n";
        text += src_pars[i];
        text += "\n\n";
        text += tgt_pars[i];
    }
    Document out;
    out.id = pair.pair_id;
    out.text = std::move(text);
    out.meta["src_id"] = pair.src.id;
    out.meta["tgt_id"] = pair.tgt.id;
    out.meta["mode"] = "paragraph";
    return out;
}

Document concat_documents(const ParallelPair& pair, ConcatOrder order) {
    validate(pair);
    const Document& first = order == ConcatOrder::src_first ? pair.src : pair.tgt;
    const Document& second = order == ConcatOrder::src_first ? pair.tgt : pair.src;
    Document out;
    out.id = pair.pair_id;
    out.text = first.text + "\n\n" + second.text;
    out.meta["src_id"] = pair.src.id;
    out.meta["tgt_id"] = pair.tgt.id;
    out.meta["mode"] = "document";
    out.meta["order"] = order == ConcatOrder::src_first ? "src_first" : "tgt_first";
    if (first.text.empty() || second.text.empty())
        out.meta["empty_side"] = first.text.empty() ? (order == ConcatOrder::src_first ? "src" : "tgt")
                                                    : (order == ConcatOrder::src_first ? "tgt" : "src");
    return out;
}

std::pair<Document, Document> emit_separate(const ParallelPair& pair) {
    validate(pair);
    Document src = pair.src;
    Document tgt = pair.tgt;
    src.meta["pair_id"] = pair.pair_id;
    tgt.meta["pair_id"] = pair.pair_id;
    return {std::move(src), std::move(tgt)};
}

}  // namespace corpuskit::align
