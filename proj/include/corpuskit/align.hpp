#pragma once

#include <string>
#include <utility>

#include "corpuskit/core.hpp"

namespace corpuskit::align {

struct ParallelPair {
    Document src;
    Document tgt;
    std::string pair_id;
};

// Throws DataError when the pair invariants are broken (same lang on both
// sides, empty pair_id).
void validate(const ParallelPair& pair);

enum class ConcatOrder { src_first, tgt_first };

// src1, tgt1, src2, tgt2, ... joined with blank lines. Requires equal
// paragraph counts; mismatch raises a DataError naming both counts.
Document interleave_paragraphs(const ParallelPair& pair);

// Full src text then full tgt text (or reversed), joined by a blank line.
// An empty side is flagged in meta.
Document concat_documents(const ParallelPair& pair, ConcatOrder order);

// Both documents pass through unchanged, each carrying pair_id in meta.
std::pair<Document, Document> emit_separate(const ParallelPair& pair);

}  // namespace corpuskit::align
