#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "corpuskit/core.hpp"

namespace corpuskit::packer {

// Identifies the slice of a document a subdocument carries: the unit range
// [unit_begin, unit_end) under the splitting strategy, plus a part index for
// chunks of a hard-split oversized unit.
struct SourceRef {
    std::string doc_id;
    std::size_t unit_begin = 0;
    std::size_t unit_end = 0;
    std::size_t part = 0;

    bool operator==(const SourceRef&) const = default;
};

// A token run no longer than capacity = context_length - 1 (BOS) - 1 (its
// own EOS separator). Token ids cover the document text from the start of
// unit_begin up to the start of the unit after unit_end, so concatenating a
// document's subdocuments reproduces its full tokenization.
struct Subdocument {
    std::vector<int> token_ids;
    std::vector<SourceRef> sources;

    std::size_t length() const { return token_ids.size(); }
};

struct PackedMember {
    std::vector<SourceRef> sources;
    std::size_t length = 0;
};

// Fixed-length training example: BOS first, every member followed by one EOS
// separator, EOS padding to exactly context_length.
struct PackedExample {
    std::vector<int> token_ids;
    std::size_t content_len = 0;
    std::vector<PackedMember> members;
};

inline std::size_t capacity_for(std::size_t context_length) { return context_length - 2; }

std::vector<Subdocument> make_subdocuments(const Document& doc, std::size_t context_length,
                                           const TokenizerInterface& tokenizer, UnitKind strategy);

// First-fit-decreasing packing; deterministic (ties broken by first source
// id). Throws DataError if a subdocument exceeds capacity.
std::vector<PackedExample> pack(std::vector<Subdocument> subdocs, std::size_t context_length,
                                const TokenizerInterface& tokenizer);

struct PackViolation {
    std::string kind;  // "length", "missing BOS", ...
    std::string detail;
    std::size_t example_index = 0;
};

struct VerifyReport {
    std::vector<PackViolation> violations;
    std::size_t examples = 0;
    std::size_t documents = 0;
    bool ok() const { return violations.empty(); }
};

// Checks every PackedExample invariant plus exact token conservation: for
// each document, concatenating its members in (unit, part) order must equal
// the tokenization of the whole document text. Violations are reported, not
// thrown.
VerifyReport verify_pack(const std::vector<PackedExample>& examples,
                         const std::vector<Document>& docs,
                         const TokenizerInterface& tokenizer, std::size_t context_length);

std::string serialize_example(const PackedExample& example);
PackedExample parse_example(std::string_view line);

}  // namespace corpuskit::packer
