#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpuskit/core.hpp"

namespace corpuskit::dedup {

inline constexpr std::size_t kNumPermutations = 256;
inline constexpr std::size_t kBands = 32;
inline constexpr std::size_t kRowsPerBand = 8;
static_assert(kBands * kRowsPerBand == kNumPermutations);

// Set of 64-bit hashes of word n-grams. Words are whitespace-split,
// lowercased tokens; a text with fewer than n words yields one shingle of
// the whole token sequence.
struct ShingleSet {
    std::vector<std::uint64_t> shingles;  // sorted, unique
    std::size_t n = 0;
};

ShingleSet shingle(std::string_view text, std::size_t n);

struct MinHashSignature {
    std::array<std::uint64_t, kNumPermutations> slots;
    std::uint64_t seed = 0;
};

// Slot i is the minimum of permutation_i over the shingle hashes.
// Throws DataError for an empty set.
MinHashSignature minhash(const ShingleSet& set, std::uint64_t seed);

// Fraction of equal slots; unbiased estimator of Jaccard similarity.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// 32 bands x 8 rows over the 256 slots; candidates share at least one band
// bucket. (1/32)^(1/8) ~ 0.648, realizing the 0.65 similarity threshold.
class LshIndex {
  public:
    void insert(std::size_t id, const MinHashSignature& sig);
    // Candidate ids in insertion order, deduplicated.
    std::vector<std::size_t> candidates(const MinHashSignature& sig) const;
    std::size_t size() const { return size_; }

  private:
    std::array<std::unordered_map<std::uint64_t, std::vector<std::size_t>>, kBands> bands_;
    std::size_t size_ = 0;
};

struct DedupOptions {
    double threshold = 0.65;
    std::size_t ngram = 5;
    std::uint64_t seed = 0;
    std::string group_by;  // meta key; empty = one global group
};

struct RemovedPair {
    std::string kept_id;
    std::string removed_id;
    double estimate;
};

struct DedupReport {
    std::vector<RemovedPair> removed;
    std::size_t docs_in = 0;
    std::size_t docs_kept = 0;
    std::size_t ungrouped = 0;  // docs missing the group_by key, routed to ""
};

// Streaming near-duplicate remover: feed documents in input order; consider()
// returns true when the document is kept. The first member of every duplicate
// cluster is always kept.
class CorpusDeduper {
  public:
    explicit CorpusDeduper(DedupOptions options);
    bool consider(const Document& doc);
    const DedupReport& report() const { return report_; }

  private:
    struct Group {
        LshIndex index;
        std::vector<MinHashSignature> signatures;
        std::vector<std::string> ids;
    };
    DedupOptions options_;
    std::unordered_map<std::string, Group> groups_;
    DedupReport report_;
};

std::vector<Document> dedup_corpus(const std::vector<Document>& docs, const DedupOptions& options,
                                   DedupReport* report = nullptr);

// F1 of the longest common subsequence over whitespace tokens; 0 when either
// side has no tokens.
double rouge_l(std::string_view candidate, std::string_view reference);

// Keeps a candidate iff its ROUGE-L against every pool text and every
// previously kept candidate stays below max_rouge.
class NoveltyFilter {
  public:
    NoveltyFilter(std::vector<std::string> pool, double max_rouge = 0.7);
    bool consider(std::string_view candidate);

  private:
    std::vector<std::string> pool_;
    double max_rouge_;
};

std::vector<std::string> novelty_filter(const std::vector<std::string>& candidates,
                                        const std::vector<std::string>& pool,
                                        double max_rouge = 0.7);

}  // namespace corpuskit::dedup
