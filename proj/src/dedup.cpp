#include "corpuskit/dedup.hpp"

#include <algorithm>

#include "corpuskit/unicode.hpp"

namespace corpuskit::dedup {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<std::string> split_words_lower(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) words.push_back(uni::lowercase(text.substr(start, i - start)));
    }
    return words;
}

}  // namespace

ShingleSet shingle(std::string_view text, std::size_t n) {
    if (n == 0) throw ConfigError("shingle: n must be at least 1");
    auto words = split_words_lower(text);
    ShingleSet set;
    set.n = n;
    if (words.size() < n) {
        // short-text rule: one shingle of the whole token sequence
        std::uint64_t h = kFnvOffset;
        for (const auto& w : words) {
            h = fnv1a(w, h);
            h = fnv1a(std::string_view("\x1F", 1), h);
        }
        set.shingles.push_back(h);
        return set;
    }
    set.shingles.reserve(words.size() - n + 1);
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
        std::uint64_t h = kFnvOffset;
        for (std::size_t k = 0; k < n; ++k) {
            h = fnv1a(words[i + k], h);
            h = fnv1a(std::string_view("\x1F", 1), h);
        }
        set.shingles.push_back(h);
    }
    std::sort(set.shingles.begin(), set.shingles.end());
    set.shingles.erase(std::unique(set.shingles.begin(), set.shingles.end()),
                       set.shingles.end());
    return set;
}

MinHashSignature minhash(const ShingleSet& set, std::uint64_t seed) {
    if (set.shingles.empty()) throw DataError("minhash: empty shingle set has no signature");
    MinHashSignature sig;
    sig.seed = seed;
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < kNumPermutations; ++i) {
        std::uint64_t salt = splitmix64(state);
        std::uint64_t best = ~0ULL;
        for (std::uint64_t h : set.shingles) {
            std::uint64_t v = mix64(h ^ salt);
            if (v < best) best = v;
        }
        sig.slots[i] = best;
    }
    return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.seed != b.seed)
        throw DataError("estimate_jaccard: signatures built with different seeds");
    std::size_t equal = 0;
    for (std::size_t i = 0; i < kNumPermutations; ++i) {
        if (a.slots[i] == b.slots[i]) ++equal;
    }
    return static_cast<double>(equal) / static_cast<double>(kNumPermutations);
}

namespace {

std::uint64_t band_key(const MinHashSignature& sig, std::size_t band) {
    const char* begin = reinterpret_cast<const char*>(sig.slots.data() + band * kRowsPerBand);
    return fnv1a(std::string_view(begin, kRowsPerBand * sizeof(std::uint64_t)));
}

}  // namespace

void LshIndex::insert(std::size_t id, const MinHashSignature& sig) {
    for (std::size_t b = 0; b < kBands; ++b) bands_[b][band_key(sig, b)].push_back(id);
    ++size_;
}

std::vector<std::size_t> LshIndex::candidates(const MinHashSignature& sig) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < kBands; ++b) {
        auto it = bands_[b].find(band_key(sig, b));
        if (it != bands_[b].end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CorpusDeduper::CorpusDeduper(DedupOptions options) : options_(std::move(options)) {
    if (options_.threshold <= 0.0 || options_.threshold >= 1.0)
        throw ConfigError("dedup: threshold must lie strictly between 0 and 1");
    if (options_.ngram == 0) throw ConfigError("dedup: ngram must be at least 1");
}

bool CorpusDeduper::consider(const Document& doc) {
    ++report_.docs_in;
    std::string group_value;
    if (!options_.group_by.empty()) {
        auto it = doc.meta.find(options_.group_by);
        if (it == doc.meta.end()) {
            ++report_.ungrouped;  // reserved "" group
        } else {
            group_value = it->second;
        }
    }
    Group& group = groups_[group_value];
    auto sig = minhash(shingle(doc.text, options_.ngram), options_.seed);
    for (std::size_t id : group.index.candidates(sig)) {
        double est = estimate_jaccard(sig, group.signatures[id]);
        if (est >= options_.threshold) {
            report_.removed.push_back({group.ids[id], doc.id, est});
            return false;
        }
    }
    std::size_t id = group.signatures.size();
    group.index.insert(id, sig);
    group.signatures.push_back(sig);
    group.ids.push_back(doc.id);
    ++report_.docs_kept;
    return true;
}

std::vector<Document> dedup_corpus(const std::vector<Document>& docs, const DedupOptions& options,
                                   DedupReport* report) {
    CorpusDeduper deduper(options);
    std::vector<Document> kept;
    for (const auto& doc : docs) {
        if (deduper.consider(doc)) kept.push_back(doc);
    }
    if (report) *report = deduper.report();
    return kept;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

std::size_t lcs_length(const std::vector<std::string_view>& a,
                       const std::vector<std::string_view>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

double rouge_l(std::string_view candidate, std::string_view reference) {
    auto cand = split_tokens(candidate);
    auto ref = split_tokens(reference);
    if (cand.empty() || ref.empty()) return 0.0;
    std::size_t lcs = lcs_length(cand, ref);
    if (lcs == 0) return 0.0;
    double p = static_cast<double>(lcs) / static_cast<double>(cand.size());
    double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
    return 2.0 * p * r / (p + r);
}

NoveltyFilter::NoveltyFilter(std::vector<std::string> pool, double max_rouge)
    : pool_(std::move(pool)), max_rouge_(max_rouge) {
    if (max_rouge_ <= 0.0 || max_rouge_ > 1.0)
        throw ConfigError("novelty_filter: max_rouge must lie in (0, 1]");
}

bool NoveltyFilter::consider(std::string_view candidate) {
    for (const auto& text : pool_) {
        if (rouge_l(candidate, text) >= max_rouge_) return false;
    }
    pool_.emplace_back(candidate);  // kept candidates join the pool
    return true;
}

std::vector<std::string> novelty_filter(const std::vector<std::string>& candidates,
                                        const std::vector<std::string>& pool, double max_rouge) {
    NoveltyFilter filter(pool, max_rouge);
    std::vector<std::string> kept;
    for (const auto& c : candidates) {
        if (filter.consider(c)) kept.push_back(c);
    }
    return kept;
}

}  // namespace corpuskit::dedup
