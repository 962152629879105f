#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tmem {

inline constexpr std::size_t kDefaultOrder = 3;
inline constexpr double kDefaultMultiplier = 3.0;

/// Set of word n-grams of one token sequence. A gram is its word norms joined
/// by single spaces (norms never contain whitespace). `grams` is sorted and
/// duplicate-free.
struct NgramSet {
    std::size_t order = kDefaultOrder;
    std::vector<std::string> grams;
    std::size_t source_len = 0;

    std::size_t size() const { return grams.size(); }
    bool empty() const { return grams.empty(); }
    bool contains(const std::string& gram) const;

    bool operator==(const NgramSet&) const = default;
};

/// Every contiguous window of `order` words, in sequence order (duplicates
/// kept). Sequences shorter than `order` yield the whole sequence as a single
/// window; the empty sequence yields nothing.
std::vector<std::string> ngram_windows(const std::vector<std::string>& norms, std::size_t order);

/// Throws Error(invalid_argument) when order is 0.
NgramSet extract_ngrams(const std::vector<std::string>& norms, std::size_t order = kDefaultOrder);

/// k * |A ∩ B| / (|A| + |B|). `shared` and `total` keep the exact ratio so
/// rankings never depend on floating-point rounding or on k.
struct SimilarityScore {
    double value = 0.0;
    double multiplier = kDefaultMultiplier;
    std::size_t shared = 0;
    std::size_t total = 0;

    double ceiling() const { return multiplier / 2.0; }
};

/// Exact comparison of the underlying ratios shared/total (0/0 counts as 0).
int compare_ratio(const SimilarityScore& a, const SimilarityScore& b);

SimilarityScore make_score(std::size_t shared, std::size_t total, double k);

/// Throws Error(invalid_argument) if the orders differ or k <= 0.
SimilarityScore dice_similarity(const NgramSet& a, const NgramSet& b, double k = kDefaultMultiplier);

struct RankedCandidate {
    std::string id;
    SimilarityScore score;
};

/// Sorted by score descending, ties by id ascending; zero scores dropped.
std::vector<RankedCandidate> rank_candidates(const NgramSet& query,
                                             const std::vector<std::pair<std::string, NgramSet>>& candidates,
                                             double k = kDefaultMultiplier);

} // namespace tmem
