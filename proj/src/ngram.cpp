#include "tmem/ngram.hpp"

#include "tmem/error.hpp"

#include <algorithm>

namespace tmem {

namespace {

std::string join(const std::vector<std::string>& norms, std::size_t first, std::size_t count)
{
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
        if (i != 0) {
            out += ' ';
        }
        out += norms[first + i];
    }
    return out;
}

std::size_t intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

} // namespace

bool NgramSet::contains(const std::string& gram) const
{
    return std::binary_search(grams.begin(), grams.end(), gram);
}

std::vector<std::string> ngram_windows(const std::vector<std::string>& norms, std::size_t order)
{
    if (order == 0) {
        throw Error(ErrorCode::invalid_argument, "n-gram order must be at least 1");
    }
    std::vector<std::string> out;
    if (norms.empty()) {
        return out;
    }
    if (norms.size() < order) {
        out.push_back(join(norms, 0, norms.size()));
        return out;
    }
    out.reserve(norms.size() - order + 1);
    for (std::size_t i = 0; i + order <= norms.size(); ++i) {
        out.push_back(join(norms, i, order));
    }
    return out;
}

NgramSet extract_ngrams(const std::vector<std::string>& norms, std::size_t order)
{
    NgramSet set;
    set.order = order;
    set.source_len = norms.size();
    set.grams = ngram_windows(norms, order);
    std::sort(set.grams.begin(), set.grams.end());
    set.grams.erase(std::unique(set.grams.begin(), set.grams.end()), set.grams.end());
    return set;
}

SimilarityScore make_score(std::size_t shared, std::size_t total, double k)
{
    SimilarityScore s;
    s.multiplier = k;
    s.shared = shared;
    s.total = total;
    s.value = total == 0 ? 0.0 : k * static_cast<double>(shared) / static_cast<double>(total);
    return s;
}

int compare_ratio(const SimilarityScore& a, const SimilarityScore& b)
{
    // a.shared/a.total vs b.shared/b.total; sizes are small enough that the
    // cross products cannot overflow.
    const auto lhs = static_cast<unsigned __int128>(a.shared) * (b.total == 0 ? 1 : b.total);
    const auto rhs = static_cast<unsigned __int128>(b.shared) * (a.total == 0 ? 1 : a.total);
    if (lhs < rhs) {
        return -1;
    }
    return lhs > rhs ? 1 : 0;
}

SimilarityScore dice_similarity(const NgramSet& a, const NgramSet& b, double k)
{
    if (a.order != b.order) {
        throw Error(ErrorCode::invalid_argument, "cannot compare n-gram sets of different order");
    }
    if (!(k > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "similarity multiplier must be positive");
    }
    return make_score(intersection_size(a.grams, b.grams), a.size() + b.size(), k);
}

std::vector<RankedCandidate> rank_candidates(const NgramSet& query,
                                             const std::vector<std::pair<std::string, NgramSet>>& candidates,
                                             double k)
{
    std::vector<RankedCandidate> out;
    for (const auto& [id, grams] : candidates) {
        auto score = dice_similarity(query, grams, k);
        if (score.shared > 0) {
            out.push_back({id, score});
        }
    }
    std::sort(out.begin(), out.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        const int c = compare_ratio(a.score, b.score);
        return c != 0 ? c > 0 : a.id < b.id;
    });
    return out;
}

} // namespace tmem
