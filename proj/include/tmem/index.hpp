#pragma once

#include "tmem/ngram.hpp"
#include "tmem/unit.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmem {

enum class MatchKind { exact, fuzzy };

std::string_view to_string(MatchKind kind);

struct MatchResult {
    const TranslationUnit* unit = nullptr;
    SimilarityScore score;
    std::size_t rank = 0;
    MatchKind kind = MatchKind::fuzzy;
};

struct WordPosting {
    UnitId id;
    std::uint32_t position = 0;

    auto operator<=>(const WordPosting&) const = default;
};

struct PhraseHit {
    UnitId id;
    std::size_t start = 0;

    auto operator<=>(const PhraseHit&) const = default;
};

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

/// In-memory inverted index over translation-unit sources.
///
/// Not internally synchronized: any number of concurrent const calls, or one
/// mutating call with no concurrent readers. Pointers handed out in
/// MatchResult stay valid until the referenced unit is removed.
class TmIndex {
public:
    using GramPostings = std::unordered_map<std::string, std::vector<UnitId>>;
    using WordPostings = std::unordered_map<std::string, std::vector<WordPosting>>;
    using ExactMap = std::unordered_map<std::string, std::vector<UnitId>>;

    explicit TmIndex(std::size_t order = kDefaultOrder, double k = kDefaultMultiplier);

    /// Throws Error(duplicate_unit) if the id is already indexed.
    void add_unit(TranslationUnit unit);
    /// Throws Error(not_found) if the id is not indexed.
    void remove_unit(const UnitId& id);

    bool contains(const UnitId& id) const { return units_.count(id) != 0; }
    const TranslationUnit* find(const UnitId& id) const;
    const NgramSet* grams_of(const UnitId& id) const;
    const std::vector<std::string>* words_of(const UnitId& id) const;

    /// Units whose normalized source equals normalize(source_text), by id.
    std::vector<const TranslationUnit*> lookup_exact(std::string_view source_text) const;

    /// Units sharing at least one gram with the query, ranked by score
    /// descending, exact before fuzzy, then id ascending. Throws
    /// Error(invalid_argument) when limit is 0.
    std::vector<MatchResult> retrieve(const Segment& query, std::size_t limit = kNoLimit) const;

    /// Every occurrence of the word-norm sequence as a contiguous run of an
    /// indexed source, sorted by (id, start).
    std::vector<PhraseHit> find_phrase(const std::vector<std::string>& phrase) const;

    NgramSet query_grams(const Segment& query) const;

    std::size_t size() const { return units_.size(); }
    std::size_t order() const { return order_; }
    double multiplier() const { return k_; }

    const GramPostings& gram_postings() const { return gram_postings_; }
    const WordPostings& word_postings() const { return word_postings_; }
    const ExactMap& exact_map() const { return exact_map_; }

    /// Units in id order.
    std::vector<const TranslationUnit*> units() const;

private:
    friend TmIndex build_index(std::vector<TranslationUnit> units, std::size_t order, double k);

    struct Entry {
        TranslationUnit unit;
        std::string exact_key;
        std::vector<std::string> words;
        NgramSet grams;
    };

    Entry& insert_entry(TranslationUnit unit, bool keep_sorted);
    void sort_postings();

    std::size_t order_;
    double k_;
    std::map<UnitId, Entry> units_;
    GramPostings gram_postings_;
    WordPostings word_postings_;
    ExactMap exact_map_;
};

/// Throws Error(duplicate_unit) if two units share an id.
TmIndex build_index(std::vector<TranslationUnit> units, std::size_t order = kDefaultOrder,
                    double k = kDefaultMultiplier);

} // namespace tmem
