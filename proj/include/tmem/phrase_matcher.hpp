#pragma once

#include "tmem/chunker.hpp"
#include "tmem/index.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tmem {

inline constexpr std::size_t kSuggestionsPerPhrase = 5;

/// Inclusive word-index span into the query.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start + 1; }
    bool strictly_inside(const Span& other) const
    {
        return other.start <= start && end <= other.end && length() < other.length();
    }

    auto operator<=>(const Span&) const = default;
};

struct CandidatePhrase {
    Span span;
    bool anchored_start = false;
    bool anchored_end = false;

    bool operator==(const CandidatePhrase&) const = default;
};

struct PhraseMatch {
    CandidatePhrase candidate;
    std::vector<std::string> words;
    std::vector<PhraseHit> occurrences;
    bool selected = false;
};

struct Suggestion {
    std::string source_phrase;
    const TranslationUnit* unit = nullptr;
    std::string target_text;
    SimilarityScore score;
    std::size_t rank = 0;
};

struct PhraseSuggestions {
    std::string phrase;
    Span span;
    std::vector<Suggestion> suggestions;
};

struct SuggestionReport {
    std::optional<MatchResult> primary;
    std::vector<MatchResult> sentence_matches;
    std::vector<PhraseSuggestions> phrase_matches;

    bool empty() const { return sentence_matches.empty() && phrase_matches.empty(); }
};

/// All word spans of two or more words that start where some chunk starts or
/// end where some chunk ends, ordered by (start, end).
std::vector<CandidatePhrase> generate_candidates(const Segment& query, const std::vector<Chunk>& chunks);

/// Candidates that occur somewhere in the TM, with their occurrences.
std::vector<PhraseMatch> match_candidates(const TmIndex& index, const Segment& query,
                                          const std::vector<CandidatePhrase>& candidates);

/// Longest-first greedy selection: a match is selected unless its span lies
/// strictly inside an already selected span. Order of the input is kept.
std::vector<PhraseMatch> select_maximal(std::vector<PhraseMatch> matches);

/// Surface text of a word span, taken from the query between the first and
/// last word's offsets.
std::string span_text(const Segment& query, const Span& span);

/// Sentence-level retrieval plus chunk-anchored phrase suggestions.
SuggestionReport suggest(const TmIndex& index, const Segment& query, const Chunker& chunker,
                         std::size_t sentence_limit = kSuggestionsPerPhrase,
                         std::size_t limit_per_phrase = kSuggestionsPerPhrase);

} // namespace tmem
