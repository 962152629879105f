#pragma once

#include "tmem/chunker.hpp"
#include "tmem/index.hpp"
#include "tmem/phrase_matcher.hpp"
#include "tmem/segmenter.hpp"
#include "tmem/store.hpp"
#include "tmem/tmx.hpp"

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace tmem {

struct EngineConfig {
    std::string local_path;
    std::optional<std::string> global_path;
    std::size_t order = kDefaultOrder;
    double k = kDefaultMultiplier;
    std::optional<std::string> lexicon_path;
    std::optional<std::string> rules_path;
    std::string source_lang = "en";
    std::string target_lang = "hi";
};

/// Snapshot of one retrieved unit, safe to keep after the engine lock is
/// released.
struct MatchRow {
    std::size_t rank = 0;
    SimilarityScore score;
    MatchKind kind = MatchKind::fuzzy;
    UnitId unit_id;
    std::string source;
    std::string target;
};

struct PhraseRow {
    std::string phrase;
    Span span;
    std::vector<MatchRow> suggestions;
};

struct SuggestView {
    std::optional<MatchRow> primary;
    std::vector<MatchRow> sentence_matches;
    std::vector<PhraseRow> phrase_matches;
};

struct EngineStats {
    std::size_t units = 0;
    std::size_t local_units = 0;
    std::size_t global_units = 0;
    std::size_t grams = 0;
    std::size_t words = 0;
};

enum class ExportScope { local, global, all };

/// The stores, the index over their merged view, and the chunker, behind a
/// reader-writer lock. Queries share the lock; commits and imports take it
/// exclusively and update the store before the index, so readers see either
/// the state before a commit or after it.
class Engine {
public:
    explicit Engine(EngineConfig config);

    std::vector<MatchRow> query(const std::string& text, std::size_t limit) const;
    SuggestView suggest(const std::string& text, std::size_t limit = kSuggestionsPerPhrase) const;

    /// Throws Error(validation) for a global commit when no global store is
    /// configured.
    CommitResult commit(CommitRequest request);
    ImportSummary import_tmx(std::string_view bytes, Scope scope, const std::string& author = {});
    std::string export_tmx(ExportScope scope) const;
    EngineStats stats() const;

    Segment make_query(const std::string& text) const;
    /// Splits a document into sentences with the configured rules.
    SentenceSplit split(const std::string& text) const;

    const EngineConfig& config() const { return config_; }
    bool has_global() const { return global_ != nullptr; }

    /// Runs `fn(index, chunker)` under the shared lock.
    template <typename Fn>
    auto with_index(Fn&& fn) const
    {
        std::shared_lock lock(mutex_);
        return fn(index_, static_cast<const Chunker&>(*chunker_));
    }

private:
    TmStore& store_for(Scope scope);
    void index_committed(const TranslationUnit& unit);

    EngineConfig config_;
    std::unique_ptr<TmStore> local_;
    std::unique_ptr<TmStore> global_;
    std::unique_ptr<RuleChunker> chunker_;
    SegRules rules_;
    TmIndex index_;
    mutable std::shared_mutex mutex_;
};

MatchRow to_row(const MatchResult& result);
SuggestView to_view(const SuggestionReport& report);

} // namespace tmem
