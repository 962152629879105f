#include "tmem/engine.hpp"

#include "tmem/error.hpp"

#include <mutex>

namespace tmem {

MatchRow to_row(const MatchResult& result)
{
    return {result.rank, result.score, result.kind, result.unit->id, result.unit->source.raw,
            result.unit->target.raw};
}

SuggestView to_view(const SuggestionReport& report)
{
    SuggestView view;
    if (report.primary) {
        view.primary = to_row(*report.primary);
    }
    for (const auto& m : report.sentence_matches) {
        view.sentence_matches.push_back(to_row(m));
    }
    for (const auto& p : report.phrase_matches) {
        PhraseRow row{p.phrase, p.span, {}};
        for (const auto& s : p.suggestions) {
            row.suggestions.push_back(
                {s.rank, s.score, MatchKind::fuzzy, s.unit->id, s.unit->source.raw, s.target_text});
        }
        view.phrase_matches.push_back(std::move(row));
    }
    return view;
}

Engine::Engine(EngineConfig config)
    : config_(std::move(config)),
      local_(std::make_unique<TmStore>(TmStore::open(config_.local_path))),
      global_(config_.global_path ? std::make_unique<TmStore>(TmStore::open(*config_.global_path)) : nullptr),
      chunker_(std::make_unique<RuleChunker>(config_.lexicon_path ? load_lexicon(*config_.lexicon_path)
                                                                  : shipped_lexicon())),
      rules_(config_.rules_path ? load_rules(*config_.rules_path) : shipped_rules()),
      index_(build_index(merged_view(*local_, global_.get()), config_.order, config_.k))
{
}

Segment Engine::make_query(const std::string& text) const
{
    return make_segment(text, config_.source_lang);
}

SentenceSplit Engine::split(const std::string& text) const
{
    return split_sentences(text, rules_, config_.source_lang);
}

std::vector<MatchRow> Engine::query(const std::string& text, std::size_t limit) const
{
    const auto q = make_query(text);
    std::shared_lock lock(mutex_);
    std::vector<MatchRow> rows;
    for (const auto& r : index_.retrieve(q, limit)) {
        rows.push_back(to_row(r));
    }
    return rows;
}

SuggestView Engine::suggest(const std::string& text, std::size_t limit) const
{
    const auto q = make_query(text);
    std::shared_lock lock(mutex_);
    return to_view(tmem::suggest(index_, q, *chunker_, limit, kSuggestionsPerPhrase));
}

TmStore& Engine::store_for(Scope scope)
{
    if (scope == Scope::global) {
        if (!global_) {
            throw Error(ErrorCode::validation, "no global store is configured");
        }
        return *global_;
    }
    return *local_;
}

void Engine::index_committed(const TranslationUnit& unit)
{
    if (!index_.contains(unit.id)) {
        index_.add_unit(unit);
        return;
    }
    // Same content already visible from the global store; local metadata wins.
    if (unit.meta.scope == Scope::local) {
        index_.remove_unit(unit.id);
        index_.add_unit(unit);
    }
}

CommitResult Engine::commit(CommitRequest request)
{
    std::unique_lock lock(mutex_);
    auto& store = store_for(request.scope);
    auto result = store.commit(request);
    if (result.created) {
        index_committed(result.unit);
    }
    return result;
}

ImportSummary Engine::import_tmx(std::string_view bytes, Scope scope, const std::string& author)
{
    std::unique_lock lock(mutex_);
    auto& store = store_for(scope);
    const auto before = store.size();
    TmxImportOptions options;
    options.source_lang = config_.source_lang;
    options.target_lang = config_.target_lang;
    auto summary = tmem::import_tmx(store, bytes, options, scope, author);
    if (store.size() != before) {
        for (const auto& unit : store.units()) {
            if (!index_.contains(unit.id) || (scope == Scope::local && index_.find(unit.id)->meta.scope != scope)) {
                index_committed(unit);
            }
        }
    }
    return summary;
}

std::string Engine::export_tmx(ExportScope scope) const
{
    std::shared_lock lock(mutex_);
    TmxHeader header;
    header.srclang = config_.source_lang;
    switch (scope) {
    case ExportScope::local:
        return tmem::export_tmx(local_->units(), header);
    case ExportScope::global:
        if (!global_) {
            throw Error(ErrorCode::validation, "no global store is configured");
        }
        return tmem::export_tmx(global_->units(), header);
    case ExportScope::all:
        break;
    }
    return tmem::export_tmx(merged_view(*local_, global_.get()), header);
}

EngineStats Engine::stats() const
{
    std::shared_lock lock(mutex_);
    EngineStats s;
    s.units = index_.size();
    s.local_units = local_->size();
    s.global_units = global_ ? global_->size() : 0;
    s.grams = index_.gram_postings().size();
    s.words = index_.word_postings().size();
    return s;
}

} // namespace tmem
