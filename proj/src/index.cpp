#include "tmem/index.hpp"

#include "tmem/error.hpp"

#include <algorithm>

namespace tmem {

std::string_view to_string(MatchKind kind)
{
    return kind == MatchKind::exact ? "exact" : "fuzzy";
}

namespace {

template <typename T>
void insert_sorted(std::vector<T>& v, T value)
{
    v.insert(std::lower_bound(v.begin(), v.end(), value), std::move(value));
}

template <typename Map, typename Pred>
void erase_from(Map& map, const std::string& key, Pred pred)
{
    auto it = map.find(key);
    if (it == map.end()) {
        return;
    }
    auto& list = it->second;
    list.erase(std::remove_if(list.begin(), list.end(), pred), list.end());
    if (list.empty()) {
        map.erase(it);
    }
}

} // namespace

TmIndex::TmIndex(std::size_t order, double k) : order_(order), k_(k)
{
    if (order == 0) {
        throw Error(ErrorCode::invalid_argument, "n-gram order must be at least 1");
    }
    if (!(k > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "similarity multiplier must be positive");
    }
}

TmIndex::Entry& TmIndex::insert_entry(TranslationUnit unit, bool keep_sorted)
{
    if (units_.count(unit.id) != 0) {
        throw Error(ErrorCode::duplicate_unit, "unit " + unit.id + " is already indexed");
    }
    Entry entry;
    entry.exact_key = normalize(unit.source.raw);
    entry.words = word_norms(unit.source);
    entry.grams = extract_ngrams(entry.words, order_);
    entry.unit = std::move(unit);

    const UnitId id = entry.unit.id;
    auto [it, inserted] = units_.emplace(id, std::move(entry));
    Entry& e = it->second;

    for (const auto& gram : e.grams.grams) {
        auto& list = gram_postings_[gram];
        keep_sorted ? insert_sorted(list, id) : list.push_back(id);
    }
    for (std::size_t pos = 0; pos < e.words.size(); ++pos) {
        auto& list = word_postings_[e.words[pos]];
        WordPosting posting{id, static_cast<std::uint32_t>(pos)};
        keep_sorted ? insert_sorted(list, std::move(posting)) : list.push_back(std::move(posting));
    }
    auto& exact = exact_map_[e.exact_key];
    keep_sorted ? insert_sorted(exact, id) : exact.push_back(id);
    return e;
}

void TmIndex::sort_postings()
{
    for (auto& [gram, list] : gram_postings_) {
        std::sort(list.begin(), list.end());
    }
    for (auto& [word, list] : word_postings_) {
        std::sort(list.begin(), list.end());
    }
    for (auto& [key, list] : exact_map_) {
        std::sort(list.begin(), list.end());
    }
}

void TmIndex::add_unit(TranslationUnit unit)
{
    insert_entry(std::move(unit), true);
}

void TmIndex::remove_unit(const UnitId& id)
{
    auto it = units_.find(id);
    if (it == units_.end()) {
        throw Error(ErrorCode::not_found, "unit " + id + " is not indexed");
    }
    const Entry& e = it->second;
    for (const auto& gram : e.grams.grams) {
        erase_from(gram_postings_, gram, [&](const UnitId& other) { return other == id; });
    }
    for (const auto& word : e.words) {
        erase_from(word_postings_, word, [&](const WordPosting& p) { return p.id == id; });
    }
    erase_from(exact_map_, e.exact_key, [&](const UnitId& other) { return other == id; });
    units_.erase(it);
}

const TranslationUnit* TmIndex::find(const UnitId& id) const
{
    auto it = units_.find(id);
    return it == units_.end() ? nullptr : &it->second.unit;
}

const NgramSet* TmIndex::grams_of(const UnitId& id) const
{
    auto it = units_.find(id);
    return it == units_.end() ? nullptr : &it->second.grams;
}

const std::vector<std::string>* TmIndex::words_of(const UnitId& id) const
{
    auto it = units_.find(id);
    return it == units_.end() ? nullptr : &it->second.words;
}

std::vector<const TranslationUnit*> TmIndex::lookup_exact(std::string_view source_text) const
{
    std::vector<const TranslationUnit*> out;
    auto it = exact_map_.find(normalize(source_text));
    if (it == exact_map_.end()) {
        return out;
    }
    for (const auto& id : it->second) {
        out.push_back(find(id));
    }
    return out;
}

NgramSet TmIndex::query_grams(const Segment& query) const
{
    return extract_ngrams(word_norms(query), order_);
}

std::vector<MatchResult> TmIndex::retrieve(const Segment& query, std::size_t limit) const
{
    if (limit == 0) {
        throw Error(ErrorCode::invalid_argument, "retrieve limit must be at least 1");
    }
    const NgramSet grams = query_grams(query);
    const std::string query_key = normalize(query.raw);

    // Each gram occurs at most once per unit, so the hit count per unit is
    // exactly the size of the gram-set intersection.
    std::unordered_map<std::string_view, std::size_t> shared;
    for (const auto& gram : grams.grams) {
        auto it = gram_postings_.find(gram);
        if (it == gram_postings_.end()) {
            continue;
        }
        for (const auto& id : it->second) {
            ++shared[id];
        }
    }

    std::vector<MatchResult> results;
    results.reserve(shared.size());
    for (const auto& [id, count] : shared) {
        const Entry& e = units_.at(std::string(id));
        MatchResult r;
        r.unit = &e.unit;
        r.score = make_score(count, grams.size() + e.grams.size(), k_);
        r.kind = e.exact_key == query_key ? MatchKind::exact : MatchKind::fuzzy;
        results.push_back(r);
    }

    auto better = [](const MatchResult& a, const MatchResult& b) {
        if (const int c = compare_ratio(a.score, b.score); c != 0) {
            return c > 0;
        }
        if (a.kind != b.kind) {
            return a.kind == MatchKind::exact;
        }
        return a.unit->id < b.unit->id;
    };
    if (limit < results.size()) {
        std::partial_sort(results.begin(), results.begin() + static_cast<std::ptrdiff_t>(limit), results.end(),
                          better);
        results.resize(limit);
    } else {
        std::sort(results.begin(), results.end(), better);
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        results[i].rank = i + 1;
    }
    return results;
}

std::vector<PhraseHit> TmIndex::find_phrase(const std::vector<std::string>& phrase) const
{
    std::vector<PhraseHit> hits;
    if (phrase.empty()) {
        return hits;
    }

    // Anchor on the rarest word, then verify the full run by position.
    std::size_t anchor = 0;
    const std::vector<WordPosting>* anchor_list = nullptr;
    for (std::size_t i = 0; i < phrase.size(); ++i) {
        auto it = word_postings_.find(phrase[i]);
        if (it == word_postings_.end()) {
            return hits;
        }
        if (anchor_list == nullptr || it->second.size() < anchor_list->size()) {
            anchor = i;
            anchor_list = &it->second;
        }
    }

    for (const auto& posting : *anchor_list) {
        if (posting.position < anchor) {
            continue;
        }
        const std::size_t start = posting.position - anchor;
        const auto& words = units_.at(posting.id).words;
        if (start + phrase.size() > words.size()) {
            continue;
        }
        if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(start))) {
            hits.push_back({posting.id, start});
        }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

std::vector<const TranslationUnit*> TmIndex::units() const
{
    std::vector<const TranslationUnit*> out;
    out.reserve(units_.size());
    for (const auto& [id, e] : units_) {
        out.push_back(&e.unit);
    }
    return out;
}

TmIndex build_index(std::vector<TranslationUnit> units, std::size_t order, double k)
{
    TmIndex index(order, k);
    for (auto& unit : units) {
        index.insert_entry(std::move(unit), false);
    }
    index.sort_postings();
    return index;
}

} // namespace tmem
