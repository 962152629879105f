#include "tmem/phrase_matcher.hpp"

#include <algorithm>
#include <set>

namespace tmem {

std::vector<CandidatePhrase> generate_candidates(const Segment& query, const std::vector<Chunk>& chunks)
{
    const std::size_t n = word_norms(query).size();
    std::set<std::size_t> starts;
    std::set<std::size_t> ends;
    for (const auto& c : chunks) {
        starts.insert(c.start);
        ends.insert(c.end);
    }

    std::vector<CandidatePhrase> out;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t e = s + 1; e < n; ++e) {
            CandidatePhrase c{{s, e}, starts.count(s) != 0, ends.count(e) != 0};
            if (c.anchored_start || c.anchored_end) {
                out.push_back(c);
            }
        }
    }
    return out;
}

std::vector<PhraseMatch> match_candidates(const TmIndex& index, const Segment& query,
                                          const std::vector<CandidatePhrase>& candidates)
{
    const auto norms = word_norms(query);
    std::vector<PhraseMatch> out;
    for (const auto& c : candidates) {
        if (c.span.end >= norms.size()) {
            continue;
        }
        std::vector<std::string> words(norms.begin() + static_cast<std::ptrdiff_t>(c.span.start),
                                       norms.begin() + static_cast<std::ptrdiff_t>(c.span.end) + 1);
        auto hits = index.find_phrase(words);
        if (hits.empty()) {
            continue;
        }
        out.push_back({c, std::move(words), std::move(hits), false});
    }
    return out;
}

std::vector<PhraseMatch> select_maximal(std::vector<PhraseMatch> matches)
{
    std::vector<std::size_t> order(matches.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& sa = matches[a].candidate.span;
        const auto& sb = matches[b].candidate.span;
        if (sa.length() != sb.length()) {
            return sa.length() > sb.length();
        }
        if (sa.start != sb.start) {
            return sa.start < sb.start;
        }
        return matches[a].words < matches[b].words;
    });

    std::vector<Span> selected;
    for (std::size_t i : order) {
        auto& m = matches[i];
        const bool nested = std::any_of(selected.begin(), selected.end(),
                                        [&](const Span& s) { return m.candidate.span.strictly_inside(s); });
        m.selected = !nested;
        if (m.selected) {
            selected.push_back(m.candidate.span);
        }
    }
    return matches;
}

std::string span_text(const Segment& query, const Span& span)
{
    const auto words = word_tokens(query);
    if (span.end >= words.size() || span.start > span.end) {
        return {};
    }
    const std::size_t begin = words[span.start]->start;
    const std::size_t end = words[span.end]->end;
    return query.raw.substr(begin, end - begin);
}

SuggestionReport suggest(const TmIndex& index, const Segment& query, const Chunker& chunker,
                         std::size_t sentence_limit, std::size_t limit_per_phrase)
{
    SuggestionReport report;
    report.sentence_matches = index.retrieve(query, std::max<std::size_t>(sentence_limit, 1));
    if (!report.sentence_matches.empty() && report.sentence_matches.front().kind == MatchKind::exact) {
        report.primary = report.sentence_matches.front();
    }

    const auto chunks = chunker(query);
    const auto matches = select_maximal(match_candidates(index, query, generate_candidates(query, chunks)));
    const NgramSet query_grams = index.query_grams(query);

    for (const auto& m : matches) {
        if (!m.selected) {
            continue;
        }
        PhraseSuggestions ps;
        ps.span = m.candidate.span;
        ps.phrase = span_text(query, ps.span);

        std::vector<UnitId> ids;
        for (const auto& hit : m.occurrences) {
            ids.push_back(hit.id);
        }
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

        for (const auto& id : ids) {
            Suggestion s;
            s.source_phrase = ps.phrase;
            s.unit = index.find(id);
            s.target_text = s.unit->target.raw;
            s.score = dice_similarity(query_grams, *index.grams_of(id), index.multiplier());
            ps.suggestions.push_back(std::move(s));
        }
        std::sort(ps.suggestions.begin(), ps.suggestions.end(), [](const Suggestion& a, const Suggestion& b) {
            const int c = compare_ratio(a.score, b.score);
            return c != 0 ? c > 0 : a.unit->id < b.unit->id;
        });
        if (ps.suggestions.size() > limit_per_phrase) {
            ps.suggestions.resize(limit_per_phrase);
        }
        for (std::size_t i = 0; i < ps.suggestions.size(); ++i) {
            ps.suggestions[i].rank = i + 1;
        }
        report.phrase_matches.push_back(std::move(ps));
    }
    return report;
}

} // namespace tmem
