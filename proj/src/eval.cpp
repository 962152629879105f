#include "tmem/eval.hpp"

#include "tmem/error.hpp"
#include "tmem/phrase_matcher.hpp"
#include "tmem/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <unordered_set>

namespace tmem {

namespace {

std::string join_words(const std::vector<std::string>& words)
{
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) {
            out += ' ';
        }
        out += w;
    }
    return out;
}

std::string perturb(const Segment& source, const std::vector<std::string>& pool, SeededRng& rng)
{
    std::vector<std::string> words;
    for (const auto* t : word_tokens(source)) {
        words.push_back(t->surface);
    }
    std::string tail;
    if (!source.tokens.empty() && !source.tokens.back().is_word) {
        tail = source.tokens.back().surface;
    }
    const std::string original = normalize(join_words(words));

    for (int attempt = 0; attempt < 100; ++attempt) {
        auto edited = words;
        const std::size_t edits = 1 + rng.below(3);
        for (std::size_t e = 0; e < edits; ++e) {
            const auto op = edited.size() <= 1 ? 1 : rng.below(3);
            if (op == 0) {
                edited[rng.below(edited.size())] = rng.pick(pool);
            } else if (op == 1) {
                edited.insert(edited.begin() + static_cast<std::ptrdiff_t>(rng.below(edited.size() + 1)),
                              rng.pick(pool));
            } else {
                edited.erase(edited.begin() + static_cast<std::ptrdiff_t>(rng.below(edited.size())));
            }
        }
        if (normalize(join_words(edited)) != original) {
            return join_words(edited) + tail;
        }
    }
    throw Error(ErrorCode::sizing, "cannot perturb sentence: " + source.raw);
}

std::string sanitize(const std::string& field)
{
    std::string out = field;
    std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    return out;
}

} // namespace

TestSets make_testsets(const std::vector<TranslationUnit>& corpus, const TestSetSizes& sizes, std::uint64_t seed,
                       const std::vector<UnitId>& holdout_pool)
{
    std::unordered_set<UnitId> pool_ids(holdout_pool.begin(), holdout_pool.end());
    std::vector<std::size_t> regular;
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        (pool_ids.count(corpus[i].id) != 0 ? pool : regular).push_back(i);
    }
    if (pool_ids.size() != pool.size()) {
        throw Error(ErrorCode::invalid_argument, "hold-out pool contains ids outside the corpus");
    }

    const bool separate_pool = !holdout_pool.empty();
    const std::size_t regular_needed = sizes.complete + sizes.partial + (separate_pool ? 0 : sizes.unseen);
    if (regular.size() < regular_needed || (separate_pool && pool.size() < sizes.unseen)) {
        throw Error(ErrorCode::sizing, "corpus of " + std::to_string(corpus.size()) +
                                           " units is too small for the requested set sizes");
    }

    SeededRng rng(seed);
    rng.shuffle(regular);
    if (separate_pool) {
        rng.shuffle(pool);
    }

    TestSets sets;
    std::size_t next = 0;
    for (std::size_t i = 0; i < sizes.complete; ++i, ++next) {
        const auto& u = corpus[regular[next]];
        sets.complete.push_back({u.source.raw, u.target.raw});
    }

    std::set<std::string> vocabulary;
    for (const auto& u : corpus) {
        if (pool_ids.count(u.id) != 0) {
            continue;
        }
        for (const auto* t : word_tokens(u.source)) {
            vocabulary.insert(t->surface);
        }
    }
    const std::vector<std::string> word_pool(vocabulary.begin(), vocabulary.end());

    for (std::size_t i = 0; i < sizes.partial; ++i, ++next) {
        const auto& u = corpus[regular[next]];
        sets.partial.push_back({perturb(u.source, word_pool, rng), u.target.raw});
        sets.partial_originals.push_back(u.source.raw);
    }

    for (std::size_t i = 0; i < sizes.unseen; ++i) {
        const auto& u = separate_pool ? corpus[pool[i]] : corpus[regular[next++]];
        sets.unseen.push_back({u.source.raw, u.target.raw});
        sets.held_out.push_back(u.id);
    }
    return sets;
}

void write_testset(std::ostream& out, const std::vector<TestLine>& lines)
{
    for (const auto& l : lines) {
        out << sanitize(l.source) << '\t' << sanitize(l.gold) << '\n';
    }
}

ParsedTestSet read_testset(std::istream& in)
{
    ParsedTestSet set;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            ++set.malformed;
            continue;
        }
        TestLine t{line.substr(0, tab), line.substr(tab + 1)};
        if (normalize(t.source).empty() || normalize(t.gold).empty()) {
            ++set.malformed;
            continue;
        }
        set.lines.push_back(std::move(t));
        set.line_numbers.push_back(line_no);
    }
    return set;
}

EvalRow summarize(const std::string& name, const std::vector<TraceLine>& trace, std::size_t malformed)
{
    EvalRow row;
    row.name = name;
    row.count = trace.size();
    row.malformed = malformed;
    if (trace.empty()) {
        return row;
    }
    std::vector<double> latencies;
    std::size_t exact = 0, covered = 0, correct = 0;
    double total = 0.0;
    for (const auto& t : trace) {
        exact += t.exact;
        covered += t.covered;
        correct += t.best_correct;
        total += t.latency_ms;
        latencies.push_back(t.latency_ms);
    }
    const auto n = static_cast<double>(trace.size());
    row.exact_rate = static_cast<double>(exact) / n;
    row.coverage_rate = static_cast<double>(covered) / n;
    row.best_accuracy = static_cast<double>(correct) / n;
    row.mean_latency_ms = total / n;
    std::sort(latencies.begin(), latencies.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
    row.p95_latency_ms = latencies[std::max<std::size_t>(rank, 1) - 1];
    return row;
}

EvalResult evaluate(const TmIndex& index, const Chunker& chunker, const ParsedTestSet& set, const std::string& name,
                    std::size_t limit, const std::string& source_lang)
{
    EvalResult result;
    for (std::size_t i = 0; i < set.lines.size(); ++i) {
        const auto& line = set.lines[i];
        TraceLine t;
        t.line_no = i < set.line_numbers.size() ? set.line_numbers[i] : i + 1;
        t.source = line.source;

        const auto start = std::chrono::steady_clock::now();
        const auto report = suggest(index, make_segment(line.source, source_lang), chunker, limit);
        const auto stop = std::chrono::steady_clock::now();
        t.latency_ms = std::chrono::duration<double, std::milli>(stop - start).count();

        t.exact = report.primary.has_value();
        t.covered = !report.empty();
        if (report.primary) {
            t.best_target = report.primary->unit->target.raw;
        } else if (!report.sentence_matches.empty()) {
            t.best_target = report.sentence_matches.front().unit->target.raw;
        } else {
            for (const auto& p : report.phrase_matches) {
                if (!p.suggestions.empty()) {
                    t.best_target = p.suggestions.front().target_text;
                    break;
                }
            }
        }
        t.best_correct = t.covered && normalize(t.best_target) == normalize(line.gold);
        result.trace.push_back(std::move(t));
    }
    result.row = summarize(name, result.trace, set.malformed);
    return result;
}

} // namespace tmem
