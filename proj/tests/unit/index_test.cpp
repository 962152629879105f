#include "test_util.hpp"

#include "tmem/error.hpp"
#include "tmem/index.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace tmem;
using namespace tmem::testing;

namespace {

struct Expected {
    UnitId id;
    OracleScore score;
    bool exact = false;
};

/// Full scan of every unit with the brute-force scorer.
std::vector<Expected> brute_force(const std::vector<TranslationUnit>& units, const std::string& query)
{
    const auto q = norms_of(query);
    std::vector<Expected> out;
    for (const auto& u : units) {
        const auto s = oracle_dice(word_norms(u.source), q, 3);
        if (s.shared == 0) {
            continue;
        }
        out.push_back({u.id, s, normalize(u.source.raw) == normalize(query)});
    }
    std::sort(out.begin(), out.end(), [](const Expected& a, const Expected& b) {
        const auto lhs = a.score.shared * b.score.total;
        const auto rhs = b.score.shared * a.score.total;
        if (lhs != rhs) {
            return lhs > rhs;
        }
        if (a.exact != b.exact) {
            return a.exact;
        }
        return a.id < b.id;
    });
    return out;
}

std::size_t posting_count(const TmIndex& index)
{
    std::size_t n = 0;
    for (const auto& [gram, ids] : index.gram_postings()) {
        n += ids.size();
    }
    return n;
}

} // namespace

TEST(TmIndex, CafeExamplePostings)
{
    const auto index = build_index(cafe_units());
    EXPECT_EQ(index.size(), 3u);
    EXPECT_EQ(posting_count(index), 10u);
    EXPECT_EQ(index.gram_postings().at("café coffee day").size(), 2u);
}

TEST(TmIndex, CafeExampleRetrieve)
{
    const auto units = cafe_units();
    const auto index = build_index(units);
    const auto results = index.retrieve(make_segment(kTarget, "en"));
    ASSERT_EQ(results.size(), 3u);
    EXPECT_EQ(results[0].unit->source.raw, kSentence2);
    EXPECT_EQ(results[1].unit->source.raw, kSentence1);
    EXPECT_EQ(results[2].unit->source.raw, kSentence3);
    EXPECT_DOUBLE_EQ(results[0].score.value, 0.9);
    EXPECT_DOUBLE_EQ(results[1].score.value, 3.0 / 7.0);
    EXPECT_DOUBLE_EQ(results[2].score.value, 3.0 / 11.0);
    for (std::size_t i = 0; i < results.size(); ++i) {
        EXPECT_EQ(results[i].rank, i + 1);
        EXPECT_EQ(results[i].kind, MatchKind::fuzzy);
    }
}

TEST(TmIndex, ExactMatchIsFlagged)
{
    const auto index = build_index(cafe_units());
    const auto results = index.retrieve(make_segment("café  COFFEE day", "en"));
    ASSERT_FALSE(results.empty());
    EXPECT_EQ(results[0].kind, MatchKind::exact);
    EXPECT_EQ(results[0].unit->source.raw, kSentence1);
    EXPECT_DOUBLE_EQ(results[0].score.value, 1.5);
}

TEST(TmIndex, LookupExactIgnoresCase)
{
    const auto index = build_index(cafe_units());
    const auto hits = index.lookup_exact("it HAS excellent menu and service");
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0]->source.raw, kSentence2);
    EXPECT_TRUE(index.lookup_exact("It has excellent menu and service.").empty());
}

TEST(TmIndex, LimitTruncatesAndZeroIsRejected)
{
    const auto index = build_index(cafe_units());
    const auto q = make_segment(kTarget, "en");
    const auto top = index.retrieve(q, 1);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0].unit->source.raw, kSentence2);
    try {
        index.retrieve(q, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
    }
}

TEST(TmIndex, EmptyIndexAndDisjointQuery)
{
    TmIndex empty;
    EXPECT_TRUE(empty.retrieve(make_segment(kTarget, "en")).empty());
    const auto index = build_index(cafe_units());
    EXPECT_TRUE(index.retrieve(make_segment("nothing shared whatsoever", "en")).empty());
    EXPECT_TRUE(index.retrieve(make_segment("", "en")).empty());
}

TEST(TmIndex, DuplicateAndMissingIds)
{
    auto units = cafe_units();
    TmIndex index;
    index.add_unit(units[0]);
    try {
        index.add_unit(units[0]);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::duplicate_unit);
    }
    try {
        index.remove_unit("0000000000000000");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_found);
    }
    units.push_back(units[1]);
    EXPECT_THROW(build_index(units), Error);
}

TEST(TmIndex, AddThenRemoveRestoresState)
{
    auto index = build_index(cafe_units());
    const auto grams_before = index.gram_postings();
    const auto words_before = index.word_postings();
    const auto exact_before = index.exact_map();

    const auto extra = unit("Coffee day menu is excellent and good");
    index.add_unit(extra);
    EXPECT_EQ(index.size(), 4u);
    EXPECT_NE(index.gram_postings(), grams_before);
    index.remove_unit(extra.id);

    EXPECT_EQ(index.size(), 3u);
    EXPECT_EQ(index.gram_postings(), grams_before);
    EXPECT_EQ(index.word_postings(), words_before);
    EXPECT_EQ(index.exact_map(), exact_before);
    EXPECT_FALSE(index.contains(extra.id));
}

TEST(TmIndex, InsertionOrderDoesNotMatter)
{
    std::mt19937_64 rng(21);
    auto units = random_corpus(rng, 60, 12);
    const auto forward = build_index(units);
    std::reverse(units.begin(), units.end());
    TmIndex incremental;
    for (const auto& u : units) {
        incremental.add_unit(u);
    }
    EXPECT_EQ(forward.gram_postings(), incremental.gram_postings());
    EXPECT_EQ(forward.word_postings(), incremental.word_postings());
    for (int i = 0; i < 30; ++i) {
        const auto q = make_segment(random_sentence(rng, numbered_vocab(12), 1, 10), "en");
        const auto a = forward.retrieve(q);
        const auto b = incremental.retrieve(q);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            EXPECT_EQ(a[j].unit->id, b[j].unit->id);
        }
    }
}

TEST(TmIndex, RetrieveMatchesFullScan)
{
    std::mt19937_64 rng(1234);
    const auto vocab = numbered_vocab(30);
    for (int corpus = 0; corpus < 20; ++corpus) {
        const auto units = random_corpus(rng, 200, 30);
        const auto index = build_index(units);
        for (int q = 0; q < 25; ++q) {
            const std::string query =
                q % 5 == 0 ? units[rng() % units.size()].source.raw : random_sentence(rng, vocab, 1, 12);
            const auto expected = brute_force(units, query);
            const auto got = index.retrieve(make_segment(query, "en"));
            ASSERT_EQ(got.size(), expected.size()) << query;
            for (std::size_t i = 0; i < got.size(); ++i) {
                EXPECT_EQ(got[i].unit->id, expected[i].id);
                EXPECT_EQ(got[i].score.shared, expected[i].score.shared);
                EXPECT_EQ(got[i].score.total, expected[i].score.total);
                EXPECT_EQ(got[i].kind == MatchKind::exact, expected[i].exact);
            }
            const std::size_t limit = 1 + rng() % 5;
            const auto cut = index.retrieve(make_segment(query, "en"), limit);
            ASSERT_EQ(cut.size(), std::min(limit, expected.size()));
            for (std::size_t i = 0; i < cut.size(); ++i) {
                EXPECT_EQ(cut[i].unit->id, expected[i].id);
            }
        }
    }
}

TEST(TmIndex, FindPhraseMatchesNaiveScan)
{
    std::mt19937_64 rng(99);
    const auto vocab = numbered_vocab(8);
    for (int corpus = 0; corpus < 10; ++corpus) {
        const auto units = random_corpus(rng, 100, 8);
        const auto index = build_index(units);
        for (int q = 0; q < 40; ++q) {
            const auto phrase = norms_of(random_sentence(rng, vocab, 1, 4));
            std::vector<PhraseHit> expected;
            for (const auto& u : units) {
                for (const auto pos : oracle_positions(word_norms(u.source), phrase)) {
                    expected.push_back({u.id, pos});
                }
            }
            std::sort(expected.begin(), expected.end());
            EXPECT_EQ(index.find_phrase(phrase), expected);
        }
    }
}

TEST(TmIndex, FindPhraseEdgeCases)
{
    const auto index = build_index(cafe_units());
    EXPECT_TRUE(index.find_phrase({}).empty());
    EXPECT_TRUE(index.find_phrase({"unknown", "words"}).empty());
    const auto hits = index.find_phrase({"café", "coffee", "day"});
    ASSERT_EQ(hits.size(), 2u);
    std::set<std::size_t> starts;
    for (const auto& h : hits) {
        starts.insert(h.start);
    }
    EXPECT_EQ(starts, (std::set<std::size_t>{0, 2}));
}
