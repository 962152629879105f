#include "test_util.hpp"

#include "tmem/engine.hpp"
#include "tmem/error.hpp"
#include "tmem/tmx.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <thread>

using namespace tmem;
using namespace tmem::testing;

namespace {

CommitRequest request(const std::string& source, const std::string& target, Scope scope = Scope::local)
{
    CommitRequest r;
    r.source = source;
    r.target = target;
    r.scope = scope;
    return r;
}

EngineConfig config_in(const TempDir& dir, bool with_global)
{
    EngineConfig c;
    c.local_path = dir.file("local.db");
    if (with_global) {
        c.global_path = dir.file("global.db");
    }
    return c;
}

} // namespace

TEST(Engine, EmptyStoreReturnsNothing)
{
    TempDir dir;
    Engine engine(config_in(dir, false));
    EXPECT_TRUE(engine.query(kTarget, 5).empty());
    const auto view = engine.suggest(kTarget);
    EXPECT_FALSE(view.primary);
    EXPECT_TRUE(view.sentence_matches.empty());
    EXPECT_TRUE(view.phrase_matches.empty());
    EXPECT_EQ(engine.stats().units, 0u);
}

TEST(Engine, CommitIsVisibleToNextQuery)
{
    TempDir dir;
    Engine engine(config_in(dir, false));
    for (const auto& u : cafe_units()) {
        engine.commit(request(u.source.raw, u.target.raw));
    }
    const auto rows = engine.query(kTarget, 5);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].source, kSentence2);
    EXPECT_EQ(rows[0].target, "इसमें उत्कृष्ट मेनू और सेवा है");
    EXPECT_DOUBLE_EQ(rows[0].score.value, 0.9);
    EXPECT_EQ(rows[1].source, kSentence1);
    EXPECT_EQ(rows[2].source, kSentence3);

    const auto again = engine.commit(request(kSentence1, "कैफ़े कॉफ़ी डे"));
    EXPECT_FALSE(again.created);
    EXPECT_EQ(engine.stats().units, 3u);
    EXPECT_EQ(engine.stats().grams, 9u); // distinct grams; "café coffee day" is shared
}

TEST(Engine, ReopenRebuildsIndex)
{
    TempDir dir;
    {
        Engine engine(config_in(dir, true));
        engine.commit(request(kSentence1, "कैफ़े कॉफ़ी डे"));
        engine.commit(request(kSentence2, "इसमें उत्कृष्ट मेनू और सेवा है", Scope::global));
    }
    Engine engine(config_in(dir, true));
    const auto s = engine.stats();
    EXPECT_EQ(s.units, 2u);
    EXPECT_EQ(s.local_units, 1u);
    EXPECT_EQ(s.global_units, 1u);
    EXPECT_EQ(engine.query(kSentence2, 1).at(0).kind, MatchKind::exact);
}

TEST(Engine, GlobalCommitNeedsGlobalStore)
{
    TempDir dir;
    Engine engine(config_in(dir, false));
    try {
        engine.commit(request("hello there", "नमस्ते", Scope::global));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::validation);
    }
    EXPECT_FALSE(engine.has_global());
}

TEST(Engine, SameUnitInBothScopesIndexedOnce)
{
    TempDir dir;
    Engine engine(config_in(dir, true));
    engine.commit(request("shared sentence here", "साझा", Scope::global));
    engine.commit(request("shared sentence here", "साझा", Scope::local));
    const auto s = engine.stats();
    EXPECT_EQ(s.units, 1u);
    EXPECT_EQ(s.local_units, 1u);
    EXPECT_EQ(s.global_units, 1u);
    EXPECT_EQ(engine.query("shared sentence here", 5).size(), 1u);
}

TEST(Engine, SuggestProposalExample)
{
    TempDir dir;
    Engine engine(config_in(dir, false));
    engine.commit(request("they recommend", "वे सिफारिश करते हैं"));
    engine.commit(request("They recommend our proposal.", "वे हमारे प्रस्ताव की सिफारिश करते हैं।"));
    engine.commit(request("our proposal", "हमारा प्रस्ताव"));
    const auto view = engine.suggest(kProposalQuery);
    ASSERT_EQ(view.phrase_matches.size(), 1u);
    EXPECT_EQ(view.phrase_matches[0].phrase, "they recommend our proposal");
    ASSERT_EQ(view.phrase_matches[0].suggestions.size(), 1u);
    EXPECT_EQ(view.phrase_matches[0].suggestions[0].target, "वे हमारे प्रस्ताव की सिफारिश करते हैं।");
}

TEST(Engine, ImportAndScopedExport)
{
    TempDir dir;
    Engine engine(config_in(dir, true));
    const auto tmx = export_tmx(cafe_units());
    const auto summary = engine.import_tmx(tmx, Scope::global, "bulk");
    EXPECT_EQ(summary.added, 3u);
    engine.commit(request("a local sentence", "स्थानीय वाक्य"));

    EXPECT_EQ(parse_tmx(engine.export_tmx(ExportScope::global)).pairs.size(), 3u);
    EXPECT_EQ(parse_tmx(engine.export_tmx(ExportScope::local)).pairs.size(), 1u);
    EXPECT_EQ(parse_tmx(engine.export_tmx(ExportScope::all)).pairs.size(), 4u);
    EXPECT_EQ(engine.query(kTarget, 5).size(), 3u);
}

TEST(Engine, BadImportChangesNothing)
{
    TempDir dir;
    Engine engine(config_in(dir, false));
    EXPECT_THROW(engine.import_tmx("<<<", Scope::local), Error);
    EXPECT_EQ(engine.stats().units, 0u);
}

TEST(Engine, CustomLexiconAndRules)
{
    TempDir dir;
    {
        std::ofstream(dir.file("lex.tsv")) << "they\tPRON\nswim\tVERB\n";
        std::ofstream(dir.file("rules.txt")) << "term ;\n";
    }
    auto c = config_in(dir, false);
    c.lexicon_path = dir.file("lex.tsv");
    c.rules_path = dir.file("rules.txt");
    Engine engine(c);
    EXPECT_EQ(engine.split("one; two. three").segments.size(), 2u);
    const auto chunks = engine.with_index(
        [&](const TmIndex&, const Chunker& chunker) { return chunker(engine.make_query("they swim")); });
    EXPECT_EQ(chunks, (std::vector<Chunk>{{ChunkLabel::VP, 0, 1}}));

    c.lexicon_path = dir.file("missing.tsv");
    try {
        Engine broken(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io);
    }
}

TEST(Engine, ConcurrentReadersDuringWrites)
{
    TempDir dir;
    Engine engine(config_in(dir, false));
    engine.commit(request(kSentence1, "कैफ़े कॉफ़ी डे"));
    std::atomic<bool> done{false};
    std::atomic<std::size_t> reads{0};
    std::vector<std::thread> readers;
    for (int t = 0; t < 4; ++t) {
        readers.emplace_back([&] {
            std::size_t last = 0;
            while (!done) {
                const auto rows = engine.query("Café Coffee Day number", kNoLimit);
                // Units are only ever added, so a reader never sees the count shrink.
                EXPECT_GE(rows.size(), last);
                last = rows.size();
                ++reads;
                std::this_thread::yield();
            }
        });
    }
    for (int i = 0; i < 20; ++i) {
        engine.commit(request("Café Coffee Day number " + std::to_string(i), "संख्या"));
    }
    done = true;
    for (auto& r : readers) {
        r.join();
    }
    EXPECT_GT(reads.load(), 0u);
    EXPECT_EQ(engine.query("Café Coffee Day number", kNoLimit).size(), 21u);
}
