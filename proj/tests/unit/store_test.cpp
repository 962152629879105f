#include "test_util.hpp"

#include "tmem/error.hpp"
#include "tmem/store.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <sstream>

using namespace tmem;
using namespace tmem::testing;

namespace {

CommitRequest request(const std::string& source, const std::string& target, Scope scope = Scope::local)
{
    CommitRequest r;
    r.source = source;
    r.target = target;
    r.scope = scope;
    r.author = "tester";
    return r;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
}

std::vector<UnitId> ids_of(const std::vector<TranslationUnit>& units)
{
    std::vector<UnitId> out;
    for (const auto& u : units) {
        out.push_back(u.id);
    }
    return out;
}

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::invalid_argument;
}

} // namespace

TEST(UnitId, FrozenValue)
{
    // Independently computed with Python's hashlib over the same fields.
    EXPECT_EQ(compute_unit_id("café coffee day", "कैफ़े कॉफ़ी डे", "en", "hi"), "f4b980a3765f7843");
    EXPECT_EQ(unit("Café Coffee Day", "कैफ़े कॉफ़ी डे").id, "f4b980a3765f7843");
}

TEST(UnitId, IgnoresCaseAndSpacingButNotLanguage)
{
    EXPECT_EQ(unit("Café  coffee DAY", "कैफ़े कॉफ़ी डे").id, unit("café coffee day", "कैफ़े कॉफ़ी डे").id);
    EXPECT_NE(unit("Café Coffee Day", "x", "en", "hi").id, unit("Café Coffee Day", "x", "en", "mr").id);
    EXPECT_NE(unit("Café Coffee Day", "x").id, unit("Café Coffee Day", "y").id);
}

TEST(MakeUnit, RejectsBadInput)
{
    EXPECT_EQ(code_of([] { unit("", "x"); }), ErrorCode::validation);
    EXPECT_EQ(code_of([] { unit("hello", "   "); }), ErrorCode::validation);
    EXPECT_EQ(code_of([] { unit("hello", "x", "en", "en"); }), ErrorCode::validation);
    EXPECT_EQ(code_of([] { unit("hello", "x", "", "hi"); }), ErrorCode::validation);
    EXPECT_EQ(code_of([] { unit("bad\xff", "x"); }), ErrorCode::validation);
    EXPECT_EQ(code_of([] { unit("bell\x07", "x"); }), ErrorCode::validation);
    EXPECT_EQ(code_of([] { unit("?!", "x"); }), ErrorCode::validation);
    EXPECT_NO_THROW(unit("tab\there", "line\nbreak"));
}

TEST(TmStore, CommitIsIdempotent)
{
    TempDir dir;
    auto store = TmStore::open(dir.file("tm.db"));
    const auto first = store.commit(request("Café Coffee Day", "कैफ़े कॉफ़ी डे"));
    EXPECT_TRUE(first.created);
    const auto size_after_first = slurp(store.path()).size();
    const auto second = store.commit(request("café coffee  day", "कैफ़े कॉफ़ी डे"));
    EXPECT_FALSE(second.created);
    EXPECT_EQ(second.unit.id, first.unit.id);
    EXPECT_EQ(second.unit.source.raw, "Café Coffee Day");
    EXPECT_EQ(store.size(), 1u);
    EXPECT_EQ(slurp(store.path()).size(), size_after_first);
}

TEST(TmStore, ReopenReplaysUnitsAndMetadata)
{
    TempDir dir;
    const auto path = dir.file("tm.db");
    std::vector<UnitId> ids;
    {
        auto store = TmStore::open(path);
        store.set_clock([] { return std::int64_t{1700000000}; });
        for (const auto& u : cafe_units()) {
            ids.push_back(store.commit(request(u.source.raw, u.target.raw, Scope::global)).unit.id);
        }
    }
    const auto store = TmStore::open(path);
    EXPECT_EQ(ids_of(store.units()), ids);
    const auto* u = store.find(ids[1]);
    ASSERT_NE(u, nullptr);
    EXPECT_EQ(u->source.raw, kSentence2);
    EXPECT_EQ(u->meta.scope, Scope::global);
    EXPECT_EQ(u->meta.author, "tester");
    EXPECT_EQ(u->meta.origin, Origin::manual);
    EXPECT_EQ(u->meta.created_at, 1700000000);
}

TEST(TmStore, TimestampsNeverGoBackwards)
{
    TempDir dir;
    auto store = TmStore::open(dir.file("tm.db"));
    std::int64_t now = 500;
    store.set_clock([&] { return now; });
    store.commit(request("first sentence", "पहला"));
    now = 100;
    const auto later = store.commit(request("second sentence", "दूसरा"));
    EXPECT_EQ(later.unit.meta.created_at, 500);
}

TEST(TmStore, ValidationFailureWritesNothing)
{
    TempDir dir;
    auto store = TmStore::open(dir.file("tm.db"));
    store.commit(request("hello there", "नमस्ते"));
    const auto before = slurp(store.path());
    EXPECT_EQ(code_of([&] { store.commit_all({request("fine one", "ठीक"), request("", "x")}); }),
              ErrorCode::validation);
    EXPECT_EQ(slurp(store.path()), before);
    EXPECT_EQ(store.size(), 1u);
}

TEST(TmStore, BatchDeduplicatesWithinItself)
{
    TempDir dir;
    auto store = TmStore::open(dir.file("tm.db"));
    const auto results = store.commit_all({request("a b c", "x"), request("A  b c", "x"), request("d e", "y")});
    ASSERT_EQ(results.size(), 3u);
    EXPECT_TRUE(results[0].created);
    EXPECT_FALSE(results[1].created);
    EXPECT_EQ(results[1].unit.id, results[0].unit.id);
    EXPECT_TRUE(results[2].created);
    EXPECT_EQ(store.size(), 2u);
}

TEST(TmStore, TombstonesHideUnits)
{
    TempDir dir;
    const auto path = dir.file("tm.db");
    UnitId gone;
    {
        auto store = TmStore::open(path);
        gone = store.commit(request("remove me", "हटाओ")).unit.id;
        store.commit(request("keep me", "रखो"));
        store.remove(gone);
        EXPECT_EQ(store.find(gone), nullptr);
        EXPECT_EQ(code_of([&] { store.remove(gone); }), ErrorCode::not_found);
        EXPECT_EQ(code_of([&] { store.remove_all({"ffffffffffffffff"}); }), ErrorCode::not_found);
    }
    auto store = TmStore::open(path);
    EXPECT_EQ(store.size(), 1u);
    EXPECT_EQ(store.find(gone), nullptr);
    // Re-adding after deletion creates the unit again.
    EXPECT_TRUE(store.commit(request("remove me", "हटाओ")).created);
    EXPECT_NE(store.find(gone), nullptr);
}

TEST(TmStore, TornTailIsDroppedAndTrimmed)
{
    TempDir dir;
    const auto path = dir.file("tm.db");
    {
        auto store = TmStore::open(path);
        store.commit(request("one two three", "एक दो तीन"));
    }
    const auto good = slurp(path);
    spit(path, good + "{\"op\":\"add\",\"id\":\"abc");
    {
        auto store = TmStore::open(path);
        EXPECT_EQ(store.size(), 1u);
    }
    EXPECT_EQ(slurp(path), good);
}

TEST(TmStore, CorruptRecordNamesLine)
{
    TempDir dir;
    const auto path = dir.file("tm.db");
    {
        auto store = TmStore::open(path);
        store.commit(request("one two three", "एक दो तीन"));
    }
    spit(path, slurp(path) + "not json at all\n");
    try {
        TmStore::open(path);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::format);
        EXPECT_NE(std::string(e.what()).find("record 2"), std::string::npos) << e.what();
    }
}

TEST(TmStore, TamperedIdIsRejected)
{
    TempDir dir;
    const auto path = dir.file("tm.db");
    {
        auto store = TmStore::open(path);
        store.commit(request("one two three", "एक दो तीन"));
    }
    auto bytes = slurp(path);
    bytes.replace(bytes.find("one two"), 3, "six");
    spit(path, bytes);
    EXPECT_EQ(code_of([&] { TmStore::open(path); }), ErrorCode::format);
}

TEST(TmStore, UnopenablePathIsIoError)
{
    EXPECT_EQ(code_of([] { TmStore::open("/nonexistent-dir/tm.db"); }), ErrorCode::io);
}

TEST(TmStore, PrefixReplayAtEveryBoundary)
{
    TempDir dir;
    const auto path = dir.file("tm.db");
    std::vector<std::vector<UnitId>> expected{{}};
    {
        auto store = TmStore::open(path);
        std::vector<UnitId> live;
        for (int i = 0; i < 6; ++i) {
            live.push_back(store.commit(request("sentence number " + std::to_string(i), "वाक्य")).unit.id);
            expected.push_back(live);
            if (i % 2 == 1) {
                store.remove(live.front());
                live.erase(live.begin());
                expected.push_back(live);
            }
        }
    }
    const auto bytes = slurp(path);
    std::size_t record = 0;
    for (std::size_t cut = 0; cut <= bytes.size(); ++cut) {
        if (cut > 0 && bytes[cut - 1] == '\n') {
            ++record;
        }
        EXPECT_EQ(ids_of(TmStore::replay(std::string_view(bytes).substr(0, cut))), expected[record]) << cut;
    }
    EXPECT_EQ(record, expected.size() - 1);
}

TEST(MergedView, LocalWinsAndUnionByIdentity)
{
    TempDir dir;
    auto local = TmStore::open(dir.file("local.db"));
    auto global = TmStore::open(dir.file("global.db"));
    local.commit(request("shared sentence", "साझा"));
    local.commit(request("local only", "स्थानीय"));
    global.commit(request("Shared  sentence", "साझा", Scope::global));
    global.commit(request("global only", "वैश्विक", Scope::global));

    const auto merged = merged_view(local, &global);
    ASSERT_EQ(merged.size(), 3u);
    EXPECT_EQ(merged[0].source.raw, "shared sentence");
    EXPECT_EQ(merged[0].meta.scope, Scope::local);
    EXPECT_EQ(merged[2].source.raw, "global only");

    EXPECT_EQ(merged_view(local, nullptr).size(), 2u);
    auto empty = TmStore::open(dir.file("empty.db"));
    EXPECT_EQ(merged_view(empty, &global).size(), 2u);
}
