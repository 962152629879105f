#include "test_util.hpp"

#include "tmem/chunker.hpp"
#include "tmem/error.hpp"

#include <gtest/gtest.h>

#include <map>
#include <regex>
#include <sstream>

using namespace tmem;
using namespace tmem::testing;

namespace {

char letter(PosTag t)
{
    switch (t) {
    case PosTag::DET: return 'D';
    case PosTag::PRON: return 'P';
    case PosTag::NOUN: return 'N';
    case PosTag::VERB: return 'V';
    case PosTag::AUX: return 'A';
    case PosTag::ADJ: return 'J';
    case PosTag::ADV: return 'R';
    case PosTag::PREP: return 'I';
    case PosTag::CONJ: return 'C';
    case PosTag::OTHER: return 'O';
    }
    return 'O';
}

/// Independent chunker: the rule table as regexes over one letter per tag,
/// trying every prefix length at every position.
std::vector<Chunk> oracle_chunk(const std::vector<TaggedToken>& tagged)
{
    const std::vector<std::pair<ChunkLabel, std::regex>> rules{
        {ChunkLabel::NP, std::regex("D?J*[NP]+")},
        {ChunkLabel::VP, std::regex("PA*V+R*")},
        {ChunkLabel::VP, std::regex("PA*V+R*ID?J*N+")},
        {ChunkLabel::VP, std::regex("[AV]*VR*")},
        {ChunkLabel::VP, std::regex("[AV]*VR*ID?J*N+")},
    };
    std::string letters;
    std::vector<std::size_t> word_index;
    std::size_t w = 0;
    for (const auto& t : tagged) {
        letters += t.token->is_word ? letter(t.tag) : 'O';
        word_index.push_back(t.token->is_word ? w++ : static_cast<std::size_t>(-1));
    }
    std::vector<Chunk> out;
    std::size_t i = 0;
    while (i < letters.size()) {
        std::size_t best_len = 0;
        ChunkLabel best_label = ChunkLabel::NP;
        for (const auto& [label, re] : rules) {
            for (std::size_t len = letters.size() - i; len > best_len; --len) {
                if (std::regex_match(letters.substr(i, len), re)) {
                    best_len = len;
                    best_label = label;
                    break;
                }
            }
        }
        if (best_len == 0) {
            ++i;
            continue;
        }
        out.push_back({best_label, word_index[i], word_index[i + best_len - 1]});
        i += best_len;
    }
    return out;
}

std::vector<Chunk> chunks_of(const Segment& s, const PosLexicon& lex)
{
    return chunk(tag(s.tokens, lex));
}

} // namespace

TEST(Lexicon, ParsesEntriesAndComments)
{
    std::istringstream in("# header\n\nThe\tDET\nrun\tVERB\nrun\tNOUN\n");
    const auto lex = parse_lexicon(in);
    EXPECT_EQ(lex.entries.size(), 2u);
    EXPECT_EQ(lex.lookup("the"), PosTag::DET);
    EXPECT_EQ(lex.lookup("run"), PosTag::NOUN); // later duplicate wins
    EXPECT_EQ(lex.lookup("zebra"), PosTag::NOUN);
}

TEST(Lexicon, MalformedLineReportsNumber)
{
    for (const std::string text : {"a\tDET\nbroken line\n", "a\tDET\nb\tNOTATAG\n", "a\tDET\n\tNOUN\n"}) {
        std::istringstream in(text);
        try {
            parse_lexicon(in);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::parse);
            EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
        }
    }
}

TEST(Lexicon, MissingFileIsIoError)
{
    try {
        load_lexicon("/nonexistent/lexicon.tsv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io);
    }
}

TEST(Lexicon, ShippedFileMatchesEmbeddedCopy)
{
    const auto from_disk = load_lexicon(std::string(TMEM_DATA_DIR) + "/lexicon.tsv");
    const auto embedded = shipped_lexicon();
    EXPECT_EQ(from_disk.entries, embedded.entries);
    EXPECT_GT(embedded.entries.size(), 500u);
}

TEST(Tagger, ProposalExampleTags)
{
    const auto seg = make_segment(kProposalQuery, "en");
    const auto tagged = tag(seg.tokens, shipped_lexicon());
    std::string letters;
    for (const auto& t : tagged) {
        letters += letter(t.tag);
    }
    EXPECT_EQ(letters, "APVDNVINO");
}

TEST(Chunker, ProposalExampleBracketing)
{
    const auto seg = make_segment(kProposalQuery, "en");
    const auto chunks = chunks_of(seg, shipped_lexicon());
    const std::vector<Chunk> expected{
        {ChunkLabel::VP, 1, 2}, {ChunkLabel::NP, 3, 4}, {ChunkLabel::VP, 5, 7}};
    EXPECT_EQ(chunks, expected);
    EXPECT_EQ(bracket(seg, chunks), "Will [VP they recommend] [NP our proposal] [VP made for sites] ?");
}

TEST(Chunker, UnknownWordsFormOneNounPhrase)
{
    PosLexicon empty;
    const auto seg = make_segment("zorp blick fnar", "en");
    EXPECT_EQ(chunks_of(seg, empty), (std::vector<Chunk>{{ChunkLabel::NP, 0, 2}}));
}

TEST(Chunker, PunctuationIsABarrier)
{
    PosLexicon empty;
    const auto seg = make_segment("zorp, blick fnar", "en");
    EXPECT_EQ(chunks_of(seg, empty), (std::vector<Chunk>{{ChunkLabel::NP, 0, 0}, {ChunkLabel::NP, 1, 2}}));
}

TEST(Chunker, EmptyAndPunctuationOnly)
{
    const auto lex = shipped_lexicon();
    EXPECT_TRUE(chunks_of(make_segment("", "en"), lex).empty());
    EXPECT_TRUE(chunks_of(make_segment("?!", "en"), lex).empty());
    EXPECT_EQ(bracket(make_segment("", "en"), {}), "");
}

TEST(Chunker, SingleWord)
{
    const auto lex = shipped_lexicon();
    const auto seg = make_segment("Hello", "en");
    EXPECT_EQ(chunks_of(seg, lex), (std::vector<Chunk>{{ChunkLabel::NP, 0, 0}}));
}

TEST(Chunker, RuleChunkerUsesItsLexicon)
{
    std::istringstream in("they\tPRON\nswim\tVERB\n");
    const RuleChunker chunker(parse_lexicon(in));
    const auto seg = make_segment("They swim", "en");
    EXPECT_EQ(chunker(seg), (std::vector<Chunk>{{ChunkLabel::VP, 0, 1}}));
}

TEST(Chunker, AgreesWithRegexOracle)
{
    const auto lex = shipped_lexicon();
    std::map<PosTag, std::vector<std::string>> by_tag;
    for (const auto& [word, t] : lex.entries) {
        by_tag[t].push_back(word);
    }
    for (auto& [t, words] : by_tag) {
        std::sort(words.begin(), words.end());
    }
    by_tag[PosTag::OTHER] = {",", "?", ";"};
    std::vector<PosTag> tags;
    for (const auto& [t, words] : by_tag) {
        tags.push_back(t);
    }

    std::mt19937_64 rng(17);
    for (int i = 0; i < 1500; ++i) {
        std::string text;
        const std::size_t n = rng() % 12;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& words = by_tag[tags[rng() % tags.size()]];
            text += words[rng() % words.size()] + " ";
        }
        const auto seg = make_segment(text, "en");
        const auto tagged = tag(seg.tokens, lex);
        const auto got = chunk(tagged);
        ASSERT_EQ(got, oracle_chunk(tagged)) << text;

        const auto word_count = word_tokens(seg).size();
        for (std::size_t c = 0; c < got.size(); ++c) {
            EXPECT_LE(got[c].start, got[c].end);
            EXPECT_LT(got[c].end, word_count);
            if (c > 0) {
                EXPECT_GT(got[c].start, got[c - 1].end);
            }
        }
    }
}
