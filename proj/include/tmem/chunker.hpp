#pragma once

#include "tmem/segmenter.hpp"

#include <cstddef>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmem {

enum class PosTag { DET, PRON, NOUN, VERB, AUX, ADJ, ADV, PREP, CONJ, OTHER };

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view text);

struct PosLexicon {
    std::unordered_map<std::string, PosTag> entries;
    PosTag default_tag = PosTag::NOUN;

    PosTag lookup(const std::string& norm) const;
};

/// Lexicon format: UTF-8, one `word<TAB>TAG` per line, `#` comments and blank
/// lines ignored, later duplicates override earlier ones. Words are
/// normalized on load. Throws Error(parse) naming the line number.
PosLexicon parse_lexicon(std::istream& in);
/// Throws Error(io) when the file cannot be read.
PosLexicon load_lexicon(const std::string& path);
PosLexicon shipped_lexicon();

struct TaggedToken {
    const Token* token = nullptr;
    PosTag tag = PosTag::OTHER;
};

std::vector<TaggedToken> tag(const std::vector<Token>& tokens, const PosLexicon& lexicon);

enum class ChunkLabel { NP, VP };

std::string_view to_string(ChunkLabel label);

/// A labeled run of words; `start` and `end` are inclusive word indices
/// (positions among the is_word tokens of the segment).
struct Chunk {
    ChunkLabel label = ChunkLabel::NP;
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const Chunk&) const = default;
};

/// Greedy left-to-right chunking with the shipped rule table. At each word the
/// longest rule match wins (earlier rules win ties); words no rule covers are
/// left outside. Punctuation never falls inside a chunk.
std::vector<Chunk> chunk(const std::vector<TaggedToken>& tagged);

/// Anything that turns a segment into chunks. The phrase matcher only talks
/// to this interface.
class Chunker {
public:
    virtual ~Chunker() = default;
    virtual std::vector<Chunk> operator()(const Segment& segment) const = 0;
};

class RuleChunker final : public Chunker {
public:
    explicit RuleChunker(PosLexicon lexicon) : lexicon_(std::move(lexicon)) {}

    std::vector<Chunk> operator()(const Segment& segment) const override;

    const PosLexicon& lexicon() const { return lexicon_; }

private:
    PosLexicon lexicon_;
};

/// Renders chunks in bracket notation, e.g.
/// "Will [VP they recommend] [NP our proposal] [VP made for sites] ?"
std::string bracket(const Segment& segment, const std::vector<Chunk>& chunks);

} // namespace tmem
