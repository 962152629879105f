#include "tmem/chunker.hpp"

#include "tmem/error.hpp"
#include "tmem/shipped_data.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace tmem {

namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 10> kTagNames{{
    {PosTag::DET, "DET"},
    {PosTag::PRON, "PRON"},
    {PosTag::NOUN, "NOUN"},
    {PosTag::VERB, "VERB"},
    {PosTag::AUX, "AUX"},
    {PosTag::ADJ, "ADJ"},
    {PosTag::ADV, "ADV"},
    {PosTag::PREP, "PREP"},
    {PosTag::CONJ, "CONJ"},
    {PosTag::OTHER, "OTHER"},
}};

using TagMask = std::uint16_t;

constexpr TagMask bit(PosTag t)
{
    return static_cast<TagMask>(1u << static_cast<unsigned>(t));
}

template <typename... Tags>
constexpr TagMask any_of(Tags... tags)
{
    return static_cast<TagMask>((bit(tags) | ...));
}

enum class Quant { one, optional, star, plus };

struct Element {
    TagMask tags;
    Quant quant;
};

struct Rule {
    ChunkLabel label;
    std::vector<Element> elements;
};

// The shipped rule table. A modal or auxiliary directly before a pronoun is
// not absorbed ("Will [VP they recommend] ..."): no rule starts with AUX
// followed by PRON.
const std::vector<Rule>& rule_table()
{
    using enum PosTag;
    static const std::vector<Rule> rules{
        // NP: DET? ADJ* (NOUN|PRON)+
        {ChunkLabel::NP,
         {{any_of(DET), Quant::optional}, {any_of(ADJ), Quant::star}, {any_of(NOUN, PRON), Quant::plus}}},
        // VP: PRON AUX* VERB+ ADV*
        {ChunkLabel::VP,
         {{any_of(PRON), Quant::one}, {any_of(AUX), Quant::star}, {any_of(VERB), Quant::plus},
          {any_of(ADV), Quant::star}}},
        // VP: PRON AUX* VERB+ ADV* PREP DET? ADJ* NOUN+
        {ChunkLabel::VP,
         {{any_of(PRON), Quant::one}, {any_of(AUX), Quant::star}, {any_of(VERB), Quant::plus},
          {any_of(ADV), Quant::star}, {any_of(PREP), Quant::one}, {any_of(DET), Quant::optional},
          {any_of(ADJ), Quant::star}, {any_of(NOUN), Quant::plus}}},
        // VP: (AUX|VERB)* VERB ADV*
        {ChunkLabel::VP,
         {{any_of(AUX, VERB), Quant::star}, {any_of(VERB), Quant::one}, {any_of(ADV), Quant::star}}},
        // VP: (AUX|VERB)* VERB ADV* PREP DET? ADJ* NOUN+
        {ChunkLabel::VP,
         {{any_of(AUX, VERB), Quant::star}, {any_of(VERB), Quant::one}, {any_of(ADV), Quant::star},
          {any_of(PREP), Quant::one}, {any_of(DET), Quant::optional}, {any_of(ADJ), Quant::star},
          {any_of(NOUN), Quant::plus}}},
    };
    return rules;
}

// Longest end position reachable by matching elements[e..] from pos, or -1.
long longest_match(const std::vector<Element>& elements, std::size_t e, const std::vector<PosTag>& tags,
                   std::size_t pos)
{
    if (e == elements.size()) {
        return static_cast<long>(pos);
    }
    const auto& el = elements[e];
    auto matches = [&](std::size_t p) { return p < tags.size() && (el.tags & bit(tags[p])) != 0; };

    long best = -1;
    switch (el.quant) {
    case Quant::one:
        if (matches(pos)) {
            best = longest_match(elements, e + 1, tags, pos + 1);
        }
        break;
    case Quant::optional:
        best = longest_match(elements, e + 1, tags, pos);
        if (matches(pos)) {
            best = std::max(best, longest_match(elements, e + 1, tags, pos + 1));
        }
        break;
    case Quant::star:
    case Quant::plus: {
        std::size_t p = pos;
        if (el.quant == Quant::star) {
            best = longest_match(elements, e + 1, tags, p);
        }
        while (matches(p)) {
            ++p;
            best = std::max(best, longest_match(elements, e + 1, tags, p));
        }
        break;
    }
    }
    return best;
}

void chunk_run(const std::vector<PosTag>& tags, std::size_t word_offset, std::vector<Chunk>& out)
{
    std::size_t i = 0;
    while (i < tags.size()) {
        std::size_t best_len = 0;
        ChunkLabel best_label = ChunkLabel::NP;
        for (const auto& rule : rule_table()) {
            const long end = longest_match(rule.elements, 0, tags, i);
            if (end > static_cast<long>(i) && static_cast<std::size_t>(end) - i > best_len) {
                best_len = static_cast<std::size_t>(end) - i;
                best_label = rule.label;
            }
        }
        if (best_len == 0) {
            ++i;
            continue;
        }
        out.push_back({best_label, word_offset + i, word_offset + i + best_len - 1});
        i += best_len;
    }
}

} // namespace

std::string_view to_string(PosTag tag)
{
    for (const auto& [t, name] : kTagNames) {
        if (t == tag) {
            return name;
        }
    }
    return "OTHER";
}

std::optional<PosTag> parse_pos_tag(std::string_view text)
{
    for (const auto& [t, name] : kTagNames) {
        if (name == text) {
            return t;
        }
    }
    return std::nullopt;
}

std::string_view to_string(ChunkLabel label)
{
    return label == ChunkLabel::NP ? "NP" : "VP";
}

PosTag PosLexicon::lookup(const std::string& norm) const
{
    auto it = entries.find(norm);
    return it == entries.end() ? default_tag : it->second;
}

PosLexicon parse_lexicon(std::istream& in)
{
    PosLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw Error(ErrorCode::parse, "lexicon line " + std::to_string(line_no) + ": expected word<TAB>TAG");
        }
        const std::string word = normalize(line.substr(0, tab));
        const auto tag = parse_pos_tag(line.substr(tab + 1));
        if (word.empty() || !tag) {
            throw Error(ErrorCode::parse, "lexicon line " + std::to_string(line_no) + ": bad word or tag");
        }
        lexicon.entries[word] = *tag;
    }
    return lexicon;
}

PosLexicon load_lexicon(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot read lexicon " + path);
    }
    return parse_lexicon(in);
}

PosLexicon shipped_lexicon()
{
    std::istringstream in{std::string(shipped_lexicon_text())};
    return parse_lexicon(in);
}

std::vector<TaggedToken> tag(const std::vector<Token>& tokens, const PosLexicon& lexicon)
{
    std::vector<TaggedToken> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        out.push_back({&t, t.is_word ? lexicon.lookup(t.norm) : PosTag::OTHER});
    }
    return out;
}

std::vector<Chunk> chunk(const std::vector<TaggedToken>& tagged)
{
    std::vector<Chunk> out;
    std::vector<PosTag> run;
    std::size_t word_index = 0;
    std::size_t run_start = 0;
    for (const auto& t : tagged) {
        const bool is_word = t.token == nullptr || t.token->is_word;
        if (!is_word) {
            chunk_run(run, run_start, out);
            run.clear();
            run_start = word_index;
            continue;
        }
        run.push_back(t.tag);
        ++word_index;
    }
    chunk_run(run, run_start, out);
    return out;
}

std::vector<Chunk> RuleChunker::operator()(const Segment& segment) const
{
    return chunk(tag(segment.tokens, lexicon_));
}

std::string bracket(const Segment& segment, const std::vector<Chunk>& chunks)
{
    std::string out;
    std::size_t word = 0;
    auto next = chunks.begin();
    for (const auto& t : segment.tokens) {
        if (!out.empty()) {
            out += ' ';
        }
        if (t.is_word && next != chunks.end() && next->start == word) {
            out += '[';
            out += to_string(next->label);
            out += ' ';
        }
        out += t.surface;
        if (t.is_word) {
            if (next != chunks.end() && next->end == word) {
                out += ']';
                ++next;
            }
            ++word;
        }
    }
    return out;
}

} // namespace tmem
