#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace tmem {

/// A token of a text. Offsets are UTF-8 byte offsets into the tokenized
/// string, so `text.substr(start, end - start) == surface`.
struct Token {
    std::string surface;
    std::string norm;
    std::size_t start = 0;
    std::size_t end = 0;
    bool is_word = true;

    bool operator==(const Token&) const = default;
};

struct Segment {
    std::string raw;
    std::vector<Token> tokens;
    std::string lang;

    bool operator==(const Segment&) const = default;
};

/// Build a segment from a single sentence (no splitting).
Segment make_segment(std::string raw, std::string lang);

/// Norms of the word tokens, in order. This is what n-gram extraction,
/// chunking and phrase search consume.
std::vector<std::string> word_norms(const Segment& segment);
std::vector<const Token*> word_tokens(const Segment& segment);

/// Sentence-splitting rules: a terminator set plus literal no-break
/// exceptions such as "Dr.".
struct SegRules {
    std::vector<std::string> terminators;
    std::vector<std::string> exceptions;

    static SegRules defaults();
};

/// Parses the line-oriented rules format:
///
///     # comment
///     term <string>
///     except <string>
///
/// When the file has at least one `term` line those replace the default
/// terminators; otherwise the defaults are kept. Throws Error(parse) with the
/// offending line number.
SegRules parse_rules(std::istream& in);
SegRules load_rules(const std::string& path);
SegRules shipped_rules();

/// NFC, simple case folding, whitespace runs collapsed to one space, trimmed.
std::string normalize(std::string_view text);

/// Whitespace split; leading/trailing punctuation of each whitespace-delimited
/// piece becomes separate single-character tokens. Danda and double danda
/// always split.
std::vector<Token> tokenize(std::string_view text);

/// Result of sentence splitting. `separators` has one more element than
/// `segments`: the input equals sep[0] + seg[0].raw + sep[1] + ... + sep[n].
struct SentenceSplit {
    std::vector<Segment> segments;
    std::vector<std::string> separators;

    std::string reconstruct() const;
};

SentenceSplit split_sentences(std::string_view text, const SegRules& rules,
                              const std::string& lang = "en");

} // namespace tmem
