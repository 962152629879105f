#include "tmem/segmenter.hpp"

#include "tmem/error.hpp"
#include "tmem/shipped_data.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tmem {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::duplicate_unit: return "duplicate_unit";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::io: return "io_error";
    case ErrorCode::validation: return "validation_error";
    case ErrorCode::format: return "format_error";
    case ErrorCode::sizing: return "sizing_error";
    }
    return "unknown";
}

namespace {

constexpr UChar32 kDanda = 0x0964;
constexpr UChar32 kDoubleDanda = 0x0965;

bool is_space(UChar32 c)
{
    // Control characters count as separators so a token norm can never
    // contain one.
    return u_isUWhiteSpace(c) || u_charType(c) == U_CONTROL_CHAR;
}

bool is_punct(UChar32 c)
{
    return u_ispunct(c) != 0;
}

bool is_closing(UChar32 c)
{
    const auto type = u_charType(c);
    return type == U_END_PUNCTUATION || type == U_FINAL_PUNCTUATION || c == '"' || c == '\'';
}

struct CodePoint {
    UChar32 value;
    std::size_t start;
    std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text)
{
    std::vector<CodePoint> out;
    out.reserve(text.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            c = 0xFFFD;
        }
        out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
    }
    return out;
}

const icu::Normalizer2& nfc()
{
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw Error(ErrorCode::io, "ICU NFC normalizer unavailable");
    }
    return *n;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& s)
{
    UErrorCode status = U_ZERO_ERROR;
    auto out = nfc().normalize(s, status);
    if (U_FAILURE(status)) {
        return s;
    }
    return out;
}

} // namespace

std::string normalize(std::string_view text)
{
    const auto composed = to_nfc(icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))));

    icu::UnicodeString folded;
    bool pending_space = false;
    for (int32_t i = 0; i < composed.length();) {
        const UChar32 c = composed.char32At(i);
        i += U16_LENGTH(c);
        if (is_space(c)) {
            pending_space = !folded.isEmpty();
            continue;
        }
        if (pending_space) {
            folded.append(static_cast<UChar>(' '));
            pending_space = false;
        }
        folded.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
    }

    // Folding can produce sequences that compose differently, so recompose.
    std::string out;
    to_nfc(folded).toUTF8String(out);
    return out;
}

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> tokens;
    const auto cps = decode(text);

    auto emit = [&](std::size_t first, std::size_t last, bool is_word) {
        // [first, last) indexes code points.
        Token t;
        t.start = cps[first].start;
        t.end = cps[last - 1].end;
        t.surface = std::string(text.substr(t.start, t.end - t.start));
        t.norm = normalize(t.surface);
        t.is_word = is_word;
        tokens.push_back(std::move(t));
    };

    std::size_t i = 0;
    while (i < cps.size()) {
        if (is_space(cps[i].value)) {
            ++i;
            continue;
        }
        std::size_t piece_end = i;
        while (piece_end < cps.size() && !is_space(cps[piece_end].value)) {
            ++piece_end;
        }

        std::size_t lo = i;
        std::size_t hi = piece_end;
        while (lo < hi && is_punct(cps[lo].value)) {
            emit(lo, lo + 1, false);
            ++lo;
        }
        std::size_t trail = hi;
        while (trail > lo && is_punct(cps[trail - 1].value)) {
            --trail;
        }

        // Interior dandas split the remaining core.
        std::size_t run = lo;
        for (std::size_t j = lo; j < trail; ++j) {
            if (cps[j].value == kDanda || cps[j].value == kDoubleDanda) {
                if (run < j) {
                    emit(run, j, true);
                }
                emit(j, j + 1, false);
                run = j + 1;
            }
        }
        if (run < trail) {
            emit(run, trail, true);
        }
        for (std::size_t j = trail; j < hi; ++j) {
            emit(j, j + 1, false);
        }
        i = piece_end;
    }
    return tokens;
}

Segment make_segment(std::string raw, std::string lang)
{
    Segment s;
    s.tokens = tokenize(raw);
    s.raw = std::move(raw);
    s.lang = std::move(lang);
    return s;
}

std::vector<std::string> word_norms(const Segment& segment)
{
    std::vector<std::string> out;
    out.reserve(segment.tokens.size());
    for (const auto& t : segment.tokens) {
        if (t.is_word) {
            out.push_back(t.norm);
        }
    }
    return out;
}

std::vector<const Token*> word_tokens(const Segment& segment)
{
    std::vector<const Token*> out;
    for (const auto& t : segment.tokens) {
        if (t.is_word) {
            out.push_back(&t);
        }
    }
    return out;
}

SegRules SegRules::defaults()
{
    return SegRules{{".", "!", "?", "।"}, {}};
}

SegRules parse_rules(std::istream& in)
{
    std::vector<std::string> terms;
    std::vector<std::string> exceptions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto space = line.find(' ', first);
        const std::string directive = line.substr(first, space == std::string::npos ? std::string::npos : space - first);
        std::string value = space == std::string::npos ? std::string() : line.substr(space + 1);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) {
            value.pop_back();
        }
        if (value.empty()) {
            throw Error(ErrorCode::parse, "rules line " + std::to_string(line_no) + ": missing value");
        }
        if (directive == "term") {
            terms.push_back(std::move(value));
        } else if (directive == "except") {
            exceptions.push_back(std::move(value));
        } else {
            throw Error(ErrorCode::parse,
                        "rules line " + std::to_string(line_no) + ": unknown directive '" + directive + "'");
        }
    }

    SegRules rules = SegRules::defaults();
    if (!terms.empty()) {
        rules.terminators = std::move(terms);
    }
    rules.exceptions = std::move(exceptions);
    return rules;
}

SegRules load_rules(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot read rules file " + path);
    }
    return parse_rules(in);
}

SegRules shipped_rules()
{
    std::istringstream in{std::string(shipped_rules_text())};
    return parse_rules(in);
}

std::string SentenceSplit::reconstruct() const
{
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        out += separators[i];
        out += segments[i].raw;
    }
    if (!separators.empty()) {
        out += separators.back();
    }
    return out;
}

SentenceSplit split_sentences(std::string_view text, const SegRules& rules, const std::string& lang)
{
    auto terminators = rules.terminators;
    std::sort(terminators.begin(), terminators.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });

    auto terminator_at = [&](std::size_t pos) -> std::size_t {
        for (const auto& t : terminators) {
            if (!t.empty() && text.compare(pos, t.size(), t) == 0) {
                return t.size();
            }
        }
        return 0;
    };

    const auto cps = decode(text);
    // Byte offset -> code point index lookup for the boundary checks below.
    auto cp_at = [&](std::size_t byte) {
        return std::lower_bound(cps.begin(), cps.end(), byte,
                                [](const CodePoint& cp, std::size_t b) { return cp.start < b; });
    };

    auto preceded_by_boundary = [&](std::size_t seg_start, std::size_t pos) {
        if (pos <= seg_start) {
            return true;
        }
        auto it = cp_at(pos);
        if (it == cps.begin()) {
            return true;
        }
        --it;
        return is_space(it->value) || is_punct(it->value);
    };

    auto is_exception = [&](std::size_t seg_start, std::size_t term_end) {
        for (const auto& e : rules.exceptions) {
            if (e.size() > term_end - seg_start) {
                continue;
            }
            const std::size_t begin = term_end - e.size();
            if (text.compare(begin, e.size(), e) == 0 && preceded_by_boundary(seg_start, begin)) {
                return true;
            }
        }
        return false;
    };

    SentenceSplit out;
    std::size_t sep_start = 0;
    std::size_t pos = 0;

    auto skip_space = [&](std::size_t from) {
        auto it = cp_at(from);
        while (it != cps.end() && is_space(it->value)) {
            ++it;
        }
        return it == cps.end() ? text.size() : it->start;
    };

    auto close_segment = [&](std::size_t seg_start, std::size_t seg_end) {
        out.separators.emplace_back(text.substr(sep_start, seg_start - sep_start));
        out.segments.push_back(make_segment(std::string(text.substr(seg_start, seg_end - seg_start)), lang));
        sep_start = seg_end;
    };

    pos = skip_space(0);
    std::size_t seg_start = pos;
    while (pos < text.size()) {
        const std::size_t len = terminator_at(pos);
        if (len == 0) {
            auto it = cp_at(pos);
            pos = it->end;
            continue;
        }
        std::size_t end = pos + len;
        while (end < text.size()) {
            const std::size_t more = terminator_at(end);
            if (more == 0) {
                break;
            }
            end += more;
        }
        const std::size_t term_end = end;
        while (end < text.size()) {
            auto it = cp_at(end);
            if (!is_closing(it->value)) {
                break;
            }
            end = it->end;
        }

        const bool at_gap = end == text.size() || is_space(cp_at(end)->value);
        if (at_gap && !is_exception(seg_start, term_end)) {
            close_segment(seg_start, end);
            pos = skip_space(end);
            seg_start = pos;
        } else {
            pos = end;
        }
    }

    if (seg_start < text.size()) {
        // Unterminated tail: trailing whitespace goes to the final separator.
        auto last = cps.end();
        while (last != cps.begin() && is_space(std::prev(last)->value)) {
            --last;
        }
        const std::size_t seg_end = last == cps.end() ? text.size() : last->start;
        close_segment(seg_start, seg_end);
    }
    out.separators.emplace_back(text.substr(sep_start));
    return out;
}

} // namespace tmem
