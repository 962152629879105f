#include "tmem/unit.hpp"

#include "tmem/error.hpp"

#include <openssl/evp.h>

#include <unicode/utf8.h>

#include <array>
#include <memory>

namespace tmem {

std::string_view to_string(Scope scope)
{
    return scope == Scope::global ? "global" : "local";
}

std::string_view to_string(Origin origin)
{
    return origin == Origin::imported ? "imported" : "manual";
}

std::optional<Scope> parse_scope(std::string_view text)
{
    if (text == "local") {
        return Scope::local;
    }
    if (text == "global") {
        return Scope::global;
    }
    return std::nullopt;
}

std::optional<Origin> parse_origin(std::string_view text)
{
    if (text == "manual") {
        return Origin::manual;
    }
    if (text == "imported") {
        return Origin::imported;
    }
    return std::nullopt;
}

UnitId compute_unit_id(std::string_view source, std::string_view target,
                       std::string_view source_lang, std::string_view target_lang)
{
    std::string payload;
    payload.reserve(source.size() + target.size() + source_lang.size() + target_lang.size() + 3);
    payload += normalize(source);
    payload += '\x1f';
    payload += normalize(target);
    payload += '\x1f';
    payload += source_lang;
    payload += '\x1f';
    payload += target_lang;

    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int digest_len = 0;
    if (EVP_Digest(payload.data(), payload.size(), digest.data(), &digest_len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::io, "SHA-256 digest failed");
    }

    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    for (std::size_t i = 0; i < 8; ++i) {
        id += hex[digest[i] >> 4];
        id += hex[digest[i] & 0xF];
    }
    return id;
}

namespace {

bool xml_safe(std::string_view text)
{
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            return false; // invalid UTF-8
        }
        if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') {
            return false;
        }
        if (c == 0xFFFE || c == 0xFFFF) {
            return false;
        }
    }
    return true;
}

} // namespace

TranslationUnit make_unit(std::string source, std::string target, std::string source_lang,
                          std::string target_lang, UnitMeta meta)
{
    if (source_lang.empty() || target_lang.empty()) {
        throw Error(ErrorCode::validation, "language tags must be non-empty");
    }
    if (source_lang == target_lang) {
        throw Error(ErrorCode::validation, "source and target language must differ");
    }
    if (!xml_safe(source) || !xml_safe(target)) {
        throw Error(ErrorCode::validation, "text must be valid UTF-8 without control characters");
    }
    if (normalize(source).empty() || normalize(target).empty()) {
        throw Error(ErrorCode::validation, "source and target must be non-empty");
    }

    TranslationUnit unit;
    unit.id = compute_unit_id(source, target, source_lang, target_lang);
    unit.source = make_segment(std::move(source), std::move(source_lang));
    unit.target = make_segment(std::move(target), std::move(target_lang));
    unit.meta = std::move(meta);
    if (word_norms(unit.source).empty()) {
        throw Error(ErrorCode::validation, "source must contain at least one word");
    }
    return unit;
}

} // namespace tmem
