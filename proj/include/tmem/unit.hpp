#pragma once

#include "tmem/segmenter.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tmem {

enum class Scope { local, global };
enum class Origin { manual, imported };

std::string_view to_string(Scope scope);
std::string_view to_string(Origin origin);
std::optional<Scope> parse_scope(std::string_view text);
std::optional<Origin> parse_origin(std::string_view text);

struct UnitMeta {
    Scope scope = Scope::local;
    std::string author;
    std::int64_t created_at = 0; // seconds since the Unix epoch, UTC
    Origin origin = Origin::manual;

    bool operator==(const UnitMeta&) const = default;
};

using UnitId = std::string;

/// An aligned source/target sentence pair.
struct TranslationUnit {
    UnitId id;
    Segment source;
    Segment target;
    UnitMeta meta;
};

/// Stable content hash of the normalized pair and both language tags:
/// the first 16 hex digits of SHA-256 over the four fields joined by U+001F.
UnitId compute_unit_id(std::string_view source, std::string_view target,
                       std::string_view source_lang, std::string_view target_lang);

/// Validates and builds a unit. Throws Error(validation) when either side is
/// empty after normalization, the source has no word token, the language tags
/// are empty or equal, or a text holds characters that XML 1.0 cannot carry.
TranslationUnit make_unit(std::string source, std::string target, std::string source_lang,
                          std::string target_lang, UnitMeta meta);

} // namespace tmem
