#pragma once

#include "tmem/store.hpp"
#include "tmem/unit.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmem {

struct TmxHeader {
    std::string creationtool = "transmem";
    std::string creationtoolversion = "1.0";
    std::string srclang = "en";
    std::string adminlang = "en";
    std::string o_tmf = "transmem";
};

/// One `tu` as read from a TMX body, before it is committed.
struct TmxPair {
    std::string source;
    std::string target;
    std::string source_lang;
    std::string target_lang;
};

struct TmxDocument {
    TmxHeader header;
    std::vector<TmxPair> pairs;
    std::size_t malformed = 0;
};

struct TmxImportOptions {
    /// Overrides the header srclang. A tuv matches when its primary language
    /// subtag equals this one, case-insensitively.
    std::optional<std::string> source_lang;
    /// When unset, the single non-source tuv is the target.
    std::optional<std::string> target_lang;
};

struct ImportSummary {
    std::size_t added = 0;
    std::size_t skipped = 0;
    std::size_t malformed = 0;
};

/// Parses the TMX subset. Throws Error(format) when the bytes are not
/// well-formed XML or the root element is not `tmx`. Malformed `tu` elements
/// are counted, not fatal. Inline markup inside `seg` is dropped along with
/// the native codes it carries.
TmxDocument parse_tmx(std::string_view bytes, const TmxImportOptions& options = {});

/// Parses first, then commits; a format error leaves the store untouched.
/// Pairs the store rejects during validation count as malformed.
ImportSummary import_tmx(TmStore& store, std::string_view bytes, const TmxImportOptions& options = {},
                         Scope scope = Scope::local, const std::string& author = {});

/// TMX 1.4 with the fixed header attributes and one two-tuv `tu` per unit,
/// ordered by created_at then id.
std::string export_tmx(std::vector<TranslationUnit> units, const TmxHeader& header = {});

} // namespace tmem
