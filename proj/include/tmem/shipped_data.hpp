#pragma once

#include <string_view>

namespace tmem {

// Contents of data/lexicon.tsv and data/segment.rules at build time.
std::string_view shipped_lexicon_text();
std::string_view shipped_rules_text();

} // namespace tmem
