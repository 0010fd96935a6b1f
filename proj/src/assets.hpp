#pragma once

#include <string_view>

// Text assets compiled into the library (see assets/).
namespace stratatopics::assets {

std::string_view stopwords_txt();
std::string_view lexicon_tsv();
std::string_view graph_schema_json();

}  // namespace stratatopics::assets
