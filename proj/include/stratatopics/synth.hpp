#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratatopics/corpus.hpp"

namespace stratatopics {

/// The six group labels used for synthetic data, sorted.
const std::vector<std::string>& synthetic_groups();

/// Planted 10-word vocabulary of theme `i` (0-based, one per group label).
const std::vector<std::string>& planted_vocabulary(std::size_t theme);

struct SynthConfig {
  std::size_t sentences = 1000;
  std::uint64_t seed = 7;
  /// 0: every group writes from its own planted vocabulary, concepts drawn
  /// from the whole taxonomy. >= 2: a single (concept, group) stratum whose
  /// sentences cycle through `themes` disjoint vocabularies.
  int themes = 0;
  ConceptId concept_id = 5;
  std::string group = "Black";
};

/// Deterministic for a given config. Throws ConfigError for themes == 1 or
/// themes above the number of planted vocabularies.
Corpus synthesize_corpus(const SynthConfig& cfg,
                         const ConceptTaxonomy& taxonomy = ConceptTaxonomy::builtin());

}  // namespace stratatopics
