#pragma once

#include <istream>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stratatopics/corpus.hpp"

namespace stratatopics {

enum class Pos { Noun, Verb, Adj, Adv, Other };

std::string_view to_string(Pos pos) noexcept;
/// Accepts NOUN, VERB, ADJ, ADV, OTHER (case-insensitive).
std::optional<Pos> parse_pos(std::string_view s) noexcept;

/// Part-of-speech tagging capability. Implementations must return one tag
/// per input token and be deterministic.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<Pos> tag(std::span<const std::string> tokens) const = 0;
};

/// Context-free tagger: lexicon lookup, then suffix rules, then NOUN.
///
/// Unknown words: all-digit -> OTHER; "-ing"/"-ed" -> VERB;
/// "-ion"/"-ment" -> NOUN; anything else -> NOUN. Defaulting to NOUN keeps
/// out-of-lexicon domain terms (drug names, device names) in the analysis.
class LexiconTagger final : public PosTagger {
 public:
  explicit LexiconTagger(std::unordered_map<std::string, Pos> lexicon);

  /// Reads `word<TAB>POS` lines; `#` starts a comment line.
  static LexiconTagger parse(std::istream& in);

  std::vector<Pos> tag(std::span<const std::string> tokens) const override;
  Pos tag_word(std::string_view word) const;
  std::size_t size() const noexcept { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, Pos> lexicon_;
};

/// Tagger backed by the embedded lexicon asset.
std::shared_ptr<const PosTagger> default_tagger();

/// One token per line; `#` starts a comment; entries are lowercased.
std::unordered_set<std::string> parse_stopwords(std::istream& in);
/// The embedded English stopword list.
const std::unordered_set<std::string>& default_stopwords();

struct CleanConfig {
  std::unordered_set<std::string> stopwords = default_stopwords();
  std::size_t min_token_len = 2;
  std::set<Pos> keep_pos = {Pos::Noun, Pos::Verb};
  bool strip_non_ascii = true;

  /// Throws ConfigError if min_token_len is 0 or keep_pos is empty.
  void validate() const;
};

struct CleanedSentence {
  std::string file_id;
  std::string sentence_id;
  std::vector<std::string> tokens;
};

/// Splits on (Unicode) whitespace and ASCII punctuation; punctuation never
/// survives inside a token, so "mother's" gives {"mother", "s"}.
std::vector<std::string> tokenize(std::string_view text);

/// strip non-ASCII -> tokenize -> drop mixed alphanumerics -> lowercase ->
/// stopword/length filter -> POS filter.
std::vector<std::string> clean_text(std::string_view text,
                                    const CleanConfig& config,
                                    const PosTagger& tagger);

std::vector<CleanedSentence> clean_corpus(const Corpus& corpus,
                                          const CleanConfig& config,
                                          const PosTagger& tagger);

}  // namespace stratatopics
