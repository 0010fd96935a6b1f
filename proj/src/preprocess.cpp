#include "stratatopics/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "assets.hpp"
#include "stratatopics/error.hpp"

namespace stratatopics {
namespace {

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Byte length of a Unicode whitespace sequence starting at `i`, or 0.
std::size_t whitespace_len(std::string_view s, std::size_t i) {
  auto b = [&](std::size_t k) {
    return k < s.size() ? static_cast<unsigned char>(s[k]) : 0u;
  };
  unsigned c0 = b(i);
  if (c0 == ' ' || (c0 >= 0x09 && c0 <= 0x0D)) return 1;
  if (c0 == 0xC2 && (b(i + 1) == 0x85 || b(i + 1) == 0xA0)) return 2;
  if (c0 == 0xE1 && b(i + 1) == 0x9A && b(i + 2) == 0x80) return 3;
  if (c0 == 0xE2 && b(i + 1) == 0x80) {
    unsigned c2 = b(i + 2);
    if ((c2 >= 0x80 && c2 <= 0x8A) || c2 == 0xA8 || c2 == 0xA9 ||
        c2 == 0xAF) {
      return 3;
    }
  }
  if (c0 == 0xE2 && b(i + 1) == 0x81 && b(i + 2) == 0x9F) return 3;
  if (c0 == 0xE3 && b(i + 1) == 0x80 && b(i + 2) == 0x80) return 3;
  return 0;
}

}  // namespace

std::string_view to_string(Pos pos) noexcept {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

std::optional<Pos> parse_pos(std::string_view s) noexcept {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "NOUN") return Pos::Noun;
  if (up == "VERB") return Pos::Verb;
  if (up == "ADJ") return Pos::Adj;
  if (up == "ADV") return Pos::Adv;
  if (up == "OTHER") return Pos::Other;
  return std::nullopt;
}

LexiconTagger::LexiconTagger(std::unordered_map<std::string, Pos> lexicon)
    : lexicon_(std::move(lexicon)) {}

LexiconTagger LexiconTagger::parse(std::istream& in) {
  std::unordered_map<std::string, Pos> lexicon;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(lineno, "lexicon line lacks a TAB");
    }
    auto pos = parse_pos(std::string_view(line).substr(tab + 1));
    if (!pos) throw ParseError(lineno, "unknown POS class");
    std::string word = line.substr(0, tab);
    for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    lexicon.emplace(std::move(word), *pos);
  }
  return LexiconTagger(std::move(lexicon));
}

Pos LexiconTagger::tag_word(std::string_view word) const {
  if (!word.empty() && std::all_of(word.begin(), word.end(), is_ascii_digit)) {
    return Pos::Other;
  }
  if (auto it = lexicon_.find(std::string(word)); it != lexicon_.end()) {
    return it->second;
  }
  if (ends_with(word, "ing") || ends_with(word, "ed")) return Pos::Verb;
  return Pos::Noun;  // "-ion", "-ment" and the unknown-word default
}

std::vector<Pos> LexiconTagger::tag(std::span<const std::string> tokens) const {
  std::vector<Pos> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(tag_word(t));
  return tags;
}

std::shared_ptr<const PosTagger> default_tagger() {
  static const auto tagger = [] {
    std::istringstream in{std::string(assets::lexicon_tsv())};
    return std::make_shared<const LexiconTagger>(LexiconTagger::parse(in));
  }();
  return tagger;
}

std::unordered_set<std::string> parse_stopwords(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string word;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

const std::unordered_set<std::string>& default_stopwords() {
  static const auto words = [] {
    std::istringstream in{std::string(assets::stopwords_txt())};
    return parse_stopwords(in);
  }();
  return words;
}

void CleanConfig::validate() const {
  if (min_token_len < 1) throw ConfigError("min_token_len must be >= 1");
  if (keep_pos.empty()) throw ConfigError("keep_pos must be non-empty");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    if (std::size_t ws = whitespace_len(text, i)) {
      flush();
      i += ws;
      continue;
    }
    char c = text[i];
    if (static_cast<unsigned char>(c) < 0x80 &&
        std::ispunct(static_cast<unsigned char>(c))) {
      flush();
    } else {
      current.push_back(c);
    }
    ++i;
  }
  flush();
  return tokens;
}

std::vector<std::string> clean_text(std::string_view text,
                                    const CleanConfig& config,
                                    const PosTagger& tagger) {
  std::string ascii;
  if (config.strip_non_ascii) {
    ascii.reserve(text.size());
    for (char c : text) {
      if (static_cast<unsigned char>(c) < 0x80) ascii.push_back(c);
    }
    text = ascii;
  }

  std::vector<std::string> tokens;
  for (auto& tok : tokenize(text)) {
    // Non-ASCII bytes (only present when not stripping) count as letters.
    bool alpha = std::all_of(tok.begin(), tok.end(), [](char c) {
      return is_ascii_alpha(c) || static_cast<unsigned char>(c) >= 0x80;
    });
    bool digits = std::all_of(tok.begin(), tok.end(), is_ascii_digit);
    if (!alpha && !digits) continue;
    for (char& c : tok) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (tok.size() < config.min_token_len) continue;
    if (config.stopwords.contains(tok)) continue;
    tokens.push_back(std::move(tok));
  }

  std::vector<Pos> tags = tagger.tag(tokens);
  if (tags.size() != tokens.size()) {
    throw Error("POS tagger returned " + std::to_string(tags.size()) +
                " tags for " + std::to_string(tokens.size()) + " tokens");
  }
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (config.keep_pos.contains(tags[i])) kept.push_back(std::move(tokens[i]));
  }
  return kept;
}

std::vector<CleanedSentence> clean_corpus(const Corpus& corpus,
                                          const CleanConfig& config,
                                          const PosTagger& tagger) {
  config.validate();
  std::vector<CleanedSentence> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) {
    out.push_back({s.file_id, s.sentence_id, clean_text(s.text, config, tagger)});
  }
  return out;
}

}  // namespace stratatopics
