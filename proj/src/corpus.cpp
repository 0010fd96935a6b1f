#include "stratatopics/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <utility>

#include "stratatopics/csv.hpp"
#include "stratatopics/error.hpp"

namespace stratatopics {
namespace {

std::string_view trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string fold(std::string_view s) {
  std::string out(trim(s));
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

bool is_blank_record(const std::vector<std::string>& rec) {
  return rec.size() == 1 && trim(rec[0]).empty();
}

}  // namespace

ConceptTaxonomy::ConceptTaxonomy(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.id != static_cast<ConceptId>(i + 1)) {
      throw ValidationError("taxonomy ids must be contiguous from 1; got " +
                            std::to_string(e.id) + " at position " +
                            std::to_string(i + 1));
    }
    std::string key = fold(e.name);
    if (key.empty()) {
      throw ValidationError("taxonomy name for id " + std::to_string(e.id) +
                            " is empty");
    }
    if (!by_folded_name_.emplace(std::move(key), e.id).second) {
      throw ValidationError("duplicate taxonomy name: " + e.name);
    }
  }
}

const ConceptTaxonomy& ConceptTaxonomy::builtin() {
  static const ConceptTaxonomy taxonomy({
      {1, "Acuity"},
      {2, "Antenatal"},
      {3, "Assessment, investigation, testing, screening"},
      {4, "COVID"},
      {5, "Care Planning"},
      {6, "Communication factor"},
      {7, "Decision error"},
      {8, "Dispensing, administering"},
      {9, "Documentation"},
      {10, "Escalation/referral factor"},
      {11, "Guidance factor"},
      {12, "Interpretation"},
      {13, "Language barrier"},
      {14, "Local guidance"},
      {15, "Monitoring"},
      {16, "National and local guidance"},
      {17, "National guidance"},
      {18, "Obstetric review"},
      {19, "Physical characteristics"},
      {20, "Physical layout and Environment"},
      {21, "Psychological characteristics"},
      {22, "Risk assessment"},
      {23, "Situation awareness"},
      {24, "Slip or lapse"},
      {25, "Teamworking"},
      {26, "Technologies and Tools-issues"},
      {27, "Training and education"},
  });
  return taxonomy;
}

ConceptTaxonomy ConceptTaxonomy::parse_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw ValidationError("taxonomy file has no rows");
  if (header->size() != 2 || fold((*header)[0]) != "id" ||
      fold((*header)[1]) != "name") {
    throw ParseError(1, "taxonomy header must be id,name");
  }
  std::vector<Entry> entries;
  while (auto rec = reader.next()) {
    if (is_blank_record(*rec)) continue;
    if (rec->size() != 2) {
      throw ParseError(reader.row(), "expected 2 fields, got " +
                                         std::to_string(rec->size()));
    }
    auto id = parse_int<ConceptId>((*rec)[0]);
    if (!id) throw ParseError(reader.row(), "invalid concept id");
    entries.push_back({*id, std::string(trim((*rec)[1]))});
  }
  return ConceptTaxonomy(std::move(entries));
}

const std::string& ConceptTaxonomy::name(ConceptId id) const {
  if (!contains(id)) {
    throw ValidationError("unknown concept id " + std::to_string(id));
  }
  return entries_[static_cast<std::size_t>(id - 1)].name;
}

std::optional<ConceptId> ConceptTaxonomy::resolve(
    std::string_view token) const {
  if (auto id = parse_int<ConceptId>(token)) {
    if (contains(*id)) return id;
    return std::nullopt;
  }
  auto it = by_folded_name_.find(fold(token));
  if (it == by_folded_name_.end()) return std::nullopt;
  return it->second;
}

Corpus::Corpus(Unchecked, ConceptTaxonomy taxonomy,
               std::vector<AnnotatedSentence> sentences)
    : taxonomy_(std::move(taxonomy)), sentences_(std::move(sentences)) {}

Corpus::Corpus(ConceptTaxonomy taxonomy,
               std::vector<AnnotatedSentence> sentences)
    : taxonomy_(std::move(taxonomy)), sentences_(std::move(sentences)) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& s : sentences_) {
    if (trim(s.text).empty()) {
      throw ValidationError("empty sentence text for " + s.file_id + "/" +
                            s.sentence_id);
    }
    for (ConceptId c : s.concepts) {
      if (!taxonomy_.contains(c)) {
        throw ValidationError("unknown concept id " + std::to_string(c) +
                              " in " + s.file_id + "/" + s.sentence_id);
      }
    }
    if (!seen.emplace(s.file_id, s.sentence_id).second) {
      throw ValidationError("duplicate (FileID, SentenceID): (" + s.file_id +
                            ", " + s.sentence_id + ")");
    }
  }
}

std::vector<std::string> Corpus::groups() const {
  std::set<std::string> g;
  for (const auto& s : sentences_) g.insert(s.ethnicity);
  return {g.begin(), g.end()};
}

Corpus parse_corpus_csv(std::istream& in, const ConceptTaxonomy& taxonomy) {
  static const std::vector<std::string> kHeader = {
      "fileid", "sentenceid", "sentence", "concepts", "ethnicity", "year"};
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw ValidationError("no rows");
  std::vector<std::string> folded;
  for (const auto& h : *header) folded.push_back(fold(h));
  if (folded != kHeader) {
    throw ParseError(1,
                     "header must be FileID,SentenceID,Sentence,Concepts,"
                     "Ethnicity,Year");
  }

  std::vector<AnnotatedSentence> sentences;
  std::set<std::pair<std::string, std::string>> seen;
  while (auto rec = reader.next()) {
    const std::size_t row = reader.row();
    if (is_blank_record(*rec)) continue;
    if (rec->size() != kHeader.size()) {
      throw ParseError(row, "expected 6 fields, got " +
                                std::to_string(rec->size()));
    }
    AnnotatedSentence s;
    s.file_id = std::string(trim((*rec)[0]));
    s.sentence_id = std::string(trim((*rec)[1]));
    s.text = (*rec)[2];
    if (trim(s.text).empty()) {
      throw ValidationError("row " + std::to_string(row) +
                            ": empty sentence text");
    }
    std::string_view concepts = (*rec)[3];
    while (!concepts.empty()) {
      auto cut = concepts.find(';');
      std::string_view token = trim(concepts.substr(0, cut));
      concepts = cut == std::string_view::npos ? std::string_view{}
                                               : concepts.substr(cut + 1);
      if (token.empty()) continue;
      auto id = taxonomy.resolve(token);
      if (!id) {
        throw ValidationError("row " + std::to_string(row) +
                              ": unknown concept '" + std::string(token) +
                              "'");
      }
      s.concepts.insert(*id);
    }
    std::string_view ethnicity = trim((*rec)[4]);
    s.ethnicity = ethnicity.empty() ? std::string(kNoGroupData)
                                    : std::string(ethnicity);
    if (!trim((*rec)[5]).empty()) {
      s.year = parse_int<int>((*rec)[5]);
      if (!s.year) throw ParseError(row, "invalid year");
    }
    if (!seen.emplace(s.file_id, s.sentence_id).second) {
      throw ValidationError("row " + std::to_string(row) +
                            ": duplicate (FileID, SentenceID): (" +
                            s.file_id + ", " + s.sentence_id + ")");
    }
    sentences.push_back(std::move(s));
  }
  return Corpus(taxonomy, std::move(sentences));
}

void write_corpus_csv(const Corpus& corpus, std::ostream& out) {
  out << "FileID,SentenceID,Sentence,Concepts,Ethnicity,Year\n";
  for (const auto& s : corpus.sentences()) {
    std::string concepts;
    for (ConceptId c : s.concepts) {
      if (!concepts.empty()) concepts.push_back(';');
      concepts += corpus.taxonomy().name(c);
    }
    out << csv::join_row({s.file_id, s.sentence_id, s.text, concepts,
                          s.ethnicity,
                          s.year ? std::to_string(*s.year) : std::string{}})
        << '\n';
  }
}

Corpus subset(const Corpus& corpus, std::optional<ConceptId> concept_id,
              const std::optional<std::string>& group) {
  std::vector<AnnotatedSentence> kept;
  for (const auto& s : corpus.sentences()) {
    if (concept_id && !s.concepts.contains(*concept_id)) continue;
    if (group && s.ethnicity != *group) continue;
    kept.push_back(s);
  }
  return Corpus(Corpus::Unchecked{}, corpus.taxonomy(), std::move(kept));
}

std::map<ConceptId, std::size_t> concept_counts(const Corpus& corpus) {
  std::map<ConceptId, std::size_t> counts;
  for (const auto& e : corpus.taxonomy().entries()) counts[e.id] = 0;
  for (const auto& s : corpus.sentences()) {
    for (ConceptId c : s.concepts) ++counts[c];
  }
  return counts;
}

std::map<std::string, std::size_t> group_counts(const Corpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : corpus.sentences()) ++counts[s.ethnicity];
  return counts;
}

void write_concept_report(const Corpus& corpus, std::ostream& out) {
  for (const auto& [id, n] : concept_counts(corpus)) {
    out << id << '\t' << corpus.taxonomy().name(id) << " (" << n << ")\n";
  }
  out << "Total sentences: " << corpus.size() << '\n';
}

}  // namespace stratatopics
