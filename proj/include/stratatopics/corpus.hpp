#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace stratatopics {

using ConceptId = int;

/// Group label assigned to sentences whose source row has no ethnicity.
inline constexpr std::string_view kNoGroupData = "Data not received";

/// Ordered (id, name) list; ids are contiguous from 1.
class ConceptTaxonomy {
 public:
  struct Entry {
    ConceptId id;
    std::string name;
    bool operator==(const Entry&) const = default;
  };

  ConceptTaxonomy() = default;
  /// Validates ids (unique, contiguous from 1, in order) and names
  /// (non-empty, unique case-insensitively). Throws ValidationError.
  explicit ConceptTaxonomy(std::vector<Entry> entries);

  /// The 27-concept safety-factor taxonomy.
  static const ConceptTaxonomy& builtin();

  /// Reads an `id,name` CSV with header.
  static ConceptTaxonomy parse_csv(std::istream& in);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(ConceptId id) const noexcept {
    return id >= 1 && static_cast<std::size_t>(id) <= entries_.size();
  }
  const std::string& name(ConceptId id) const;

  /// Resolves a numeric id or a name (trimmed, case-insensitive).
  std::optional<ConceptId> resolve(std::string_view token) const;

  bool operator==(const ConceptTaxonomy&) const = default;

 private:
  std::vector<Entry> entries_;
  std::map<std::string, ConceptId> by_folded_name_;
};

struct AnnotatedSentence {
  std::string file_id;
  std::string sentence_id;
  std::string text;
  std::set<ConceptId> concepts;
  std::string ethnicity{kNoGroupData};
  std::optional<int> year;

  bool operator==(const AnnotatedSentence&) const = default;
};

/// Immutable after construction; sentence order is the input order.
class Corpus {
 public:
  Corpus() = default;
  /// Checks every invariant and throws ValidationError on the first breach.
  Corpus(ConceptTaxonomy taxonomy, std::vector<AnnotatedSentence> sentences);

  const ConceptTaxonomy& taxonomy() const noexcept { return taxonomy_; }
  const std::vector<AnnotatedSentence>& sentences() const noexcept {
    return sentences_;
  }
  std::size_t size() const noexcept { return sentences_.size(); }
  bool empty() const noexcept { return sentences_.empty(); }

  /// Distinct group labels, sorted.
  std::vector<std::string> groups() const;

  bool operator==(const Corpus&) const = default;

 private:
  struct Unchecked {};
  Corpus(Unchecked, ConceptTaxonomy taxonomy,
         std::vector<AnnotatedSentence> sentences);
  friend Corpus subset(const Corpus&, std::optional<ConceptId>,
                       const std::optional<std::string>&);

  ConceptTaxonomy taxonomy_;
  std::vector<AnnotatedSentence> sentences_;
};

/// Parses `FileID,SentenceID,Sentence,Concepts,Ethnicity,Year`.
/// Throws ParseError (with row) for malformed CSV and ValidationError for
/// unknown concepts, duplicate ids, or empty text.
Corpus parse_corpus_csv(std::istream& in, const ConceptTaxonomy& taxonomy);

/// Writes the same schema; concepts are emitted as `;`-joined names.
void write_corpus_csv(const Corpus& corpus, std::ostream& out);

/// Sentences matching both filters; an absent filter matches everything.
Corpus subset(const Corpus& corpus, std::optional<ConceptId> concept_id,
              const std::optional<std::string>& group);

/// Sentences per concept id (multi-label); every taxonomy id is present.
std::map<ConceptId, std::size_t> concept_counts(const Corpus& corpus);

/// Sentences per group label.
std::map<std::string, std::size_t> group_counts(const Corpus& corpus);

/// Per-concept count report: one `ID<TAB>Name (count)` line per concept, then
/// `Total sentences: N`.
void write_concept_report(const Corpus& corpus, std::ostream& out);

}  // namespace stratatopics
