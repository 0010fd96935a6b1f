#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "stratatopics/corpus.hpp"
#include "stratatopics/lda.hpp"
#include "stratatopics/preprocess.hpp"
#include "stratatopics/vectorize.hpp"

namespace stratatopics {

/// Label used in exports for a filter that was left open.
inline constexpr std::string_view kAllLabel = "All";

/// One exported topic row.
struct TopicSummary {
  std::optional<ConceptId> concept_id;  // nullopt: pooled over all concepts
  std::optional<std::string> group;  // nullopt: pooled over all groups
  int topic_index = 1;
  std::vector<std::string> keywords;
  std::size_t sentence_count = 0;

  bool operator==(const TopicSummary&) const = default;
};

struct ExtractionRequest {
  std::optional<ConceptId> concept_id;
  std::optional<std::string> group;
  int num_topics = 5;
  int top_n = 10;
  LdaConfig<double> lda;  // num_topics is taken from the field above
  CleanConfig clean;
  WeightMode lda_input = WeightMode::TfidfL2;
  IdfVariant idf = IdfVariant::Smoothed;

  void validate() const;
};

/// Everything one stratum run produces.
struct StratumTopics {
  std::vector<TopicSummary> summaries;  // after duplicate removal
  std::vector<std::vector<std::string>> raw_keywords;  // one list per LDA topic
  std::vector<std::size_t> raw_counts;                  // per LDA topic
  DocTermMatrix<double> matrix;  // the matrix the model was fitted on
  LdaModel<double> model;
  std::vector<CleanedSentence> retained;
  std::size_t stratum_size = 0;
};

/// The no-data outcome for a stratum.
struct NoData {
  enum class Reason { EmptySubset, NothingAfterCleaning };
  Reason reason = Reason::EmptySubset;
  std::string message() const;
};

using ExtractionResult = std::variant<StratumTopics, NoData>;

/// subset -> clean -> drop empty -> vocabulary -> tf-idf -> L2 -> LDA ->
/// top words -> count -> dedup. Top-n is capped at the stratum vocabulary
/// size.
ExtractionResult extract_topics(const Corpus& corpus, const ExtractionRequest& req);

/// Argmax topic per document (lowest index wins ties).
std::vector<std::size_t> count_sentences_per_topic(const LdaModel<double>& model,
                                                   const DocTermMatrix<double>& matrix);

/// Drops summaries whose keyword set repeats an earlier one from the same
/// (concept, group) stratum, folds their sentence counts into the survivor
/// and renumbers each stratum's topics 1..m in order.
std::vector<TopicSummary> remove_duplicates(const std::vector<TopicSummary>& summaries);

struct StratumOutcome {
  ConceptId concept_id;
  std::string group;
  ExtractionResult result;
};

/// Runs every (concept, group) pair present in the corpus, ordered by concept
/// id then group name. `defaults.concept_id` / `defaults.group`, when set,
/// restrict the pairs visited.
std::vector<StratumOutcome> extract_strata(const Corpus& corpus,
                                           const ExtractionRequest& defaults);

/// Summaries of every stratum with data, in extract_strata order.
std::vector<TopicSummary> extract_all(const Corpus& corpus, const ExtractionRequest& defaults);

inline constexpr std::string_view kTopicsCsvHeader =
    "Concept,Ethnicity,Topic,Keywords,SentenceCount";

/// Concept names come from `taxonomy`; keywords are joined with ", " in one
/// always-quoted field.
void export_topics_csv(const std::vector<TopicSummary>& summaries,
                       const ConceptTaxonomy& taxonomy, std::ostream& out);
std::vector<TopicSummary> parse_topics_csv(std::istream& in, const ConceptTaxonomy& taxonomy);

/// Sentence counts per (group, topic index), summed over concepts.
struct GroupAggregate {
  std::map<std::string, std::map<int, std::size_t>> cells;
  int max_topic = 0;

  std::size_t cell(const std::string& group, int topic) const;
  std::size_t total(const std::string& group) const;
};

GroupAggregate aggregate_by_group(const std::vector<TopicSummary>& summaries);

/// `Ethnicity,Topic 1..Topic N,Total sentences` with N = max(min_topics,
/// largest topic index); missing cells are 0.
void write_aggregate_csv(const GroupAggregate& agg, std::ostream& out, int min_topics = 0);

}  // namespace stratatopics
