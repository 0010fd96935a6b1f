#include "stratatopics/topics.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "stratatopics/csv.hpp"
#include "stratatopics/error.hpp"

namespace stratatopics {
namespace {

std::string concept_label(const std::optional<ConceptId>& concept_id,
                          const ConceptTaxonomy& taxonomy) {
  return concept_id ? taxonomy.name(*concept_id) : std::string(kAllLabel);
}

std::string group_label(const std::optional<std::string>& group) {
  return group ? *group : std::string(kAllLabel);
}

}  // namespace

void ExtractionRequest::validate() const {
  if (num_topics < 1) throw ConfigError("num_topics must be >= 1");
  if (top_n < 1) throw ConfigError("top_n must be >= 1");
  clean.validate();
  LdaConfig<double> cfg = lda;
  cfg.num_topics = num_topics;
  cfg.validate();
}

std::string NoData::message() const {
  switch (reason) {
    case Reason::EmptySubset: return "no data: the selected stratum is empty";
    case Reason::NothingAfterCleaning:
      return "no data: no sentence in the stratum has tokens left after cleaning";
  }
  return "no data";
}

std::vector<std::size_t> count_sentences_per_topic(const LdaModel<double>& model,
                                                   const DocTermMatrix<double>& matrix) {
  if (model.doc_topic.rows() != matrix.docs()) {
    throw ValidationError("model was not fitted on this matrix");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(model.doc_topic.cols()), 0);
  for (Eigen::Index d = 0; d < model.doc_topic.rows(); ++d) {
    Eigen::Index best = 0;
    model.doc_topic.row(d).maxCoeff(&best);  // first maximum
    ++counts[static_cast<std::size_t>(best)];
  }
  return counts;
}

std::vector<TopicSummary> remove_duplicates(const std::vector<TopicSummary>& summaries) {
  using Key = std::pair<std::optional<ConceptId>, std::optional<std::string>>;
  std::vector<TopicSummary> out;
  std::map<Key, std::vector<std::pair<std::set<std::string>, std::size_t>>> seen;
  std::map<Key, int> next_index;
  for (const auto& s : summaries) {
    Key key{s.concept_id, s.group};
    std::set<std::string> words(s.keywords.begin(), s.keywords.end());
    auto& stratum = seen[key];
    auto dup = std::find_if(stratum.begin(), stratum.end(),
                            [&](const auto& e) { return e.first == words; });
    if (dup != stratum.end()) {
      out[dup->second].sentence_count += s.sentence_count;
      continue;
    }
    stratum.emplace_back(std::move(words), out.size());
    TopicSummary kept = s;
    kept.topic_index = ++next_index[key];
    out.push_back(std::move(kept));
  }
  return out;
}

ExtractionResult extract_topics(const Corpus& corpus, const ExtractionRequest& req) {
  req.validate();
  const Corpus stratum = subset(corpus, req.concept_id, req.group);
  if (stratum.empty()) return NoData{NoData::Reason::EmptySubset};

  static const auto tagger = default_tagger();
  std::vector<CleanedSentence> retained;
  for (auto& c : clean_corpus(stratum, req.clean, *tagger)) {
    if (!c.tokens.empty()) retained.push_back(std::move(c));
  }
  if (retained.empty()) return NoData{NoData::Reason::NothingAfterCleaning};

  const Vocabulary vocab = build_vocabulary(std::span<const CleanedSentence>(retained));
  DocTermMatrix<double> matrix;
  if (req.lda_input == WeightMode::Counts) {
    std::vector<std::vector<std::string>> lists;
    for (const auto& r : retained) lists.push_back(r.tokens);
    matrix = count_matrix<double>(std::span<const std::vector<std::string>>(lists), vocab);
  } else {
    matrix = tfidf<double>(std::span<const CleanedSentence>(retained), vocab, req.idf);
    if (req.lda_input == WeightMode::TfidfL2) matrix = l2_normalize(std::move(matrix));
  }

  LdaConfig<double> cfg = req.lda;
  cfg.num_topics = req.num_topics;

  StratumTopics out;
  out.stratum_size = stratum.size();
  out.model = fit_lda(matrix, cfg);
  const int n = static_cast<int>(std::min<Eigen::Index>(req.top_n, vocab.size()));
  out.raw_keywords = top_words(out.model, vocab, n);
  out.raw_counts = count_sentences_per_topic(out.model, matrix);

  std::vector<TopicSummary> raw;
  for (std::size_t t = 0; t < out.raw_keywords.size(); ++t) {
    raw.push_back({req.concept_id, req.group, static_cast<int>(t + 1), out.raw_keywords[t],
                   out.raw_counts[t]});
  }
  out.summaries = remove_duplicates(raw);
  out.matrix = std::move(matrix);
  out.retained = std::move(retained);
  return out;
}

std::vector<StratumOutcome> extract_strata(const Corpus& corpus,
                                           const ExtractionRequest& defaults) {
  std::set<std::pair<ConceptId, std::string>> pairs;
  for (const auto& s : corpus.sentences()) {
    if (defaults.group && s.ethnicity != *defaults.group) continue;
    for (ConceptId c : s.concepts) {
      if (defaults.concept_id && c != *defaults.concept_id) continue;
      pairs.emplace(c, s.ethnicity);
    }
  }
  std::vector<StratumOutcome> out;
  for (const auto& [concept_id, group] : pairs) {
    ExtractionRequest req = defaults;
    req.concept_id = concept_id;
    req.group = group;
    out.push_back({concept_id, group, extract_topics(corpus, req)});
  }
  return out;
}

std::vector<TopicSummary> extract_all(const Corpus& corpus, const ExtractionRequest& defaults) {
  std::vector<TopicSummary> out;
  for (auto& outcome : extract_strata(corpus, defaults)) {
    if (auto* topics = std::get_if<StratumTopics>(&outcome.result)) {
      out.insert(out.end(), topics->summaries.begin(), topics->summaries.end());
    }
  }
  return out;
}

void export_topics_csv(const std::vector<TopicSummary>& summaries,
                       const ConceptTaxonomy& taxonomy, std::ostream& out) {
  out << kTopicsCsvHeader << '\n';
  for (const auto& s : summaries) {
    std::string keywords;
    for (std::size_t i = 0; i < s.keywords.size(); ++i) {
      if (i) keywords += ", ";
      keywords += s.keywords[i];
    }
    out << csv::escape(concept_label(s.concept_id, taxonomy)) << ','
        << csv::escape(group_label(s.group)) << ',' << s.topic_index << ','
        << csv::quote(keywords) << ',' << s.sentence_count << '\n';
  }
  if (!out) throw IoError("failed writing topics CSV");
}

std::vector<TopicSummary> parse_topics_csv(std::istream& in, const ConceptTaxonomy& taxonomy) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || csv::join_row(*header) != kTopicsCsvHeader) {
    throw ParseError(1, "expected header " + std::string(kTopicsCsvHeader));
  }
  std::vector<TopicSummary> out;
  while (auto rec = reader.next()) {
    if (rec->size() == 1 && rec->front().empty()) continue;
    if (rec->size() != 5) throw ParseError(reader.row(), "expected 5 fields");
    TopicSummary s;
    const auto& r = *rec;
    if (r[0] != kAllLabel) {
      auto id = taxonomy.resolve(r[0]);
      if (!id) throw ValidationError("unknown concept '" + r[0] + "'");
      s.concept_id = *id;
    }
    if (r[1] != kAllLabel) s.group = r[1];
    try {
      s.topic_index = std::stoi(r[2]);
      s.sentence_count = static_cast<std::size_t>(std::stoull(r[4]));
    } catch (const std::exception&) {
      throw ParseError(reader.row(), "invalid number");
    }
    std::string_view kw = r[3];
    while (!kw.empty()) {
      auto cut = kw.find(", ");
      s.keywords.emplace_back(kw.substr(0, cut));
      kw = cut == std::string_view::npos ? std::string_view{} : kw.substr(cut + 2);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::size_t GroupAggregate::cell(const std::string& group, int topic) const {
  auto g = cells.find(group);
  if (g == cells.end()) return 0;
  auto c = g->second.find(topic);
  return c == g->second.end() ? 0 : c->second;
}

std::size_t GroupAggregate::total(const std::string& group) const {
  std::size_t sum = 0;
  if (auto g = cells.find(group); g != cells.end()) {
    for (const auto& [topic, n] : g->second) sum += n;
  }
  return sum;
}

GroupAggregate aggregate_by_group(const std::vector<TopicSummary>& summaries) {
  GroupAggregate agg;
  for (const auto& s : summaries) {
    agg.cells[group_label(s.group)][s.topic_index] += s.sentence_count;
    agg.max_topic = std::max(agg.max_topic, s.topic_index);
  }
  return agg;
}

void write_aggregate_csv(const GroupAggregate& agg, std::ostream& out, int min_topics) {
  const int columns = std::max(min_topics, agg.max_topic);
  out << "Ethnicity";
  for (int t = 1; t <= columns; ++t) out << ",Topic " << t;
  out << ",Total sentences\n";
  for (const auto& [group, row] : agg.cells) {
    out << csv::escape(group);
    for (int t = 1; t <= columns; ++t) out << ',' << agg.cell(group, t);
    out << ',' << agg.total(group) << '\n';
  }
  if (!out) throw IoError("failed writing aggregate CSV");
}

}  // namespace stratatopics
