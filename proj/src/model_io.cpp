#include "stratatopics/model_io.hpp"

#include "json.hpp"

namespace stratatopics {
namespace {

using Json = nlohmann::ordered_json;

Json rows(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd matrix(const Json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) {
      throw ValidationError("ragged matrix in model JSON");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) = j[r][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

}  // namespace

void save_model_json(const LdaModel<double>& model, std::ostream& out) {
  Json doc;
  doc["format"] = "stratatopics-lda";
  doc["version"] = kModelFormatVersion;
  doc["num_topics"] = model.num_topics();
  doc["alpha"] = model.config.doc_prior();
  doc["eta"] = model.config.topic_prior();
  doc["seed"] = model.config.seed;
  doc["max_iter"] = model.config.max_iter;
  doc["tol"] = model.config.tol;
  doc["iterations"] = model.iterations;
  doc["converged"] = model.converged;
  doc["vocab"] = model.vocab.terms();
  doc["topic_word"] = rows(model.topic_word);
  doc["topic_param"] = rows(model.topic_param);
  doc["doc_topic"] = rows(model.doc_topic);
  doc["elbo_trace"] = model.elbo_trace;
  out << doc.dump() << '\n';
}

LdaModel<double> load_model_json(std::istream& in) {
  try {
    const Json doc = Json::parse(in);
    if (doc.at("format") != "stratatopics-lda") throw ValidationError("not an LDA model document");
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw ValidationError("unsupported model version");
    }
    LdaModel<double> m;
    m.config.num_topics = doc.at("num_topics").get<int>();
    m.config.alpha = doc.at("alpha").get<double>();
    m.config.eta = doc.at("eta").get<double>();
    m.config.seed = doc.at("seed").get<std::uint64_t>();
    m.config.max_iter = doc.at("max_iter").get<int>();
    m.config.tol = doc.at("tol").get<double>();
    m.iterations = doc.at("iterations").get<int>();
    m.converged = doc.at("converged").get<bool>();
    m.vocab = Vocabulary(doc.at("vocab").get<std::vector<std::string>>());
    m.topic_word = matrix(doc.at("topic_word"), m.vocab.size());
    m.topic_param = matrix(doc.at("topic_param"), m.vocab.size());
    m.doc_topic = matrix(doc.at("doc_topic"), m.config.num_topics);
    m.elbo_trace = doc.at("elbo_trace").get<std::vector<double>>();
    if (m.topic_word.rows() != m.config.num_topics || m.topic_param.rows() != m.config.num_topics) {
      throw ValidationError("topic matrix row count does not match num_topics");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid model JSON: ") + e.what());
  }
}

}  // namespace stratatopics
