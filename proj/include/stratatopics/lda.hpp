#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/SpecialFunctions>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stratatopics/error.hpp"
#include "stratatopics/vectorize.hpp"

// Latent Dirichlet Allocation by batch variational Bayes.
//
// Document-term entries are treated as real-valued weights w(d,v) (fractional
// counts), so L2-normalized TF-IDF can be fed directly. With variational
// Dirichlets gamma (doc-topic) and lambda (topic-word):
//
//   E-step, per document, warm-started from the previous gamma:
//     phi(v,k)  ~ exp(E[log theta(d,k)] + E[log beta(k,v)])
//     gamma(k)  = alpha + sum_v w(d,v) phi(v,k)
//   M-step:
//     lambda(k,v) = eta + sum_d w(d,v) phi(d,v,k)
//
// phi is never stored; the sufficient statistics are accumulated from the
// phi implied by the final gamma of each E-step. Every update is an exact
// coordinate maximum of
//
//   L(gamma, lambda) =
//       sum_{d,v} w(d,v) log sum_k exp(E[log theta(d,k)] + E[log beta(k,v)])
//     + sum_d [ log G(K alpha) - K log G(alpha)
//               + sum_k (alpha - gamma(d,k)) E[log theta(d,k)]
//               + sum_k log G(gamma(d,k)) - log G(sum_k gamma(d,k)) ]
//     + sum_k [ log G(V eta) - V log G(eta)
//               + sum_v (eta - lambda(k,v)) E[log beta(k,v)]
//               + sum_v log G(lambda(k,v)) - log G(sum_v lambda(k,v)) ]
//
// (phi maximized out), hence the recorded trace never decreases.

namespace stratatopics {

template <typename Scalar = double>
struct LdaConfig {
  int num_topics = 5;
  std::optional<Scalar> alpha;  // symmetric doc-topic prior, default 1/K
  std::optional<Scalar> eta;    // symmetric topic-word prior, default 1/K
  int max_iter = 100;
  Scalar tol = Scalar(1e-4);    // relative ELBO change
  std::uint64_t seed = 0;
  int estep_max_iter = 100;
  Scalar estep_tol = Scalar(1e-3);  // mean absolute gamma change

  Scalar doc_prior() const { return alpha.value_or(Scalar(1) / Scalar(num_topics)); }
  Scalar topic_prior() const { return eta.value_or(Scalar(1) / Scalar(num_topics)); }

  void validate() const {
    if (num_topics < 1) throw ConfigError("num_topics must be >= 1");
    if (!(doc_prior() > 0)) throw ConfigError("alpha must be positive");
    if (!(topic_prior() > 0)) throw ConfigError("eta must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (!(tol > 0)) throw ConfigError("tol must be positive");
    if (estep_max_iter < 1) throw ConfigError("estep_max_iter must be >= 1");
    if (!(estep_tol > 0)) throw ConfigError("estep_tol must be positive");
  }
};

template <typename Scalar = double>
struct LdaModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix topic_word;   // K x V, rows on the simplex
  Matrix doc_topic;    // D x K, rows on the simplex
  Matrix topic_param;  // K x V variational Dirichlet (lambda)
  std::vector<Scalar> elbo_trace;
  int iterations = 0;
  bool converged = false;
  LdaConfig<Scalar> config;
  Vocabulary vocab;

  int num_topics() const noexcept { return static_cast<int>(topic_word.rows()); }
};

namespace detail {

template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowArray = Eigen::Array<Scalar, 1, Eigen::Dynamic>;

// E[log X] for each row of a Dirichlet parameter matrix.
template <typename Scalar>
Array<Scalar> dirichlet_expectation(const Array<Scalar>& param) {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> row_sums = param.rowwise().sum();
  Array<Scalar> out = param.digamma();
  out.colwise() -= row_sums.digamma();
  return out;
}

// Uniform double in [0, 1) from raw engine bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Gamma(shape, 1/shape) draw for integer shape via a sum of exponentials.
inline double unit_mean_gamma(std::mt19937_64& rng, int shape) {
  double sum = 0;
  for (int i = 0; i < shape; ++i) sum -= std::log1p(-unit_uniform(rng));
  return sum / shape;
}

inline constexpr int kInitShape = 100;

template <typename Scalar>
struct EStepResult {
  Array<Scalar> gamma;  // D x K
  Array<Scalar> sstats; // K x V, already multiplied by exp(E[log beta])
};

// One E-step pass over every document. `gamma` is the warm start.
template <typename Scalar>
EStepResult<Scalar> e_step(const typename DocTermMatrix<Scalar>::Sparse& w,
                           const Array<Scalar>& exp_elog_beta, Array<Scalar> gamma,
                           Scalar alpha, int max_iter, Scalar tol) {
  const Eigen::Index k = exp_elog_beta.rows();
  Array<Scalar> sstats = Array<Scalar>::Zero(k, exp_elog_beta.cols());
  std::vector<Eigen::Index> ids;
  std::vector<Scalar> cts;
  for (Eigen::Index d = 0; d < w.outerSize(); ++d) {
    ids.clear();
    cts.clear();
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(w, d); it; ++it) {
      if (it.value() > Scalar(0)) {
        ids.push_back(it.col());
        cts.push_back(it.value());
      }
    }
    if (ids.empty()) {
      gamma.row(d).setConstant(alpha);
      continue;
    }
    const Eigen::Index n = static_cast<Eigen::Index>(ids.size());
    Array<Scalar> beta_d(k, n);
    for (Eigen::Index j = 0; j < n; ++j) beta_d.col(j) = exp_elog_beta.col(ids[j]);
    const Eigen::Map<const Eigen::Array<Scalar, 1, Eigen::Dynamic>> counts(cts.data(), n);

    RowArray<Scalar> gamma_d = gamma.row(d);
    auto exp_elog_theta = [](const RowArray<Scalar>& g) -> RowArray<Scalar> {
      return (g.digamma() - Eigen::numext::digamma(g.sum())).exp();
    };
    RowArray<Scalar> theta = exp_elog_theta(gamma_d);
    RowArray<Scalar> phinorm = (theta.matrix() * beta_d.matrix()).array() + Scalar(1e-100);
    for (int iter = 0; iter < max_iter; ++iter) {
      const RowArray<Scalar> last = gamma_d;
      const RowArray<Scalar> ratio = counts / phinorm;
      gamma_d = alpha + theta * (beta_d.matrix() * ratio.matrix().transpose()).array().transpose();
      theta = exp_elog_theta(gamma_d);
      phinorm = (theta.matrix() * beta_d.matrix()).array() + Scalar(1e-100);
      if ((gamma_d - last).abs().mean() < tol) break;
    }
    gamma.row(d) = gamma_d;
    const RowArray<Scalar> ratio = counts / phinorm;
    for (Eigen::Index j = 0; j < n; ++j) {
      sstats.col(ids[j]) += theta.transpose() * ratio(j);
    }
  }
  sstats *= exp_elog_beta;
  return {std::move(gamma), std::move(sstats)};
}

template <typename Scalar>
Scalar evidence_lower_bound(const typename DocTermMatrix<Scalar>::Sparse& w,
                            const Array<Scalar>& gamma, const Array<Scalar>& lambda,
                            Scalar alpha, Scalar eta) {
  using std::lgamma;
  const Eigen::Index k = lambda.rows();
  const Eigen::Index v = lambda.cols();
  const Array<Scalar> elog_theta = dirichlet_expectation<Scalar>(gamma);
  const Array<Scalar> elog_beta = dirichlet_expectation<Scalar>(lambda);

  Scalar score = 0;
  for (Eigen::Index d = 0; d < w.outerSize(); ++d) {
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(w, d); it; ++it) {
      if (!(it.value() > Scalar(0))) continue;
      const Eigen::Array<Scalar, Eigen::Dynamic, 1> terms =
          elog_theta.row(d).transpose() + elog_beta.col(it.col());
      const Scalar top = terms.maxCoeff();
      score += it.value() * (top + std::log((terms - top).exp().sum()));
    }
  }

  const Scalar d_count = static_cast<Scalar>(gamma.rows());
  score += ((alpha - gamma) * elog_theta).sum();
  score += gamma.lgamma().sum();
  score -= gamma.rowwise().sum().lgamma().sum();
  score += d_count * (lgamma(Scalar(k) * alpha) - Scalar(k) * lgamma(alpha));

  score += ((eta - lambda) * elog_beta).sum();
  score += lambda.lgamma().sum();
  score -= lambda.rowwise().sum().lgamma().sum();
  score += Scalar(k) * (lgamma(Scalar(v) * eta) - Scalar(v) * lgamma(eta));
  return score;
}

template <typename Scalar>
typename LdaModel<Scalar>::Matrix row_normalized(const Array<Scalar>& a) {
  Array<Scalar> out = a;
  out.colwise() /= a.rowwise().sum();
  return out.matrix();
}

}  // namespace detail

/// Fits K topics. Throws ConfigError for a bad config and
/// ValidationError("no signal") when every weight is zero.
template <typename Scalar>
LdaModel<Scalar> fit_lda(const DocTermMatrix<Scalar>& m, const LdaConfig<Scalar>& cfg) {
  using detail::Array;
  cfg.validate();
  const Eigen::Index k = cfg.num_topics;
  const Eigen::Index v = m.terms();
  const Scalar alpha = cfg.doc_prior();
  const Scalar eta = cfg.topic_prior();

  Eigen::Array<Scalar, Eigen::Dynamic, 1> doc_mass = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(m.docs());
  for (Eigen::Index d = 0; d < m.weights.outerSize(); ++d) {
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(m.weights, d); it; ++it) {
      if (it.value() < Scalar(0)) throw ValidationError("negative document-term weight");
      doc_mass(d) += it.value();
    }
  }
  const Scalar total_mass = doc_mass.sum();
  if (!(total_mass > Scalar(0))) throw ValidationError("no signal");

  // Seeded positive perturbations around uniform, normalized per topic and
  // scaled so each topic starts with an even share of the corpus mass.
  std::mt19937_64 rng(cfg.seed);
  Array<Scalar> lambda(k, v);
  for (Eigen::Index t = 0; t < k; ++t) {
    for (Eigen::Index j = 0; j < v; ++j) {
      lambda(t, j) = static_cast<Scalar>(detail::unit_mean_gamma(rng, detail::kInitShape));
    }
  }
  lambda.colwise() /= lambda.rowwise().sum();
  lambda = eta + lambda * (total_mass / Scalar(k));

  Array<Scalar> gamma(m.docs(), k);
  for (Eigen::Index d = 0; d < m.docs(); ++d) {
    gamma.row(d).setConstant(alpha + doc_mass(d) / Scalar(k));
  }

  LdaModel<Scalar> model;
  model.config = cfg;
  model.vocab = m.vocab;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const Array<Scalar> exp_elog_beta = detail::dirichlet_expectation<Scalar>(lambda).exp();
    auto estep = detail::e_step<Scalar>(m.weights, exp_elog_beta, std::move(gamma), alpha,
                                        cfg.estep_max_iter, cfg.estep_tol);
    gamma = std::move(estep.gamma);
    lambda = eta + estep.sstats;
    model.elbo_trace.push_back(detail::evidence_lower_bound<Scalar>(m.weights, gamma, lambda, alpha, eta));
    model.iterations = iter + 1;
    const auto& trace = model.elbo_trace;
    if (trace.size() >= 2) {
      const Scalar prev = trace[trace.size() - 2];
      if (std::abs(trace.back() - prev) <= cfg.tol * std::abs(prev)) {
        model.converged = true;
        break;
      }
    }
  }

  // Settle the document mixtures against the final topics.
  const Array<Scalar> exp_elog_beta = detail::dirichlet_expectation<Scalar>(lambda).exp();
  gamma = detail::e_step<Scalar>(m.weights, exp_elog_beta, std::move(gamma), alpha,
                                 cfg.estep_max_iter, cfg.estep_tol).gamma;

  model.topic_param = lambda.matrix();
  model.topic_word = detail::row_normalized<Scalar>(lambda);
  model.doc_topic = detail::row_normalized<Scalar>(gamma);
  return model;
}

/// Doc-topic mixtures for new documents against frozen topics.
template <typename Scalar>
typename LdaModel<Scalar>::Matrix transform(const LdaModel<Scalar>& model,
                                            const DocTermMatrix<Scalar>& m) {
  using detail::Array;
  if (!(m.vocab == model.vocab)) throw ValidationError("vocabulary mismatch");
  const Eigen::Index k = model.num_topics();
  const Scalar alpha = model.config.doc_prior();
  Array<Scalar> gamma(m.docs(), k);
  for (Eigen::Index d = 0; d < m.docs(); ++d) {
    Scalar mass = 0;
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(m.weights, d); it; ++it) {
      mass += std::max(it.value(), Scalar(0));
    }
    gamma.row(d).setConstant(alpha + mass / Scalar(k));
  }
  const Array<Scalar> exp_elog_beta =
      detail::dirichlet_expectation<Scalar>(model.topic_param.array()).exp();
  gamma = detail::e_step<Scalar>(m.weights, exp_elog_beta, std::move(gamma), alpha,
                                 model.config.estep_max_iter, model.config.estep_tol).gamma;
  return detail::row_normalized<Scalar>(gamma);
}

/// The n most probable terms per topic, descending; ties go to the
/// lexicographically smaller term. Throws ConfigError unless 1 <= n <= V.
template <typename Scalar>
std::vector<std::vector<std::string>> top_words(const LdaModel<Scalar>& model,
                                                const Vocabulary& vocab, int n) {
  const Eigen::Index v = model.topic_word.cols();
  if (vocab.size() != v) throw ValidationError("vocabulary mismatch");
  if (n < 1 || n > v) {
    throw ConfigError("top-n must be in [1, " + std::to_string(v) + "], got " +
                      std::to_string(n));
  }
  std::vector<std::vector<std::string>> out;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(v));
  for (Eigen::Index t = 0; t < model.topic_word.rows(); ++t) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::partial_sort(order.begin(), order.begin() + n, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        const Scalar pa = model.topic_word(t, a);
                        const Scalar pb = model.topic_word(t, b);
                        if (pa != pb) return pa > pb;
                        return vocab.term(a) < vocab.term(b);
                      });
    std::vector<std::string> words;
    for (int i = 0; i < n; ++i) words.push_back(vocab.term(order[static_cast<std::size_t>(i)]));
    out.push_back(std::move(words));
  }
  return out;
}

template <typename Scalar>
std::vector<std::vector<std::string>> top_words(const LdaModel<Scalar>& model, int n) {
  return top_words(model, model.vocab, n);
}

}  // namespace stratatopics
