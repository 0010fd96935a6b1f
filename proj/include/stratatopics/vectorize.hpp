#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stratatopics/error.hpp"
#include "stratatopics/preprocess.hpp"

namespace stratatopics {

/// Sorted, duplicate-free term list with a term -> column lookup.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// `terms` must already be sorted and unique.
  explicit Vocabulary(std::vector<std::string> terms);

  Eigen::Index size() const noexcept {
    return static_cast<Eigen::Index>(terms_.size());
  }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::string& term(Eigen::Index i) const {
    return terms_.at(static_cast<std::size_t>(i));
  }
  std::optional<Eigen::Index> find(std::string_view term) const;

  bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs);
Vocabulary build_vocabulary(std::span<const CleanedSentence> docs);

enum class WeightMode { Counts, Tfidf, TfidfL2 };
std::string_view to_string(WeightMode mode) noexcept;

/// smoothed: ln((1 + D) / (1 + df)) + 1;  plain: ln(D / df).
enum class IdfVariant { Smoothed, Plain };

template <typename Scalar = double>
struct DocTermMatrix {
  using Sparse = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

  Sparse weights;  // docs x terms, nonnegative
  WeightMode mode = WeightMode::Counts;
  Vocabulary vocab;

  Eigen::Index docs() const noexcept { return weights.rows(); }
  Eigen::Index terms() const noexcept { return weights.cols(); }
};

template <typename Scalar = double>
struct SimilarityMatrix {
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<std::string> terms;  // row/column labels
  Dense values;

  std::optional<Eigen::Index> index_of(std::string_view term) const {
    auto it = std::find(terms.begin(), terms.end(), term);
    if (it == terms.end()) return std::nullopt;
    return static_cast<Eigen::Index>(it - terms.begin());
  }
  /// Throws ValidationError for a term that is not a label.
  Scalar operator()(std::string_view a, std::string_view b) const {
    auto i = index_of(a);
    auto j = index_of(b);
    if (!i) throw ValidationError("term not in similarity matrix: " + std::string(a));
    if (!j) throw ValidationError("term not in similarity matrix: " + std::string(b));
    return values(*i, *j);
  }
};

namespace detail {

template <typename Docs>
Vocabulary vocabulary_from(const Docs& docs) {
  std::vector<std::string> terms;
  for (const auto& tokens : docs) terms.insert(terms.end(), tokens.begin(), tokens.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return Vocabulary(std::move(terms));
}

inline std::vector<std::vector<std::string>> token_lists(
    std::span<const CleanedSentence> docs) {
  std::vector<std::vector<std::string>> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(d.tokens);
  return out;
}

}  // namespace detail

/// Raw term counts.
template <typename Scalar = double>
DocTermMatrix<Scalar> count_matrix(std::span<const std::vector<std::string>> docs,
                                   const Vocabulary& vocab) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& token : docs[d]) {
      auto t = vocab.find(token);
      if (!t) throw ValidationError("token not in vocabulary: " + token);
      triplets.emplace_back(static_cast<Eigen::Index>(d), *t, Scalar(1));
    }
  }
  DocTermMatrix<Scalar> m;
  m.weights.resize(static_cast<Eigen::Index>(docs.size()), vocab.size());
  m.weights.setFromTriplets(triplets.begin(), triplets.end());  // sums duplicates
  m.weights.makeCompressed();
  m.mode = WeightMode::Counts;
  m.vocab = vocab;
  return m;
}

/// Per-term idf over the documents of a count matrix. Terms with df = 0 get 0
/// under the plain variant, where the formula is undefined.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inverse_document_frequency(
    const DocTermMatrix<Scalar>& counts, IdfVariant variant = IdfVariant::Smoothed) {
  const Eigen::Index n_docs = counts.docs();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> df =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(counts.terms());
  for (Eigen::Index d = 0; d < counts.weights.outerSize(); ++d) {
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(counts.weights, d); it; ++it) {
      if (it.value() != Scalar(0)) df(it.col()) += Scalar(1);
    }
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> idf(counts.terms());
  for (Eigen::Index t = 0; t < idf.size(); ++t) {
    if (variant == IdfVariant::Smoothed) {
      idf(t) = std::log((Scalar(1) + Scalar(n_docs)) / (Scalar(1) + df(t))) + Scalar(1);
    } else {
      idf(t) = df(t) > 0 ? std::log(Scalar(n_docs) / df(t)) : Scalar(0);
    }
  }
  return idf;
}

/// tf * idf with raw-count tf. Throws ValidationError("empty vocabulary").
template <typename Scalar = double>
DocTermMatrix<Scalar> tfidf(std::span<const std::vector<std::string>> docs,
                            const Vocabulary& vocab,
                            IdfVariant variant = IdfVariant::Smoothed) {
  if (vocab.empty()) throw ValidationError("empty vocabulary");
  DocTermMatrix<Scalar> m = count_matrix<Scalar>(docs, vocab);
  const auto idf = inverse_document_frequency(m, variant);
  m.weights = m.weights * idf.asDiagonal();
  m.weights.prune([](Eigen::Index, Eigen::Index, const Scalar& v) { return v != Scalar(0); });
  m.weights.makeCompressed();
  m.mode = WeightMode::Tfidf;
  return m;
}

template <typename Scalar = double>
DocTermMatrix<Scalar> tfidf(std::span<const CleanedSentence> docs, const Vocabulary& vocab,
                            IdfVariant variant = IdfVariant::Smoothed) {
  const auto lists = detail::token_lists(docs);
  return tfidf<Scalar>(std::span<const std::vector<std::string>>(lists), vocab, variant);
}

/// Scales every nonzero row to unit Euclidean norm; zero rows stay zero.
template <typename Scalar>
DocTermMatrix<Scalar> l2_normalize(DocTermMatrix<Scalar> m) {
  if (m.mode == WeightMode::TfidfL2) {
    throw ConfigError("matrix is already L2-normalized");
  }
  for (Eigen::Index d = 0; d < m.weights.outerSize(); ++d) {
    Scalar sq = 0;
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(m.weights, d); it; ++it) {
      sq += it.value() * it.value();
    }
    if (sq == Scalar(0)) continue;
    const Scalar norm = std::sqrt(sq);
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(m.weights, d); it; ++it) {
      it.valueRef() /= norm;
    }
  }
  m.mode = WeightMode::TfidfL2;
  return m;
}

namespace detail {

// Turns a Gram matrix into cosines. Mirrors the upper triangle so the
// result is exactly symmetric, and clamps rounding overshoot past +-1.
template <typename Scalar>
typename SimilarityMatrix<Scalar>::Dense cosine_from_gram(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram) {
  const Eigen::Index n = gram.rows();
  typename SimilarityMatrix<Scalar>::Dense sim(n, n);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> norms = gram.diagonal().cwiseSqrt();
  for (Eigen::Index j = 0; j < n; ++j) {
    sim(j, j) = norms(j) > Scalar(0) ? Scalar(1) : Scalar(0);
    for (Eigen::Index i = 0; i < j; ++i) {
      Scalar v = Scalar(0);
      if (norms(i) > Scalar(0) && norms(j) > Scalar(0)) {
        v = std::clamp(gram(i, j) / (norms(i) * norms(j)), Scalar(-1), Scalar(1));
      }
      sim(i, j) = v;
      sim(j, i) = v;
    }
  }
  return sim;
}

}  // namespace detail

/// Cosine between every pair of term columns (V x V).
template <typename Scalar>
SimilarityMatrix<Scalar> term_cosine_similarity(const DocTermMatrix<Scalar>& m) {
  const Eigen::SparseMatrix<Scalar, Eigen::ColMajor> cols = m.weights;
  const Eigen::SparseMatrix<Scalar, Eigen::ColMajor> gram_sparse =
      (cols.transpose() * cols).pruned();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram(gram_sparse);
  return {m.vocab.terms(), detail::cosine_from_gram<Scalar>(gram)};
}

/// Cosine restricted to `terms` (labels in the given order). Throws
/// ValidationError naming the first term missing from the vocabulary.
template <typename Scalar>
SimilarityMatrix<Scalar> term_cosine_similarity(const DocTermMatrix<Scalar>& m,
                                                std::span<const std::string> terms) {
  std::vector<Eigen::Index> cols;
  cols.reserve(terms.size());
  for (const auto& t : terms) {
    auto idx = m.vocab.find(t);
    if (!idx) throw ValidationError("unknown word: " + t);
    cols.push_back(*idx);
  }
  const Eigen::SparseMatrix<Scalar, Eigen::ColMajor> colmajor = m.weights;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> picked =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          m.docs(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    picked.col(static_cast<Eigen::Index>(k)) = colmajor.col(cols[k]);
  }
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram =
      picked.transpose() * picked;
  return {std::vector<std::string>(terms.begin(), terms.end()),
          detail::cosine_from_gram<Scalar>(gram)};
}

/// Matrix Market coordinate dump (1-based indices, row-major entry order).
template <typename Scalar>
void write_matrix_market(const DocTermMatrix<Scalar>& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << "% mode: " << to_string(m.mode) << '\n';
  out << m.docs() << ' ' << m.terms() << ' ' << m.weights.nonZeros() << '\n';
  char buf[64];
  for (Eigen::Index d = 0; d < m.weights.outerSize(); ++d) {
    for (typename DocTermMatrix<Scalar>::Sparse::InnerIterator it(m.weights, d); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(it.value()));
      out << (d + 1) << ' ' << (it.col() + 1) << ' ' << buf << '\n';
    }
  }
}

}  // namespace stratatopics
