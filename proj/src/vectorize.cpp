#include "stratatopics/vectorize.hpp"

namespace stratatopics {

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw ValidationError("vocabulary terms must be sorted and unique");
    }
    index_.emplace(terms_[i], static_cast<Eigen::Index>(i));
  }
}

std::optional<Eigen::Index> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs) {
  return detail::vocabulary_from(docs);
}

Vocabulary build_vocabulary(std::span<const CleanedSentence> docs) {
  return detail::vocabulary_from(detail::token_lists(docs));
}

std::string_view to_string(WeightMode mode) noexcept {
  switch (mode) {
    case WeightMode::Counts: return "counts";
    case WeightMode::Tfidf: return "tfidf";
    case WeightMode::TfidfL2: return "tfidf-l2";
  }
  return "counts";
}

template struct DocTermMatrix<double>;
template struct SimilarityMatrix<double>;

}  // namespace stratatopics
