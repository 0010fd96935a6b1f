#pragma once

#include <istream>
#include <ostream>

#include "stratatopics/lda.hpp"

namespace stratatopics {

inline constexpr int kModelFormatVersion = 1;

/// Versioned JSON: vocab, K, alpha, eta, seed, row-major matrices
/// (topic_word, topic_param, doc_topic) and the ELBO trace.
void save_model_json(const LdaModel<double>& model, std::ostream& out);
/// Throws ValidationError on a malformed document or unsupported version.
LdaModel<double> load_model_json(std::istream& in);

}  // namespace stratatopics
