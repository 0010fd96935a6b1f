#include "stratatopics/synth.hpp"

#include <array>
#include <cstdio>
#include <random>

#include "stratatopics/error.hpp"

namespace stratatopics {
namespace {

// Group-specific vocabularies; all nouns or verbs under the shipped tagger.
const std::array<std::vector<std::string>, 6> kThemes = {{
    {"interpreter", "language", "translation", "leaflet", "husband", "telephone", "family",
     "message", "explanation", "consent"},
    {"antihistamines", "allergy", "anaphylaxis", "tolerance", "reaction", "dose", "treatment",
     "symptoms", "triggers", "clinic"},
    {"cardiotocograph", "trace", "heartbeat", "auscultation", "monitor", "signal",
     "decelerations", "baseline", "rhythm", "machine"},
    {"waters", "leak", "membranes", "infection", "temperature", "swab", "antibiotics",
     "culture", "fever", "sample"},
    {"handover", "shift", "rota", "staffing", "workload", "manager", "vacancy", "roster",
     "coordinator", "capacity"},
    {"weight", "centile", "growth", "scan", "measurement", "chart", "percentile", "fundal",
     "height", "ultrasound"},
}};

// Two filler nouns per concept, shared across groups.
const std::array<std::array<const char*, 2>, 27> kConceptWords = {{
    {"acuity", "ward"},          {"booking", "appointment"}, {"screening", "test"},
    {"pandemic", "isolation"},   {"plan", "pathway"},        {"conversation", "information"},
    {"decision", "error"},       {"medication", "syringe"},  {"notes", "record"},
    {"referral", "escalation"},  {"guidance", "protocol"},   {"interpretation", "review"},
    {"barrier", "dialect"},      {"policy", "procedure"},    {"observations", "frequency"},
    {"benchmark", "framework"},  {"guideline", "recommendation"}, {"obstetrician", "registrar"},
    {"mass", "index"},           {"room", "environment"},    {"anxiety", "distress"},
    {"risk", "assessment"},      {"awareness", "situation"}, {"lapse", "omission"},
    {"team", "colleague"},       {"equipment", "device"},    {"training", "education"},
}};

const std::array<const char*, 8> kFiller = {"the", "was", "of", "and", "to", "with", "for", "a"};

struct Rng {
  std::mt19937_64 engine;
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }
};

std::string render(std::vector<std::string> words) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) text.push_back(' ');
    text += words[i];
  }
  if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text + ".";
}

std::string padded(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

}  // namespace

const std::vector<std::string>& synthetic_groups() {
  static const std::vector<std::string> groups = {
      "Asian", "Black", std::string(kNoGroupData), "Mixed Background", "Other White",
      "White British"};
  return groups;
}

const std::vector<std::string>& planted_vocabulary(std::size_t theme) {
  return kThemes.at(theme);
}

Corpus synthesize_corpus(const SynthConfig& cfg, const ConceptTaxonomy& taxonomy) {
  if (cfg.themes == 1 || cfg.themes < 0 || cfg.themes > static_cast<int>(kThemes.size())) {
    throw ConfigError("themes must be 0 or between 2 and " + std::to_string(kThemes.size()));
  }
  if (cfg.themes == 0 && taxonomy.size() == 0) throw ConfigError("taxonomy is empty");
  if (cfg.themes > 0 && !taxonomy.contains(cfg.concept_id)) {
    throw ConfigError("unknown concept id " + std::to_string(cfg.concept_id));
  }
  Rng rng{std::mt19937_64(cfg.seed)};
  std::vector<AnnotatedSentence> sentences;
  sentences.reserve(cfg.sentences);
  const auto& groups = synthetic_groups();

  for (std::size_t i = 0; i < cfg.sentences; ++i) {
    AnnotatedSentence s;
    s.file_id = padded("F", i / 20 + 1, 3);
    s.sentence_id = padded("S", i % 20 + 1, 2);
    s.year = 2019 + static_cast<int>(rng.below(4));

    std::vector<std::string> words;
    auto filler = [&] {
      if (rng.uniform() < 0.4) words.emplace_back(kFiller[rng.below(kFiller.size())]);
    };
    if (cfg.themes > 0) {
      s.concepts = {cfg.concept_id};
      s.ethnicity = cfg.group;
      const auto& vocab = kThemes[i % static_cast<std::size_t>(cfg.themes)];
      const std::size_t len = 6 + rng.below(4);
      for (std::size_t w = 0; w < len; ++w) {
        filler();
        words.push_back(vocab[rng.below(vocab.size())]);
      }
    } else {
      const std::size_t g = rng.below(groups.size());
      s.ethnicity = groups[g];
      const std::size_t n_concepts = rng.uniform() < 0.7 ? 1 : 2;
      while (s.concepts.size() < n_concepts) {
        s.concepts.insert(static_cast<ConceptId>(1 + rng.below(taxonomy.size())));
      }
      const auto& vocab = kThemes[g];
      for (std::size_t w = 0; w < 4; ++w) {
        filler();
        words.push_back(vocab[rng.below(vocab.size())]);
      }
      const auto first = static_cast<std::size_t>(*s.concepts.begin() - 1) % kConceptWords.size();
      for (std::size_t w = 0; w < 2; ++w) {
        filler();
        words.emplace_back(kConceptWords[first][rng.below(2)]);
      }
    }
    s.text = render(std::move(words));
    sentences.push_back(std::move(s));
  }
  return Corpus(taxonomy, std::move(sentences));
}

}  // namespace stratatopics
