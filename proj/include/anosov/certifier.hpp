#pragma once

// End-to-end run: config -> Cayley survey -> assumption check -> certificate.

#include <optional>
#include <string>
#include <vector>

#include "anosov/cayley.hpp"
#include "anosov/criteria.hpp"
#include "anosov/types.hpp"

namespace anosov::certifier {

inline constexpr const char* kSchema = "anosov-cert/1";
inline constexpr const char* kToolVersion = "0.1.0";

struct GeneratorSpec {
  char name = 'a';
  Matrix matrix;
};

struct JobConfig {
  Field field = Field::real;
  int dim = 3;
  std::vector<GeneratorSpec> generators;
  int half_length = 4;
  double dedup_grid = 1e-6;
  double tolerance = 1e-9;
  int aux_grid = 64;
  std::optional<std::string> word_list;
  std::optional<double> t;
  std::vector<std::string> relators;

  // Throws ConfigError with a message naming the offending field.
  void validate() const;
};

// The genus-2 surface group in SO(2,1) < SL(3, R): four conjugates of one
// hyperbolic element by rotations about the e3 axis, k = 4.
JobConfig builtin_example();

cayley::GeneratorSet make_generators(const JobConfig& config);

enum class Verdict { certified, not_certified, regularity_obstruction, tolerance_collision };
const char* to_string(Verdict v);

struct WitnessWord {
  std::string word;
  double value = 0.0;
};

struct SurveyReport {
  std::string source;  // "cayley-ball" or "word-list"
  std::vector<std::size_t> sphere_sizes;
  std::size_t pair_count = 0;
  double spacing = 0.0;
  double eps = 0.0;
  double max_eps_plus = 0.0;
  double max_eps_minus = 0.0;
  WitnessWord min_s;
  WitnessWord worst_plus;
  WitnessWord worst_minus;
  std::size_t flagged_count = 0;
  std::vector<std::string> flagged_words;  // first few only
};

struct Certificate {
  std::string schema = kSchema;
  std::string tool_version = kToolVersion;
  std::string config_digest;
  int dim = 0;
  int half_length = 0;
  Verdict verdict = Verdict::not_certified;
  std::string diagnostic;
  std::optional<SurveyReport> survey;
  double eps_max = 0.0;
  std::optional<criteria::AuxParams> aux;
  std::optional<criteria::AssumptionReport> report;
  double wall_time_seconds = 0.0;
};

struct RunOptions {
  int threads = 0;  // 0: default_threads()
  // Overrides for the corresponding config fields.
  std::optional<std::string> word_list;
  std::optional<double> t;
  std::optional<int> aux_grid;
};

// Errors other than tolerance collisions and regularity failures (which become
// verdicts) propagate as anosov::Error.
Certificate run(const JobConfig& config, const RunOptions& options = {});

}  // namespace anosov::certifier
