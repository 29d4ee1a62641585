#pragma once

// Checker for the five assumptions under which an S-spaced, eps-straight sequence
// is d_alpha-undistorted with constants (S - 2 delta4, 2 delta4).

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace anosov::criteria {

struct StraightSpacedStats {
  int dim = 3;
  double eps = 0.0;  // radians
  double spacing = 0.0;
  std::size_t pair_count = 0;
};

struct AuxParams {
  double eps_aux = 0.0;  // radians
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double delta4 = 0.0;
  std::optional<double> t;  // interpolation weight when produced by derive_aux
};

// One inequality: pass iff margin satisfies the assumption's (strict or weak)
// comparison. margin is the signed distance to the threshold, positive = slack.
struct AssumptionCheck {
  double value = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string note;
};

struct AssumptionReport {
  std::array<AssumptionCheck, 5> checks;
  bool verdict = false;
  std::optional<double> c1;
  std::optional<double> c2;

  double min_margin() const;
};

double eps_max(int dim);

AssumptionReport verify_assumptions(const StraightSpacedStats& stats, const AuxParams& aux);

// eps_aux = (1 - t) eps + t eps_max and each delta the exact inversion of its
// angle-to-distance inequality (rounded up by a relative 1e-12).
AuxParams derive_aux(const StraightSpacedStats& stats, double t);

struct AuxSearchResult {
  std::optional<AuxParams> aux;
  std::optional<AssumptionReport> report;
  // When nothing passes: the best configuration seen and why.
  std::optional<AuxParams> best_aux;
  std::optional<AssumptionReport> best_report;
  std::string diagnostic;
};

// Tries t = 0.3 first and returns it if it passes; otherwise scans t over
// {i / (grid + 1)} and keeps the passing configuration with the largest minimal
// margin. A t_override replaces the whole scan.
AuxSearchResult search_aux(const StraightSpacedStats& stats, int grid,
                           std::optional<double> t_override = std::nullopt);

}  // namespace anosov::criteria
