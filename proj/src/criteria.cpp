#include "anosov/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "anosov/symspace.hpp"
#include "anosov/types.hpp"

namespace anosov::criteria {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDefaultT = 0.3;

double sech2(double x) {
  const double s = 1.0 / std::cosh(x);
  return s * s;
}

// (1 - d) cos(theta) + d sech^2(delta), compared against 1.
double angle_distance_lhs(int d, double theta, double delta) {
  return (1.0 - d) * std::cos(theta) + d * sech2(delta);
}

// Distance bound delta3 + (e^delta3 - 1) e^{-S} used for delta4.
double cone_offset(double delta3, double spacing) {
  return delta3 + std::expm1(delta3) * std::exp(-spacing);
}

// Smallest delta with (1 - d) cos(theta) + d sech^2(delta) <= 1.
double invert_angle_distance(int d, double theta) {
  const double x = (1.0 - (1.0 - d) * std::cos(theta)) / d;
  if (!(x > 0.0)) {
    throw Error(ErrorCode::eps_too_large, "angle too large for a finite parallel-set distance");
  }
  const double delta = std::acosh(1.0 / std::sqrt(std::min(1.0, x)));
  // Round up so the weak inequality survives floating-point evaluation.
  return delta * (1.0 + 1e-12) + 1e-15;
}

void validate(const StraightSpacedStats& stats) {
  if (stats.dim < 2) throw Error(ErrorCode::invalid_input, "dimension must be >= 2");
  if (!(stats.eps >= 0.0) || !(stats.spacing >= 0.0)) {
    throw Error(ErrorCode::invalid_input, "eps and S must be non-negative");
  }
}

}  // namespace

double AssumptionReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) m = std::min(m, c.margin);
  return m;
}

double eps_max(int dim) {
  if (dim < 2) throw Error(ErrorCode::invalid_input, "dimension must be >= 2");
  // acos(-1/2) lands one ulp off 2 pi / 3.
  if (dim == 2) return kPi;
  if (dim == 3) return 2.0 * kPi / 3.0;
  return std::acos(-1.0 / (dim - 1.0));
}

AssumptionReport verify_assumptions(const StraightSpacedStats& stats, const AuxParams& aux) {
  validate(stats);
  if (!(aux.eps_aux > stats.eps)) {
    throw Error(ErrorCode::invalid_aux, "eps_aux must exceed eps");
  }
  if (aux.delta1 < 0 || aux.delta2 < 0 || aux.delta3 < 0 || aux.delta4 < 0) {
    throw Error(ErrorCode::invalid_aux, "deltas must be non-negative");
  }
  const int d = stats.dim;
  const double S = stats.spacing;
  const double eps = stats.eps;
  AssumptionReport report;

  {  // 1: the relevant simplices are antipodal.
    auto& c = report.checks[0];
    c.threshold = -1.0 / (d - 1.0);
    const double arg2 = 2.0 * aux.eps_aux - eps;
    bool guarded = S > aux.delta4;
    double arg1 = kPi;
    if (guarded) {
      arg1 = aux.eps_aux + aux.delta4 * symspace::zeta0(d) / std::sinh(S - aux.delta4);
      guarded = arg1 >= 0.0 && arg1 < kPi && arg2 >= 0.0 && arg2 < kPi;
    }
    if (guarded) {
      c.value = std::min(std::cos(arg1), std::cos(arg2));
    } else {
      c.value = -1.0;
      c.note = S > aux.delta4 ? "cosine argument outside [0, pi)" : "S <= delta4";
    }
    c.margin = c.value - c.threshold;
    c.pass = guarded && c.margin > 0.0;
  }
  {  // 2: points are close to parallel sets.
    auto& c = report.checks[1];
    c.threshold = 1.0;
    c.value = std::max(angle_distance_lhs(d, aux.eps_aux, aux.delta1),
                       angle_distance_lhs(d, 2.0 * aux.eps_aux - eps, aux.delta3));
    c.margin = c.threshold - c.value;
    c.pass = c.value <= c.threshold;
  }
  {  // 3: zeta-angles are small.
    auto& c = report.checks[2];
    c.threshold = 1.0;
    c.value = angle_distance_lhs(d, aux.eps_aux - eps, aux.delta2);
    c.margin = c.threshold - c.value;
    c.pass = c.value <= c.threshold;
  }
  {  // 4: spacing pushes points toward the parallel set.
    auto& c = report.checks[3];
    c.threshold = aux.delta2;
    c.value = std::expm1(aux.delta1) * std::exp(-S);
    c.margin = c.threshold - c.value;
    c.pass = c.value <= c.threshold;
  }
  {  // 5: sufficient spacing; delta4 in [min{2 delta3, offset}, S / 2).
    auto& c = report.checks[4];
    c.value = aux.delta4;
    c.threshold = std::min(2.0 * aux.delta3, cone_offset(aux.delta3, S));
    const double lower = aux.delta4 - c.threshold;
    const double upper = 0.5 * S - aux.delta4;
    c.margin = std::min(lower, upper);
    c.pass = lower >= 0.0 && upper > 0.0;
    std::ostringstream os;
    os.precision(17);
    os << "requires delta4 >= " << c.threshold << " and delta4 < S/2 = " << 0.5 * S;
    c.note = os.str();
  }

  report.verdict = std::all_of(report.checks.begin(), report.checks.end(),
                               [](const AssumptionCheck& c) { return c.pass; });
  if (report.verdict) {
    report.c1 = S - 2.0 * aux.delta4;
    report.c2 = 2.0 * aux.delta4;
  }
  return report;
}

AuxParams derive_aux(const StraightSpacedStats& stats, double t) {
  validate(stats);
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::invalid_range, "t must lie in (0, 1)");
  const int d = stats.dim;
  const double emax = eps_max(d);
  if (!(stats.eps < emax)) {
    throw Error(ErrorCode::eps_too_large, "eps is not below eps_max(d)");
  }
  AuxParams aux;
  aux.t = t;
  aux.eps_aux = (1.0 - t) * stats.eps + t * emax;
  aux.delta1 = invert_angle_distance(d, aux.eps_aux);
  aux.delta2 = invert_angle_distance(d, aux.eps_aux - stats.eps);
  aux.delta3 = invert_angle_distance(d, 2.0 * aux.eps_aux - stats.eps);
  aux.delta4 = cone_offset(aux.delta3, stats.spacing);
  return aux;
}

AuxSearchResult search_aux(const StraightSpacedStats& stats, int grid,
                           std::optional<double> t_override) {
  if (grid < 1) throw Error(ErrorCode::invalid_range, "aux grid must be >= 1");
  validate(stats);
  AuxSearchResult result;
  if (!(stats.eps < eps_max(stats.dim))) {
    result.diagnostic = "EpsTooLarge: eps >= eps_max(d), no auxiliary parameters exist";
    return result;
  }

  if (t_override && !(*t_override > 0.0 && *t_override < 1.0)) {
    throw Error(ErrorCode::invalid_range, "t must lie in (0, 1)");
  }
  std::vector<double> ts;
  if (t_override) {
    ts.push_back(*t_override);
  } else {
    ts.push_back(kDefaultT);
    for (int i = 1; i <= grid; ++i) ts.push_back(static_cast<double>(i) / (grid + 1));
  }

  std::string last_error;
  for (double t : ts) {
    AuxParams aux;
    try {
      aux = derive_aux(stats, t);
    } catch (const Error& e) {
      last_error = e.what();
      continue;
    }
    AssumptionReport report = verify_assumptions(stats, aux);
    if (report.verdict) {
      if (!result.aux || report.min_margin() > result.report->min_margin()) {
        result.aux = aux;
        result.report = report;
      }
      if (t == kDefaultT && !t_override) break;
    } else if (!result.best_report || report.min_margin() > result.best_report->min_margin()) {
      result.best_aux = aux;
      result.best_report = report;
    }
  }

  if (!result.aux) {
    if (result.best_report) {
      std::ostringstream os;
      os << "no t passes; best minimal margin " << result.best_report->min_margin() << " at t = "
         << result.best_aux->t.value_or(0.0) << "; failing assumptions:";
      for (std::size_t i = 0; i < 5; ++i) {
        if (!result.best_report->checks[i].pass) os << " A" << (i + 1);
      }
      result.diagnostic = os.str();
    } else {
      result.diagnostic = last_error.empty() ? "no admissible t" : last_error;
    }
  }
  return result;
}

}  // namespace anosov::criteria
