#include "anosov/certifier.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "anosov/config_io.hpp"

namespace anosov::certifier {

namespace {

constexpr std::size_t kFlaggedShown = 50;

std::string pair_word(const cayley::ElementTable& table, const cayley::GeneratorSet& gens,
                      const cayley::Witness& w) {
  if (w.g1 < 0) return "";
  return table.word(w.g1, gens) + table.word(w.g2, gens);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::not_certified: return "not-certified-at-this-k";
    case Verdict::regularity_obstruction: return "regularity-obstruction";
    case Verdict::tolerance_collision: return "tolerance-collision";
  }
  return "unknown";
}

void JobConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::config, msg); };
  if (dim < 2) fail("dim must be >= 2");
  if (half_length < 1) fail("half_length must be >= 1");
  if (!(dedup_grid > 0.0)) fail("dedup_grid must be positive");
  if (!(tolerance > 0.0)) fail("tolerance must be positive");
  if (aux_grid < 1) fail("aux_grid must be >= 1");
  if (t && !(*t > 0.0 && *t < 1.0)) fail("t must lie in (0, 1)");
  if (generators.empty()) fail("generator list is empty");
  for (const auto& g : generators) {
    if (g.name < 'a' || g.name > 'z') fail(std::string("generator name '") + g.name + "' is not in a-z");
    if (g.matrix.rows() != dim || g.matrix.cols() != dim) {
      fail(std::string("generator '") + g.name + "' is not " + std::to_string(dim) + "x" +
           std::to_string(dim));
    }
    if (field == Field::real && g.matrix.imag().cwiseAbs().maxCoeff() > 0.0) {
      fail(std::string("generator '") + g.name + "' has complex entries but field is real");
    }
  }
}

JobConfig builtin_example() {
  JobConfig c;
  c.field = Field::real;
  c.dim = 3;
  c.half_length = 4;
  const double pi = std::numbers::pi;
  const double T = 2.0 * std::acosh(1.0 / std::tan(pi / 8.0));
  Matrix h = Matrix::Identity(3, 3);
  h(0, 0) = h(2, 2) = std::cosh(T);
  h(0, 2) = h(2, 0) = std::sinh(T);
  // Axes of the four side pairings of the regular octagon are pi/4 apart in the
  // hyperboloid model.
  const char names[] = {'a', 'b', 'c', 'd'};
  for (int i = 0; i < 4; ++i) {
    const double phi = i * pi / 4.0;
    Matrix r = Matrix::Identity(3, 3);
    r(0, 0) = r(1, 1) = std::cos(phi);
    r(0, 1) = -std::sin(phi);
    r(1, 0) = std::sin(phi);
    c.generators.push_back({names[i], r * h * r.transpose()});
  }
  c.relators = {"adCbADcB"};
  return c;
}

cayley::GeneratorSet make_generators(const JobConfig& config) {
  cayley::GeneratorSet gens(config.dim);
  for (const auto& g : config.generators) gens.add(g.name, g.matrix, config.tolerance);
  gens.relators = config.relators;
  return gens;
}

Certificate run(const JobConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  Certificate cert;
  cert.config_digest = "sha256:" + io::sha256_hex(io::canonical_config(config));
  cert.dim = config.dim;
  cert.half_length = config.half_length;
  cert.eps_max = criteria::eps_max(config.dim);
  auto finish = [&]() -> Certificate {
    cert.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cert;
  };

  const cayley::GeneratorSet gens = make_generators(config);
  const int k = config.half_length;
  const std::optional<std::string> word_list = options.word_list ? options.word_list : config.word_list;

  std::optional<cayley::ElementTable> table;
  std::vector<cayley::ElementPair> pairs;
  try {
    table = cayley::build_ball(gens, word_list ? k : 2 * k - 1, config.dedup_grid);
    if (word_list) {
      const auto words = cayley::import_words(io::read_file(*word_list), gens);
      pairs = cayley::words_to_pairs(*table, gens, words, k);
    } else {
      pairs = cayley::geodesic_pairs(*table, gens, k);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::tolerance_collision) throw;
    cert.verdict = Verdict::tolerance_collision;
    cert.diagnostic = e.what();
    return finish();
  }

  Tolerances tol;
  tol.det = config.tolerance;
  tol.sym = config.tolerance;
  const cayley::SurveySummary summary = cayley::survey(*table, gens, pairs, tol, options.threads);

  SurveyReport rep;
  rep.source = word_list ? "word-list" : "cayley-ball";
  rep.sphere_sizes = table->sphere_sizes();
  rep.pair_count = pairs.size();
  rep.spacing = summary.stats.spacing;
  rep.eps = summary.stats.eps;
  rep.max_eps_plus = summary.max_eps_plus;
  rep.max_eps_minus = summary.max_eps_minus;
  rep.min_s = {pair_word(*table, gens, summary.min_s), summary.min_s.value};
  rep.worst_plus = {pair_word(*table, gens, summary.worst_plus), summary.worst_plus.value};
  rep.worst_minus = {pair_word(*table, gens, summary.worst_minus), summary.worst_minus.value};
  rep.flagged_count = summary.flagged.size();
  for (std::size_t i = 0; i < std::min(kFlaggedShown, summary.flagged.size()); ++i) {
    rep.flagged_words.push_back(table->word(summary.flagged[i].first, gens) +
                                table->word(summary.flagged[i].second, gens));
  }
  cert.survey = rep;

  if (!summary.flagged.empty()) {
    cert.verdict = Verdict::regularity_obstruction;
    std::ostringstream os;
    os << summary.flagged.size() << " of " << pairs.size()
       << " pairs have a segment that is not zeta-regular";
    cert.diagnostic = os.str();
    return finish();
  }

  criteria::StraightSpacedStats stats = summary.stats;
  const auto search = criteria::search_aux(stats, options.aux_grid.value_or(config.aux_grid),
                                           options.t ? options.t : config.t);
  if (search.aux) {
    cert.aux = search.aux;
    cert.report = search.report;
    cert.verdict = search.report->verdict ? Verdict::certified : Verdict::not_certified;
  } else {
    cert.aux = search.best_aux;
    cert.report = search.best_report;
    cert.verdict = Verdict::not_certified;
    cert.diagnostic = search.diagnostic;
  }
  return finish();
}

}  // namespace anosov::certifier
