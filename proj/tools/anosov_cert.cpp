// anosov-cert: certify, example, enumerate, geometry.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"

#include "anosov/cayley.hpp"
#include "anosov/certifier.hpp"
#include "anosov/config_io.hpp"
#include "anosov/criteria.hpp"
#include "anosov/symspace.hpp"

using namespace anosov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotCertified = 2;

void print_full(std::ostream& os, double x) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
}

void print_vector(std::ostream& os, const RealVector& v) {
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    print_full(os, v[i]);
  }
  os << "]";
}

void print_complex_vector(std::ostream& os, const Vector& v) {
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    if (v[i].imag() == 0.0) {
      print_full(os, v[i].real());
    } else {
      os << "[";
      print_full(os, v[i].real());
      os << ", ";
      print_full(os, v[i].imag());
      os << "]";
    }
  }
  os << "]";
}

void print_matrix(std::ostream& os, const Matrix& m) {
  os << "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) os << ", ";
    print_complex_vector(os, m.row(r).transpose());
  }
  os << "]";
}

struct GeometryArgs {
  std::string op;
  std::string p, q, u, v;
  int dim = 3;
  double s = 0.0, dist = 0.0;
};

int run_geometry(const GeometryArgs& a) {
  using namespace symspace;
  auto point = [](const std::string& text, const char* name) {
    if (text.empty()) throw Error(ErrorCode::invalid_input, std::string("--") + name + " is required");
    return Point::from_matrix(io::parse_matrix(text));
  };
  auto out = [](double x) {
    print_full(std::cout, x);
    std::cout << "\n";
  };
  const std::string& op = a.op;
  if (op == "eps_max") {
    out(criteria::eps_max(a.dim));
  } else if (op == "d_alpha") {
    out(d_alpha(point(a.p, "p"), point(a.q, "q")));
  } else if (op == "riem_distance") {
    out(riem_distance(point(a.p, "p"), point(a.q, "q")));
  } else if (op == "vec_distance") {
    print_vector(std::cout, vec_distance(point(a.p, "p"), point(a.q, "q")).entries());
    std::cout << "\n";
  } else if (op == "midpoint") {
    print_matrix(std::cout, midpoint(point(a.p, "p"), point(a.q, "q")).matrix());
    std::cout << "\n";
  } else if (op == "zeta_flag") {
    print_complex_vector(std::cout, zeta_flag(point(a.p, "p"), point(a.q, "q")).v);
    std::cout << "\n";
  } else if (op == "iota_zeta_flag") {
    print_complex_vector(std::cout, iota_zeta_flag(point(a.p, "p"), point(a.q, "q")).u.transpose());
    std::cout << "\n";
  } else if (op == "cos_angle" || op == "dist_to_parallel_set" || op == "is_transverse") {
    if (a.u.empty() || a.v.empty()) throw Error(ErrorCode::invalid_input, "--u and --v are required");
    const Point p = point(a.p, "p");
    const auto h = HyperplaneFlag::from_covector(io::parse_vector(a.u).transpose());
    const auto l = LineFlag::from_vector(io::parse_vector(a.v));
    if (op == "cos_angle") out(cos_angle(p, h, l));
    if (op == "dist_to_parallel_set") out(dist_to_parallel_set(p, h, l));
    if (op == "is_transverse") std::cout << (is_transverse(p, h, l) ? "true" : "false") << "\n";
  } else if (op == "busemann_gap") {
    out(busemann_gap_standard(point(a.p, "p")));
  } else if (op == "zeta_angle_bound") {
    out(zeta_angle_bound(a.s, a.dist, a.dim));
  } else if (op == "ray_to_parallel_bound") {
    out(ray_to_parallel_bound(a.dist, a.s));
  } else {
    throw Error(ErrorCode::invalid_input, "unknown op '" + op + "'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify projective Anosov subgroups of SL(d, K) from a finite Cayley-graph survey"};
  app.require_subcommand(1, 1);

  std::string config_path, words_path, out_path;
  std::optional<double> t;
  std::optional<int> grid;
  auto* certify = app.add_subcommand("certify", "Run the survey and write a certificate");
  certify->add_option("--config", config_path, "Job config (JSON)")->required();
  certify->add_option("--words", words_path, "Word list to survey instead of the Cayley ball");
  certify->add_option("--out", out_path, "Certificate path (default: standard output)");
  certify->add_option("--t", t, "Fixed interpolation weight for eps_aux, in (0, 1)");
  certify->add_option("--grid", grid, "Number of t values to scan");

  std::string example_out;
  auto* example = app.add_subcommand("example", "Write the built-in genus-2 example config");
  example->add_option("--out", example_out, "Output path (default: standard output)");

  std::string enum_config;
  int radius = 0;
  auto* enumerate = app.add_subcommand("enumerate", "Print Cayley sphere sizes and pair counts");
  enumerate->add_option("--config", enum_config, "Job config (JSON)")->required();
  enumerate->add_option("--radius", radius, "Ball radius (at most 2k)")->required();

  GeometryArgs geo;
  auto* geometry = app.add_subcommand("geometry", "Evaluate a single geometric operation");
  geometry->add_option("--op", geo.op, "Operation name")->required();
  geometry->add_option("--p", geo.p, "Point as a JSON matrix");
  geometry->add_option("--q", geo.q, "Second point as a JSON matrix");
  geometry->add_option("--u", geo.u, "Hyperplane covector as a JSON array");
  geometry->add_option("--v", geo.v, "Line vector as a JSON array");
  geometry->add_option("--dim", geo.dim, "Dimension d");
  geometry->add_option("--S", geo.s, "Spacing S");
  geometry->add_option("--D", geo.dist, "Distance D");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*certify) {
      const auto config = io::load_config(config_path);
      certifier::RunOptions opts;
      if (!words_path.empty()) opts.word_list = words_path;
      opts.t = t;
      opts.aux_grid = grid;
      const auto cert = certifier::run(config, opts);
      const std::string text = io::dump_certificate(cert);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        io::write_file(out_path, text);
        std::cout << "verdict: " << certifier::to_string(cert.verdict) << "\n";
        if (cert.survey) {
          std::cout << "pairs: " << cert.survey->pair_count << "\nS: ";
          print_full(std::cout, cert.survey->spacing);
          std::cout << "\neps: ";
          print_full(std::cout, cert.survey->eps);
          std::cout << "\n";
        }
      }
      if (!cert.diagnostic.empty()) std::cerr << cert.diagnostic << "\n";
      return cert.verdict == certifier::Verdict::certified ? kExitOk : kExitNotCertified;
    }
    if (*example) {
      const std::string text = io::dump_config(certifier::builtin_example());
      if (example_out.empty()) {
        std::cout << text;
      } else {
        io::write_file(example_out, text);
      }
      return kExitOk;
    }
    if (*enumerate) {
      const auto config = io::load_config(enum_config);
      const int k = config.half_length;
      if (radius < 0 || radius > 2 * k) {
        throw Error(ErrorCode::invalid_range, "radius must lie in [0, 2k] = [0, " + std::to_string(2 * k) + "]");
      }
      const auto gens = certifier::make_generators(config);
      const auto table = cayley::build_ball(gens, radius, config.dedup_grid);
      const auto sizes = table.sphere_sizes();
      for (std::size_t n = 0; n < sizes.size(); ++n) std::cout << n << " " << sizes[n] << "\n";
      if (radius >= 2 * k - 1) {
        std::cout << "geodesic pairs at k=" << k << ": " << cayley::geodesic_pairs(table, gens, k).size()
                  << "\n";
      }
      return kExitOk;
    }
    if (*geometry) return run_geometry(geo);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
