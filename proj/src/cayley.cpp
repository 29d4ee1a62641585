#include "anosov/cayley.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace anosov::cayley {

namespace {

using symspace::Point;

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  // splitmix64 finalizer folded into a running hash
  x += 0x9e3779b97f4a7c15ULL + h;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double entry_scale(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

constexpr double kEqualRel = 1e-9;
constexpr double kBoundary = 1e-3;
constexpr int kMaxProbeBits = 12;

}  // namespace

// ---------------------------------------------------------------- GeneratorSet

void GeneratorSet::add(char letter, const Matrix& m, double tol_det) {
  if (!std::islower(static_cast<unsigned char>(letter))) {
    throw Error(ErrorCode::invalid_input, std::string("generator name must be a lower-case letter, got '") +
                                              letter + "'");
  }
  if (index_of(letter)) {
    throw Error(ErrorCode::invalid_input, std::string("duplicate generator '") + letter + "'");
  }
  if (m.rows() != dim_ || m.cols() != dim_) {
    std::ostringstream os;
    os << "generator '" << letter << "' is " << m.rows() << "x" << m.cols() << ", expected " << dim_
       << "x" << dim_;
    throw Error(ErrorCode::invalid_input, os.str());
  }
  GroupElement g = GroupElement::from_matrix(m, tol_det);
  const double err = (g.matrix() * g.inverse_matrix() - Matrix::Identity(dim_, dim_)).norm();
  if (err > 1e-9) {
    throw Error(ErrorCode::invalid_input, std::string("generator '") + letter + "' is numerically singular");
  }
  letters_.push_back(letter);
  elements_.push_back(g);
  letters_.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(letter))));
  elements_.push_back(g.inverse());
}

std::optional<int> GeneratorSet::index_of(char c) const {
  auto it = std::find(letters_.begin(), letters_.end(), c);
  if (it == letters_.end()) return std::nullopt;
  return static_cast<int>(it - letters_.begin());
}

GroupElement GeneratorSet::evaluate(const std::string& word) const {
  GroupElement g = GroupElement::identity(dim_);
  for (char c : word) {
    auto i = index_of(c);
    if (!i) throw Error(ErrorCode::unknown_letter, std::string("unknown letter '") + c + "'");
    g = g * elements_[*i];
  }
  return g;
}

// ---------------------------------------------------------------- ElementTable

ElementTable::ElementTable(int dim, double grid) : dim_(dim), grid_(grid) {
  if (!(grid > 0.0)) throw Error(ErrorCode::invalid_range, "dedup grid must be positive");
}

Matrix ElementTable::matrix(std::size_t i) const {
  const std::size_t n = static_cast<std::size_t>(dim_) * dim_;
  Matrix m(dim_, dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = data_[i * n + r * dim_ + c];
  return m;
}

std::string ElementTable::word(std::size_t i, const GeneratorSet& gens) const {
  std::string w;
  auto cur = static_cast<std::int32_t>(i);
  while (parent_[cur] >= 0) {
    w.push_back(gens.letter(parent_letter_[cur]));
    cur = parent_[cur];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

std::vector<std::size_t> ElementTable::sphere_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& s : spheres_) out.push_back(s.size());
  return out;
}

// Hash keys of the grid cell of m and, for coordinates sitting within kBoundary of
// a cell edge, of the neighbouring cells as well. The first key is the home cell.
std::vector<std::uint64_t> ElementTable::keys(const Matrix& m, double scale) const {
  const double unit = grid_ * scale;
  std::vector<long long> cells;
  std::vector<std::pair<std::size_t, long long>> alternatives;
  cells.reserve(2 * m.size());
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      for (double x : {m(r, c).real(), m(r, c).imag()}) {
        const double y = x / unit;
        const double cell = std::floor(y + 0.5);
        const double offset = y - cell;  // in [-0.5, 0.5)
        cells.push_back(static_cast<long long>(cell));
        if (std::abs(offset) > 0.5 - kBoundary && alternatives.size() < kMaxProbeBits) {
          alternatives.emplace_back(cells.size() - 1,
                                    static_cast<long long>(offset > 0 ? cell + 1 : cell - 1));
        }
      }
    }
  }
  std::vector<std::uint64_t> out;
  const std::size_t combos = std::size_t{1} << alternatives.size();
  out.reserve(combos);
  std::vector<long long> probe = cells;
  for (std::size_t mask = 0; mask < combos; ++mask) {
    for (std::size_t b = 0; b < alternatives.size(); ++b) {
      const auto [pos, alt] = alternatives[b];
      probe[pos] = (mask >> b & 1) ? alt : cells[pos];
    }
    std::uint64_t h = 0;
    for (long long v : probe) h = mix(h, static_cast<std::uint64_t>(v));
    out.push_back(h);
  }
  return out;
}

std::int32_t ElementTable::find(const Matrix& m) const {
  const double scale = entry_scale(m);
  const std::size_t n = static_cast<std::size_t>(dim_) * dim_;
  for (std::uint64_t key : keys(m, scale)) {
    auto it = buckets_.find(key);
    if (it == buckets_.end()) continue;
    for (std::int32_t idx = it->second; idx >= 0; idx = next_[idx]) {
      double diff = 0.0;
      const Scalar* stored = &data_[static_cast<std::size_t>(idx) * n];
      for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) diff = std::max(diff, std::abs(stored[r * dim_ + c] - m(r, c)));
      if (diff <= kEqualRel * scale) return idx;
      if (diff <= 10.0 * grid_ * scale) {
        std::ostringstream os;
        os << "two elements differ by " << diff << " (relative " << diff / scale
           << "), inside 10x the dedup grid " << grid_ << " but not equal";
        throw Error(ErrorCode::tolerance_collision, os.str());
      }
    }
  }
  return -1;
}

std::int32_t ElementTable::insert(const Matrix& m, int dist, std::int32_t parent, int letter) {
  const auto idx = static_cast<std::int32_t>(distance_.size());
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) data_.push_back(m(r, c));
  distance_.push_back(dist);
  parent_.push_back(parent);
  parent_letter_.push_back(static_cast<std::int8_t>(letter));
  edges_.resize(distance_.size() * static_cast<std::size_t>(letters_), -1);
  const std::uint64_t key = keys(m, entry_scale(m)).front();
  auto [it, fresh] = buckets_.try_emplace(key, idx);
  next_.push_back(fresh ? -1 : it->second);
  it->second = idx;
  return idx;
}

std::int32_t ElementTable::trace(std::int32_t start, const std::string& word,
                                 const GeneratorSet& gens) const {
  std::int32_t cur = start;
  for (char c : word) {
    auto l = gens.index_of(c);
    if (!l) throw Error(ErrorCode::unknown_letter, std::string("unknown letter '") + c + "'");
    cur = edge(cur, *l);
    if (cur < 0) return -1;
  }
  return cur;
}

ElementTable build_ball(const GeneratorSet& gens, int radius, double grid) {
  if (radius < 0) throw Error(ErrorCode::invalid_range, "radius must be >= 0");
  if (gens.size() == 0) throw Error(ErrorCode::invalid_input, "empty generator set");
  if (gens.size() > 127) throw Error(ErrorCode::invalid_input, "too many generators");
  const int d = gens.dim();
  ElementTable t(d, grid);
  t.letters_ = gens.size();
  t.radius_ = radius;
  t.insert(Matrix::Identity(d, d), 0, -1, 0);
  t.spheres_.push_back({0});

  for (int n = 0; n <= radius; ++n) {
    if (n < radius) t.spheres_.emplace_back();
    // Copy: insertion below appends to spheres_[n + 1] only, but keep it simple.
    const std::vector<std::int32_t> layer = t.spheres_[n];
    for (std::int32_t idx : layer) {
      const Matrix m = t.matrix(idx);
      for (int l = 0; l < gens.size(); ++l) {
        const Matrix prod = m * gens.element(l).matrix();
        std::int32_t found = t.find(prod);
        if (found >= 0) {
          if (std::abs(t.distance_[found] - n) > 1) {
            throw Error(ErrorCode::tolerance_collision, "BFS distances inconsistent across an edge");
          }
        } else if (n < radius) {
          found = t.insert(prod, n + 1, idx, l);
          t.spheres_[n + 1].push_back(found);
        }
        t.edges_[static_cast<std::size_t>(idx) * t.letters_ + l] = found;
      }
    }
  }
  return t;
}

std::vector<ElementPair> geodesic_pairs(const ElementTable& table, const GeneratorSet& gens, int k) {
  if (k < 0) throw Error(ErrorCode::invalid_range, "k must be >= 0");
  if (k == 0) return {{0, 0}};
  if (table.radius() < 2 * k - 1) {
    throw Error(ErrorCode::invalid_range, "ball radius must be at least 2k - 1 for geodesic pairs");
  }
  const auto& sk = table.sphere(k);
  // Letter indices of each witness word of S_k.
  std::vector<std::vector<int>> words;
  words.reserve(sk.size());
  for (std::int32_t g : sk) {
    std::vector<int> w;
    for (char c : table.word(g, gens)) w.push_back(*gens.index_of(c));
    words.push_back(std::move(w));
  }
  std::vector<ElementPair> out;
  for (std::int32_t g1 : sk) {
    for (std::size_t j = 0; j < sk.size(); ++j) {
      std::int32_t cur = g1;
      bool geodesic = true;
      for (int letter : words[j]) {
        const std::int32_t nxt = table.edge(cur, letter);
        if (nxt < 0) break;  // only possible from the outer sphere: length 2k
        if (table.distance(nxt) != table.distance(cur) + 1) {
          geodesic = false;
          break;
        }
        cur = nxt;
      }
      if (geodesic) out.emplace_back(g1, sk[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- statistics

PairStats pair_stats(const GroupElement& g1, const GroupElement& g2, const Tolerances& tol) {
  const int d = g1.dim();
  const Point o = Point::basepoint(d);
  const Point m1 = symspace::midpoint(o, Point::from_factor(g1.inverse_matrix()));
  const Point m2 = symspace::midpoint(o, Point::from_factor(g2.matrix()));
  PairStats st;
  st.s = symspace::d_alpha(m1, m2);
  st.eps_plus = symspace::segment_zeta_angle(m1, o, m2, symspace::FlagType::zeta,
                                             symspace::FlagType::zeta, tol);
  st.eps_minus = symspace::segment_zeta_angle(m2, o, m1, symspace::FlagType::iota_zeta,
                                              symspace::FlagType::iota_zeta, tol);
  return st;
}

namespace {

bool before(const ElementPair& a, const ElementPair& b) { return a < b; }

// Keep the witness with the smaller (or larger) value; ties go to the smaller pair.
void keep_min(Witness& w, double v, std::int32_t g1, std::int32_t g2) {
  if (w.g1 < 0 || v < w.value || (v == w.value && before({g1, g2}, {w.g1, w.g2}))) w = {g1, g2, v};
}
void keep_max(Witness& w, double v, std::int32_t g1, std::int32_t g2) {
  if (w.g1 < 0 || v > w.value || (v == w.value && before({g1, g2}, {w.g1, w.g2}))) w = {g1, g2, v};
}

struct Partial {
  Witness min_s, worst_plus, worst_minus;
  std::size_t count = 0;
  std::vector<ElementPair> flagged;

  void add(const PairStats& st) {
    keep_min(min_s, st.s, st.g1, st.g2);
    keep_max(worst_plus, st.eps_plus, st.g1, st.g2);
    keep_max(worst_minus, st.eps_minus, st.g1, st.g2);
    ++count;
  }
  void merge(const Partial& o) {
    if (o.min_s.g1 >= 0) keep_min(min_s, o.min_s.value, o.min_s.g1, o.min_s.g2);
    if (o.worst_plus.g1 >= 0) keep_max(worst_plus, o.worst_plus.value, o.worst_plus.g1, o.worst_plus.g2);
    if (o.worst_minus.g1 >= 0) {
      keep_max(worst_minus, o.worst_minus.value, o.worst_minus.g1, o.worst_minus.g2);
    }
    count += o.count;
    flagged.insert(flagged.end(), o.flagged.begin(), o.flagged.end());
  }
};

SurveySummary finish(Partial&& p, int dim) {
  SurveySummary out;
  out.stats.dim = dim;
  out.stats.pair_count = p.count;
  out.min_s = p.min_s;
  out.worst_plus = p.worst_plus;
  out.worst_minus = p.worst_minus;
  if (p.count > 0) {
    out.max_eps_plus = p.worst_plus.value;
    out.max_eps_minus = p.worst_minus.value;
    out.stats.spacing = p.min_s.value;
    out.stats.eps = out.max_eps_plus + out.max_eps_minus;
  }
  std::sort(p.flagged.begin(), p.flagged.end());
  out.flagged = std::move(p.flagged);
  return out;
}

// Per-element data reused across all pairs sharing a factor.
struct FirstFactor {
  std::optional<Point> m1;
  std::optional<symspace::LineFlag> toward_o;  // zeta flag of m1 -> o
};
struct SecondFactor {
  std::optional<Point> m2;
  std::optional<symspace::HyperplaneFlag> toward_o;  // iota zeta flag of m2 -> o
};

}  // namespace

SurveySummary aggregate(const std::vector<PairStats>& stats, int dim) {
  if (stats.empty()) throw Error(ErrorCode::empty_survey, "no pairs to aggregate");
  Partial p;
  for (const auto& st : stats) p.add(st);
  return finish(std::move(p), dim);
}

int default_threads() {
  if (const char* env = std::getenv("ANOSOV_CERT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SurveySummary survey(const ElementTable& table, const GeneratorSet& gens,
                     const std::vector<ElementPair>& pairs, const Tolerances& tol, int threads) {
  if (pairs.empty()) throw Error(ErrorCode::empty_survey, "no geodesic pairs to survey");
  const int d = gens.dim();
  const Point o = Point::basepoint(d);

  std::set<std::int32_t> firsts, seconds;
  for (const auto& [a, b] : pairs) {
    firsts.insert(a);
    seconds.insert(b);
  }
  std::map<std::int32_t, FirstFactor> first;
  std::map<std::int32_t, SecondFactor> second;
  for (std::int32_t g : firsts) {
    FirstFactor f;
    const GroupElement e = gens.evaluate(table.word(g, gens));
    f.m1 = symspace::midpoint(o, Point::from_factor(e.inverse_matrix()));
    try {
      f.toward_o = symspace::zeta_flag(*f.m1, o, tol);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::not_regular) throw;
    }
    first.emplace(g, std::move(f));
  }
  for (std::int32_t g : seconds) {
    SecondFactor f;
    const GroupElement e = gens.evaluate(table.word(g, gens));
    f.m2 = symspace::midpoint(o, Point::from_factor(e.matrix()));
    try {
      f.toward_o = symspace::iota_zeta_flag(*f.m2, o, tol);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::not_regular) throw;
    }
    second.emplace(g, std::move(f));
  }

  auto evaluate_range = [&](std::size_t lo, std::size_t hi, Partial& part) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto [a, b] = pairs[i];
      const FirstFactor& f1 = first.at(a);
      const SecondFactor& f2 = second.at(b);
      if (!f1.toward_o || !f2.toward_o) {
        part.flagged.push_back(pairs[i]);
        continue;
      }
      PairStats st;
      st.g1 = a;
      st.g2 = b;
      const auto seg = symspace::analyze_segment(*f1.m1, *f2.m2);
      st.s = seg.a.root_gap();
      try {
        const auto forward = symspace::zeta_flag(*f1.m1, seg, tol);
        const auto backward = symspace::reverse_iota_zeta_flag(*f2.m2, seg, tol);
        st.eps_plus = symspace::angle(*f1.m1, *f1.toward_o, forward);
        st.eps_minus = symspace::angle(*f2.m2, *f2.toward_o, backward);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::not_regular) throw;
        part.flagged.push_back(pairs[i]);
        continue;
      }
      part.add(st);
    }
  };

  if (threads <= 0) threads = default_threads();
  threads = static_cast<int>(std::min<std::size_t>(threads, pairs.size()));
  std::vector<Partial> parts(threads);
  const std::size_t chunk = (pairs.size() + threads - 1) / threads;
  if (threads == 1) {
    evaluate_range(0, pairs.size(), parts[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          evaluate_range(std::min(pairs.size(), t * chunk), std::min(pairs.size(), (t + 1) * chunk),
                         parts[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  Partial total;
  for (const auto& p : parts) total.merge(p);
  return finish(std::move(total), d);
}

// ---------------------------------------------------------------- word lists

std::vector<std::string> import_words(const std::string& text, const GeneratorSet& gens) {
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (char c : line) {
      if (!gens.index_of(c)) {
        std::ostringstream os;
        os << "line " << lineno << ": unknown letter '" << c << "'";
        throw Error(ErrorCode::unknown_letter, os.str());
      }
    }
    words.push_back(line);
  }
  return words;
}

std::vector<ElementPair> words_to_pairs(const ElementTable& table, const GeneratorSet& gens,
                                        const std::vector<std::string>& words, int k) {
  if (k < 0) throw Error(ErrorCode::invalid_range, "k must be >= 0");
  if (table.radius() < k) throw Error(ErrorCode::invalid_range, "ball radius must be at least k");
  std::vector<ElementPair> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    if (w.size() != static_cast<std::size_t>(2 * k)) {
      std::ostringstream os;
      os << "word '" << w << "' has length " << w.size() << ", expected " << 2 * k;
      throw Error(ErrorCode::wrong_length, os.str());
    }
    const std::int32_t a = table.trace(0, w.substr(0, k), gens);
    const std::int32_t b = table.trace(0, w.substr(k), gens);
    if (a < 0 || b < 0) throw Error(ErrorCode::invalid_input, "word half left the ball");
    out.emplace_back(a, b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace anosov::cayley
