#pragma once

// Balls in the Cayley graph of a finitely generated matrix group, geodesic pairs
// of elements, and the midpoint spacing/straightness survey over those pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "anosov/criteria.hpp"
#include "anosov/symspace.hpp"
#include "anosov/types.hpp"

namespace anosov::cayley {

using symspace::GroupElement;

// Generators are lower-case letters; the upper-case letter is the inverse.
class GeneratorSet {
 public:
  explicit GeneratorSet(int dim) : dim_(dim) {}

  // Adds `letter` and its inverse. The inverse is computed once here and checked
  // against ||g g^-1 - I|| <= 1e-9.
  void add(char letter, const Matrix& m, double tol_det = 1e-9);

  int dim() const { return dim_; }
  // Number of letters including inverses.
  int size() const { return static_cast<int>(letters_.size()); }
  char letter(int i) const { return letters_[i]; }
  const GroupElement& element(int i) const { return elements_[i]; }
  int inverse_of(int i) const { return i ^ 1; }
  // Letter index, or nullopt if the letter is not in the alphabet.
  std::optional<int> index_of(char c) const;

  // Product of the letters of `word`, left to right. Throws UnknownLetter.
  GroupElement evaluate(const std::string& word) const;

  std::vector<std::string> relators;  // documentation only

 private:
  int dim_;
  std::vector<char> letters_;  // a, A, b, B, ...
  std::vector<GroupElement> elements_;
};

// Elements of a ball, deduplicated on a relative grid. Element 0 is the identity.
// Matrices are stored flattened (row-major, complex) to keep the table compact.
class ElementTable {
 public:
  ElementTable(int dim, double grid);

  int dim() const { return dim_; }
  double grid() const { return grid_; }
  std::size_t size() const { return distance_.size(); }
  int radius() const { return radius_; }

  int distance(std::size_t i) const { return distance_[i]; }
  Matrix matrix(std::size_t i) const;
  // Witness word: a geodesic word for element i.
  std::string word(std::size_t i, const GeneratorSet& gens) const;
  // Neighbour i * letter, or -1 if it lies outside the ball.
  std::int32_t edge(std::size_t i, int letter) const { return edges_[i * letters_ + letter]; }
  int letter_count() const { return letters_; }

  const std::vector<std::int32_t>& sphere(int n) const { return spheres_.at(n); }
  std::vector<std::size_t> sphere_sizes() const;

  // Index of the element equal to m (to 1e-9 relative), or -1. Throws
  // ToleranceCollision if a stored element is within 10 grid cells but not equal.
  std::int32_t find(const Matrix& m) const;

  // Follow `word` from element `start` along stored edges. Returns -1 if the path
  // leaves the ball. Throws UnknownLetter.
  std::int32_t trace(std::int32_t start, const std::string& word, const GeneratorSet& gens) const;

  friend ElementTable build_ball(const GeneratorSet& gens, int radius, double grid);

 private:
  std::int32_t insert(const Matrix& m, int dist, std::int32_t parent, int letter);
  std::vector<std::uint64_t> keys(const Matrix& m, double scale) const;

  int dim_;
  double grid_;
  int radius_ = 0;
  int letters_ = 0;
  std::vector<Scalar> data_;
  std::vector<int> distance_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int8_t> parent_letter_;
  std::vector<std::int32_t> edges_;
  std::vector<std::vector<std::int32_t>> spheres_;
  std::unordered_map<std::uint64_t, std::int32_t> buckets_;
  std::vector<std::int32_t> next_;
};

// BFS ball of the given radius with edges for every element, including lookups
// (without insertion) from the outermost sphere. Throws ToleranceCollision.
ElementTable build_ball(const GeneratorSet& gens, int radius, double grid = 1e-6);

using ElementPair = std::pair<std::int32_t, std::int32_t>;

// All (g1, g2) with |g1| = |g2| = k and |g1 g2| = 2k. Needs a ball of radius
// >= 2k - 1: the product is traced along edges, and leaving the ball at the
// last step means length 2k. k = 0 gives {(id, id)}.
std::vector<ElementPair> geodesic_pairs(const ElementTable& table, const GeneratorSet& gens,
                                        int k);

struct PairStats {
  std::int32_t g1 = 0;
  std::int32_t g2 = 0;
  double s = 0.0;
  double eps_plus = 0.0;   // radians
  double eps_minus = 0.0;  // radians
};

// Statistics of one pair from the group elements directly.
PairStats pair_stats(const GroupElement& g1, const GroupElement& g2, const Tolerances& tol = {});

struct Witness {
  std::int32_t g1 = -1;
  std::int32_t g2 = -1;
  double value = 0.0;
};

struct SurveySummary {
  criteria::StraightSpacedStats stats;
  double max_eps_plus = 0.0;
  double max_eps_minus = 0.0;
  Witness min_s;
  Witness worst_plus;
  Witness worst_minus;
  // Pairs where a segment was not regular enough for its flag.
  std::vector<ElementPair> flagged;
};

// Evaluates every pair and aggregates S = min s and eps = max eps+ + max eps-.
// Deterministic for any thread count. Throws EmptySurvey; flagged pairs are
// returned, not thrown, so a caller can report them.
SurveySummary survey(const ElementTable& table, const GeneratorSet& gens,
                     const std::vector<ElementPair>& pairs, const Tolerances& tol = {},
                     int threads = 0);

// Aggregates precomputed statistics (order independent). Throws EmptySurvey.
SurveySummary aggregate(const std::vector<PairStats>& stats, int dim);

// Word list: one word per line over the generator alphabet. Blank lines are
// skipped. Throws UnknownLetter on any other character.
std::vector<std::string> import_words(const std::string& text, const GeneratorSet& gens);

// Splits each word at position k and maps both halves to table elements,
// deduplicating pairs. Throws WrongLength.
std::vector<ElementPair> words_to_pairs(const ElementTable& table, const GeneratorSet& gens,
                                        const std::vector<std::string>& words, int k);

// Worker count: ANOSOV_CERT_THREADS if set and positive, else hardware concurrency.
int default_threads();

}  // namespace anosov::cayley
