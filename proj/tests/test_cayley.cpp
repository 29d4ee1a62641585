#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"

#include "anosov/cayley.hpp"
#include "anosov/certifier.hpp"
#include "oracles.hpp"

using namespace anosov;
using namespace anosov::cayley;
using oracle::Rng;

namespace {

GeneratorSet free_group(int m, std::uint64_t seed) {
  Rng rng(seed);
  GeneratorSet gens(3);
  for (int i = 0; i < m; ++i) {
    gens.add(static_cast<char>('a' + i), oracle::random_group_element(rng, 3, false).matrix());
  }
  return gens;
}

GeneratorSet surface_group() { return certifier::make_generators(certifier::builtin_example()); }

double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
}

// All words of the given length over the alphabet.
std::vector<std::string> all_words(const GeneratorSet& gens, int length) {
  std::vector<std::string> out{""};
  for (int i = 0; i < length; ++i) {
    std::vector<std::string> next;
    for (const auto& w : out)
      for (int l = 0; l < gens.size(); ++l) next.push_back(w + gens.letter(l));
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("GeneratorSet closes under inverses") {
  auto gens = free_group(2, 1);
  CHECK(gens.size() == 4);
  CHECK(gens.letter(1) == 'A');
  CHECK(*gens.index_of('B') == 3);
  CHECK_FALSE(gens.index_of('x'));
  const Matrix prod = gens.element(2).matrix() * gens.element(3).matrix();
  CHECK((prod - Matrix::Identity(3, 3)).norm() < 1e-9);
  CHECK_THROWS_AS(gens.evaluate("ax"), Error);
  CHECK_THROWS_AS(gens.add('a', Matrix::Identity(3, 3)), Error);
  CHECK_THROWS_AS(gens.add('Q', Matrix::Identity(3, 3)), Error);
  CHECK_THROWS_AS(gens.add('q', Matrix::Identity(2, 2)), Error);
}

TEST_CASE("free group sphere sizes") {
  for (int m : {1, 2, 3}) {
    auto gens = free_group(m, 10 + m);
    auto table = build_ball(gens, 3);
    const auto sizes = table.sphere_sizes();
    REQUIRE(sizes.size() == 4);
    CHECK(sizes[0] == 1);
    for (int n = 1; n <= 3; ++n) {
      CHECK(sizes[n] == static_cast<std::size_t>(2 * m * std::pow(2 * m - 1, n - 1)));
    }
  }
}

TEST_CASE("radius 0 holds only the identity") {
  auto table = build_ball(surface_group(), 0);
  CHECK(table.size() == 1);
  CHECK(table.sphere_sizes() == std::vector<std::size_t>{1});
  CHECK(rel_diff(table.matrix(0), Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("surface group sphere sizes agree across dedup grids") {
  auto gens = surface_group();
  const std::vector<std::size_t> expected{1, 8, 56, 392};
  CHECK(build_ball(gens, 3, 1e-6).sphere_sizes() == expected);
  CHECK(build_ball(gens, 3, 1e-9).sphere_sizes() == expected);
  CHECK(build_ball(gens, 5, 1e-6).sphere_sizes() == build_ball(gens, 5, 1e-8).sphere_sizes());
}

TEST_CASE("table invariants: prefixes, witnesses, edges") {
  auto gens = surface_group();
  auto table = build_ball(gens, 4);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string w = table.word(i, gens);
    CHECK(static_cast<int>(w.size()) == table.distance(i));
    // Re-multiplying the witness word reproduces the stored matrix.
    CHECK(rel_diff(gens.evaluate(w).matrix(), table.matrix(i)) < 1e-9);
    if (i > 0) {
      const auto parent = table.trace(0, w.substr(0, w.size() - 1), gens);
      REQUIRE(parent >= 0);
      CHECK(table.distance(parent) == table.distance(i) - 1);
    }
    for (int l = 0; l < gens.size(); ++l) {
      const auto j = table.edge(i, l);
      if (j >= 0) {
        CHECK(std::abs(table.distance(j) - table.distance(i)) <= 1);
        CHECK(table.edge(j, gens.inverse_of(l)) == static_cast<std::int32_t>(i));
      } else {
        CHECK(table.distance(i) == table.radius());
      }
    }
  }
}

TEST_CASE("find and collisions") {
  auto gens = surface_group();
  auto table = build_ball(gens, 2);
  const Matrix m = gens.evaluate("ab").matrix();
  CHECK(table.find(m) == table.trace(0, "ab", gens));
  Matrix nudged = m;
  nudged(0, 0) *= 1.0 + 1e-12;
  CHECK(table.find(nudged) == table.trace(0, "ab", gens));
  CHECK(table.find(gens.evaluate("abab").matrix()) == -1);

  // A rotation by a tiny angle sits within 10 grid cells of the identity.
  GeneratorSet tiny(3);
  Matrix r = Matrix::Identity(3, 3);
  r(0, 0) = r(1, 1) = std::cos(1e-3);
  r(0, 1) = -std::sin(1e-3);
  r(1, 0) = std::sin(1e-3);
  tiny.add('a', r);
  try {
    build_ball(tiny, 2, 1e-2);
    FAIL("expected ToleranceCollision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::tolerance_collision);
  }
  CHECK_NOTHROW(build_ball(tiny, 2, 1e-6));
}

TEST_CASE("geodesic_pairs") {
  SUBCASE("k = 0") {
    auto table = build_ball(surface_group(), 0);
    const auto pairs = geodesic_pairs(table, surface_group(), 0);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == ElementPair{0, 0});
  }
  SUBCASE("free group counts") {
    auto gens = free_group(2, 3);
    CHECK(geodesic_pairs(build_ball(gens, 1), gens, 1).size() == 12);
    CHECK(geodesic_pairs(build_ball(gens, 3), gens, 2).size() == 12 * 9);
  }
  SUBCASE("radius too small") {
    auto gens = free_group(2, 3);
    CHECK_THROWS_AS(geodesic_pairs(build_ball(gens, 2), gens, 2), Error);
  }
  SUBCASE("surface group agrees with a word-level oracle") {
    // Oracle: multiply out every word u v with |u| = |v| = k and decide geodesy by
    // looking the product up in a full ball of radius 2k on a different grid.
    auto gens = surface_group();
    for (int k : {1, 2}) {
      auto full = build_ball(gens, 2 * k, 1e-8);
      auto table = build_ball(gens, 2 * k - 1);
      std::set<std::pair<std::string, std::string>> expected;
      const auto words = all_words(gens, k);
      for (const auto& u : words) {
        const auto iu = full.find(gens.evaluate(u).matrix());
        if (iu < 0 || full.distance(iu) != k) continue;
        for (const auto& v : words) {
          const auto iv = full.find(gens.evaluate(v).matrix());
          if (iv < 0 || full.distance(iv) != k) continue;
          const auto iuv = full.find(gens.evaluate(u + v).matrix());
          REQUIRE(iuv >= 0);
          if (full.distance(iuv) == 2 * k) expected.emplace(full.word(iu, gens), full.word(iv, gens));
        }
      }
      std::set<std::pair<std::string, std::string>> got;
      for (auto [a, b] : geodesic_pairs(table, gens, k)) {
        // Same elements under the two tables' witness words.
        const auto fa = full.find(table.matrix(a));
        const auto fb = full.find(table.matrix(b));
        got.emplace(full.word(fa, gens), full.word(fb, gens));
      }
      CHECK(got == expected);
      CHECK(got.size() == expected.size());
    }
  }
}

TEST_CASE("pair_stats on a single flat") {
  const double t = 1.3;
  GeneratorSet gens(3);
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = std::exp(t);
  g(1, 1) = 1.0;
  g(2, 2) = std::exp(-t);
  gens.add('a', g);
  const auto e = gens.element(0);
  const auto st = pair_stats(e, e);
  CHECK(st.eps_plus == doctest::Approx(0.0));
  CHECK(st.eps_minus == doctest::Approx(0.0));
  // m1 = diag(e^-t, 1, e^t), m2 = diag(e^t, 1, e^-t): d_alpha = t.
  CHECK(st.s == doctest::Approx(t));
  CHECK(st.s >= 0.0);
}

TEST_CASE("pair_stats is invariant under unitary conjugation") {
  auto gens = surface_group();
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix k = oracle::random_unitary(rng, 3, true);
    const auto h = symspace::GroupElement::from_matrix(k / std::pow(k.determinant(), 1.0 / 3), 1e-8);
    const auto g1 = gens.evaluate(trial % 2 ? "abCd" : "ab");
    const auto g2 = gens.evaluate(trial % 2 ? "cDab" : "cd");
    const auto a = pair_stats(g1, g2);
    const auto b = pair_stats(h * g1 * h.inverse(), h * g2 * h.inverse());
    CHECK(b.s == doctest::Approx(a.s).epsilon(1e-8));
    CHECK(b.eps_plus == doctest::Approx(a.eps_plus).epsilon(1e-8));
    CHECK(b.eps_minus == doctest::Approx(a.eps_minus).epsilon(1e-8));
  }
}

TEST_CASE("survey matches per-pair statistics and is thread independent") {
  auto gens = surface_group();
  const int k = 2;
  auto table = build_ball(gens, 2 * k - 1);
  const auto pairs = geodesic_pairs(table, gens, k);

  std::vector<PairStats> direct;
  for (auto [a, b] : pairs) {
    auto st = pair_stats(gens.evaluate(table.word(a, gens)), gens.evaluate(table.word(b, gens)));
    st.g1 = a;
    st.g2 = b;
    direct.push_back(st);
  }
  const auto ref = aggregate(direct, 3);
  const auto one = survey(table, gens, pairs, {}, 1);
  const auto three = survey(table, gens, pairs, {}, 3);
  CHECK(one.stats.spacing == doctest::Approx(ref.stats.spacing).epsilon(1e-12));
  CHECK(one.stats.eps == doctest::Approx(ref.stats.eps).epsilon(1e-10));
  CHECK(one.stats.pair_count == pairs.size());
  CHECK(one.flagged.empty());

  CHECK(one.stats.spacing == three.stats.spacing);
  CHECK(one.stats.eps == three.stats.eps);
  CHECK(one.min_s.g1 == three.min_s.g1);
  CHECK(one.min_s.g2 == three.min_s.g2);
  CHECK(one.worst_plus.g1 == three.worst_plus.g1);
  CHECK(one.worst_minus.g2 == three.worst_minus.g2);

  SUBCASE("aggregation is order independent") {
    auto shuffled = direct;
    std::mt19937 gen(5);
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const auto again = aggregate(shuffled, 3);
    CHECK(again.stats.spacing == ref.stats.spacing);
    CHECK(again.stats.eps == ref.stats.eps);
    CHECK(again.min_s.g1 == ref.min_s.g1);
    CHECK(again.worst_plus.g2 == ref.worst_plus.g2);
  }
  SUBCASE("inverse pairs swap eps+ and eps-") {
    for (std::size_t i = 0; i < pairs.size(); i += 37) {
      const auto g1 = gens.evaluate(table.word(pairs[i].first, gens));
      const auto g2 = gens.evaluate(table.word(pairs[i].second, gens));
      const auto fwd = pair_stats(g1, g2);
      const auto inv = pair_stats(g2.inverse(), g1.inverse());
      CHECK(inv.s == doctest::Approx(fwd.s).epsilon(1e-8));
      CHECK(inv.eps_plus == doctest::Approx(fwd.eps_minus).epsilon(1e-8));
      CHECK(inv.eps_minus == doctest::Approx(fwd.eps_plus).epsilon(1e-8));
    }
  }
}

TEST_CASE("aggregate") {
  CHECK_THROWS_AS(aggregate({}, 3), Error);
  PairStats st{1, 2, 3.5, 0.25, 0.5};
  const auto one = aggregate({st}, 3);
  CHECK(one.stats.spacing == 3.5);
  CHECK(one.stats.eps == 0.75);
  CHECK(one.stats.pair_count == 1);
  auto gens = surface_group();
  auto table = build_ball(gens, 1);
  CHECK_THROWS_AS(survey(table, gens, {}), Error);
}

TEST_CASE("non-regular segments are flagged") {
  GeneratorSet gens(3);
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = g(1, 1) = std::exp(1.0);
  g(2, 2) = std::exp(-2.0);
  gens.add('a', g);
  auto table = build_ball(gens, 1);
  const auto pairs = geodesic_pairs(table, gens, 1);
  CHECK(pairs.size() == 2);
  // aa has a repeated top eigenvalue; AA only a repeated bottom one, which the
  // reversed segment turns back into a first-root gap.
  const auto res = survey(table, gens, pairs, {}, 1);
  CHECK(res.flagged.size() == 1);
  CHECK(res.stats.pair_count == 1);
}

TEST_CASE("word import") {
  auto gens = surface_group();
  auto table = build_ball(gens, 4);
  CHECK(import_words("", gens).empty());
  CHECK(words_to_pairs(table, gens, {}, 4).empty());

  const auto words = import_words("aaaaaaaa\n", gens);
  REQUIRE(words.size() == 1);
  const auto pairs = words_to_pairs(table, gens, words, 4);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first == pairs[0].second);
  CHECK(table.word(pairs[0].first, gens) == "aaaa");

  CHECK(import_words("abCD\r\n\nbcda\n", gens).size() == 2);
  try {
    import_words("abcd\nab1d\n", gens);
    FAIL("expected UnknownLetter");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_letter);
  }
  CHECK_THROWS_AS(import_words("abxd", gens), Error);
  try {
    words_to_pairs(table, gens, {"abc"}, 2);
    FAIL("expected WrongLength");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wrong_length);
  }
  // Duplicate words collapse to one pair.
  CHECK(words_to_pairs(table, gens, {"abcd", "abcd"}, 2).size() == 1);
}

TEST_CASE("word-list route equals the ball route at k = 2") {
  auto gens = surface_group();
  const int k = 2;
  auto table = build_ball(gens, 2 * k - 1);
  const auto pairs = geodesic_pairs(table, gens, k);
  std::string text;
  for (auto [a, b] : pairs) text += table.word(a, gens) + table.word(b, gens) + "\n";
  const auto imported = words_to_pairs(table, gens, import_words(text, gens), k);
  CHECK(imported.size() == pairs.size());
  const auto x = survey(table, gens, pairs, {}, 1);
  const auto y = survey(table, gens, imported, {}, 1);
  CHECK(x.stats.spacing == y.stats.spacing);
  CHECK(x.stats.eps == y.stats.eps);
}
