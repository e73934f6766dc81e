#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tropasym/errors.hpp"
#include "tropasym/tropical_core.hpp"
#include "tropasym/tropical_spectral.hpp"

using namespace tropasym;
using tropasym::testing::mat;
using tropasym::testing::pt;

namespace {

const TropicalMatrix kFig7 = mat({{"0", "1", "3"}, {"-5", "0", "1"}, {"-6", "-1", "0"}});
const TropicalMatrix kCounter = mat({{"0", "-3", "-4"}, {"-1", "0", "-2"}, {"-1", "-1", "0"}});

std::vector<ProjectivePoint> star_columns(const TropicalMatrix& s) {
  std::vector<ProjectivePoint> out;
  for (std::size_t j = 0; j < s.size(); ++j) {
    std::vector<Rational> col;
    for (std::size_t i = 0; i < s.size(); ++i) col.push_back(s(i, j));
    out.push_back(normalize_projective(col));
  }
  return out;
}

}  // namespace

TEST_CASE("parse_rational reads decimals, fractions and exponents") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-2.5") == Rational(-5, 2));
  CHECK(parse_rational("7/3") == Rational(7, 3));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("0.125E2") == Rational(25, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("0.05") == Rational(1, 20));
  CHECK(parse_rational("007") == Rational(7));
  CHECK(parse_rational("-010/08") == Rational(-5, 4));
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), InputError);
}

TEST_CASE("to_string is canonical and round-trips") {
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(-4, 2)) == "-2");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97);
  for (int i = 0; i < 200; ++i) {
    const Rational x = tropasym::testing::q(num(rng), den(rng));
    CHECK(parse_rational(to_string(x)) == x);
  }
}

TEST_CASE("from_double is exact") {
  CHECK(from_double(0.5) == Rational(1, 2));
  CHECK(from_double(-3.0) == Rational(-3));
  CHECK(to_double(from_double(0.1)) == 0.1);
  CHECK_THROWS_AS(from_double(std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("matrix construction validates shape") {
  CHECK_THROWS_AS(TropicalMatrix(std::vector<std::vector<Rational>>{}), InputError);
  CHECK_THROWS_AS(mat({{"0", "1"}, {"2"}}), InputError);
  CHECK(TropicalMatrix(2)(1, 0) == 0);
  CHECK(parse_semiring("min-plus") == Semiring::MinPlus);
  CHECK_THROWS_AS(parse_semiring("plus-times"), InputError);
}

TEST_CASE("normalize_projective") {
  CHECK(pt({"-1.5", "0", "-1"}).coords() == std::vector<Rational>{0, Rational(3, 2), Rational(1, 2)});
  CHECK(pt({"7/3", "7/3", "7/3"}).coords() == std::vector<Rational>{0, 0, 0});
  CHECK(pt({"0", "-2", "5"}).coords() == std::vector<Rational>{0, -2, 5});
  CHECK_THROWS_AS(normalize_projective(std::vector<Rational>{}), InputError);
}

TEST_CASE("normalize_projective is invariant under adding a constant") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-40, 40);
  for (int t = 0; t < 100; ++t) {
    std::vector<Rational> v(4), w(4);
    const Rational c = tropasym::testing::q(d(rng), 3);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = tropasym::testing::q(d(rng), 4);
      w[i] = v[i] + c;
    }
    CHECK(normalize_projective(v) == normalize_projective(w));
  }
}

TEST_CASE("project_to_plane drops the leading zero") {
  CHECK(project_to_plane(pt({"0", "-2", "-1"})) == std::vector<Rational>{-2, -1});
  CHECK(project_to_plane(pt({"0", "0", "0"})) == std::vector<Rational>{0, 0});
  CHECK(project_to_plane(pt({"0", "5"})) == std::vector<Rational>{5});
}

TEST_CASE("trop_matmul and trop_add") {
  const auto a = mat({{"0", "-1"}, {"2", "1"}});
  const auto b = mat({{"1", "0"}, {"-3", "4"}});
  CHECK(trop_matmul(a, b) == mat({{"1", "3"}, {"3", "5"}}));
  CHECK(trop_add(a, b) == mat({{"1", "0"}, {"2", "4"}}));
  const auto am = a.retagged(Semiring::MinPlus), bm = b.retagged(Semiring::MinPlus);
  CHECK(trop_matmul(am, bm) == mat({{"-4", "0"}, {"-2", "2"}}, Semiring::MinPlus));
  CHECK_THROWS_AS(trop_matmul(a, bm), InputError);
  CHECK_THROWS_AS(trop_matmul(a, kFig7), InputError);
}

TEST_CASE("trop_matmul is associative and the identity-free star is idempotent") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const auto a = tropasym::testing::random_rational_matrix(4, rng);
    const auto b = tropasym::testing::random_rational_matrix(4, rng);
    const auto c = tropasym::testing::random_rational_matrix(4, rng);
    CHECK(trop_matmul(trop_matmul(a, b), c) == trop_matmul(a, trop_matmul(b, c)));
    const auto s = kleene_star(a.shifted(-max_cycle_mean(a)));
    CHECK(trop_matmul(s, s) == s);
  }
}

TEST_CASE("trop_apply") {
  const std::vector<Rational> x{0, -2, -3};
  CHECK(trop_apply(kFig7, x) == x);  // (0,-2,-3) is an eigenvector with lambda 0
}

TEST_CASE("kleene_star on figure matrices") {
  const auto s7 = kleene_star(kFig7);
  const auto cols7 = star_columns(s7);
  CHECK(cols7[0] == pt({"0", "-5", "-6"}));
  CHECK(cols7[1] == pt({"0", "-2", "-3"}));
  CHECK(cols7[2] == pt({"0", "-2", "-3"}));

  const auto colsc = star_columns(kleene_star(kCounter));
  CHECK(colsc[0] == pt({"0", "-1", "-1"}));
  CHECK(colsc[1] == pt({"0", "3", "2"}));
  CHECK(colsc[2] == pt({"0", "2", "4"}));
}

TEST_CASE("kleene_star of a 2x2 with negative off-diagonal is A (+) I") {
  const auto a = mat({{"0", "-1"}, {"-3", "0"}});
  CHECK(kleene_star(a) == a);
  const auto b = mat({{"-2", "-1"}, {"-3", "-5"}});
  CHECK(kleene_star(b) == mat({{"0", "-1"}, {"-3", "0"}}));
}

TEST_CASE("kleene_star rejects a positive cycle") {
  CHECK_THROWS_AS(kleene_star(mat({{"0", "2"}, {"1", "0"}})), InputError);
  CHECK_THROWS_AS(kleene_star(mat({{"0", "-2"}, {"-1", "0"}}, Semiring::MinPlus)), InputError);
}

TEST_CASE("kleene_star equals the walk-length dynamic program") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + t % 6;
    auto a = tropasym::testing::random_rational_matrix(n, rng);
    a = a.shifted(-max_cycle_mean(a));
    CHECK(kleene_star(a) == tropasym::testing::best_walks_dp(a));
    const auto m = tropasym::testing::random_nonnegative_minplus(n, rng);
    CHECK(kleene_star(m) == tropasym::testing::best_walks_dp(m));
  }
}

TEST_CASE("projection onto a span") {
  const std::vector<ProjectivePoint> cex{pt({"0", "-1", "-1"}), pt({"0", "3", "2"}), pt({"0", "2", "4"})};
  CHECK(trop_project_onto_span(pt({"0", "0", "-1"}), cex) == pt({"0", "0", "-1"}));
  CHECK(in_span(pt({"0", "0", "-1"}), cex));

  const std::vector<ProjectivePoint> fig3{pt({"0", "-1", "-1"}), pt({"0", "6", "4"}), pt({"0", "4", "5"})};
  CHECK(trop_project_onto_span(pt({"0", "4", "3.5"}), fig3) == pt({"0", "4", "3.5"}));

  const std::vector<ProjectivePoint> single{pt({"0", "1", "2"})};
  CHECK_FALSE(in_span(pt({"0", "3", "4"}), single));
  CHECK(in_span(pt({"0", "1", "2"}), single));
  CHECK_THROWS_AS(in_span(pt({"0", "1"}), single), InputError);
  CHECK_THROWS_AS(in_span(pt({"0", "1"}), std::vector<ProjectivePoint>{}), InputError);
}

TEST_CASE("projection properties on random generator sets") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-12, 12);
  auto random_point = [&](std::size_t n) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = tropasym::testing::q(d(rng), 2);
    return normalize_projective(v);
  };
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 4;
    std::vector<ProjectivePoint> gens;
    for (int g = 0; g < 1 + t % 3; ++g) gens.push_back(random_point(n));
    const auto x = random_point(n);
    const auto p = trop_project_onto_span(x, gens);
    // idempotent, fixes generators, lands in the span, stays below x
    CHECK(trop_project_onto_span(p, gens) == p);
    CHECK(in_span(p, gens));
    for (const auto& g : gens) CHECK(trop_project_onto_span(g, gens) == g);
    // closed form: the largest element below x is max_g (g + min_i (x_i - g_i))
    std::vector<Rational> lifted(n);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      Rational c = x[0] - gens[gi][0];
      for (std::size_t i = 1; i < n; ++i) c = std::min(c, Rational(x[i] - gens[gi][i]));
      for (std::size_t i = 0; i < n; ++i) {
        const Rational v = gens[gi][i] + c;
        if (gi == 0 || v > lifted[i]) lifted[i] = v;
      }
    }
    CHECK(normalize_projective(lifted) == p);
    CHECK(in_span(x, gens) == (p == x));
    // float twin agrees within rounding
    std::vector<FloatPoint> fgens;
    for (const auto& g : gens) fgens.push_back(to_float(g));
    CHECK(trop_project_onto_span(to_float(x), fgens).distance(to_float(p)) < 1e-12);
  }
}

TEST_CASE("span_distance is zero on the span") {
  const std::vector<FloatPoint> gens{to_float(pt({"0", "-5", "-6"})), to_float(pt({"0", "-2", "-3"}))};
  const double mid[3] = {0.0, -3.5, -4.5};
  CHECK(span_distance(normalize_float(mid), gens) < 1e-15);
  const double off[3] = {0.0, -3.0, -3.0};
  CHECK(span_distance(normalize_float(off), gens) > 0.5);
}

TEST_CASE("normalize_float rejects non-finite input") {
  const double bad[2] = {0.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(normalize_float(bad), InputError);
}

TEST_CASE("scale_matrix") {
  const auto a = mat({{"0", "-3"}, {"-1", "0"}});
  CHECK(scale_matrix(a, 1) == a);
  CHECK(scale_matrix(a, 2) == mat({{"0", "-6"}, {"-2", "0"}}));
  CHECK_THROWS_AS(scale_matrix(a, 0), InputError);
  CHECK_THROWS_AS(scale_matrix(a, -1), InputError);
}

TEST_CASE("matrix helpers") {
  CHECK(kFig7.transposed()(0, 2) == -6);
  CHECK(kFig7.negated().semiring() == Semiring::MinPlus);
  CHECK(kFig7.negated()(0, 2) == -3);
  CHECK(kFig7.negated().negated() == kFig7);
  const std::size_t nodes[2] = {2, 0};
  CHECK(kFig7.submatrix(nodes) == mat({{"0", "-6"}, {"3", "0"}}));
  CHECK(kFig7.with_entry(0, 1, -9)(0, 1) == -9);
  CHECK(kFig7.max_entry() == 3);
  CHECK(kFig7.min_entry() == -6);
  CHECK(TropicalMatrix::from_doubles({{0.5, -0.25}, {1.0, 0.0}}) == mat({{"1/2", "-1/4"}, {"1", "0"}}));
}
