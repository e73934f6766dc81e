#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tropasym/conjectures.hpp"
#include "tropasym/errors.hpp"

using namespace tropasym;
using tropasym::testing::mat;
using tropasym::testing::pt;

namespace {

const TropicalMatrix kFig4 = mat({{"0", "-1", "-1"}, {"-4", "0", "-1"}, {"-1", "-1", "-4"}});
const TropicalMatrix kFig6 = mat({{"0", "-3", "-2"}, {"1", "0", "-1"}, {"2", "1", "0"}});
const TropicalMatrix kFig7 = mat({{"0", "1", "3"}, {"-5", "0", "1"}, {"-6", "-1", "0"}});
const TropicalMatrix kFig8 = mat({{"0", "-4", "-2"}, {"1", "0", "-3"}, {"-1", "-1", "0"}});
const TropicalMatrix kFig9 = mat({{"0", "-9", "-2"}, {"1", "0", "-3"}, {"-1", "-1", "0"}});

ConjectureOptions quick() {
  ConjectureOptions o;
  o.schedule = geometric_schedule(4.0, 10);
  return o;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tropasym_test_" + name);
}

}  // namespace

TEST_CASE("translation_chain examples") {
  const std::vector<ProjectivePoint> fig7{pt({"0", "-2", "-3"}), pt({"0", "-5", "-6"})};
  const auto c = translation_chain(fig7);
  REQUIRE(c);
  CHECK(c->base == pt({"0", "-5", "-6"}));
  CHECK(c->beta == 3);
  CHECK(c->predicted == pt({"0", "-2", "-3"}));

  const std::vector<ProjectivePoint> single{pt({"0", "1", "2"})};
  const auto s = translation_chain(single);
  REQUIRE(s);
  CHECK(s->beta == 0);
  CHECK(s->predicted == pt({"0", "1", "2"}));

  const std::vector<ProjectivePoint> fig4{pt({"0", "-2", "-1"}), pt({"0", "1", "0"})};
  CHECK_FALSE(translation_chain(fig4));

  CHECK_THROWS_AS(translation_chain(std::vector<ProjectivePoint>{}), InputError);
  const std::vector<ProjectivePoint> mixed{pt({"0", "1"}), pt({"0", "1", "2"})};
  CHECK_THROWS_AS(translation_chain(mixed), InputError);
}

TEST_CASE("translation_chain invariants") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> d(-10, 10);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 4;
    std::vector<Rational> base(n);
    for (auto& x : base) x = tropasym::testing::q(d(rng), 2);
    std::vector<ProjectivePoint> gens;
    std::set<Rational> shifts;
    for (int g = 0; g < 1 + t % 4; ++g) {
      const Rational a = tropasym::testing::q(std::abs(d(rng)), 4);
      if (!shifts.insert(a).second) continue;
      std::vector<Rational> v = base;
      const Rational lift = tropasym::testing::q(d(rng), 3);  // constant added to all coordinates before normalizing
      for (std::size_t i = 0; i < n; ++i) v[i] += (i == 0 ? Rational(0) : a) + lift;
      gens.push_back(normalize_projective(v));
    }
    const auto chain = translation_chain(gens);
    REQUIRE(chain);
    CHECK(chain->beta == *shifts.rbegin() - *shifts.begin());
    for (std::size_t i = 1; i < n; ++i) CHECK(chain->predicted[i] - chain->base[i] == chain->beta);
    std::shuffle(gens.begin(), gens.end(), rng);
    const auto again = translation_chain(gens);
    REQUIRE(again);
    CHECK(again->base == chain->base);
    CHECK(again->predicted == chain->predicted);
    CHECK(again->beta == chain->beta);
  }
}

TEST_CASE("conjecture1_test on figure matrices") {
  const auto v7 = conjecture1_test(kFig7, quick());
  CHECK(v7.holds);
  CHECK(v7.deviation <= v7.tolerance_used);
  CHECK(v7.membership_ok);
  REQUIRE(v7.witness.size() == 1);
  CHECK(v7.witness[0].pinf.point.distance(normalize_float(std::vector<double>{0, -2, -3})) <= 1e-2);

  const auto v6 = conjecture1_test(kFig6, quick());  // single critical class
  CHECK(v6.holds);

  CHECK_THROWS_AS(conjecture1_test(kFig4, quick()), InputError);
}

TEST_CASE("conjecture1_test is reproducible") {
  auto opt = quick();
  opt.seed = 123;
  const auto a = conjecture1_test(kFig7, opt);
  const auto b = conjecture1_test(kFig7, opt);
  CHECK(a.deviation == b.deviation);
  CHECK(a.tolerance_used == b.tolerance_used);
  CHECK(a.witness[0].pinf.point.coords() == b.witness[0].pinf.point.coords());
  CHECK(a.seed == std::optional<std::uint64_t>(123));
}

TEST_CASE("tolerance_for stacks the largest error bound") {
  std::vector<PinfMeasurement> ms(2);
  ms[0].pinf.error_bound = 1e-4;
  ms[1].pinf.error_bound = 3e-4;
  CHECK(tolerance_for(1e-2, ms) == doctest::Approx(1e-2 + 3e-3));
  CHECK(tolerance_for(1e-2, std::span<const PinfMeasurement>{}) == 1e-2);
}

TEST_CASE("preserves_eigenspace") {
  const auto sd8 = spectral_data(kFig8);
  CHECK(preserves_eigenspace(sd8, kFig9));
  CHECK(preserves_eigenspace(sd8, kFig8));
  // raising a zero diagonal entry raises lambda
  for (std::size_t i = 0; i < 3; ++i) CHECK_FALSE(preserves_eigenspace(sd8, kFig8.with_entry(i, i, Rational(1, 4))));
  CHECK_FALSE(preserves_eigenspace(spectral_data(kFig7), kFig4));
}

TEST_CASE("eigenspace_preserving_perturbations") {
  const auto batch = eigenspace_preserving_perturbations(kFig8, 5, 2, 99);
  CHECK(batch.matrices.size() == 5);
  CHECK(batch.notice.empty());
  CHECK(batch.attempts >= 5);
  const auto sd = spectral_data(kFig8);
  std::set<std::string> distinct;
  for (const auto& m : batch.matrices) {
    CHECK(preserves_eigenspace(sd, m));
    CHECK(eigenspace_equal(kFig8, m));
    CHECK(m != kFig8);
    int changed = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        if (m(i, j) == kFig8(i, j)) continue;
        ++changed;
        const Rational delta = m(i, j) - kFig8(i, j);
        CHECK(abs(delta) <= 2);
        CHECK(Rational(delta * 2).get_den() == 1);  // a multiple of magnitude / 4
      }
    CHECK(changed == 1);
    distinct.insert(matrix_digest(m));
  }
  CHECK(distinct.size() == batch.matrices.size());

  const auto again = eigenspace_preserving_perturbations(kFig8, 5, 2, 99);
  CHECK(again.matrices == batch.matrices);
  CHECK(again.attempts == batch.attempts);

  CHECK_THROWS_AS(eigenspace_preserving_perturbations(kFig8, 0, 2, 1), InputError);
  CHECK_THROWS_AS(eigenspace_preserving_perturbations(kFig8, 1, 0, 1), InputError);
}

TEST_CASE("a tight matrix yields a notice instead of perturbations") {
  // The only entry of a 1x1 matrix is lambda itself.
  const auto tight = mat({{"0"}});
  const auto batch = eigenspace_preserving_perturbations(tight, 3, Rational(1, 2), 5, 40);
  CHECK(batch.matrices.empty());
  CHECK(batch.attempts == 40);
  CHECK_FALSE(batch.notice.empty());
}

TEST_CASE("conjecture2_test") {
  const std::vector<TropicalMatrix> fig9{kFig9};
  const auto v = conjecture2_test(kFig8, fig9, quick());
  CHECK(v.holds);
  CHECK(v.witness.size() == 2);
  CHECK(v.deviation <= 1e-2);

  const std::vector<TropicalMatrix> self{kFig7};
  const auto s = conjecture2_test(kFig7, self, quick());
  CHECK(s.holds);
  CHECK(s.deviation == 0.0);

  const std::vector<TropicalMatrix> wrong{kFig4};
  CHECK_THROWS_AS(conjecture2_test(kFig7, wrong, quick()), InputError);
}

TEST_CASE("random_matrix") {
  const auto a = random_matrix(4, Rational(1, 2), -6, 2, 42);
  CHECK(a == random_matrix(4, Rational(1, 2), -6, 2, 42));
  CHECK(a != random_matrix(4, Rational(1, 2), -6, 2, 43));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a(i, i) == 0);
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(a(i, j) >= -6);
      CHECK(a(i, j) <= 2);
      CHECK(Rational(a(i, j) * 2).get_den() == 1);
    }
  }
  CHECK_THROWS_AS(random_matrix(1, 1, -1, 1, 0), InputError);
  CHECK_THROWS_AS(random_matrix(3, 0, -1, 1, 0), InputError);
  CHECK_THROWS_AS(random_matrix(3, 1, 2, 1, 0), InputError);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("at least 30% of grid-1 samples have several critical classes") {
  // 1000 seeded 3x3 samples, entries in [-6, 2].
  int multi = 0;
  for (int i = 0; i < 1000; ++i)
    if (spectral_data(random_matrix(3, 1, -6, 2, derive_seed(2024, i))).critical_classes.size() >= 2) ++multi;
  CHECK(multi >= 300);
}

TEST_CASE("sample export round-trips") {
  const auto path = temp_file("samples.jsonl").string();
  std::vector<SampleRecord> records;
  const auto m = measure_pinf(kFig7, quick());
  records.push_back(SampleRecord{kFig7, spectral_data(kFig7).generators, m.pinf.point, m.pinf.error_bound, 7});
  records.push_back(SampleRecord{kFig4, spectral_data(kFig4).generators,
                                 normalize_float(std::vector<double>{0, 0.1, 1.0 / 3.0}), 1e-7, std::nullopt});
  export_samples(path, records);
  CHECK(read_samples(path) == records);
  CHECK(records[0].generators == std::vector<ProjectivePoint>{pt({"0", "-5", "-6"}), pt({"0", "-2", "-3"})});
  CHECK(records[0].pinf.distance(normalize_float(std::vector<double>{0, -2, -3})) <= 1e-2);

  export_samples(path, {});
  CHECK(std::filesystem::file_size(path) == 0);
  CHECK(read_samples(path).empty());
  std::filesystem::remove(path);
}

TEST_CASE("sample I/O failures name the path") {
  const std::string missing = "/nonexistent-dir/tropasym/samples.jsonl";
  try {
    export_samples(missing, {});
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(missing) != std::string::npos);
  }
  CHECK_THROWS(read_samples(missing));

  const auto path = temp_file("bad.jsonl").string();
  std::ofstream(path) << "{\"matrix\": 3}\n";
  CHECK_THROWS_AS(read_samples(path), InputError);
  std::filesystem::remove(path);
}
