// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "support/oracles.hpp"
#include "tropasym/conjectures.hpp"
#include "tropasym/errors.hpp"
#include "tropasym/figures.hpp"
#include "tropasym/io.hpp"
#include "tropasym/perron.hpp"
#include "tropasym/schur.hpp"
#include "tropasym/tropical_spectral.hpp"

using namespace tropasym;
using tropasym::testing::q;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects the first few failure messages of a criterion.
class Failures {
 public:
  void add(const std::string& msg) {
    if (count_++ < 5) text_ += (text_.empty() ? "" : "; ") + msg;
  }
  bool any() const { return count_ > 0; }
  std::string text() const {
    return count_ > 5 ? text_ + "; ... " + std::to_string(count_) + " failures" : text_;
  }

 private:
  std::size_t count_ = 0;
  std::string text_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<FloatPoint> float_gens(const SpectralData& sd) {
  std::vector<FloatPoint> out;
  for (const auto& g : sd.generators) out.push_back(to_float(g));
  return out;
}

// Rounding slack when comparing a double against an exact rational bound.
double ulps(double x) { return 8 * std::numeric_limits<double>::epsilon() * (1 + std::abs(x)); }

constexpr std::uint64_t kBase = 20240601;

struct PerronCase {
  TropicalMatrix a;
  SpectralData sd;
  PerronTrajectory traj;
};

std::vector<PerronCase> perron_cases;
double perron_seconds = 0;

void run_perron_cases() {
  const auto schedule = geometric_schedule(1.0, 14);
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t n = 3 + i % 4;
    auto a = random_matrix(n, q(1, 2), Rational(-6), Rational(2), derive_seed(kBase + 1, i));
    auto sd = spectral_data(a);
    auto traj = normalized_trajectory(a, schedule);
    perron_cases.push_back({std::move(a), std::move(sd), std::move(traj)});
  }
  perron_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome eigenvalue_limit() {
  Failures f;
  double worst_gap = 0;
  for (std::size_t i = 0; i < perron_cases.size(); ++i) {
    const auto& c = perron_cases[i];
    const double lambda = to_double(c.sd.lambda);
    const double ln_n = std::log(static_cast<double>(c.a.size()));
    if (!c.traj.failures.empty()) f.add("matrix " + std::to_string(i) + ": " + c.traj.failures.front().reason);
    if (c.traj.samples.size() != 15) continue;
    for (const auto& s : c.traj.samples) {
      if (s.log_rho_over_k < lambda - ulps(lambda) || s.log_rho_over_k > lambda + ln_n / s.k + ulps(lambda))
        f.add("matrix " + std::to_string(i) + " k=" + fmt(s.k) + " outside sandwich");
    }
    const auto& last = c.traj.samples.back();
    if (last.k != 16384) f.add("matrix " + std::to_string(i) + " last k " + fmt(last.k));
    const double gap = last.log_rho_over_k - lambda;
    worst_gap = std::max(worst_gap, gap);
    if (!(gap < 1e-3)) f.add("matrix " + std::to_string(i) + " gap " + fmt(gap));
  }
  if (!(perron_seconds < 60)) f.add("runtime " + fmt(perron_seconds) + " s");
  return {!f.any(), f.any() ? f.text()
                            : "50 matrices, max gap at k=2^14 " + fmt(worst_gap) + ", " + fmt(perron_seconds) + " s"};
}

Outcome eigenvector_membership() {
  Failures f;
  double worst = 0;
  for (std::size_t i = 0; i < perron_cases.size(); ++i) {
    const auto& c = perron_cases[i];
    if (c.traj.samples.size() < 2) {
      f.add("matrix " + std::to_string(i) + " has no trajectory");
      continue;
    }
    const auto est = estimate_p_infinity(c.traj);
    const auto gens = float_gens(c.sd);
    const double d = span_distance(c.traj.samples.back().point, gens);
    worst = std::max(worst, d);
    if (!(d <= 10 * est.error_bound + 1e-3))
      f.add("matrix " + std::to_string(i) + " distance " + fmt(d) + " bound " + fmt(est.error_bound));
  }
  return {!f.any(), f.any() ? f.text() : "50 matrices, max span distance " + fmt(worst)};
}

Outcome figure_reproduction() {
  Failures f;
  const auto schedule = geometric_schedule(4.0, 12);
  for (const std::string id : {"fig2", "fig3", "fig4", "fig7"}) {
    const auto r = analyze_figure(embedded_figure(id), schedule);
    if (!r.pinf) {
      f.add(id + ": " + r.pinf_error);
      continue;
    }
    const double d = r.pinf->point.distance(to_float(r.figure.caption_pinf));
    if (!(d <= 1e-2)) f.add(id + " off caption by " + fmt(d));
  }

  std::ostringstream out, err;
  const int code = cli::run({"trop-asym", "figures"}, out, err);
  if (code != 0) {
    f.add("figures command exited " + std::to_string(code));
  } else {
    const auto j = io::Json::parse(out.str());
    std::set<std::string> discrepant;
    for (const auto& row : j["figures"])
      if (row["flag"] == "DISCREPANT") discrepant.insert(row["id"].get<std::string>());
    const std::set<std::string> expected{"fig6", "fig8", "fig9", "counterexample"};
    if (discrepant != expected) {
      std::string got;
      for (const auto& id : discrepant) got += " " + id;
      f.add("DISCREPANT set:" + got);
    }
  }
  return {!f.any(), f.any() ? f.text() : "fig2/3/4/7 within 1e-2; DISCREPANT = fig6, fig8, fig9, counterexample"};
}

Outcome conjecture1() {
  Failures f;
  std::size_t found = 0, drawn = 0;
  double worst = 0;
  for (std::uint64_t i = 0; found < 100 && drawn < 20000; ++i, ++drawn) {
    const std::size_t n = 3 + i % 2;
    const auto a = random_matrix(n, Rational(1), Rational(-6), Rational(2), derive_seed(kBase + 4, i));
    const auto chain = translation_chain(spectral_data(a).generators);
    if (!chain || chain->beta == 0) continue;
    ++found;
    ConjectureOptions opts;
    opts.seed = derive_seed(kBase + 4, i);
    const auto v = conjecture1_test(a, opts);
    worst = std::max(worst, v.deviation);
    if (!(v.deviation <= 1e-2)) f.add("seed index " + std::to_string(i) + " deviation " + fmt(v.deviation));
  }
  if (found < 100) f.add("only " + std::to_string(found) + " chain matrices");
  return {!f.any(), f.any() ? f.text()
                            : "100 chain matrices from " + std::to_string(drawn) + " draws, max deviation " +
                                  fmt(worst)};
}

Outcome conjecture2() {
  Failures f;
  std::size_t families = 0, skipped = 0;
  double worst = 0;
  for (std::uint64_t i = 0; families < 20 && i < 400; ++i) {
    const auto seed = derive_seed(kBase + 5, i);
    const auto a = random_matrix(3 + i % 2, q(1, 2), Rational(-6), Rational(2), seed);
    const auto batch = eigenspace_preserving_perturbations(a, 5, Rational(2), seed);
    if (batch.matrices.size() < 5) {
      ++skipped;
      continue;
    }
    ++families;
    const auto v = conjecture2_test(a, batch.matrices);
    worst = std::max(worst, v.deviation);
    if (!(v.deviation <= 1e-2)) f.add("family " + std::to_string(i) + " spread " + fmt(v.deviation));
  }
  if (families < 20) f.add("only " + std::to_string(families) + " families");

  const auto fig8 = embedded_figure("fig8").matrix;
  const std::vector<TropicalMatrix> fig9{embedded_figure("fig9").matrix};
  const auto pair = conjecture2_test(fig8, fig9);
  if (!(pair.deviation <= 1e-2)) f.add("fig8/fig9 spread " + fmt(pair.deviation));
  return {!f.any(), f.any() ? f.text()
                            : "20 families x 6 matrices (" + std::to_string(skipped) +
                                  " bases skipped), max spread " + fmt(worst) + "; fig8/fig9 spread " +
                                  fmt(pair.deviation)};
}

Outcome hadamard() {
  Failures f;
  std::mt19937_64 rng(kBase + 6);
  for (int t = 0; t < 100; ++t) {
    const auto a = testing::random_rational_matrix(2 + t % 5, rng, 3, -6, 4);
    const auto sd = spectral_data(a);
    for (unsigned k : {2u, 3u, 5u}) {
      const Rational kk(k);
      const auto sk = spectral_data(scale_matrix(a, kk));
      std::set<ProjectivePoint> scaled, got(sk.generators.begin(), sk.generators.end());
      for (const auto& g : sd.generators) {
        std::vector<Rational> c;
        for (const auto& x : g.coords()) c.push_back(x * kk);
        scaled.insert(normalize_projective(c));
      }
      if (sk.lambda != sd.lambda * kk) f.add("matrix " + std::to_string(t) + " k=" + std::to_string(k) + " lambda");
      if (scaled != got) f.add("matrix " + std::to_string(t) + " k=" + std::to_string(k) + " generators");
      if (!hadamard_lemma_check(a, k)) f.add("matrix " + std::to_string(t) + " library check");
    }
  }
  return {!f.any(), f.any() ? f.text() : "100 matrices, k in {2,3,5}, exact"};
}

Outcome oracles() {
  Failures f;
  std::mt19937_64 rng(kBase + 7);
  for (int t = 0; t < 200; ++t) {
    const auto a = testing::random_rational_matrix(1 + t % 6, rng, 4, -8, 8);
    if (max_cycle_mean(a) != cycle_mean_oracle(a)) f.add("Karp case " + std::to_string(t));
  }
  for (int t = 0; t < 100; ++t) {
    const auto a = testing::random_rational_matrix(1 + t % 6, rng, 2, -6, 4);
    const auto neg = a.shifted(Rational(-max_cycle_mean(a) - 1));
    if (kleene_star(neg) != testing::best_walks_dp(neg)) f.add("star case " + std::to_string(t));
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 5;
    const auto b = testing::random_nonnegative_minplus(n, rng);
    std::vector<std::size_t> c;
    for (std::size_t v = 0; v < n; ++v)
      if (rng() % 2) c.push_back(v);
    if (c.size() == n) c.pop_back();
    if (minplus_schur(b, c) != testing::restricted_shortest_paths(b, c)) f.add("Schur case " + std::to_string(t));
  }
  return {!f.any(), f.any() ? f.text() : "Karp 200, star 100, Schur 100, exact"};
}

Outcome robustness() {
  Failures f;
  double worst = 0;
  const auto deep = geometric_schedule(1.0, 14);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto a = random_matrix(3 + i % 4, q(1, 2), Rational(-6), Rational(2), derive_seed(kBase + 8, i));
    const std::string tag = "matrix " + std::to_string(i);
    for (double k : {1.0, 2.0, 5.0, 10.0, 20.0}) {
      const auto lg = log_perron_eigenpair(a, k);
      const auto fl = perron_float_oracle(a, k);
      double d = std::abs(lg.log_rho - std::log(fl.rho));
      for (std::size_t j = 0; j < a.size(); ++j)
        d = std::max(d, std::abs(lg.log_vector[j] - std::log(fl.vector[j])));
      worst = std::max(worst, d);
      if (!(d <= 1e-8)) f.add(tag + " k=" + fmt(k) + " differs by " + fmt(d));
    }

    const auto traj = normalized_trajectory(a, deep);
    if (!traj.failures.empty() || traj.samples.size() != deep.size()) {
      f.add(tag + " deep schedule incomplete");
      continue;
    }
    for (std::size_t s = 0; s < traj.samples.size(); ++s) {
      const auto& x = traj.samples[s];
      bool finite = std::isfinite(x.log_rho_over_k);
      for (double c : x.point.coords()) finite = finite && std::isfinite(c);
      if (!finite) f.add(tag + " non-finite at k=" + fmt(x.k));
      if (s > 0 && x.log_rho_over_k > traj.samples[s - 1].log_rho_over_k + ulps(x.log_rho_over_k))
        f.add(tag + " eigenvalue increases at k=" + fmt(x.k));
    }
    try {
      if (perron_float_oracle(a, 16384).reliable) f.add(tag + " float oracle reliable at k=2^14");
    } catch (const FloatRangeError&) {
    }
  }
  return {!f.any(), f.any() ? f.text() : "20 matrices, max log discrepancy " + fmt(worst) +
                                             "; deep schedule finite and monotone, oracle out of range"};
}

Outcome counterexample() {
  Failures f;
  const auto fig = embedded_figure("counterexample");
  const auto expected = TropicalMatrix::from_strings({{"0", "-3", "-4"}, {"-1", "0", "-2"}, {"-1", "-1", "0"}});
  if (fig.matrix != expected) f.add("embedded matrix differs");
  const auto sd = spectral_data(expected);
  const auto claim = testing::pt({"0", "0", "-1"});
  if (!in_span(claim, sd.generators)) f.add("(0,0,-1) not in span");
  const auto est = estimate_p_infinity(normalized_trajectory(expected, geometric_schedule(4.0, 12)));
  const double d = est.point.distance(to_float(claim));
  if (!(d > 0.1)) f.add("P_inf within " + fmt(d) + " of (0,0,-1)");
  return {!f.any(), f.any() ? f.text() : "(0,0,-1) in span exactly; P_inf at distance " + fmt(d)};
}

}  // namespace

int main() {
  run_perron_cases();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"eigenvalue limit", eigenvalue_limit},
      {"eigenvector membership", eigenvector_membership},
      {"figure reproduction", figure_reproduction},
      {"conjecture 1 (translation chains)", conjecture1},
      {"conjecture 2 (eigenspace-preserving perturbations)", conjecture2},
      {"Hadamard scaling", hadamard},
      {"oracle equivalence", oracles},
      {"numerical robustness", robustness},
      {"counterexample", counterexample},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", static_cast<int>(i + 1), criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
