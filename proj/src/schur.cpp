#include "tropasym/schur.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "tropasym/errors.hpp"
#include "tropasym/tropical_spectral.hpp"

namespace tropasym {
namespace {

void require_min_plus(const TropicalMatrix& a, const char* op) {
  if (a.semiring() != Semiring::MinPlus) throw InputError(std::string(op) + " expects a min-plus matrix");
}

// Bellman-Ford from a virtual source joined to every node; returns the nodes
// of a negative cycle (in walk order) or nothing.
std::optional<std::vector<std::size_t>> find_negative_cycle(const TropicalMatrix& a) {
  const std::size_t n = a.size();
  std::vector<Rational> dist(n, Rational(0));
  std::vector<std::size_t> parent(n, n);
  std::size_t relaxed = n;
  for (std::size_t round = 0; round < n; ++round) {
    relaxed = n;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational cand = dist[i] + a(i, j);
        if (cand < dist[j]) {
          dist[j] = cand;
          parent[j] = i;
          relaxed = j;
        }
      }
    }
    if (relaxed == n) return std::nullopt;
  }
  // Walking back n steps from a node relaxed in round n lands on the cycle.
  std::size_t x = relaxed;
  for (std::size_t step = 0; step < n; ++step) x = parent[x];
  std::vector<std::size_t> cycle{x};
  for (std::size_t y = parent[x]; y != x; y = parent[y]) cycle.push_back(y);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

std::string describe_cycle(const std::vector<std::size_t>& cycle) {
  std::string out;
  for (auto v : cycle) out += std::to_string(v + 1) + " -> ";
  return out + std::to_string(cycle.front() + 1);
}

}  // namespace

TropicalMatrix minplus_schur(const TropicalMatrix& a, std::span<const std::size_t> c) {
  require_min_plus(a, "minplus_schur");
  const std::size_t n = a.size();
  std::vector<bool> in_c(n, false);
  for (auto v : c) {
    if (v >= n) throw InputError("minplus_schur: node index " + std::to_string(v) + " out of range");
    if (in_c[v]) throw InputError("minplus_schur: node " + std::to_string(v) + " listed twice");
    in_c[v] = true;
  }
  std::vector<std::size_t> keep, removed;
  for (std::size_t v = 0; v < n; ++v) (in_c[v] ? removed : keep).push_back(v);
  if (keep.empty()) throw InputError("minplus_schur: eliminating every node leaves an empty complement");
  if (removed.empty()) return a;

  const TropicalMatrix star = kleene_star(a.submatrix(removed));  // throws on a negative cycle in C

  std::vector<std::vector<Rational>> rows(keep.size(), std::vector<Rational>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    // Best way from keep[r] to each removed node q, entering C anywhere.
    std::vector<Rational> into(removed.size());
    for (std::size_t q = 0; q < removed.size(); ++q) {
      Rational best = a(keep[r], removed[0]) + star(0, q);
      for (std::size_t p = 1; p < removed.size(); ++p) best = std::min(best, Rational(a(keep[r], removed[p]) + star(p, q)));
      into[q] = best;
    }
    for (std::size_t s = 0; s < keep.size(); ++s) {
      Rational best = a(keep[r], keep[s]);
      for (std::size_t q = 0; q < removed.size(); ++q) best = std::min(best, Rational(into[q] + a(removed[q], keep[s])));
      rows[r][s] = best;
    }
  }
  return TropicalMatrix(rows, Semiring::MinPlus);
}

std::vector<SchurLevel> schur_sequence(const TropicalMatrix& b) {
  require_min_plus(b, "schur_sequence");
  std::vector<SchurLevel> levels;
  TropicalMatrix current = b;
  std::vector<std::size_t> map(b.size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;

  while (true) {
    SchurLevel level;
    level.matrix = current;
    level.node_map = map;
    level.eigenvalue = min_cycle_mean(current);
    // Cycles of minimum mean in B are cycles of maximum mean in -B.
    const SpectralData sd = spectral_data(current.negated());
    for (const auto& cls : sd.critical_classes) {
      auto& out = level.removed_classes.emplace_back();
      for (auto v : cls) out.push_back(map[v]);
    }
    const bool done = sd.critical_nodes.size() == current.size();
    std::vector<std::size_t> next_map;
    if (!done) {
      std::vector<bool> critical(current.size(), false);
      for (auto v : sd.critical_nodes) critical[v] = true;
      for (std::size_t v = 0; v < current.size(); ++v)
        if (!critical[v]) next_map.push_back(map[v]);
      current = minplus_schur(current.shifted(-level.eigenvalue), sd.critical_nodes);
    }
    levels.push_back(std::move(level));
    if (done) break;
    map = std::move(next_map);
  }
  return levels;
}

SchurReport candidate_exponents(const TropicalMatrix& b, BHatNormalization normalization) {
  require_min_plus(b, "candidate_exponents");
  const std::size_t n = b.size();
  SchurReport report;
  report.normalization = normalization;
  report.levels = schur_sequence(b);

  std::vector<Rational> shift(n);
  Rational cumulative = 0;
  for (const auto& level : report.levels) {
    cumulative += level.eigenvalue;
    const Rational& s = normalization == BHatNormalization::CumulativeEigenvalue ? cumulative : level.eigenvalue;
    for (const auto& cls : level.removed_classes)
      for (auto v : cls) shift[v] = s;
  }

  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = b(i, j) - shift[i];
  report.b_hat = TropicalMatrix(rows, Semiring::MinPlus);

  if (auto cycle = find_negative_cycle(report.b_hat)) {
    throw NumericalError("min-plus star of the normalized matrix diverges: negative cycle " + describe_cycle(*cycle));
  }
  const TropicalMatrix star = kleene_star(report.b_hat);

  std::set<ProjectivePoint> seen;
  for (std::size_t j = 0; j < n; ++j) {
    ExponentCandidate cand;
    cand.column = j;
    cand.v.resize(n);
    std::vector<Rational> neg(n);
    for (std::size_t i = 0; i < n; ++i) {
      cand.v[i] = star(i, j);
      neg[i] = -star(i, j);
    }
    cand.tp_point = normalize_projective(neg);
    if (seen.insert(cand.tp_point).second) report.candidates.push_back(std::move(cand));
  }
  return report;
}

std::vector<CandidateVerdict> compare_prediction(const TropicalMatrix& a, const SchurReport& report,
                                                 const PinfEstimate& pinf, double tol) {
  if (!(tol >= 0.0)) throw InputError("compare_prediction: tolerance must be non-negative");
  if (pinf.point.size() != a.size()) throw InputError("compare_prediction: dimension mismatch");
  const SpectralData sd = spectral_data(a);
  std::vector<CandidateVerdict> out;
  for (const auto& cand : report.candidates) {
    if (cand.tp_point.size() != a.size()) throw InputError("compare_prediction: dimension mismatch");
    CandidateVerdict verdict;
    verdict.tp_point = cand.tp_point;
    verdict.in_eigenspace = in_span(cand.tp_point, sd.generators);
    verdict.distance_to_pinf = to_float(cand.tp_point).distance(pinf.point);
    verdict.matches_pinf = verdict.distance_to_pinf <= tol;
    out.push_back(std::move(verdict));
  }
  return out;
}

}  // namespace tropasym
