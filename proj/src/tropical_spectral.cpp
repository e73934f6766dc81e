#include "tropasym/tropical_spectral.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "tropasym/errors.hpp"

namespace tropasym {
namespace {

void require_max_plus(const TropicalMatrix& a, const char* op) {
  if (a.semiring() != Semiring::MaxPlus) throw InputError(std::string(op) + " expects a max-plus matrix");
}

// Depth-first enumeration of simple cycles whose smallest node is `start`.
void extend_cycles(const TropicalMatrix& a, std::size_t start, std::size_t node, Rational& weight,
                   std::size_t length, std::vector<bool>& on_path, std::optional<Rational>& best) {
  const std::size_t n = a.size();
  for (std::size_t next = start; next < n; ++next) {
    if (next == start) {
      Rational mean = (weight + a(node, start)) / Rational(static_cast<long>(length));
      if (!best || mean > *best) best = mean;
    } else if (!on_path[next]) {
      on_path[next] = true;
      weight += a(node, next);
      extend_cycles(a, start, next, weight, length + 1, on_path, best);
      weight -= a(node, next);
      on_path[next] = false;
    }
  }
}

// Strongly connected components of a graph on `nodes`, given as adjacency matrix.
std::vector<std::vector<std::size_t>> components(std::size_t n, const std::vector<std::vector<bool>>& adj,
                                                 const std::vector<std::size_t>& nodes) {
  // Reachability closure; n is small.
  auto reach = adj;
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][m])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[m][j]) reach[i][j] = true;

  std::vector<std::vector<std::size_t>> classes;
  std::vector<bool> assigned(n, false);
  for (auto i : nodes) {
    if (assigned[i]) continue;
    auto& cls = classes.emplace_back();
    for (auto j : nodes) {
      if (reach[i][j] && reach[j][i]) {
        cls.push_back(j);
        assigned[j] = true;
      }
    }
  }
  return classes;
}

}  // namespace

Rational max_cycle_mean(const TropicalMatrix& a) {
  require_max_plus(a, "max_cycle_mean");
  const std::size_t n = a.size();
  // walk[m][j]: heaviest walk of exactly m edges ending at j (any start).
  std::vector<std::vector<Rational>> walk(n + 1, std::vector<Rational>(n));
  for (std::size_t m = 1; m <= n; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational acc = walk[m - 1][0] + a(0, j);
      for (std::size_t i = 1; i < n; ++i) acc = std::max(acc, Rational(walk[m - 1][i] + a(i, j)));
      walk[m][j] = acc;
    }
  }
  std::optional<Rational> lambda;
  for (std::size_t j = 0; j < n; ++j) {
    std::optional<Rational> worst;
    for (std::size_t m = 0; m < n; ++m) {
      Rational ratio = (walk[n][j] - walk[m][j]) / Rational(static_cast<long>(n - m));
      if (!worst || ratio < *worst) worst = ratio;
    }
    if (!lambda || *worst > *lambda) lambda = worst;
  }
  return *lambda;
}

Rational min_cycle_mean(const TropicalMatrix& a) {
  if (a.semiring() != Semiring::MinPlus) throw InputError("min_cycle_mean expects a min-plus matrix");
  return -max_cycle_mean(a.negated());
}

Rational cycle_mean_oracle(const TropicalMatrix& a) {
  require_max_plus(a, "cycle_mean_oracle");
  const std::size_t n = a.size();
  if (n > 8) throw InputError("cycle_mean_oracle is limited to n <= 8, got n = " + std::to_string(n));
  std::optional<Rational> best;
  std::vector<bool> on_path(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    Rational weight = 0;
    on_path[start] = true;
    extend_cycles(a, start, start, weight, 1, on_path, best);
    on_path[start] = false;
  }
  return *best;
}

SpectralData spectral_data(const TropicalMatrix& a) {
  require_max_plus(a, "spectral_data");
  const std::size_t n = a.size();
  SpectralData out;
  out.lambda = max_cycle_mean(a);
  const TropicalMatrix normalized = a.shifted(-out.lambda);
  const TropicalMatrix star = kleene_star(normalized);

  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<bool> critical(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Edge i -> j closes a zero-weight cycle iff A_ij + best path j -> i is 0.
      if (normalized(i, j) + star(j, i) == 0) {
        adj[i][j] = true;
        critical[i] = critical[j] = true;
        out.critical_edges.emplace_back(i, j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (critical[i]) out.critical_nodes.push_back(i);

  out.critical_classes = components(n, adj, out.critical_nodes);

  std::set<ProjectivePoint> seen;
  for (const auto& cls : out.critical_classes) {
    std::vector<Rational> column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = star(i, cls.front());
    auto g = normalize_projective(column);
    if (seen.insert(g).second) out.generators.push_back(std::move(g));
  }
  return out;
}

bool eigenspace_equal(const SpectralData& a, const SpectralData& b) {
  if (a.generators.empty() || b.generators.empty()) return false;
  if (a.generators.front().size() != b.generators.front().size()) {
    throw InputError("eigenspace_equal: dimension mismatch");
  }
  auto covered = [](const std::vector<ProjectivePoint>& xs, const std::vector<ProjectivePoint>& gens) {
    return std::all_of(xs.begin(), xs.end(), [&](const ProjectivePoint& x) { return in_span(x, gens); });
  };
  return covered(a.generators, b.generators) && covered(b.generators, a.generators);
}

bool eigenspace_equal(const TropicalMatrix& a, const TropicalMatrix& b) {
  if (a.size() != b.size()) throw InputError("eigenspace_equal: dimension mismatch");
  return eigenspace_equal(spectral_data(a), spectral_data(b));
}

bool verify_eigenvector(const TropicalMatrix& a, const Rational& lambda, const ProjectivePoint& v) {
  require_max_plus(a, "verify_eigenvector");
  if (v.size() != a.size()) throw InputError("verify_eigenvector: dimension mismatch");
  const auto image = trop_apply(a, v.coords());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (image[i] != lambda + v[i]) return false;
  }
  return true;
}

bool hadamard_lemma_check(const TropicalMatrix& a, unsigned k) {
  if (k == 0) throw InputError("hadamard_lemma_check: k must be >= 1");
  const Rational factor(static_cast<long>(k));
  const SpectralData base = spectral_data(a);
  const SpectralData scaled = spectral_data(scale_matrix(a, factor));
  if (scaled.lambda != factor * base.lambda) return false;

  std::set<ProjectivePoint> expected;
  for (const auto& g : base.generators) {
    std::vector<Rational> c = g.coords();
    for (auto& x : c) x *= factor;
    expected.insert(normalize_projective(c));
  }
  std::set<ProjectivePoint> actual(scaled.generators.begin(), scaled.generators.end());
  return expected == actual;
}

}  // namespace tropasym
