#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tropasym/tropical_core.hpp"

namespace tropasym {

/// Max-plus spectral data of a real square matrix.
struct SpectralData {
  Rational lambda;
  std::vector<std::size_t> critical_nodes;
  std::vector<std::pair<std::size_t, std::size_t>> critical_edges;
  /// Strongly connected components of the critical graph, each sorted, ordered by smallest node.
  std::vector<std::vector<std::size_t>> critical_classes;
  /// One normalized Kleene-star column per class, deduplicated.
  std::vector<ProjectivePoint> generators;
};

/// Maximum cycle mean by Karp's dynamic program. Tag must be max-plus.
Rational max_cycle_mean(const TropicalMatrix& a);

/// Minimum cycle mean of a min-plus matrix, as -max_cycle_mean(-A).
Rational min_cycle_mean(const TropicalMatrix& a);

/// Brute force over all simple cycles; n <= 8.
Rational cycle_mean_oracle(const TropicalMatrix& a);

SpectralData spectral_data(const TropicalMatrix& a);

/// Mutual span membership of the two generator sets.
bool eigenspace_equal(const TropicalMatrix& a, const TropicalMatrix& b);
bool eigenspace_equal(const SpectralData& a, const SpectralData& b);

/// Exact check of max_j(A_ij + v_j) == lambda + v_i for every row.
bool verify_eigenvector(const TropicalMatrix& a, const Rational& lambda, const ProjectivePoint& v);

/// Recomputes lambda and generators of kA and compares them with k times those of A.
bool hadamard_lemma_check(const TropicalMatrix& a, unsigned k);

}  // namespace tropasym
