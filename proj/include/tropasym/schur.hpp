#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tropasym/perron.hpp"
#include "tropasym/tropical_core.hpp"

namespace tropasym {

/// One step of the repeated min-plus Schur reduction.
struct SchurLevel {
  /// Min-plus matrix over the nodes that survive to this level.
  TropicalMatrix matrix;
  /// node_map[i] is the original index of row/column i of `matrix`.
  std::vector<std::size_t> node_map;
  /// Min-plus eigenvalue (minimum cycle mean) of `matrix`.
  Rational eigenvalue;
  /// Critical classes of this level, in original indices. They are the nodes
  /// eliminated to form the next level.
  std::vector<std::vector<std::size_t>> removed_classes;
};

/// How B-hat is built from the level eigenvalues.
enum class BHatNormalization {
  /// Row i is shifted by the sum of the level eigenvalues up to the level
  /// that removes node i: the eigenvalue of that level in the units of B.
  CumulativeEigenvalue,
  /// Row i is shifted by the eigenvalue recorded at its removal level only.
  LevelEigenvalue,
};

struct ExponentCandidate {
  /// Exponent vector read from a column of the min-plus star of B-hat.
  std::vector<Rational> v;
  /// normalize_projective(-v).
  ProjectivePoint tp_point;
  /// Column of B-hat* it came from (first column giving this point).
  std::size_t column = 0;
};

struct SchurReport {
  std::vector<SchurLevel> levels;
  TropicalMatrix b_hat;
  BHatNormalization normalization = BHatNormalization::CumulativeEigenvalue;
  std::vector<ExponentCandidate> candidates;
};

/// A_NN (+) A_NC (A_CC)* A_CN over N = complement of C, in min-plus.
/// Rows and columns of the result follow the increasing order of N.
/// Throws InputError if C is the full node set, contains an out-of-range or
/// repeated index, or carries a negative cycle.
TropicalMatrix minplus_schur(const TropicalMatrix& a, std::span<const std::size_t> c);

/// Level 0 is B; each next level is the Schur complement of the critical
/// nodes of the eigenvalue-normalized current level. Stops once every node
/// of a level is critical.
std::vector<SchurLevel> schur_sequence(const TropicalMatrix& b);

/// Builds B-hat, its min-plus star and one candidate per distinct column.
/// Throws NumericalError naming a negative cycle if the star diverges.
SchurReport candidate_exponents(const TropicalMatrix& b,
                                BHatNormalization normalization = BHatNormalization::CumulativeEigenvalue);

struct CandidateVerdict {
  ProjectivePoint tp_point;
  bool in_eigenspace = false;
  bool matches_pinf = false;
  double distance_to_pinf = 0.0;
};

/// Checks each candidate against the max-plus eigenspace of A (exactly) and
/// against a numerical P_inf estimate (within tol in the infinity norm).
std::vector<CandidateVerdict> compare_prediction(const TropicalMatrix& a, const SchurReport& report,
                                                 const PinfEstimate& pinf, double tol);

}  // namespace tropasym
