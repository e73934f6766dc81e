#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tropasym/perron.hpp"
#include "tropasym/tropical_core.hpp"
#include "tropasym/tropical_spectral.hpp"

namespace tropasym {

/// Generators of the form base + (0, a, a, ..., a) for 0 <= a <= beta.
struct TranslationChain {
  ProjectivePoint base;
  Rational beta;
  ProjectivePoint predicted;
};

/// The chain spanned by `gens`, or nothing if some pair of generators differs
/// by a non-constant amount on coordinates 2..n.
std::optional<TranslationChain> translation_chain(std::span<const ProjectivePoint> gens);

struct ConjectureOptions {
  /// Absolute part of the tolerance; see tolerance_for.
  double tol = 1e-2;
  std::vector<double> schedule = geometric_schedule(4.0, 12);
  PerronOptions perron;
  /// Recorded in the verdict; the tests themselves are deterministic.
  std::optional<std::uint64_t> seed;
};

/// One measured P_inf together with the eigenspace-membership safety check.
struct PinfMeasurement {
  TropicalMatrix matrix;
  PinfEstimate pinf;
  /// Infinity-norm distance from pinf.point to its projection onto the generators.
  double span_distance = 0.0;
  /// span_distance <= 10 * error_bound + 1e-3.
  bool membership_ok = false;
};

struct ConjectureVerdict {
  bool holds = false;
  /// Largest observed deviation (conjecture 1: |P_inf - predicted|, conjecture 2: pairwise spread).
  double deviation = 0.0;
  double tolerance_used = 0.0;
  /// True when every measurement passed its membership check.
  bool membership_ok = false;
  std::vector<PinfMeasurement> witness;
  std::optional<std::uint64_t> seed;
};

/// tol + 10 * (largest error bound): deeper schedules shrink the slack.
double tolerance_for(double tol, std::span<const PinfMeasurement> measurements);

/// Runs the trajectory and extrapolation and checks the limit against the eigenspace.
PinfMeasurement measure_pinf(const TropicalMatrix& a, const ConjectureOptions& options);

/// Throws InputError if the generators of A do not form a translation chain.
ConjectureVerdict conjecture1_test(const TropicalMatrix& a, const ConjectureOptions& options = {});

/// Same lambda and identical generator sets.
bool preserves_eigenspace(const SpectralData& base, const TropicalMatrix& candidate);

struct PerturbationBatch {
  std::vector<TropicalMatrix> matrices;
  std::size_t attempts = 0;
  /// Non-empty when fewer than the requested count were found.
  std::string notice;
};

/// Rejection-samples single-entry perturbations A_ij + d with d a nonzero
/// multiple of magnitude/4 in [-magnitude, magnitude], keeping those that
/// preserve lambda and the generator set.
PerturbationBatch eigenspace_preserving_perturbations(const TropicalMatrix& a, std::size_t count,
                                                      const Rational& magnitude, std::uint64_t seed,
                                                      std::size_t max_attempts = 0);

/// Throws InputError if some perturbed matrix has a different eigenspace.
ConjectureVerdict conjecture2_test(const TropicalMatrix& a, std::span<const TropicalMatrix> perturbed,
                                   const ConjectureOptions& options = {});

/// Zero diagonal, off-diagonal entries lo + m * grid_step for uniform m with
/// lo + m * grid_step <= hi.
TropicalMatrix random_matrix(std::size_t n, const Rational& grid_step, const Rational& lo, const Rational& hi,
                             std::uint64_t seed);

/// Decorrelated per-item seed for campaigns (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct SampleRecord {
  TropicalMatrix matrix;
  std::vector<ProjectivePoint> generators;
  FloatPoint pinf;
  double error_bound = 0.0;
  std::optional<std::uint64_t> seed;

  bool operator==(const SampleRecord& other) const;
};

/// JSON lines, one object per record. Throws std::runtime_error naming the path on I/O failure.
void export_samples(const std::string& path, std::span<const SampleRecord> records);
std::vector<SampleRecord> read_samples(const std::string& path);

}  // namespace tropasym
