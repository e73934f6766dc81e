#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tropasym/tropical_core.hpp"

namespace tropasym {

enum class PerronEngine {
  /// MPFR arithmetic at a precision that grows with k; QR for the Perron
  /// root, shifted inverse iteration for the vector. Resolves the
  /// exponentially small spectral gaps that appear with several critical classes.
  Multiprecision,
  /// Double-precision power iteration on logsumexp. Only trustworthy while
  /// the relative spectral gap of exp(kA) stays far above 1e-16.
  LogPower,
};

struct PerronOptions {
  double tol = 1e-13;
  std::size_t max_iter = 1'000'000;
  PerronEngine engine = PerronEngine::Multiprecision;
  long max_precision_bits = 1L << 22;
};

/// Optional warm start for log_perron_eigenpair.
struct EigenpairHint {
  /// Estimate of the normalized point (1/k) log L(A_k).
  std::optional<FloatPoint> point;
  /// Working precision to try first (multiprecision engine).
  long precision_bits = 0;
};

struct LogEigenpair {
  double log_rho = 0.0;
  /// log of the Perron vector, first coordinate 0 (not divided by k).
  FloatPoint log_vector;
  /// Infinity norm of the log-domain fixed-point residual.
  double residual = 0.0;
  std::size_t iterations = 0;
  long precision_bits = 53;
  /// log2 of the measured relative gap between the Perron root and the rest
  /// of the spectrum; NaN when the engine does not measure it.
  double gap_log2 = 0.0;
};

/// Perron eigenpair of exp(kA), reported in log coordinates. Throws
/// InputError for bad arguments and ConvergenceError when no trustworthy
/// answer is reached.
LogEigenpair log_perron_eigenpair(const TropicalMatrix& a, double k, const PerronOptions& options = {},
                                  const EigenpairHint& hint = {});

struct FloatOracleResult {
  double rho = 0.0;
  /// Perron vector scaled so its first entry is 1.
  std::vector<double> vector;
  std::size_t iterations = 0;
  /// True when error_estimate <= 1e-10 after convergence.
  bool reliable = false;
  /// Iteration tail plus the rounding sensitivity n eps / (relative spectral
  /// gap) plus the Collatz-Wielandt spread of rho.
  double error_estimate = 0.0;
};

/// Shifted power iteration in long double on the explicitly exponentiated matrix,
/// squared repeatedly while convergence is slow. Throws FloatRangeError when some
/// exp(kA_ij) overflows or underflows to 0.
FloatOracleResult perron_float_oracle(const TropicalMatrix& a, double k, std::size_t max_iter = 2'000'000);

struct PerronSample {
  double k = 0.0;
  double log_rho_over_k = 0.0;
  FloatPoint point;
  double residual = 0.0;
  std::size_t iterations = 0;
  long precision_bits = 53;
};

struct SampleFailure {
  double k = 0.0;
  double residual = 0.0;
  std::string reason;
};

struct PerronTrajectory {
  /// Successful samples, strictly increasing in k.
  std::vector<PerronSample> samples;
  std::vector<SampleFailure> failures;
  std::string matrix_hash;
};

struct PinfEstimate {
  FloatPoint point;
  double error_bound = 0.0;
  double k_max_used = 0.0;
};

struct FirstOrderFit {
  /// Exponents: the fitted limit is -v.
  FloatPoint v;
  std::vector<double> logw;
};

/// k0, 2 k0, ..., 2^doublings k0.
std::vector<double> geometric_schedule(double k0, int doublings);

/// Stable hex digest of the exact entries and tag.
std::string matrix_digest(const TropicalMatrix& a);

/// Samples (1/k) log rho and (1/k) log L(A_k) along an increasing schedule.
/// A failing sample is recorded in `failures` and the run continues.
PerronTrajectory normalized_trajectory(const TropicalMatrix& a, std::span<const double> schedule,
                                       const PerronOptions& options = {});

/// First-order Richardson extrapolation on the last usable doubling pair.
PinfEstimate estimate_p_infinity(const PerronTrajectory& trajectory);

/// Least-squares fit of each coordinate to c + d/k over the tail half of the samples.
FirstOrderFit first_order_fit(const PerronTrajectory& trajectory);

}  // namespace tropasym
