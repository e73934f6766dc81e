#include "tropasym/perron.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include "bigfloat.hpp"
#include "real_eigen.hpp"
#include "tropasym/errors.hpp"
#include "tropasym/tropical_spectral.hpp"

namespace tropasym {

namespace detail {
thread_local mpfr_prec_t PrecisionScope::current_ = 128;
}  // namespace detail

namespace {

using detail::BigFloat;
using detail::DenseMatrix;
using detail::PrecisionScope;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr long kMinBits = 192;

void validate(const TropicalMatrix& a, double k, const PerronOptions& options) {
  if (a.semiring() != Semiring::MaxPlus) throw InputError("Perron computations expect a max-plus (real) matrix");
  if (!(k > 0.0) || !std::isfinite(k)) throw InputError("k must be a positive finite number");
  if (!(options.tol > 0.0)) throw InputError("tolerance must be positive");
}

double log_sum_exp(std::span<const double> terms) {
  const double m = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

using Real = long double;

// Exact for numerators and denominators that fit in a long.
Real to_real(const Rational& x) {
  if (x.get_num().fits_slong_p() && x.get_den().fits_slong_p())
    return static_cast<Real>(x.get_num().get_si()) / static_cast<Real>(x.get_den().get_si());
  return static_cast<Real>(x.get_d());
}

LogEigenpair log_power_eigenpair(const TropicalMatrix& a, double k, const PerronOptions& options) {
  const std::size_t n = a.size();
  std::vector<double> ka(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ka[i * n + j] = k * to_double(a(i, j));

  std::vector<double> y(n, 0.0), next(n), terms(n);
  double shift = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) terms[j] = ka[i * n + j] + y[j];
      next[i] = log_sum_exp(terms);
    }
    shift = next[0];
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] -= shift;
      residual = std::max(residual, std::abs(next[i] - y[i]));
    }
    y.swap(next);
    if (!std::isfinite(residual)) throw NumericalError("log-domain iteration produced a non-finite value");
    if (residual < options.tol) {
      LogEigenpair out;
      out.log_rho = shift;
      out.log_vector = normalize_float(y);
      out.residual = residual;
      out.iterations = it;
      out.precision_bits = 53;
      out.gap_log2 = kNaN;
      return out;
    }
  }
  throw ConvergenceError("log-domain power iteration did not converge within " + std::to_string(options.max_iter) +
                             " iterations (spectral gap too small)",
                         residual);
}

std::vector<double> default_balance(const TropicalMatrix& a) {
  // A point of the tropical eigenspace: balances exp(kA) so that no entry
  // exceeds the Perron root by more than a constant.
  const SpectralData sd = spectral_data(a);
  std::vector<Rational> zero(a.size());
  return to_float(trop_project_onto_span(normalize_projective(zero), sd.generators)).coords();
}

// Working precision for a relative gap of 2^gap_log2. The residual / gap test
// on the result is what actually decides acceptance.
long bits_for_gap(double gap_log2) { return static_cast<long>(std::ceil(-gap_log2)) + 192; }

LogEigenpair multiprecision_eigenpair(const TropicalMatrix& a, double k, const PerronOptions& options,
                                      const EigenpairHint& hint) {
  const std::size_t n = a.size();
  const Rational lambda = max_cycle_mean(a);
  const Rational kq = from_double(k);

  std::vector<double> balance;
  if (hint.point && hint.point->size() == n) {
    balance = hint.point->coords();
  } else {
    balance = default_balance(a);
  }

  long bits = std::max(kMinBits, hint.precision_bits);
  std::size_t iterations = 0;
  double last_residual = std::numeric_limits<double>::infinity();

  for (int attempt = 0; attempt < 48; ++attempt) {
    if (bits > options.max_precision_bits) break;
    PrecisionScope scope(bits);

    // E = D^-1 exp(k(A - lambda)) D with D = diag(exp(k * balance)).
    DenseMatrix<BigFloat> e(n);
    const BigFloat kb(kq);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        BigFloat exponent(Rational(kq * (a(i, j) - lambda)));
        exponent += kb * (BigFloat(balance[j]) - BigFloat(balance[i]));
        e(i, j) = exp(exponent);
      }
    }

    DenseMatrix<BigFloat> h = e;
    detail::reduce_to_hessenberg(h);
    std::size_t sweeps = 0;
    const BigFloat eps = BigFloat::pow2(-(bits - 4));
    auto eig = detail::hessenberg_eigenvalues(h, eps, sweeps);
    iterations += sweeps;
    if (!eig) {
      bits *= 2;
      continue;
    }
    std::size_t top = 0;
    for (std::size_t i = 1; i < n; ++i)
      if ((*eig)[i].re > (*eig)[top].re) top = i;
    const BigFloat root = (*eig)[top].re;
    if (!(*eig)[top].im.is_zero() || root.sign() <= 0) {
      bits *= 2;
      continue;
    }

    double gap_log2 = 0.0;
    {
      BigFloat gap;
      bool have_gap = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == top) continue;
        BigFloat dr = (*eig)[i].re - root;
        BigFloat d = sqrt(dr * dr + (*eig)[i].im * (*eig)[i].im) / root;
        if (!have_gap || d < gap) {
          gap = d;
          have_gap = true;
        }
      }
      if (have_gap) {
        if (gap.is_zero()) {
          bits *= 2;
          continue;
        }
        BigFloat lg;
        mpfr_log2(lg.get(), gap.get(), MPFR_RNDN);
        gap_log2 = lg.to_double();
      }
    }
    if (bits_for_gap(gap_log2) > bits) {
      bits = std::max(bits + bits / 4, bits_for_gap(gap_log2));
      continue;
    }

    DenseMatrix<BigFloat> shifted(n);
    const BigFloat sigma = root * (BigFloat(1.0) + BigFloat::pow2(-(bits - 32)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) shifted(i, j) = (i == j ? sigma : BigFloat(0.0)) - e(i, j);

    std::vector<BigFloat> z(n, BigFloat(1.0));
    bool positive = false;
    bool accepted = false;
    double residual = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 6; ++step) {
      auto sol = detail::solve_linear(shifted, z);
      ++iterations;
      if (!sol) break;
      z = std::move(*sol);
      std::size_t big = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (abs(z[i]) > abs(z[big])) big = i;
      const BigFloat scale = z[big];
      for (auto& zi : z) zi /= scale;
      positive = std::all_of(z.begin(), z.end(), [](const BigFloat& v) { return v.sign() > 0; });
      if (!positive) continue;

      // Log residual max_i |log((Ez)_i / (root z_i))|, from the extreme ratios only.
      BigFloat lo, hi;
      for (std::size_t i = 0; i < n; ++i) {
        BigFloat ez(0.0);
        for (std::size_t j = 0; j < n; ++j) ez += e(i, j) * z[j];
        BigFloat ratio = ez / (root * z[i]);
        if (i == 0 || ratio < lo) lo = ratio;
        if (i == 0 || ratio > hi) hi = ratio;
      }
      BigFloat worst = abs(log(hi));
      if (BigFloat low = abs(log(lo)); low > worst) worst = low;
      residual = worst.to_double();
      last_residual = residual;
      // Vector error is about residual / gap; both factors can leave double range.
      BigFloat vector_error = worst;
      mpfr_mul_2si(vector_error.get(), vector_error.get(), static_cast<long>(std::ceil(-gap_log2)), MPFR_RNDN);
      if (residual <= options.tol && vector_error <= BigFloat(options.tol)) {
        accepted = true;
        break;
      }
    }

    if (accepted) {
      LogEigenpair out;
      const BigFloat log_z0 = log(z[0]);
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        BigFloat yi = kb * (BigFloat(balance[i]) - BigFloat(balance[0])) + (log(z[i]) - log_z0);
        y[i] = yi.to_double();
      }
      out.log_rho = (BigFloat(Rational(kq * lambda)) + log(root)).to_double();
      out.log_vector = normalize_float(y);
      out.residual = residual;
      out.iterations = iterations;
      out.precision_bits = bits;
      out.gap_log2 = gap_log2;
      return out;
    }

    if (positive) {
      BigFloat lo = log(z[0]), hi = lo;
      for (const auto& zi : z) {
        BigFloat l = log(zi);
        if (l < lo) lo = l;
        if (l > hi) hi = l;
      }
      if ((hi - lo).to_double() > 8.0) {
        // Badly scaled vector: re-balance around the current estimate.
        for (std::size_t i = 0; i < n; ++i) balance[i] += (log(z[i]) - log(z[0])).to_double() / k;
        continue;
      }
    }
    bits *= 2;
  }
  throw ConvergenceError("Perron eigenpair not resolved at k = " + std::to_string(k) + " within " +
                             std::to_string(options.max_precision_bits) + " bits of precision",
                         last_residual);
}

}  // namespace

LogEigenpair log_perron_eigenpair(const TropicalMatrix& a, double k, const PerronOptions& options,
                                  const EigenpairHint& hint) {
  validate(a, k, options);
  if (options.engine == PerronEngine::LogPower) return log_power_eigenpair(a, k, options);
  return multiprecision_eigenpair(a, k, options, hint);
}

FloatOracleResult perron_float_oracle(const TropicalMatrix& a, double k, std::size_t max_iter) {
  validate(a, k, PerronOptions{});
  const std::size_t n = a.size();
  std::vector<Real> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Real v = std::exp(static_cast<Real>(k) * to_real(a(i, j)));
      if (!std::isfinite(v) || v == 0.0L) {
        throw FloatRangeError("exp(k * A) is not representable in extended precision at k = " + std::to_string(k) +
                              " (entry " + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
      m[i * n + j] = v;
    }
  }

  // Power iteration on P = (M + sigma I)^(2^s), squaring P whenever a burst
  // of steps has not converged. A cyclic critical class puts eigenvalues of
  // modulus close to rho at -rho or rho * omega; the shift sigma = exp(k
  // lambda) lies in [rho / n, rho] and moves them away from the top while at
  // most halving the real gaps. Sums and products of positive numbers keep
  // O(n eps) relative accuracy, so only conditioning limits the result.
  constexpr std::size_t kBurst = 64;
  constexpr int kMaxSquarings = 60;
  constexpr Real kEps = std::numeric_limits<Real>::epsilon();
  const Real sigma = std::exp(static_cast<Real>(k) * to_real(max_cycle_mean(a)));
  std::vector<Real> p = m, q(n * n);
  for (std::size_t i = 0; i < n; ++i) p[i * n + i] += sigma;
  std::vector<Real> x(n, 1.0L), y(n);
  FloatOracleResult out;
  int squarings = 0;
  Real rate_m = 0.0L;  // estimate of |mu_2 / mu_1| for M + sigma I
  Real tail = std::numeric_limits<Real>::infinity();
  bool converged = false;
  while (!converged && out.iterations < max_iter) {
    Real prev_delta = std::numeric_limits<Real>::infinity();
    for (std::size_t step = 0; step < kBurst && out.iterations < max_iter; ++step) {
      Real top = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        Real s = 0.0L;
        for (std::size_t j = 0; j < n; ++j) s += p[i * n + j] * x[j];
        y[i] = s;
        top = std::max(top, s);
      }
      if (!std::isfinite(top) || top == 0.0L) throw FloatRangeError("power iteration left the floating-point range");
      Real delta = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] /= top;
        delta = std::max(delta, std::abs(y[i] / x[i] - 1.0));
      }
      x.swap(y);
      ++out.iterations;
      if (delta == 0.0L) {
        tail = 0.0L;
        converged = true;
        break;
      }
      const Real ratio = delta / prev_delta;
      const bool contracting = std::isfinite(prev_delta) && ratio < 1.0L;
      // Below ~1000 eps the differences are rounding noise and say nothing about the gap.
      if (contracting && prev_delta > 1000 * kEps) rate_m = std::pow(ratio, std::ldexp(1.0L, -squarings));
      prev_delta = delta;
      if (contracting) {
        tail = delta * ratio / (1.0L - ratio);
        if (tail < 10 * kEps) {
          converged = true;
          break;
        }
      }
    }
    if (converged || squarings == kMaxSquarings) break;
    Real top = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Real s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += p[i * n + l] * p[l * n + j];
        q[i * n + j] = s;
        top = std::max(top, s);
      }
    if (!std::isfinite(top) || top == 0.0L) throw FloatRangeError("matrix squaring left the floating-point range");
    for (auto& v : q) v /= top;
    p.swap(q);
    ++squarings;
  }

  // Collatz-Wielandt: rho lies between the extreme ratios (Mx)_i / x_i.
  Real lo = std::numeric_limits<Real>::infinity(), hi = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    Real s = 0.0L;
    for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * x[j];
    lo = std::min(lo, s / x[i]);
    hi = std::max(hi, s / x[i]);
  }
  out.rho = static_cast<double>(0.5L * (lo + hi));
  out.vector.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.vector[i] = static_cast<double>(x[i] / x[0]);
  // Rounding in M moves the Perron vector by about n eps / (relative gap).
  const Real gap = std::max(1.0L - rate_m, std::numeric_limits<Real>::min());
  const Real conditioning = static_cast<Real>(n) * kEps * (1 + squarings) / gap;
  out.error_estimate = static_cast<double>(tail + conditioning + (hi - lo) / lo);
  out.reliable = converged && out.error_estimate <= 1e-10;
  return out;
}

std::vector<double> geometric_schedule(double k0, int doublings) {
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw InputError("k0 must be positive");
  if (doublings < 0) throw InputError("doublings must be non-negative");
  std::vector<double> ks;
  for (int i = 0; i <= doublings; ++i) ks.push_back(std::ldexp(k0, i));
  return ks;
}

std::string matrix_digest(const TropicalMatrix& a) {
  std::string canon = to_string(a.semiring()) + ";" + std::to_string(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) canon += ";" + to_string(a(i, j));
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PerronTrajectory normalized_trajectory(const TropicalMatrix& a, std::span<const double> schedule,
                                       const PerronOptions& options) {
  if (schedule.empty()) throw InputError("k schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || !std::isfinite(schedule[i])) throw InputError("k values must be positive");
    if (i > 0 && !(schedule[i] > schedule[i - 1])) throw InputError("k schedule must be strictly increasing");
  }

  PerronTrajectory traj;
  traj.matrix_hash = matrix_digest(a);
  const std::size_t n = a.size();
  EigenpairHint hint;
  double last_gap_rate = kNaN;  // -gap_log2 / k of the previous success

  for (double k : schedule) {
    const auto& s = traj.samples;
    if (s.size() >= 2 && s[s.size() - 1].k == 2.0 * s[s.size() - 2].k && k == 2.0 * s.back().k) {
      // P_k = P_inf + d/k  =>  P_2k = (3 P_k - P_{k/2}) / 2.
      std::vector<double> pred(n);
      for (std::size_t i = 0; i < n; ++i) pred[i] = 0.5 * (3.0 * s.back().point[i] - s[s.size() - 2].point[i]);
      hint.point = normalize_float(pred);
    } else if (!s.empty()) {
      hint.point = s.back().point;
    }
    // The gap rate creeps up slowly with k; a margin avoids a wasted low-precision attempt.
    hint.precision_bits = std::isfinite(last_gap_rate) ? bits_for_gap(-1.05 * last_gap_rate * k) : 0;

    try {
      const LogEigenpair pair = log_perron_eigenpair(a, k, options, hint);
      PerronSample sample;
      sample.k = k;
      sample.log_rho_over_k = pair.log_rho / k;
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = pair.log_vector[i] / k;
      sample.point = normalize_float(p);
      sample.residual = pair.residual;
      sample.iterations = pair.iterations;
      sample.precision_bits = pair.precision_bits;
      if (std::isfinite(pair.gap_log2)) last_gap_rate = -pair.gap_log2 / k;
      traj.samples.push_back(std::move(sample));
    } catch (const ConvergenceError& e) {
      traj.failures.push_back({k, e.residual(), e.what()});
    } catch (const NumericalError& e) {
      traj.failures.push_back({k, kNaN, e.what()});
    }
  }
  return traj;
}

PinfEstimate estimate_p_infinity(const PerronTrajectory& trajectory) {
  const auto& s = trajectory.samples;
  for (std::size_t j = s.size(); j-- > 1;) {
    for (std::size_t i = j; i-- > 0;) {
      if (s[j].k == 2.0 * s[i].k) {
        const std::size_t n = s[j].point.size();
        std::vector<double> p(n);
        double bound = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
          p[c] = 2.0 * s[j].point[c] - s[i].point[c];
          bound = std::max(bound, std::abs(s[j].point[c] - s[i].point[c]));
        }
        return PinfEstimate{normalize_float(p), bound, s[j].k};
      }
    }
  }
  throw NumericalError("estimating P_inf needs two successful samples at k and 2k");
}

FirstOrderFit first_order_fit(const PerronTrajectory& trajectory) {
  const auto& s = trajectory.samples;
  if (s.size() < 3) throw NumericalError("first-order fit needs at least 3 samples");
  const std::size_t tail = std::max<std::size_t>(2, (s.size() + 1) / 2);
  const std::size_t first = s.size() - tail;
  const std::size_t n = s.back().point.size();

  double sx = 0.0, sxx = 0.0;
  for (std::size_t t = first; t < s.size(); ++t) {
    const double x = 1.0 / s[t].k;
    sx += x;
    sxx += x * x;
  }
  const double m = static_cast<double>(tail);
  const double det = m * sxx - sx * sx;
  if (!(std::abs(det) > 1e-300) || std::abs(det) <= 1e-14 * m * sxx) {
    throw NumericalError("first-order fit is degenerate (all k equal)");
  }

  std::vector<double> c(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sy = 0.0, sxy = 0.0;
    for (std::size_t t = first; t < s.size(); ++t) {
      const double x = 1.0 / s[t].k;
      sy += s[t].point[i];
      sxy += x * s[t].point[i];
    }
    c[i] = (sxx * sy - sx * sxy) / det;
    d[i] = (m * sxy - sx * sy) / det;
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = -c[i];
  return FirstOrderFit{normalize_float(v), d};
}

}  // namespace tropasym
