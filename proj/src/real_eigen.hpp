#pragma once

// Dense real eigenvalues (Hessenberg reduction + Francis double-shift QR) and
// a pivoted linear solve, templated on the scalar so the same code runs on
// double in tests and on BigFloat in the Perron engine.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace tropasym::detail {

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n) {}
  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

template <typename T>
struct EigenvaluePair {
  T re;
  T im;
};

template <typename T>
T magnitude(const T& x) {
  using std::abs;
  return abs(x);
}

/// Reduces `a` in place to upper Hessenberg form by stabilized elementary
/// similarity transformations; entries below the subdiagonal are zeroed.
template <typename T>
void reduce_to_hessenberg(DenseMatrix<T>& a) {
  const std::size_t n = a.size();
  for (std::size_t m = 1; m + 1 < n; ++m) {
    T x = T(0.0);
    std::size_t pivot = m;
    for (std::size_t j = m; j < n; ++j) {
      if (magnitude(a(j, m - 1)) > magnitude(x)) {
        x = a(j, m - 1);
        pivot = j;
      }
    }
    if (pivot != m) {
      for (std::size_t j = m - 1; j < n; ++j) std::swap(a(pivot, j), a(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(a(j, pivot), a(j, m));
    }
    if (x == T(0.0)) continue;
    for (std::size_t i = m + 1; i < n; ++i) {
      T y = a(i, m - 1);
      if (y == T(0.0)) continue;
      y /= x;
      a(i, m - 1) = y;
      for (std::size_t j = m; j < n; ++j) a(i, j) -= y * a(m, j);
      for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, i);
    }
  }
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = T(0.0);
}

/// All eigenvalues of an upper Hessenberg matrix (destroyed). `eps` is the
/// unit roundoff of T. Returns nullopt if some eigenvalue needs more than
/// 30 max(10, n) sweeps to deflate.
/// `sweeps` receives the number of QR iterations performed.
template <typename T>
std::optional<std::vector<EigenvaluePair<T>>> hessenberg_eigenvalues(DenseMatrix<T>& a, const T& eps,
                                                                     std::size_t& sweeps) {
  using std::sqrt;
  const int n = static_cast<int>(a.size());
  std::vector<EigenvaluePair<T>> out(a.size(), {T(0.0), T(0.0)});
  sweeps = 0;

  T anorm = T(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += magnitude(a(i, j));

  const int max_its = 30 * std::max(10, n);
  int exceptional = 0;
  int nn = n - 1;
  T t = T(0.0);
  T p, q, r, s, w, x, y, z;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        s = magnitude(a(l - 1, l - 1)) + magnitude(a(l, l));
        if (s == T(0.0)) s = anorm;
        // The normwise test is backward stable and lets clusters of
        // eigenvalues far below the norm deflate without resolving them.
        if (magnitude(a(l, l - 1)) <= eps * s || magnitude(a(l, l - 1)) <= eps * anorm) {
          a(l, l - 1) = T(0.0);
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {
        out[nn] = {x + t, T(0.0)};
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = T(0.5) * (y - x);
          q = p * p + w;
          z = sqrt(magnitude(q));
          x += t;
          if (q >= T(0.0)) {
            z = p + (p >= T(0.0) ? z : -z);
            out[nn - 1] = {x + z, T(0.0)};
            out[nn] = out[nn - 1];
            if (!(z == T(0.0))) out[nn].re = x - w / z;
          } else {
            out[nn - 1] = {x + p, -z};
            out[nn] = {x + p, z};
          }
          nn -= 2;
        } else {
          if (its >= max_its) return std::nullopt;
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            s = magnitude(a(nn, nn - 1)) + magnitude(a(nn - 1, nn - 2));
            // Varied between occurrences: a fixed shift can cycle on
            // symmetric clusters such as c * (1, i, -1, -i).
            ++exceptional;
            x = (T(0.75) + T(0.05 * (exceptional % 7))) * s;
            y = x;
            w = T(-0.4375) * s * s;
          }
          ++its;
          ++sweeps;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = magnitude(p) + magnitude(q) + magnitude(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            T u = magnitude(a(m, m - 1)) * (magnitude(q) + magnitude(r));
            T v = magnitude(p) * (magnitude(a(m - 1, m - 1)) + magnitude(z) + magnitude(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = T(0.0);
            if (i != m + 2) a(i, i - 3) = T(0.0);
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = T(0.0);
              if (k != nn - 1) r = a(k + 2, k - 1);
              x = magnitude(p) + magnitude(q) + magnitude(r);
              if (!(x == T(0.0))) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            s = sqrt(p * p + q * q + r * r);
            if (p < T(0.0)) s = -s;
            if (s == T(0.0)) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k != nn - 1) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k != nn - 1) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (nn >= 0 && l < nn - 1);
  }
  return out;
}

/// Solves a x = b by Gaussian elimination with partial pivoting. Returns
/// nullopt if a pivot is exactly zero.
template <typename T>
std::optional<std::vector<T>> solve_linear(DenseMatrix<T> a, std::vector<T> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (magnitude(a(r, c)) > magnitude(a(piv, c))) piv = r;
    if (a(piv, c) == T(0.0)) return std::nullopt;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      std::swap(b[piv], b[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      T f = a(r, c) / a(c, c);
      if (f == T(0.0)) continue;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace tropasym::detail
