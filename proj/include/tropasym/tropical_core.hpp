#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tropasym/rational.hpp"

namespace tropasym {

enum class Semiring { MaxPlus, MinPlus };

std::string to_string(Semiring s);
Semiring parse_semiring(std::string_view text);

/// Square matrix of exact rationals tagged with the semiring it is read in.
///
/// Entries are always finite. The tropical zero (-inf for max-plus, +inf for
/// min-plus) is never stored; algorithms that need it (the identity inside a
/// Kleene star, the empty maximum) handle it structurally.
class TropicalMatrix {
 public:
  TropicalMatrix() = default;
  /// n x n matrix of zeros.
  explicit TropicalMatrix(std::size_t n, Semiring semiring = Semiring::MaxPlus);
  TropicalMatrix(const std::vector<std::vector<Rational>>& rows, Semiring semiring = Semiring::MaxPlus);

  /// Rows of decimal or "p/q" strings.
  static TropicalMatrix from_strings(const std::vector<std::vector<std::string>>& rows,
                                     Semiring semiring = Semiring::MaxPlus);
  /// Exact conversion of doubles (each double is a dyadic rational).
  static TropicalMatrix from_doubles(const std::vector<std::vector<double>>& rows,
                                     Semiring semiring = Semiring::MaxPlus);

  std::size_t size() const noexcept { return n_; }
  Semiring semiring() const noexcept { return semiring_; }

  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  /// Copy with a single entry replaced.
  TropicalMatrix with_entry(std::size_t i, std::size_t j, const Rational& value) const;
  /// Same entries, different semiring tag.
  TropicalMatrix retagged(Semiring semiring) const;
  TropicalMatrix transposed() const;
  /// Entrywise negation; swaps the semiring tag (max-plus <-> min-plus duality).
  TropicalMatrix negated() const;
  /// Entrywise A_ij + c (tag preserved).
  TropicalMatrix shifted(const Rational& c) const;
  /// Principal submatrix on the given node indices (in the given order).
  TropicalMatrix submatrix(std::span<const std::size_t> nodes) const;

  std::vector<std::vector<Rational>> rows() const;
  std::vector<std::vector<double>> to_doubles() const;
  Rational max_entry() const;
  Rational min_entry() const;

  bool operator==(const TropicalMatrix& other) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> entries_;
  Semiring semiring_ = Semiring::MaxPlus;
};

/// A point of TP^{n-1}: a vector modulo adding a constant, stored with its
/// first coordinate equal to 0. Only normalize_projective creates one.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;

  std::size_t size() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Rational>& coords() const noexcept { return coords_; }
  std::vector<double> to_doubles() const;

  bool operator==(const ProjectivePoint& other) const { return coords_ == other.coords_; }
  /// Lexicographic, so points can live in ordered sets.
  std::strong_ordering operator<=>(const ProjectivePoint& other) const;

 private:
  friend ProjectivePoint normalize_projective(std::span<const Rational> v);
  std::vector<Rational> coords_;
};

/// Floating-point twin of ProjectivePoint, produced by the numerical modules.
class FloatPoint {
 public:
  FloatPoint() = default;

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  /// Infinity-norm distance between normalized representatives.
  double distance(const FloatPoint& other) const;
  bool approx_equal(const FloatPoint& other, double tol) const { return distance(other) <= tol; }

 private:
  friend FloatPoint normalize_float(std::span<const double> v);
  std::vector<double> coords_;
};

/// (v1, ..., vn) -> (0, v2 - v1, ..., vn - v1). Throws InputError on an empty vector.
ProjectivePoint normalize_projective(std::span<const Rational> v);
/// Same for doubles. Throws InputError on empty or non-finite input.
FloatPoint normalize_float(std::span<const double> v);
FloatPoint to_float(const ProjectivePoint& p);

/// Drops the leading zero: TP^{n-1} -> R^{n-1}.
std::vector<Rational> project_to_plane(const ProjectivePoint& p);

/// Tropical product under the shared semiring tag.
TropicalMatrix trop_matmul(const TropicalMatrix& a, const TropicalMatrix& b);
/// Entrywise tropical sum (max or min).
TropicalMatrix trop_add(const TropicalMatrix& a, const TropicalMatrix& b);
/// Tropical matrix-vector product, (A (.) x)_i = best_j (A_ij + x_j).
std::vector<Rational> trop_apply(const TropicalMatrix& a, std::span<const Rational> x);

/// S = I (+) A (+) A^2 (+) ... (+) A^n, i.e. S_ij is the best weight of a path
/// i -> j (the empty path counts for i == j). Requires that no cycle improves
/// on 0: max cycle mean <= 0 under max-plus, min cycle mean >= 0 under
/// min-plus. Throws InputError otherwise.
TropicalMatrix kleene_star(const TropicalMatrix& a);

/// Largest element of span(gens) dominated by x, normalized.
ProjectivePoint trop_project_onto_span(const ProjectivePoint& x, std::span<const ProjectivePoint> gens);
bool in_span(const ProjectivePoint& x, std::span<const ProjectivePoint> gens);

/// Floating-point projection and its infinity-norm distance to x.
FloatPoint trop_project_onto_span(const FloatPoint& x, std::span<const FloatPoint> gens);
double span_distance(const FloatPoint& x, std::span<const FloatPoint> gens);

/// Log-domain Hadamard power: entries k * A_ij. Throws InputError for k <= 0.
TropicalMatrix scale_matrix(const TropicalMatrix& a, const Rational& k);

}  // namespace tropasym
