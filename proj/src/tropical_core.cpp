#include "tropasym/tropical_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "tropasym/errors.hpp"

namespace tropasym {
namespace {

// "Better" under the semiring: larger for max-plus, smaller for min-plus.
bool better(Semiring s, const Rational& a, const Rational& b) {
  return s == Semiring::MaxPlus ? a > b : a < b;
}

const Rational& best(Semiring s, const Rational& a, const Rational& b) { return better(s, b, a) ? b : a; }

void require_same_shape(const TropicalMatrix& a, const TropicalMatrix& b, const char* op) {
  if (a.size() != b.size()) {
    throw InputError(std::string(op) + ": dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.semiring() != b.semiring()) throw InputError(std::string(op) + ": semiring tag mismatch");
}

void require_generators(std::size_t n, std::size_t gens_size, std::span<const std::size_t> sizes) {
  if (gens_size == 0) throw InputError("tropical span needs at least one generator");
  for (auto s : sizes) {
    if (s != n) throw InputError("generator dimension does not match the point");
  }
}

}  // namespace

std::string to_string(Semiring s) { return s == Semiring::MaxPlus ? "max-plus" : "min-plus"; }

Semiring parse_semiring(std::string_view text) {
  if (text == "max-plus") return Semiring::MaxPlus;
  if (text == "min-plus") return Semiring::MinPlus;
  throw InputError("unknown semiring '" + std::string(text) + "' (expected max-plus or min-plus)");
}

TropicalMatrix::TropicalMatrix(std::size_t n, Semiring semiring)
    : n_(n), entries_(n * n), semiring_(semiring) {
  if (n == 0) throw InputError("matrix dimension must be positive");
}

TropicalMatrix::TropicalMatrix(const std::vector<std::vector<Rational>>& rows, Semiring semiring)
    : n_(rows.size()), semiring_(semiring) {
  if (n_ == 0) throw InputError("matrix dimension must be positive");
  entries_.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) {
      throw InputError("matrix is not square: row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n_));
    }
    entries_.insert(entries_.end(), rows[i].begin(), rows[i].end());
  }
  // GMP arithmetic assumes reduced fractions; callers may hand in e.g. mpq_class(6, 4).
  for (auto& e : entries_) e.canonicalize();
}

TropicalMatrix TropicalMatrix::from_strings(const std::vector<std::vector<std::string>>& rows, Semiring semiring) {
  std::vector<std::vector<Rational>> parsed;
  parsed.reserve(rows.size());
  for (const auto& row : rows) {
    auto& out = parsed.emplace_back();
    for (const auto& cell : row) out.push_back(parse_rational(cell));
  }
  return TropicalMatrix(parsed, semiring);
}

TropicalMatrix TropicalMatrix::from_doubles(const std::vector<std::vector<double>>& rows, Semiring semiring) {
  std::vector<std::vector<Rational>> exact;
  exact.reserve(rows.size());
  for (const auto& row : rows) {
    auto& out = exact.emplace_back();
    for (double v : row) out.push_back(from_double(v));
  }
  return TropicalMatrix(exact, semiring);
}

TropicalMatrix TropicalMatrix::with_entry(std::size_t i, std::size_t j, const Rational& value) const {
  TropicalMatrix copy = *this;
  copy.entries_.at(i * n_ + j) = value;
  copy.entries_[i * n_ + j].canonicalize();
  return copy;
}

TropicalMatrix TropicalMatrix::retagged(Semiring semiring) const {
  TropicalMatrix copy = *this;
  copy.semiring_ = semiring;
  return copy;
}

TropicalMatrix TropicalMatrix::transposed() const {
  TropicalMatrix t(n_, semiring_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t.entries_[j * n_ + i] = entries_[i * n_ + j];
  return t;
}

TropicalMatrix TropicalMatrix::negated() const {
  TropicalMatrix t(n_, semiring_ == Semiring::MaxPlus ? Semiring::MinPlus : Semiring::MaxPlus);
  for (std::size_t i = 0; i < entries_.size(); ++i) t.entries_[i] = -entries_[i];
  return t;
}

TropicalMatrix TropicalMatrix::shifted(const Rational& c) const {
  Rational shift = c;
  shift.canonicalize();
  TropicalMatrix t = *this;
  for (auto& e : t.entries_) e += shift;
  return t;
}

TropicalMatrix TropicalMatrix::submatrix(std::span<const std::size_t> nodes) const {
  TropicalMatrix t(nodes.size(), semiring_);
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = 0; b < nodes.size(); ++b) t.entries_[a * nodes.size() + b] = (*this)(nodes[a], nodes[b]);
  return t;
}

std::vector<std::vector<Rational>> TropicalMatrix::rows() const {
  std::vector<std::vector<Rational>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i].assign(entries_.begin() + i * n_, entries_.begin() + (i + 1) * n_);
  return out;
}

std::vector<std::vector<double>> TropicalMatrix::to_doubles() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = to_double((*this)(i, j));
  return out;
}

Rational TropicalMatrix::max_entry() const { return *std::max_element(entries_.begin(), entries_.end()); }
Rational TropicalMatrix::min_entry() const { return *std::min_element(entries_.begin(), entries_.end()); }

std::vector<double> ProjectivePoint::to_doubles() const {
  std::vector<double> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(to_double(c));
  return out;
}

std::strong_ordering ProjectivePoint::operator<=>(const ProjectivePoint& other) const {
  const std::size_t m = std::min(coords_.size(), other.coords_.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (coords_[i] < other.coords_[i]) return std::strong_ordering::less;
    if (coords_[i] > other.coords_[i]) return std::strong_ordering::greater;
  }
  return coords_.size() <=> other.coords_.size();
}

double FloatPoint::distance(const FloatPoint& other) const {
  if (coords_.size() != other.coords_.size()) throw InputError("points of different dimension");
  double d = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) d = std::max(d, std::abs(coords_[i] - other.coords_[i]));
  return d;
}

ProjectivePoint normalize_projective(std::span<const Rational> v) {
  if (v.empty()) throw InputError("cannot normalize an empty vector");
  ProjectivePoint p;
  p.coords_.reserve(v.size());
  Rational first = v[0];
  first.canonicalize();
  for (const auto& x : v) {
    Rational y = x;
    y.canonicalize();
    p.coords_.push_back(y - first);
  }
  return p;
}

FloatPoint normalize_float(std::span<const double> v) {
  if (v.empty()) throw InputError("cannot normalize an empty vector");
  FloatPoint p;
  p.coords_.reserve(v.size());
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("non-finite coordinate in projective point");
    p.coords_.push_back(x - v[0]);
  }
  p.coords_[0] = 0.0;
  return p;
}

FloatPoint to_float(const ProjectivePoint& p) {
  auto d = p.to_doubles();
  return normalize_float(d);
}

std::vector<Rational> project_to_plane(const ProjectivePoint& p) {
  return std::vector<Rational>(p.coords().begin() + (p.size() > 0 ? 1 : 0), p.coords().end());
}

TropicalMatrix trop_matmul(const TropicalMatrix& a, const TropicalMatrix& b) {
  require_same_shape(a, b, "trop_matmul");
  const std::size_t n = a.size();
  const Semiring s = a.semiring();
  std::vector<std::vector<Rational>> c(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational acc = a(i, 0) + b(0, j);
      for (std::size_t l = 1; l < n; ++l) {
        Rational cand = a(i, l) + b(l, j);
        if (better(s, cand, acc)) acc = std::move(cand);
      }
      c[i][j] = std::move(acc);
    }
  }
  return TropicalMatrix(c, s);
}

TropicalMatrix trop_add(const TropicalMatrix& a, const TropicalMatrix& b) {
  require_same_shape(a, b, "trop_add");
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> c(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i][j] = best(a.semiring(), a(i, j), b(i, j));
  return TropicalMatrix(c, a.semiring());
}

std::vector<Rational> trop_apply(const TropicalMatrix& a, std::span<const Rational> x) {
  if (x.size() != a.size()) throw InputError("trop_apply: dimension mismatch");
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational acc = a(i, 0) + x[0];
    for (std::size_t j = 1; j < a.size(); ++j) {
      Rational cand = a(i, j) + x[j];
      if (better(a.semiring(), cand, acc)) acc = std::move(cand);
    }
    out[i] = std::move(acc);
  }
  return out;
}

TropicalMatrix kleene_star(const TropicalMatrix& a) {
  const std::size_t n = a.size();
  const Semiring s = a.semiring();
  // Floyd-Warshall closure, starting from A (+) I.
  auto rows = a.rows();
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = best(s, rows[i][i], Rational(0));
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational via = rows[i][m] + rows[m][j];
        if (better(s, via, rows[i][j])) rows[i][j] = std::move(via);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (better(s, rows[i][i], Rational(0))) {
      throw InputError(std::string("kleene_star diverges: a cycle through node ") + std::to_string(i + 1) +
                       (s == Semiring::MaxPlus ? " has positive weight" : " has negative weight"));
    }
  }
  return TropicalMatrix(rows, s);
}

ProjectivePoint trop_project_onto_span(const ProjectivePoint& x, std::span<const ProjectivePoint> gens) {
  std::vector<std::size_t> sizes;
  for (const auto& g : gens) sizes.push_back(g.size());
  require_generators(x.size(), gens.size(), sizes);
  const std::size_t n = x.size();
  std::vector<Rational> acc;
  for (const auto& g : gens) {
    Rational lam = x[0] - g[0];
    for (std::size_t i = 1; i < n; ++i) lam = std::min(lam, Rational(x[i] - g[i]));
    if (acc.empty()) {
      acc.resize(n);
      for (std::size_t i = 0; i < n; ++i) acc[i] = lam + g[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], Rational(lam + g[i]));
    }
  }
  return normalize_projective(acc);
}

bool in_span(const ProjectivePoint& x, std::span<const ProjectivePoint> gens) {
  return trop_project_onto_span(x, gens) == x;
}

FloatPoint trop_project_onto_span(const FloatPoint& x, std::span<const FloatPoint> gens) {
  std::vector<std::size_t> sizes;
  for (const auto& g : gens) sizes.push_back(g.size());
  require_generators(x.size(), gens.size(), sizes);
  const std::size_t n = x.size();
  std::vector<double> acc(n, -std::numeric_limits<double>::infinity());
  for (const auto& g : gens) {
    double lam = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) lam = std::min(lam, x[i] - g[i]);
    for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], lam + g[i]);
  }
  return normalize_float(acc);
}

double span_distance(const FloatPoint& x, std::span<const FloatPoint> gens) {
  return x.distance(trop_project_onto_span(x, gens));
}

TropicalMatrix scale_matrix(const TropicalMatrix& a, const Rational& k) {
  Rational factor = k;
  factor.canonicalize();
  if (factor <= 0) throw InputError("scale_matrix: k must be positive, got " + to_string(factor));
  auto rows = a.rows();
  for (auto& row : rows)
    for (auto& e : row) e *= factor;
  return TropicalMatrix(rows, a.semiring());
}

}  // namespace tropasym
