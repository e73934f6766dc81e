#include "tropasym/conjectures.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "tropasym/errors.hpp"
#include "tropasym/io.hpp"

namespace tropasym {

std::optional<TranslationChain> translation_chain(std::span<const ProjectivePoint> gens) {
  if (gens.empty()) throw InputError("translation_chain: empty generator set");
  const std::size_t n = gens.front().size();
  for (const auto& g : gens)
    if (g.size() != n) throw InputError("translation_chain: generators of different dimension");

  // Shift of every generator relative to the first; must be constant on the tail.
  std::vector<Rational> shift(gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (n == 1) break;
    shift[g] = gens[g][1] - gens[0][1];
    for (std::size_t i = 2; i < n; ++i)
      if (gens[g][i] - gens[0][i] != shift[g]) return std::nullopt;
  }
  const auto lo = std::min_element(shift.begin(), shift.end()) - shift.begin();
  const auto hi = std::max_element(shift.begin(), shift.end()) - shift.begin();
  return TranslationChain{gens[lo], shift[hi] - shift[lo], gens[hi]};
}

double tolerance_for(double tol, std::span<const PinfMeasurement> measurements) {
  double worst = 0.0;
  for (const auto& m : measurements) worst = std::max(worst, m.pinf.error_bound);
  return tol + 10.0 * worst;
}

PinfMeasurement measure_pinf(const TropicalMatrix& a, const ConjectureOptions& options) {
  PinfMeasurement m;
  m.matrix = a;
  m.pinf = estimate_p_infinity(normalized_trajectory(a, options.schedule, options.perron));
  const SpectralData sd = spectral_data(a);
  std::vector<FloatPoint> gens;
  for (const auto& g : sd.generators) gens.push_back(to_float(g));
  m.span_distance = span_distance(m.pinf.point, gens);
  m.membership_ok = m.span_distance <= 10.0 * m.pinf.error_bound + 1e-3;
  return m;
}

namespace {

ConjectureVerdict finish(ConjectureVerdict v, double tol) {
  v.tolerance_used = tolerance_for(tol, v.witness);
  v.holds = v.deviation <= v.tolerance_used;
  v.membership_ok = std::all_of(v.witness.begin(), v.witness.end(), [](const auto& m) { return m.membership_ok; });
  return v;
}

}  // namespace

ConjectureVerdict conjecture1_test(const TropicalMatrix& a, const ConjectureOptions& options) {
  const SpectralData sd = spectral_data(a);
  const auto chain = translation_chain(sd.generators);
  if (!chain) throw InputError("conjecture1_test: the eigenspace generators do not form a translation chain");

  ConjectureVerdict v;
  v.seed = options.seed;
  v.witness.push_back(measure_pinf(a, options));
  v.deviation = v.witness.front().pinf.point.distance(to_float(chain->predicted));
  return finish(std::move(v), options.tol);
}

bool preserves_eigenspace(const SpectralData& base, const TropicalMatrix& candidate) {
  const SpectralData other = spectral_data(candidate);
  if (other.lambda != base.lambda) return false;
  const std::set<ProjectivePoint> lhs(base.generators.begin(), base.generators.end());
  const std::set<ProjectivePoint> rhs(other.generators.begin(), other.generators.end());
  return lhs == rhs;
}

PerturbationBatch eigenspace_preserving_perturbations(const TropicalMatrix& a, std::size_t count,
                                                      const Rational& magnitude, std::uint64_t seed,
                                                      std::size_t max_attempts) {
  if (count == 0) throw InputError("perturbation count must be at least 1");
  if (magnitude <= 0) throw InputError("perturbation magnitude must be positive");
  if (max_attempts == 0) max_attempts = 200 * count;

  const SpectralData base = spectral_data(a);
  const std::size_t n = a.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> entry(0, n * n - 1);
  std::uniform_int_distribution<int> step(1, 8);  // |d| = step * magnitude / 4 with the sign below
  const Rational unit = magnitude / 4;

  PerturbationBatch batch;
  std::set<TropicalMatrix, bool (*)(const TropicalMatrix&, const TropicalMatrix&)> seen(
      [](const TropicalMatrix& x, const TropicalMatrix& y) { return x.rows() < y.rows(); });
  while (batch.matrices.size() < count && batch.attempts < max_attempts) {
    ++batch.attempts;
    const std::size_t e = entry(rng);
    const int s = step(rng);
    const Rational d = s <= 4 ? Rational(-s) * unit : Rational(s - 4) * unit;
    TropicalMatrix b = a.with_entry(e / n, e % n, a(e / n, e % n) + d);
    if (preserves_eigenspace(base, b) && seen.insert(b).second) batch.matrices.push_back(std::move(b));
  }
  if (batch.matrices.size() < count) {
    batch.notice = "found " + std::to_string(batch.matrices.size()) + " of " + std::to_string(count) +
                   " eigenspace-preserving perturbations in " + std::to_string(batch.attempts) + " attempts";
  }
  return batch;
}

ConjectureVerdict conjecture2_test(const TropicalMatrix& a, std::span<const TropicalMatrix> perturbed,
                                   const ConjectureOptions& options) {
  const SpectralData base = spectral_data(a);
  for (std::size_t i = 0; i < perturbed.size(); ++i) {
    if (perturbed[i].size() != a.size() || !eigenspace_equal(base, spectral_data(perturbed[i]))) {
      throw InputError("conjecture2_test: perturbed matrix " + std::to_string(i + 1) +
                       " does not share the eigenspace of the base matrix");
    }
  }
  ConjectureVerdict v;
  v.seed = options.seed;
  v.witness.push_back(measure_pinf(a, options));
  for (const auto& b : perturbed) v.witness.push_back(measure_pinf(b, options));
  for (std::size_t i = 0; i < v.witness.size(); ++i)
    for (std::size_t j = i + 1; j < v.witness.size(); ++j)
      v.deviation = std::max(v.deviation, v.witness[i].pinf.point.distance(v.witness[j].pinf.point));
  return finish(std::move(v), options.tol);
}

TropicalMatrix random_matrix(std::size_t n, const Rational& grid_step, const Rational& lo, const Rational& hi,
                             std::uint64_t seed) {
  if (n < 2) throw InputError("random_matrix: n must be at least 2");
  if (grid_step <= 0) throw InputError("random_matrix: grid step must be positive");
  if (lo > hi) throw InputError("random_matrix: empty entry range");
  const Rational ratio = (hi - lo) / grid_step;
  mpz_class steps;
  mpz_fdiv_q(steps.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
  if (!steps.fits_slong_p()) throw InputError("random_matrix: too many grid points in the entry range");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(0, steps.get_si());
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) rows[i][j] = lo + Rational(pick(rng)) * grid_step;
  return TropicalMatrix(rows);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool SampleRecord::operator==(const SampleRecord& other) const {
  return matrix == other.matrix && generators == other.generators && pinf.coords() == other.pinf.coords() &&
         error_bound == other.error_bound && seed == other.seed;
}

void export_samples(const std::string& path, std::span<const SampleRecord> records) {
  std::string text;
  for (const auto& r : records) text += io::sample_to_json(r).dump() + "\n";
  io::write_text_file(path, text);
}

std::vector<SampleRecord> read_samples(const std::string& path) {
  const std::string text = io::read_text_file(path);
  std::vector<SampleRecord> out;
  std::size_t start = 0, line = 1;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view row(text.data() + start, end - start);
    if (!row.empty()) out.push_back(io::sample_from_json(io::parse_json(row, path + ":" + std::to_string(line))));
    start = end + 1;
    ++line;
  }
  return out;
}

}  // namespace tropasym
