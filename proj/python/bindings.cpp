// Python module `_core`. Exact values cross the boundary as
// fractions.Fraction; node indices are 0-based.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "tropasym/conjectures.hpp"
#include "tropasym/errors.hpp"
#include "tropasym/figures.hpp"
#include "tropasym/perron.hpp"
#include "tropasym/schur.hpp"
#include "tropasym/tropical_core.hpp"
#include "tropasym/tropical_spectral.hpp"

namespace py = pybind11;
using namespace tropasym;

namespace {

using Rows = std::vector<std::vector<py::object>>;

Rational to_rational(const py::handle& x) {
  if (py::isinstance<py::bool_>(x)) throw InputError("booleans are not matrix entries");
  return parse_rational(py::str(x).cast<std::string>());
}

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(r));
}

py::list fractions(const std::vector<Rational>& v) {
  py::list out;
  for (const auto& x : v) out.append(fraction(x));
  return out;
}

TropicalMatrix to_matrix(const Rows& rows, const std::string& semiring) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) {
    auto& dst = r.emplace_back();
    for (const auto& x : row) dst.push_back(to_rational(x));
  }
  return TropicalMatrix(r, parse_semiring(semiring));
}

py::list from_matrix(const TropicalMatrix& a) {
  py::list out;
  for (const auto& row : a.rows()) out.append(fractions(row));
  return out;
}

ProjectivePoint to_point(const std::vector<py::object>& coords) {
  std::vector<Rational> v;
  for (const auto& x : coords) v.push_back(to_rational(x));
  return normalize_projective(v);
}

std::vector<ProjectivePoint> to_points(const std::vector<std::vector<py::object>>& pts) {
  std::vector<ProjectivePoint> out;
  for (const auto& p : pts) out.push_back(to_point(p));
  return out;
}

py::list from_points(const std::vector<ProjectivePoint>& pts) {
  py::list out;
  for (const auto& p : pts) out.append(fractions(p.coords()));
  return out;
}

PerronOptions perron_options(const std::string& engine, double tol) {
  PerronOptions o;
  o.tol = tol;
  if (engine == "multiprecision") o.engine = PerronEngine::Multiprecision;
  else if (engine == "log-power") o.engine = PerronEngine::LogPower;
  else throw InputError("engine must be 'multiprecision' or 'log-power'");
  return o;
}

std::vector<double> schedule_or_default(const std::optional<std::vector<double>>& schedule) {
  return schedule ? *schedule : geometric_schedule(4.0, 12);
}

py::dict spectral_dict(const SpectralData& sd) {
  py::dict d;
  d["lambda"] = fraction(sd.lambda);
  d["critical_nodes"] = sd.critical_nodes;
  d["critical_edges"] = sd.critical_edges;
  d["critical_classes"] = sd.critical_classes;
  d["generators"] = from_points(sd.generators);
  return d;
}

py::dict pinf_dict(const PinfEstimate& e) {
  py::dict d;
  d["point"] = e.point.coords();
  d["error_bound"] = e.error_bound;
  d["k_max_used"] = e.k_max_used;
  return d;
}

py::dict trajectory_dict(const PerronTrajectory& t) {
  py::list samples, failures;
  for (const auto& s : t.samples) {
    py::dict d;
    d["k"] = s.k;
    d["log_rho_over_k"] = s.log_rho_over_k;
    d["point"] = s.point.coords();
    d["residual"] = s.residual;
    d["iterations"] = s.iterations;
    d["precision_bits"] = s.precision_bits;
    samples.append(d);
  }
  for (const auto& f : t.failures) {
    py::dict d;
    d["k"] = f.k;
    d["residual"] = f.residual;
    d["reason"] = f.reason;
    failures.append(d);
  }
  py::dict d;
  d["samples"] = samples;
  d["failures"] = failures;
  d["matrix_hash"] = t.matrix_hash;
  return d;
}

py::dict verdict_dict(const ConjectureVerdict& v) {
  py::dict d;
  d["holds"] = v.holds;
  d["deviation"] = v.deviation;
  d["tolerance_used"] = v.tolerance_used;
  d["membership_ok"] = v.membership_ok;
  py::list points;
  for (const auto& w : v.witness) points.append(w.pinf.point.coords());
  d["pinf_points"] = points;
  return d;
}

ConjectureOptions conjecture_options(double tol, const std::optional<std::vector<double>>& schedule) {
  ConjectureOptions o;
  o.tol = tol;
  o.schedule = schedule_or_default(schedule);
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tropical (max-plus) spectral theory and Perron asymptotics of exp(kA).";

  // Translators run newest first, so subclasses are registered after their base.
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  auto& numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());
  py::register_exception<FloatRangeError>(m, "FloatRangeError", numerical.ptr());

  m.def(
      "max_cycle_mean", [](const Rows& a) { return fraction(max_cycle_mean(to_matrix(a, "max-plus"))); },
      py::arg("a"));
  m.def(
      "kleene_star",
      [](const Rows& a, const std::string& semiring) { return from_matrix(kleene_star(to_matrix(a, semiring))); },
      py::arg("a"), py::arg("semiring") = "max-plus");
  m.def(
      "spectral_data", [](const Rows& a) { return spectral_dict(spectral_data(to_matrix(a, "max-plus"))); },
      py::arg("a"));
  m.def(
      "in_span",
      [](const std::vector<py::object>& x, const std::vector<std::vector<py::object>>& gens) {
        return in_span(to_point(x), to_points(gens));
      },
      py::arg("x"), py::arg("generators"));
  m.def(
      "project_onto_span",
      [](const std::vector<py::object>& x, const std::vector<std::vector<py::object>>& gens) {
        return fractions(trop_project_onto_span(to_point(x), to_points(gens)).coords());
      },
      py::arg("x"), py::arg("generators"));
  m.def(
      "hadamard_lemma_check", [](const Rows& a, unsigned k) { return hadamard_lemma_check(to_matrix(a, "max-plus"), k); },
      py::arg("a"), py::arg("k"));

  m.def(
      "log_perron_eigenpair",
      [](const Rows& a, double k, const std::string& engine, double tol) {
        const auto e = log_perron_eigenpair(to_matrix(a, "max-plus"), k, perron_options(engine, tol));
        py::dict d;
        d["log_rho"] = e.log_rho;
        d["log_vector"] = e.log_vector.coords();
        d["residual"] = e.residual;
        d["iterations"] = e.iterations;
        d["precision_bits"] = e.precision_bits;
        d["gap_log2"] = e.gap_log2;
        return d;
      },
      py::arg("a"), py::arg("k"), py::arg("engine") = "multiprecision", py::arg("tol") = 1e-13);
  m.def(
      "perron_float_oracle",
      [](const Rows& a, double k) {
        const auto o = perron_float_oracle(to_matrix(a, "max-plus"), k);
        py::dict d;
        d["rho"] = o.rho;
        d["vector"] = o.vector;
        d["reliable"] = o.reliable;
        d["error_estimate"] = o.error_estimate;
        d["iterations"] = o.iterations;
        return d;
      },
      py::arg("a"), py::arg("k"));
  m.def("geometric_schedule", &geometric_schedule, py::arg("k0"), py::arg("doublings"));
  m.def(
      "normalized_trajectory",
      [](const Rows& a, const std::vector<double>& schedule, const std::string& engine) {
        return trajectory_dict(normalized_trajectory(to_matrix(a, "max-plus"), schedule, perron_options(engine, 1e-13)));
      },
      py::arg("a"), py::arg("schedule"), py::arg("engine") = "multiprecision");
  m.def(
      "p_infinity",
      [](const Rows& a, const std::optional<std::vector<double>>& schedule) {
        return pinf_dict(estimate_p_infinity(normalized_trajectory(to_matrix(a, "max-plus"), schedule_or_default(schedule))));
      },
      py::arg("a"), py::arg("schedule") = py::none(), "Richardson estimate of P_inf; default schedule 4 * 2^i, i = 0..12.");

  m.def(
      "minplus_schur",
      [](const Rows& b, const std::vector<std::size_t>& c) { return from_matrix(minplus_schur(to_matrix(b, "min-plus"), c)); },
      py::arg("b"), py::arg("c"));
  m.def(
      "schur_candidates",
      [](const Rows& a, const std::string& normalization) {
        BHatNormalization norm;
        if (normalization == "cumulative") norm = BHatNormalization::CumulativeEigenvalue;
        else if (normalization == "level") norm = BHatNormalization::LevelEigenvalue;
        else throw InputError("normalization must be 'cumulative' or 'level'");
        const auto report = candidate_exponents(to_matrix(a, "max-plus").negated(), norm);
        py::list out;
        for (const auto& c : report.candidates) {
          py::dict d;
          d["v"] = fractions(c.v);
          d["point"] = fractions(c.tp_point.coords());
          d["column"] = c.column;
          out.append(d);
        }
        return out;
      },
      py::arg("a"), py::arg("normalization") = "cumulative", "Schur-complement candidates for P_inf of max-plus A.");

  m.def(
      "translation_chain",
      [](const std::vector<std::vector<py::object>>& gens) -> py::object {
        const auto pts = to_points(gens);
        const auto chain = translation_chain(pts);
        if (!chain) return py::none();
        py::dict d;
        d["base"] = fractions(chain->base.coords());
        d["beta"] = fraction(chain->beta);
        d["predicted"] = fractions(chain->predicted.coords());
        return d;
      },
      py::arg("generators"));
  m.def(
      "conjecture1",
      [](const Rows& a, double tol, const std::optional<std::vector<double>>& schedule) {
        return verdict_dict(conjecture1_test(to_matrix(a, "max-plus"), conjecture_options(tol, schedule)));
      },
      py::arg("a"), py::arg("tol") = 1e-2, py::arg("schedule") = py::none());
  m.def(
      "conjecture2",
      [](const Rows& a, const std::vector<Rows>& perturbed, double tol, const std::optional<std::vector<double>>& schedule) {
        std::vector<TropicalMatrix> ps;
        for (const auto& p : perturbed) ps.push_back(to_matrix(p, "max-plus"));
        return verdict_dict(conjecture2_test(to_matrix(a, "max-plus"), ps, conjecture_options(tol, schedule)));
      },
      py::arg("a"), py::arg("perturbed"), py::arg("tol") = 1e-2, py::arg("schedule") = py::none());
  m.def(
      "random_matrix",
      [](std::size_t n, const py::object& grid_step, const py::object& lo, const py::object& hi, std::uint64_t seed) {
        return from_matrix(random_matrix(n, to_rational(grid_step), to_rational(lo), to_rational(hi), seed));
      },
      py::arg("n"), py::arg("grid_step"), py::arg("lo"), py::arg("hi"), py::arg("seed"));
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"));

  m.def("figure_ids", [] {
    std::vector<std::string> ids;
    for (const auto& f : embedded_figures()) ids.push_back(f.id);
    return ids;
  });
  m.def(
      "figure",
      [](const std::string& id, const std::optional<std::vector<double>>& schedule) {
        const auto r = analyze_figure(embedded_figure(id), schedule_or_default(schedule));
        py::dict d;
        d["id"] = r.figure.id;
        d["label"] = r.figure.label;
        d["matrix"] = from_matrix(r.figure.matrix);
        d["caption_pinf"] = fractions(r.figure.caption_pinf.coords());
        d["spectral"] = spectral_dict(r.spectral);
        d["pinf"] = r.pinf ? py::object(pinf_dict(*r.pinf)) : py::none();
        d["flag"] = r.caption_in_span ? "CONSISTENT" : "DISCREPANT";
        d["caption_distance"] = r.caption_distance;
        return d;
      },
      py::arg("id"), py::arg("schedule") = py::none());
}
