#include "cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tropasym/conjectures.hpp"
#include "tropasym/errors.hpp"
#include "tropasym/figures.hpp"
#include "tropasym/io.hpp"
#include "tropasym/plot.hpp"
#include "tropasym/schur.hpp"

namespace tropasym::cli {
namespace {

using io::Json;

struct Config {
  std::string input;
  std::string matrix;
  std::string figure;
  double k0 = 4.0;
  int doublings = 12;
  double tol = 1e-13;
  std::size_t max_iter = 1'000'000;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string out;
  std::size_t grid = 400;
  // schur
  double match_tol = 1e-2;
  std::string normalization = "cumulative";
  // conjectures
  std::size_t count = 20;
  std::size_t perturbations = 5;
  std::size_t n = 3;
  double conj_tol = 1e-2;
  std::string dataset;
};

PerronOptions perron_options(const Config& c) {
  PerronOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  return o;
}

std::vector<double> schedule(const Config& c) { return geometric_schedule(c.k0, c.doublings); }

TropicalMatrix load_matrix(const Config& c) {
  if (!c.figure.empty()) return embedded_figure(c.figure).matrix;
  if (!c.matrix.empty()) return io::matrix_from_json(io::parse_json(c.matrix, "--matrix"));
  if (!c.input.empty()) return io::matrix_from_json(io::parse_json(io::read_text_file(c.input), c.input));
  throw InputError("no matrix given: use --input FILE, --matrix JSON or --figure ID");
}

TropicalMatrix load_max_plus(const Config& c) {
  TropicalMatrix a = load_matrix(c);
  if (a.semiring() != Semiring::MaxPlus) throw InputError("this command expects a max-plus matrix");
  return a;
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    io::write_text_file(c.out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void require_format(const Config& c, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* f : allowed) {
    if (c.format == f) return;
    list += (list.empty() ? "" : ", ") + std::string(f);
  }
  throw InputError("--format " + c.format + " is not available for this command (choose " + list + ")");
}

Json sample_json(const PerronSample& s) {
  return Json{{"k", s.k},
              {"lambda_k", s.log_rho_over_k},
              {"point", io::float_point_to_json(s.point)},
              {"residual", s.residual},
              {"iterations", s.iterations},
              {"precision_bits", s.precision_bits}};
}

int cmd_spectrum(const Config& c, std::ostream& out) {
  require_format(c, {"json"});
  emit(c, dump(io::spectral_to_json(spectral_data(load_max_plus(c)))), out);
  return 0;
}

int cmd_perron(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"json", "csv"});
  const TropicalMatrix a = load_max_plus(c);
  const auto ks = schedule(c);
  const PerronTrajectory traj = normalized_trajectory(a, ks, perron_options(c));
  const SpectralData sd = spectral_data(a);
  std::optional<PinfEstimate> pinf;
  std::string pinf_error;
  try {
    pinf = estimate_p_infinity(traj);
  } catch (const NumericalError& e) {
    pinf_error = e.what();
  }

  if (c.format == "csv") {
    emit(c, io::trajectory_csv(traj, sd.generators), out);
    if (pinf) err << "pinf " << io::pinf_to_json(*pinf).dump() << "\n";
  } else {
    Json samples = Json::array();
    for (const auto& s : traj.samples) samples.push_back(sample_json(s));
    Json failures = Json::array();
    for (const auto& f : traj.failures)
      failures.push_back(Json{{"k", f.k}, {"residual", io::format_double(f.residual)}, {"reason", f.reason}});
    Json doc{{"matrix_hash", traj.matrix_hash},
             {"lambda", to_string(sd.lambda)},
             {"samples", std::move(samples)},
             {"failures", std::move(failures)}};
    doc["pinf"] = pinf ? io::pinf_to_json(*pinf) : Json(nullptr);
    emit(c, dump(doc), out);
  }
  if (!pinf) {
    err << "numerical failure: " << pinf_error << "\n";
    return 2;
  }
  return 0;
}

int cmd_schur(const Config& c, std::ostream& out) {
  require_format(c, {"json"});
  BHatNormalization norm;
  if (c.normalization == "cumulative") norm = BHatNormalization::CumulativeEigenvalue;
  else if (c.normalization == "level") norm = BHatNormalization::LevelEigenvalue;
  else throw InputError("--normalization must be 'cumulative' or 'level'");

  const TropicalMatrix a = load_max_plus(c);
  const SchurReport report = candidate_exponents(a.negated(), norm);
  const PinfEstimate pinf = estimate_p_infinity(normalized_trajectory(a, schedule(c), perron_options(c)));
  const auto verdicts = compare_prediction(a, report, pinf, c.match_tol);
  Json doc = io::schur_to_json(report, verdicts);
  doc["pinf"] = io::pinf_to_json(pinf);
  doc["match_tol"] = c.match_tol;
  emit(c, dump(doc), out);
  return 0;
}

int cmd_figures(const Config& c, std::ostream& out) {
  require_format(c, {"json", "csv"});
  const auto ks = schedule(c);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "id,label,lambda,generators,pinf,error_bound,caption,caption_distance,flag,predicted_in_span\n";
  for (const auto& fig : embedded_figures()) {
    const FigureReport r = analyze_figure(fig, ks, perron_options(c));
    const char* flag = r.caption_in_span ? "CONSISTENT" : "DISCREPANT";
    Json gens = Json::array();
    for (const auto& g : r.spectral.generators) gens.push_back(io::point_to_json(g));
    Json row{{"id", fig.id},
             {"label", fig.label},
             {"matrix", io::matrix_to_json(fig.matrix)},
             {"lambda", to_string(r.spectral.lambda)},
             {"generators", gens},
             {"pinf", r.pinf ? io::pinf_to_json(*r.pinf) : Json(nullptr)},
             {"caption_pinf", io::point_to_json(fig.caption_pinf)},
             {"caption_in_span", r.caption_in_span},
             {"caption_distance", r.pinf ? Json(r.caption_distance) : Json(nullptr)},
             {"flag", flag}};
    if (!r.pinf_error.empty()) row["pinf_error"] = r.pinf_error;
    if (fig.predicted_point) {
      row["predicted_point"] = io::point_to_json(*fig.predicted_point);
      row["predicted_in_span"] = *r.predicted_in_span;
      row["predicted_distance"] = r.predicted_distance ? Json(*r.predicted_distance) : Json(nullptr);
    }
    rows.push_back(row);

    auto join = [](const Json& arr) {
      std::string s;
      for (const auto& x : arr) s += (s.empty() ? "" : " ") + (x.is_string() ? x.get<std::string>() : x.dump());
      return s;
    };
    std::string gen_text;
    for (const auto& g : gens) gen_text += (gen_text.empty() ? "" : ";") + join(g);
    csv << fig.id << ",\"" << fig.label << "\"," << to_string(r.spectral.lambda) << ",\"" << gen_text << "\",\""
        << (r.pinf ? join(io::float_point_to_json(r.pinf->point)) : "") << "\","
        << (r.pinf ? io::format_double(r.pinf->error_bound) : "nan") << ",\"" << join(io::point_to_json(fig.caption_pinf))
        << "\"," << io::format_double(r.caption_distance) << "," << flag << ","
        << (r.predicted_in_span ? (*r.predicted_in_span ? "true" : "false") : "") << "\n";
  }
  emit(c, c.format == "csv" ? csv.str() : dump(Json{{"figures", rows}}), out);
  return 0;
}

int cmd_plot(const Config& c, std::ostream& out) {
  require_format(c, {"svg"});
  const TropicalMatrix a = load_max_plus(c);
  if (a.size() != 3) {
    throw InputError("plot draws TP^2 only: the matrix must be 3x3, got " + std::to_string(a.size()) + "x" +
                     std::to_string(a.size()));
  }
  const SpectralData sd = spectral_data(a);
  const PerronTrajectory traj = normalized_trajectory(a, schedule(c), perron_options(c));
  const std::string title = c.figure.empty() ? "eigenspace and Perron trajectory" : embedded_figure(c.figure).label;
  emit(c, eigenspace_svg(sd.generators, traj.samples, c.grid, title), out);
  return 0;
}

int cmd_conjectures(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"json"});
  if (!c.seed) throw InputError("conjectures is randomized and needs an explicit --seed");
  ConjectureOptions opts;
  opts.tol = c.conj_tol;
  opts.schedule = schedule(c);
  opts.perron = perron_options(c);
  opts.seed = c.seed;

  Json c1_failures = Json::array(), c2_failures = Json::array(), notices = Json::array(), membership = Json::array();
  std::size_t c1_tested = 0, c1_held = 0, c1_not_chain = 0, c2_tested = 0, c2_held = 0, perturbations_found = 0;
  std::vector<SampleRecord> records;

  auto record = [&](const PinfMeasurement& m, std::uint64_t seed) {
    if (!m.membership_ok) membership.push_back(Json{{"matrix", io::matrix_to_json(m.matrix)}, {"span_distance", m.span_distance}});
    records.push_back(SampleRecord{m.matrix, spectral_data(m.matrix).generators, m.pinf.point, m.pinf.error_bound, seed});
  };

  for (std::size_t i = 0; i < c.count; ++i) {
    const std::uint64_t seed = derive_seed(*c.seed, i);
    const TropicalMatrix a = random_matrix(c.n, Rational(1, 2), Rational(-6), Rational(2), seed);
    const SpectralData sd = spectral_data(a);
    opts.seed = seed;

    if (translation_chain(sd.generators)) {
      ++c1_tested;
      const ConjectureVerdict v = conjecture1_test(a, opts);
      if (v.holds) ++c1_held;
      else c1_failures.push_back(io::verdict_to_json(v));
    } else {
      ++c1_not_chain;
    }

    std::vector<TropicalMatrix> family;
    if (c.perturbations > 0) {
      PerturbationBatch batch = eigenspace_preserving_perturbations(a, c.perturbations, Rational(2), seed);
      if (!batch.notice.empty()) notices.push_back("matrix " + std::to_string(i + 1) + ": " + batch.notice);
      perturbations_found += batch.matrices.size();
      family = std::move(batch.matrices);
    }
    const ConjectureVerdict v2 = conjecture2_test(a, family, opts);
    ++c2_tested;
    if (v2.holds) ++c2_held;
    else c2_failures.push_back(io::verdict_to_json(v2));
    for (const auto& m : v2.witness) record(m, seed);
  }

  const std::string dataset = c.dataset.empty() ? (c.out.empty() ? "" : c.out + ".samples.jsonl") : c.dataset;
  if (!dataset.empty()) export_samples(dataset, records);

  Json doc{{"seed", *c.seed},
           {"count", c.count},
           {"n", c.n},
           {"tol", c.conj_tol},
           {"conjecture1", Json{{"tested", c1_tested},
                                {"held", c1_held},
                                {"not_a_chain", c1_not_chain},
                                {"failures", c1_failures}}},
           {"conjecture2", Json{{"tested", c2_tested},
                                {"held", c2_held},
                                {"perturbations_requested", c.perturbations * c.count},
                                {"perturbations_found", perturbations_found},
                                {"notices", notices},
                                {"failures", c2_failures}}},
           {"membership_failures", membership},
           {"samples", records.size()}};
  doc["dataset"] = dataset.empty() ? Json(nullptr) : Json(dataset);
  emit(c, dump(doc), out);
  if (!c1_failures.empty() || !c2_failures.empty()) err << "note: some conjecture verdicts failed; see the report\n";
  return 0;
}

void add_common(CLI::App* sub, Config& c, bool matrix_input, bool numeric) {
  if (matrix_input) {
    auto* in = sub->add_option("--input", c.input, "Matrix JSON file");
    auto* m = sub->add_option("--matrix", c.matrix, "Inline matrix JSON");
    auto* f = sub->add_option("--figure", c.figure, "Embedded figure id (fig2 ... fig9, counterexample)");
    in->excludes(m)->excludes(f);
    m->excludes(f);
  }
  if (numeric) {
    sub->add_option("--k0", c.k0, "First k of the geometric schedule")->check(CLI::PositiveNumber);
    sub->add_option("--doublings", c.doublings, "Number of doublings of k")->check(CLI::Range(0, 40));
    sub->add_option("--tol", c.tol, "Log-residual tolerance of each eigenpair")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", c.max_iter, "Iteration cap of the eigenpair solver");
  }
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
  sub->add_option("--out", c.out, "Write the result to this path instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Tropical spectral data and Perron asymptotics of exp(kA)", "trop-asym"};
  app.require_subcommand(1);

  auto* spectrum = app.add_subcommand("spectrum", "Max-plus eigenvalue, critical classes and generators");
  add_common(spectrum, c, true, false);

  auto* perron = app.add_subcommand("perron", "Normalized Perron trajectory and P_inf estimate");
  add_common(perron, c, true, true);

  auto* schur = app.add_subcommand("schur", "Min-plus Schur pipeline candidates compared with P_inf");
  add_common(schur, c, true, true);
  schur->add_option("--match-tol", c.match_tol, "Distance below which a candidate matches P_inf");
  schur->add_option("--normalization", c.normalization, "B-hat normalization: cumulative or level");

  auto* figures = app.add_subcommand("figures", "Recompute the embedded figure matrices and check their captions");
  add_common(figures, c, false, true);

  auto* plot = app.add_subcommand("plot", "SVG of the TP^2 eigenspace with the Perron trajectory");
  add_common(plot, c, true, true);
  plot->add_option("--grid", c.grid, "Raster cells along the longer side")->check(CLI::Range(1, 4000));

  auto* conj = app.add_subcommand("conjectures", "Seeded campaign testing both conjectures");
  add_common(conj, c, false, true);
  conj->add_option("--seed", c.seed, "RNG seed (required)");
  conj->add_option("--count", c.count, "Number of random base matrices");
  conj->add_option("--perturbations", c.perturbations, "Eigenspace-preserving perturbations per base matrix");
  conj->add_option("--n", c.n, "Matrix dimension")->check(CLI::Range(2, 8));
  conj->add_option("--conj-tol", c.conj_tol, "Absolute tolerance of the conjecture checks");
  conj->add_option("--dataset", c.dataset, "JSON-lines file for (generators, P_inf) samples");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c.format.empty()) c.format = *plot ? "svg" : "json";
    if (*spectrum) return cmd_spectrum(c, out);
    if (*perron) return cmd_perron(c, out, err);
    if (*schur) return cmd_schur(c, out);
    if (*figures) return cmd_figures(c, out);
    if (*plot) return cmd_plot(c, out);
    if (*conj) return cmd_conjectures(c, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace tropasym::cli
