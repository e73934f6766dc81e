#include "tropasym/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "tropasym/errors.hpp"

namespace tropasym::io {
namespace {

std::string line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number()) return parse_rational(j.dump());
  throw InputError(where + ": expected a number or a numeric string");
}

Json rational_array(std::span<const Rational> xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

Json one_based(std::span<const std::size_t> nodes) {
  Json out = Json::array();
  for (auto v : nodes) out.push_back(v + 1);
  return out;
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw InputError(std::string(source) + ": malformed JSON at " + line_column(text, offset));
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

TropicalMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("matrix: expected a JSON object with \"entries\"");
  if (!j.contains("entries") || !j["entries"].is_array()) throw InputError("matrix: missing \"entries\" array");
  const Json& entries = j["entries"];
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].is_array()) throw InputError("matrix: row " + std::to_string(i + 1) + " is not an array");
    auto& row = rows.emplace_back();
    for (std::size_t c = 0; c < entries[i].size(); ++c) {
      row.push_back(rational_from_json(entries[i][c], "matrix entry (" + std::to_string(i + 1) + "," +
                                                          std::to_string(c + 1) + ")"));
    }
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) throw InputError("matrix: \"n\" must be an integer");
    if (j["n"].get<long long>() != static_cast<long long>(rows.size())) {
      throw InputError("matrix: \"n\" is " + j["n"].dump() + " but there are " + std::to_string(rows.size()) +
                       " rows");
    }
  }
  Semiring tag = Semiring::MaxPlus;
  if (j.contains("semiring")) {
    if (!j["semiring"].is_string()) throw InputError("matrix: \"semiring\" must be a string");
    tag = parse_semiring(j["semiring"].get<std::string>());
  }
  return TropicalMatrix(rows, tag);
}

Json matrix_to_json(const TropicalMatrix& a) {
  Json entries = Json::array();
  for (const auto& row : a.rows()) entries.push_back(rational_array(row));
  return Json{{"n", a.size()}, {"entries", std::move(entries)}, {"semiring", to_string(a.semiring())}};
}

Json point_to_json(const ProjectivePoint& p) { return rational_array(p.coords()); }

ProjectivePoint point_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("point: expected an array");
  std::vector<Rational> coords;
  for (const auto& x : j) coords.push_back(rational_from_json(x, "point coordinate"));
  return normalize_projective(coords);
}

Json float_point_to_json(const FloatPoint& p) { return Json(p.coords()); }

Json spectral_to_json(const SpectralData& sd) {
  Json classes = Json::array();
  for (const auto& c : sd.critical_classes) classes.push_back(one_based(c));
  Json gens = Json::array();
  for (const auto& g : sd.generators) gens.push_back(point_to_json(g));
  Json edges = Json::array();
  for (const auto& [i, j] : sd.critical_edges) edges.push_back(Json::array({i + 1, j + 1}));
  return Json{{"lambda", to_string(sd.lambda)},
              {"critical_nodes", one_based(sd.critical_nodes)},
              {"critical_edges", std::move(edges)},
              {"classes", std::move(classes)},
              {"generators", std::move(gens)}};
}

Json pinf_to_json(const PinfEstimate& e) {
  return Json{{"point", float_point_to_json(e.point)}, {"error_bound", e.error_bound}, {"k_max_used", e.k_max_used}};
}

Json schur_to_json(const SchurReport& report, std::span<const CandidateVerdict> verdicts) {
  Json levels = Json::array();
  for (const auto& level : report.levels) {
    Json removed = Json::array();
    for (const auto& c : level.removed_classes) removed.push_back(one_based(c));
    levels.push_back(Json{{"nodes", one_based(level.node_map)},
                          {"eigenvalue", to_string(level.eigenvalue)},
                          {"removed_classes", std::move(removed)},
                          {"matrix", matrix_to_json(level.matrix)}});
  }
  Json candidates = Json::array();
  for (std::size_t c = 0; c < report.candidates.size(); ++c) {
    const auto& cand = report.candidates[c];
    Json row{{"v", rational_array(cand.v)}, {"tp_point", point_to_json(cand.tp_point)}, {"column", cand.column + 1}};
    if (c < verdicts.size()) {
      row["in_eigenspace"] = verdicts[c].in_eigenspace;
      row["matches_pinf"] = verdicts[c].matches_pinf;
      row["distance_to_pinf"] = verdicts[c].distance_to_pinf;
    }
    candidates.push_back(std::move(row));
  }
  const char* norm =
      report.normalization == BHatNormalization::CumulativeEigenvalue ? "cumulative-eigenvalue" : "level-eigenvalue";
  return Json{{"levels", std::move(levels)},
              {"normalization", norm},
              {"b_hat", matrix_to_json(report.b_hat)},
              {"candidates", std::move(candidates)}};
}

Json verdict_to_json(const ConjectureVerdict& v) {
  Json witness = Json::array();
  for (const auto& m : v.witness) {
    witness.push_back(Json{{"matrix", matrix_to_json(m.matrix)},
                           {"pinf", pinf_to_json(m.pinf)},
                           {"span_distance", m.span_distance},
                           {"membership_ok", m.membership_ok}});
  }
  Json out{{"holds", v.holds},
           {"deviation", v.deviation},
           {"tolerance_used", v.tolerance_used},
           {"membership_ok", v.membership_ok},
           {"witness", std::move(witness)}};
  out["seed"] = v.seed ? Json(*v.seed) : Json(nullptr);
  return out;
}

Json sample_to_json(const SampleRecord& r) {
  Json gens = Json::array();
  for (const auto& g : r.generators) gens.push_back(point_to_json(g));
  Json out{{"matrix", matrix_to_json(r.matrix)},
           {"generators", std::move(gens)},
           {"pinf", float_point_to_json(r.pinf)},
           {"error_bound", r.error_bound}};
  out["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  return out;
}

SampleRecord sample_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("sample: expected an object");
  for (const char* key : {"matrix", "generators", "pinf", "error_bound"})
    if (!j.contains(key)) throw InputError(std::string("sample: missing \"") + key + "\"");
  SampleRecord r;
  try {
    r.matrix = matrix_from_json(j["matrix"]);
    for (const auto& g : j["generators"]) r.generators.push_back(point_from_json(g));
    r.pinf = normalize_float(j["pinf"].get<std::vector<double>>());
    r.error_bound = j["error_bound"].get<double>();
    if (j.contains("seed") && !j["seed"].is_null()) r.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("sample: ") + e.what());
  }
  return r;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const PerronTrajectory& traj, std::span<const ProjectivePoint> generators) {
  std::size_t n = 0;
  if (!traj.samples.empty()) n = traj.samples.front().point.size();
  else if (!generators.empty()) n = generators.front().size();

  std::vector<FloatPoint> gens;
  for (const auto& g : generators) gens.push_back(to_float(g));

  std::ostringstream out;
  out << "k,lambda_k";
  for (std::size_t i = 1; i <= n; ++i) out << ",coord_" << i;
  out << ",residual,iterations,span_distance\n";

  // Merge successes and failures by k.
  std::map<double, std::string> rows;
  for (const auto& s : traj.samples) {
    std::string row = format_double(s.k) + "," + format_double(s.log_rho_over_k);
    for (double c : s.point.coords()) row += "," + format_double(c);
    row += "," + format_double(s.residual) + "," + std::to_string(s.iterations) + ",";
    row += gens.empty() ? "nan" : format_double(span_distance(s.point, gens));
    rows[s.k] = std::move(row);
  }
  for (const auto& f : traj.failures) {
    std::string row = format_double(f.k) + ",nan";
    for (std::size_t i = 0; i < n; ++i) row += ",nan";
    row += "," + format_double(f.residual) + ",0,nan";
    rows[f.k] = std::move(row);
  }
  for (const auto& [k, row] : rows) out << row << "\n";
  return out.str();
}

}  // namespace tropasym::io
