#include "tropasym/figures.hpp"

#include <limits>

#include "figures_data.hpp"
#include "tropasym/errors.hpp"
#include "tropasym/io.hpp"

namespace tropasym {
namespace {

ProjectivePoint read_point(const io::Json& j) { return io::point_from_json(j); }

}  // namespace

std::string_view embedded_figures_json() { return detail::kFiguresJson; }

std::vector<FigureRecord> embedded_figures() {
  const io::Json doc = io::parse_json(detail::kFiguresJson, "figures.json");
  std::vector<FigureRecord> out;
  for (const auto& f : doc.at("figures")) {
    FigureRecord r;
    r.id = f.at("id").get<std::string>();
    r.label = f.at("label").get<std::string>();
    r.matrix = io::matrix_from_json(io::Json{{"entries", f.at("entries")}});
    r.caption_pinf = read_point(f.at("caption_pinf"));
    if (f.contains("predicted_point")) r.predicted_point = read_point(f.at("predicted_point"));
    out.push_back(std::move(r));
  }
  return out;
}

FigureRecord embedded_figure(std::string_view id) {
  for (auto& f : embedded_figures())
    if (f.id == id) return f;
  throw InputError("no embedded figure with id '" + std::string(id) + "'");
}

FigureReport analyze_figure(const FigureRecord& figure, std::span<const double> schedule,
                            const PerronOptions& options) {
  FigureReport r;
  r.figure = figure;
  r.spectral = spectral_data(figure.matrix);
  r.caption_in_span = in_span(figure.caption_pinf, r.spectral.generators);
  r.caption_distance = std::numeric_limits<double>::quiet_NaN();
  try {
    r.pinf = estimate_p_infinity(normalized_trajectory(figure.matrix, schedule, options));
    r.caption_distance = to_float(figure.caption_pinf).distance(r.pinf->point);
  } catch (const NumericalError& e) {
    r.pinf_error = e.what();
  }
  if (figure.predicted_point) {
    r.predicted_in_span = in_span(*figure.predicted_point, r.spectral.generators);
    if (r.pinf) r.predicted_distance = to_float(*figure.predicted_point).distance(r.pinf->point);
  }
  return r;
}

}  // namespace tropasym
