#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tropasym/perron.hpp"
#include "tropasym/tropical_spectral.hpp"

namespace tropasym {

/// A matrix from the published experiments together with the limit its caption states.
struct FigureRecord {
  std::string id;
  std::string label;
  TropicalMatrix matrix;
  ProjectivePoint caption_pinf;
  /// A further point the text claims lies in the eigenspace (the counterexample's Schur prediction).
  std::optional<ProjectivePoint> predicted_point;
};

/// Raw text of the embedded figure data file.
std::string_view embedded_figures_json();
std::vector<FigureRecord> embedded_figures();
/// Throws InputError for an unknown id.
FigureRecord embedded_figure(std::string_view id);

struct FigureReport {
  FigureRecord figure;
  SpectralData spectral;
  std::optional<PinfEstimate> pinf;
  /// Why pinf is missing, if it is.
  std::string pinf_error;
  /// Exact span membership of the caption value: CONSISTENT iff true.
  bool caption_in_span = false;
  /// Infinity-norm distance between the caption value and the estimate (NaN without an estimate).
  double caption_distance = 0.0;
  std::optional<bool> predicted_in_span;
  std::optional<double> predicted_distance;
};

FigureReport analyze_figure(const FigureRecord& figure, std::span<const double> schedule,
                            const PerronOptions& options = {});

}  // namespace tropasym
