#pragma once

#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tropasym/conjectures.hpp"
#include "tropasym/perron.hpp"
#include "tropasym/schur.hpp"
#include "tropasym/tropical_spectral.hpp"

// JSON and CSV forms of the library's values. Node indices in JSON are
// 1-based; rationals are canonical "p" or "p/q" strings.
namespace tropasym::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text; errors become InputError with line and column.
Json parse_json(std::string_view text, std::string_view source = "<input>");

/// Whole file as a string. Throws InputError naming the path.
std::string read_text_file(const std::string& path);
/// Throws std::runtime_error naming the path.
void write_text_file(const std::string& path, std::string_view text);

/// {"n": 3, "entries": [["0","-1/2",...],...], "semiring": "max-plus"}.
/// Entries may also be JSON numbers; they are read through their decimal text.
TropicalMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const TropicalMatrix& a);

Json point_to_json(const ProjectivePoint& p);
ProjectivePoint point_from_json(const Json& j);
Json float_point_to_json(const FloatPoint& p);

Json spectral_to_json(const SpectralData& sd);
Json pinf_to_json(const PinfEstimate& e);
Json schur_to_json(const SchurReport& report, std::span<const CandidateVerdict> verdicts);
Json verdict_to_json(const ConjectureVerdict& v);

Json sample_to_json(const SampleRecord& r);
SampleRecord sample_from_json(const Json& j);

/// Header k,lambda_k,coord_1..coord_n,residual,iterations,span_distance.
/// Failed samples appear in k order with nan values.
std::string trajectory_csv(const PerronTrajectory& traj, std::span<const ProjectivePoint> generators);

/// Shortest decimal text that reads back to the same double; "nan" and "inf" for non-finite values.
std::string format_double(double x);

}  // namespace tropasym::io
