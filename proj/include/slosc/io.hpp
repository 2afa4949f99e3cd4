#pragma once

#include <filesystem>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "slosc/problem.hpp"
#include "slosc/shooting.hpp"
#include "slosc/spectrum.hpp"

namespace slosc {

/// Parses and validates a problem document. Unknown fields, wrong types and
/// malformed grids raise Error(ParseError) naming the offending field path;
/// validation failures keep their own kinds (NonPositiveP, ZeroWeight, BadGrid).
Problem parse_problem(const nlohmann::json& doc);
Problem parse_problem(std::string_view text);
Problem load_problem(const std::filesystem::path& path);

nlohmann::json to_json(const Problem& problem);

/// t, Y1, Y2, theta (with the renormalization scale folded back in).
void write_trajectory_csv(std::ostream& os, const ShootResult& result);
/// t, y, quasi_derivative of a normalized eigenfunction.
void write_eigenfunction_csv(std::ostream& os, const EigenvalueRecord& record);
/// n, lambda, zero_count, inertia, fem_lambda, method_agreement; xi in a header comment.
void write_spectrum_csv(std::ostream& os, const SpectrumReport& report);

}  // namespace slosc
