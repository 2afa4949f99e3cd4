#include "slosc/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "slosc/csv.hpp"
#include "slosc/error.hpp"

namespace slosc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field '" + path + "': " + what);
}

void only_fields(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json& required(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path.empty() ? key : path + "." + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

PiecewiseConstant parse_p(const json& v, const std::string& path) {
  only_fields(v, path, {"breakpoints", "values"});
  return {numbers(required(v, path, "breakpoints"), path + ".breakpoints"),
          numbers(required(v, path, "values"), path + ".values")};
}

DistributionalCoefficient parse_coefficient(const json& v, const std::string& path) {
  only_fields(v, path, {"density", "atoms"});
  DistributionalCoefficient c;
  const std::string dpath = path + ".density";
  const json& d = required(v, path, "density");
  only_fields(d, dpath, {"breakpoints", "polys"});
  c.density.breakpoints = numbers(required(d, dpath, "breakpoints"), dpath + ".breakpoints");
  const json& polys = required(d, dpath, "polys");
  if (!polys.is_array()) fail(dpath + ".polys", "expected an array of coefficient arrays");
  c.density.polys.clear();
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const std::string ppath = dpath + ".polys[" + std::to_string(i) + "]";
    const auto coeffs = numbers(polys[i], ppath);
    if (coeffs.empty() || coeffs.size() > 3) fail(ppath, "expected 1 to 3 coefficients (degree <= 2)");
    LocalQuadratic q{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < coeffs.size(); ++k) q[k] = coeffs[k];
    c.density.polys.push_back(q);
  }
  if (c.density.polys.size() + 1 != c.density.breakpoints.size())
    fail(dpath + ".polys", "expected one polynomial per subinterval");
  if (v.contains("atoms")) {
    const json& atoms = v.at("atoms");
    if (!atoms.is_array()) fail(path + ".atoms", "expected an array of [x, weight] pairs");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string apath = path + ".atoms[" + std::to_string(i) + "]";
      const auto pair = numbers(atoms[i], apath);
      if (pair.size() != 2) fail(apath, "expected [x, weight]");
      c.atoms.push_back({pair[0], pair[1]});
    }
  }
  return c;
}

json coefficient_json(const DistributionalCoefficient& c) {
  json polys = json::array();
  for (const auto& p : c.density.polys) polys.push_back({p[0], p[1], p[2]});
  json atoms = json::array();
  for (const auto& a : c.atoms) atoms.push_back({a.location, a.weight});
  return {{"density", {{"breakpoints", c.density.breakpoints}, {"polys", polys}}}, {"atoms", atoms}};
}

}  // namespace

Problem parse_problem(const json& doc) {
  only_fields(doc, "", {"p", "q", "r", "bc"});
  Problem raw;
  raw.p = parse_p(required(doc, "", "p"), "p");
  raw.q = doc.contains("q") ? parse_coefficient(doc.at("q"), "q") : DistributionalCoefficient::zero();
  raw.r = parse_coefficient(required(doc, "", "r"), "r");
  const json& bc = required(doc, "", "bc");
  only_fields(bc, "bc", {"theta0", "theta1"});
  raw.bc.theta0 = number(required(bc, "bc", "theta0"), "bc.theta0");
  raw.bc.theta1 = number(required(bc, "bc", "theta1"), "bc.theta1");
  if (raw.p.values.size() + 1 != raw.p.breakpoints.size()) fail("p.values", "expected one value per subinterval");
  return validate_problem(raw);
}

Problem parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(std::string_view(ss.str()));
}

json to_json(const Problem& problem) {
  return {{"p", {{"breakpoints", problem.p.breakpoints}, {"values", problem.p.values}}},
          {"q", coefficient_json(problem.q)},
          {"r", coefficient_json(problem.r)},
          {"bc", {{"theta0", problem.bc.theta0}, {"theta1", problem.bc.theta1}}}};
}

void write_trajectory_csv(std::ostream& os, const ShootResult& result) {
  CsvWriter csv(os);
  csv.comment("lambda=" + format_double(result.lambda));
  csv.header({"t", "Y1", "Y2", "theta"});
  // Scale against the largest state so large |lambda| underflows early values instead of overflowing late ones.
  double ref = 0.0;
  for (double s : result.log_scale) ref = std::max(ref, s);
  for (std::size_t i = 0; i < result.t.size(); ++i) {
    const double f = std::exp(result.log_scale[i] - ref);
    csv.cell(result.t[i]).cell(result.y1[i] * f).cell(result.y2[i] * f).cell(result.theta[i]);
    csv.end_row();
  }
}

void write_eigenfunction_csv(std::ostream& os, const EigenvalueRecord& record) {
  CsvWriter csv(os);
  csv.comment("n=" + std::to_string(record.index) + " lambda=" + format_double(record.lambda));
  csv.header({"t", "y", "quasi_derivative"});
  const auto& ef = record.eigenfunction;
  for (std::size_t i = 0; i < ef.t.size(); ++i) {
    csv.cell(ef.t[i]).cell(ef.y1[i]).cell(ef.y2[i]);
    csv.end_row();
  }
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& report) {
  CsvWriter csv(os);
  csv.comment("xi=" + format_double(report.xi));
  if (report.positive.terminated) csv.comment("positive side: " + report.positive.reason);
  if (report.negative.terminated) csv.comment("negative side: " + report.negative.reason);
  csv.header({"n", "lambda", "zero_count", "inertia", "fem_lambda", "method_agreement"});
  for (const auto& r : report.records) {
    csv.cell(r.index).cell(r.lambda).cell(r.zero_count).cell(r.inertia_at_lambda).cell(r.fem_lambda);
    csv.cell(r.methods_agree ? 1 : 0);
    csv.end_row();
  }
}

}  // namespace slosc
