#include "pqep/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "pqep/error.hpp"

namespace pqep {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  parse_fail("complex entries are numbers or [re, im] pairs");
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Mat matrix_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("matrix must be an object");
  for (const char* key : {"rows", "cols", "field", "data"})
    if (!j.contains(key)) parse_fail(std::string("matrix lacks \"") + key + "\"");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    parse_fail("rows and cols must be integers");
  const long rows = j["rows"].get<long>(), cols = j["cols"].get<long>();
  if (rows < 0 || cols < 0) parse_fail("negative matrix size");
  if (!j["field"].is_string()) parse_fail("field must be a string");
  const std::string field = j["field"].get<std::string>();
  if (field != "real" && field != "complex") parse_fail("field must be \"real\" or \"complex\"");
  const Json& data = j["data"];
  if (!data.is_array() || long(data.size()) != rows * cols)
    parse_fail("data length must equal rows * cols");
  Mat m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      const cplx z = complex_from_json(data[r * cols + c]);
      if (field == "real" && z.imag() != 0.0) parse_fail("real matrix with a nonzero imaginary part");
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) parse_fail("non-finite entry");
      m(r, c) = z;
    }
  return m;
}

Json matrix_to_json(const Mat& m, bool real) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      if (real)
        data.push_back(m(r, c).real());
      else
        data.push_back(complex_to_json(m(r, c)));
    }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["field"] = real ? "real" : "complex";
  j["data"] = std::move(data);
  return j;
}

ProblemFile problem_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("problem file must be an object");
  if (!j.contains("flavor") || !j["flavor"].is_string()) parse_fail("problem file lacks \"flavor\"");
  ProblemFile p;
  p.flavor = Flavor::parse(j["flavor"].get<std::string>());
  auto matrix = [&](const char* key, std::optional<Mat>& slot) {
    if (j.contains(key)) slot = matrix_from_json(j[key]);
  };
  matrix("A", p.A);
  matrix("Q", p.Q);
  matrix("X", p.X);
  matrix("J", p.J);
  matrix("Gamma", p.Gamma);
  auto list = [&](const Json& arr, const char* what) {
    if (!arr.is_array()) parse_fail(std::string(what) + " must be a list");
    std::vector<cplx> out;
    for (const auto& e : arr) out.push_back(complex_from_json(e));
    return out;
  };
  if (j.contains("eigenvalues")) p.eigenvalues = list(j["eigenvalues"], "eigenvalues");
  if (j.contains("replace")) {
    const Json& r = j["replace"];
    if (!r.is_object() || !r.contains("from") || !r.contains("to"))
      parse_fail("replace needs \"from\" and \"to\"");
    p.replace = Replacement{list(r["from"], "replace.from"), list(r["to"], "replace.to")};
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) parse_fail("seed must be a non-negative integer");
    p.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) parse_fail("tolerances must be an object");
    for (const auto& [key, value] : j["tolerances"].items())
      p.tolerances[key] = number(value, "tolerance");
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  return problem_from_json(j);
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace pqep
