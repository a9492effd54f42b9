#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pqep/matrix.hpp"

namespace pqep {

using Json = nlohmann::ordered_json;

// {"rows", "cols", "field": "real"|"complex", "data": row-major, complex as [re, im]}
Mat matrix_from_json(const Json& j);
Json matrix_to_json(const Mat& m, bool real);

// A number or an [re, im] pair.
cplx complex_from_json(const Json& j);
Json complex_to_json(cplx z);

struct Replacement {
  std::vector<cplx> from;
  std::vector<cplx> to;
};

struct ProblemFile {
  Flavor flavor;
  std::optional<Mat> A, Q, X, J, Gamma;
  std::optional<std::vector<cplx>> eigenvalues;
  std::optional<Replacement> replace;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
};

ProblemFile problem_from_json(const Json& j);
ProblemFile load_problem(const std::string& path);

// Writes to a sibling temp file, then renames over the target.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace pqep
