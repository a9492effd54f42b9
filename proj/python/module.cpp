#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pqep/decomposition.hpp"
#include "pqep/eep.hpp"
#include "pqep/gamma.hpp"
#include "pqep/oracle.hpp"
#include "pqep/qiep.hpp"

namespace py = pybind11;
using namespace pqep;

namespace {

PalindromicPolynomial make_poly(const Mat& A, const Mat& Q, const std::string& flavor) {
  return PalindromicPolynomial(Flavor::parse(flavor), A, Q);
}

py::dict qiep(const std::vector<cplx>& eigenvalues, const std::string& flavor, std::uint64_t seed) {
  const Flavor f = Flavor::parse(flavor);
  QiepOptions opts;
  opts.seed = seed;
  const QiepSolution sol = solve_qiep(classify_spectrum(eigenvalues, f), f, opts);
  py::dict d;
  d["A"] = sol.poly.A();
  d["Q"] = sol.poly.Q();
  d["X"] = sol.X;
  d["Lambda"] = sol.Lambda;
  d["Gamma"] = sol.gamma.gamma;
  d["attempts"] = sol.attempts;
  d["residual"] = residual(sol.poly, sol.X, sol.Lambda);
  return d;
}

py::dict eep(const Mat& A, const Mat& Q, const std::string& flavor, const std::vector<cplx>& from,
             const std::vector<cplx>& to, std::optional<std::uint64_t> seed) {
  EmbeddingRequest req = make_request(make_poly(A, Q, flavor), from, to);
  if (seed) {
    req.seed = *seed;
    req.phi_choice = PhiChoice::RandomStructured;
  }
  const EmbeddingResult r = embed(req);
  py::dict d;
  d["A"] = r.poly_new.A();
  d["Q"] = r.poly_new.Q();
  d["X1"] = r.X1_new;
  d["Gamma1"] = r.gamma1;
  d["Phi"] = r.phi;
  const EmbeddingReport& rep = r.report;
  d["new_residual_relative"] = rep.new_residual_relative;
  d["retained_residual_relative"] = rep.retained_residual_relative;
  d["retained_deviation"] = rep.retained_deviation;
  d["retained_angle"] = rep.retained_angle;
  d["new_eigenvalue_deviation"] = rep.new_eigen_deviation;
  d["structure_defect"] = rep.structure_defect;
  return d;
}

py::dict verify(const Mat& A, const Mat& Q, const Mat& X, const Mat& J, const std::string& flavor,
                double tol) {
  const DecompositionReport r = verify_decomposition(make_poly(A, Q, flavor), X, J, tol);
  py::dict d;
  d["pair_residual"] = r.pair_residual;
  d["pair_residual_relative"] = r.pair_residual_relative;
  d["skew_defect"] = r.skew_defect;
  d["intertwine_defect"] = r.intertwine_defect;
  d["xgx_defect"] = r.xgx_defect;
  d["roundtrip_error_A"] = r.roundtrip_error_A;
  d["roundtrip_error_Q"] = r.roundtrip_error_Q;
  d["Gamma"] = r.gamma;
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Palindromic quadratic eigenvalue, inverse and embedding problems";
  py::register_exception<Error>(m, "PqepError", PyExc_RuntimeError);

  m.def(
      "eigenvalues",
      [](const Mat& A, const Mat& Q, const std::string& flavor) {
        return qep_eigenvalues(make_poly(A, Q, flavor));
      },
      py::arg("A"), py::arg("Q"), py::arg("flavor"));
  m.def(
      "eigenpairs",
      [](const Mat& A, const Mat& Q, const std::string& flavor) {
        const auto pairs = qep_eigensolve(make_poly(A, Q, flavor));
        const Index n = A.rows();
        Vec values(pairs.size());
        Mat vectors(n, Index(pairs.size()));
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          values(k) = pairs[k].value;
          vectors.col(k) = pairs[k].vector;
        }
        return py::make_tuple(values, vectors);
      },
      py::arg("A"), py::arg("Q"), py::arg("flavor"));
  m.def(
      "pairing_defect",
      [](const std::vector<cplx>& eigs, const std::string& flavor) {
        return pairing_defect(eigs, Flavor::parse(flavor));
      },
      py::arg("eigenvalues"), py::arg("flavor"));
  m.def(
      "random_palindromic",
      [](int n, const std::string& flavor, std::uint64_t seed) {
        const PalindromicPolynomial p = random_palindromic(n, Flavor::parse(flavor), seed);
        return py::make_tuple(p.A(), p.Q());
      },
      py::arg("n"), py::arg("flavor"), py::arg("seed") = 0);
  m.def(
      "compute_gamma",
      [](const Mat& A, const Mat& Q, const Mat& X, const Mat& J, const std::string& flavor) {
        return compute_gamma(make_poly(A, Q, flavor), {X, J}).gamma;
      },
      py::arg("A"), py::arg("Q"), py::arg("X"), py::arg("J"), py::arg("flavor"));
  m.def(
      "reconstruct",
      [](const Mat& X, const Mat& J, const Mat& gamma, const std::string& flavor) {
        const PalindromicPolynomial p = reconstruct(X, J, {gamma, Flavor::parse(flavor)});
        return py::make_tuple(p.A(), p.Q());
      },
      py::arg("X"), py::arg("J"), py::arg("Gamma"), py::arg("flavor"));
  m.def("solve_qiep", &qiep, py::arg("eigenvalues"), py::arg("flavor"), py::arg("seed") = 0);
  m.def("embed", &eep, py::arg("A"), py::arg("Q"), py::arg("flavor"), py::arg("from_eigenvalues"),
        py::arg("to_eigenvalues"), py::arg("seed") = py::none());
  m.def("verify", &verify, py::arg("A"), py::arg("Q"), py::arg("X"), py::arg("J"), py::arg("flavor"),
        py::arg("tol") = 1e-9);
}
