#include "pqep/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>

#include "pqep/eep.hpp"
#include "pqep/io.hpp"
#include "pqep/oracle.hpp"
#include "pqep/qiep.hpp"

namespace pqep {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvariantViolation:
      return 2;
    case ErrorCode::StructureViolation:
    case ErrorCode::SingularA:
    case ErrorCode::ZeroEigenvalue:
    case ErrorCode::PairingViolation:
    case ErrorCode::ParityViolation:
    case ErrorCode::UnsupportedDefective:
    case ErrorCode::DefectiveInput:
    case ErrorCode::NotEigenpairs:
    case ErrorCode::NotAStandardPair:
      return 3;
    case ErrorCode::UnimodularInSpectrum:
    case ErrorCode::UnimodularUnsupported:
    case ErrorCode::SpectrumSizeOdd:
      return 5;
    default:
      return 4;
  }
}

namespace {

struct Settings {
  double tol_pair = 1e-8;
  double tol_struct = 1e-12;
  double residual_gate = 1e-9;
  double tol_select = 1e-3;
  double tol_unimodular = 1e-8;
  double tol_spectrum = 1e-6;

  void set(const std::string& key, double value) {
    if (!(value >= 0) || !std::isfinite(value))
      throw Error(ErrorCode::ParseError, "tolerance " + key + " must be finite and non-negative");
    if (key == "tol_pair") tol_pair = value;
    else if (key == "tol_struct") tol_struct = value;
    else if (key == "residual_gate") residual_gate = value;
    else if (key == "tol_select") tol_select = value;
    else if (key == "tol_unimodular") tol_unimodular = value;
    else if (key == "tol_spectrum") tol_spectrum = value;
    else throw Error(ErrorCode::ParseError, "unknown tolerance key " + key);
  }
};

struct Options {
  std::string file;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool json = false;
  std::vector<std::string> tol;
};

Json complex_list(const std::vector<cplx>& zs) {
  Json arr = Json::array();
  for (const cplx& z : zs) arr.push_back(complex_to_json(z));
  return arr;
}

void emit(const Json& report, bool json, std::ostream& out) {
  if (json) {
    out << report.dump(2) << "\n";
    return;
  }
  for (const auto& [key, value] : report.items())
    out << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
}

Json matrix_doc(const Mat& m, Flavor f) { return matrix_to_json(m, f.real() && imag_is_zero(m)); }

void write_matrix(const std::string& dir, const char* name, const Mat& m, Flavor f) {
  std::filesystem::create_directories(dir);
  write_atomic((std::filesystem::path(dir) / name).string(), matrix_doc(m, f).dump(2) + "\n");
}

const Mat& need(const std::optional<Mat>& m, const char* name) {
  if (!m) throw Error(ErrorCode::ParseError, std::string("problem file lacks \"") + name + "\"");
  return *m;
}

PalindromicPolynomial load_poly(const ProblemFile& p, const Settings& s) {
  Tolerances tol;
  tol.structure = s.tol_struct;
  return PalindromicPolynomial(p.flavor, need(p.A, "A"), need(p.Q, "Q"), tol);
}

double value_scale(const PalindromicPolynomial& poly, cplx z) {
  const double r = std::abs(z);
  return poly.A().norm() * r * r + poly.Q().norm() * r + poly.A().norm();
}

int cmd_eig(const ProblemFile& p, const Settings& s, Json& report) {
  const PalindromicPolynomial poly = load_poly(p, s);
  const auto pairs = qep_eigensolve(poly);
  std::vector<cplx> values;
  double worst = 0;
  Json residuals = Json::array();
  for (const auto& e : pairs) {
    values.push_back(e.value);
    const double r = (poly.evaluate(e.value) * e.vector).norm() / value_scale(poly, e.value);
    residuals.push_back(r);
    worst = std::max(worst, r);
  }
  const double closure = pairing_defect(values, p.flavor);
  const bool pass = closure <= s.tol_spectrum && worst <= s.residual_gate;
  report["command"] = "eig";
  report["flavor"] = p.flavor.code();
  report["n"] = poly.size();
  report["eigenvalues"] = complex_list(values);
  report["pair_residuals"] = residuals;
  report["max_pair_residual"] = worst;
  report["pairing_defect"] = closure;
  report["pairing_closed"] = closure <= s.tol_spectrum;
  report["pass"] = pass;
  return pass ? 0 : 1;
}

int cmd_qiep(const ProblemFile& p, const Settings& s, const Options& o, Json& report) {
  if (!p.eigenvalues) throw Error(ErrorCode::ParseError, "problem file lacks \"eigenvalues\"");
  const std::vector<cplx>& eigs = *p.eigenvalues;
  if (eigs.size() % 2 != 0) throw Error(ErrorCode::SpectrumSizeOdd, "eigenvalue count must be even");
  for (const cplx& z : eigs)
    if (std::abs(std::abs(z) - 1.0) <= s.tol_unimodular)
      throw Error(ErrorCode::UnimodularInSpectrum, "modulus-one eigenvalues are not supported");
  const SpectrumSpec spec = classify_spectrum(eigs, p.flavor, s.tol_pair, s.tol_unimodular);
  QiepOptions opts;
  opts.seed = o.seed.value_or(p.seed.value_or(0));
  opts.tol_unimodular = s.tol_unimodular;
  const QiepSolution sol = solve_qiep(spec, p.flavor, opts);
  const PalindromicPolynomial& poly = sol.poly;

  const double res = residual(poly, sol.X, sol.Lambda);
  const double coef = poly.A().norm() + poly.Q().norm();
  const double scale = residual_scale(poly, sol.X, sol.Lambda);
  const std::vector<cplx> computed = qep_eigenvalues(poly);
  const double dist = spectrum_distance(computed, eigs);
  const double closure = pairing_defect(computed, p.flavor);
  const double structure = (star(poly.Q(), p.flavor) - double(p.flavor.epsilon) * poly.Q()).norm();
  const bool pass = res <= s.residual_gate * scale && dist <= s.tol_spectrum;

  report["command"] = "qiep";
  report["flavor"] = p.flavor.code();
  report["n"] = poly.size();
  report["seed"] = opts.seed;
  report["attempts"] = sol.attempts;
  report["residual"] = res;
  report["residual_over_coefficients"] = res / coef;
  report["residual_relative"] = res / scale;
  report["spectrum_deviation"] = dist;
  report["pairing_defect"] = closure;
  report["structure_defect"] = structure;
  report["pass"] = pass;

  write_matrix(o.out_dir, "A.json", poly.A(), p.flavor);
  write_matrix(o.out_dir, "Q.json", poly.Q(), p.flavor);
  write_matrix(o.out_dir, "X.json", sol.X, p.flavor);
  write_matrix(o.out_dir, "J.json", sol.Lambda, p.flavor);
  write_matrix(o.out_dir, "Gamma.json", sol.gamma.gamma, p.flavor);
  write_atomic((std::filesystem::path(o.out_dir) / "certificate.json").string(),
               report.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_eep(const ProblemFile& p, const Settings& s, const Options& o, Json& report) {
  const PalindromicPolynomial poly = load_poly(p, s);
  if (!p.replace) throw Error(ErrorCode::ParseError, "problem file lacks \"replace\"");
  const std::vector<cplx>& from = p.replace->from;
  const std::vector<cplx>& to = p.replace->to;
  for (const cplx& a : from)
    for (const cplx& b : to)
      if (std::abs(a - b) <= s.tol_select * std::max(1.0, std::abs(a)))
        throw Error(ErrorCode::InvariantViolation, "replace.from and replace.to overlap");
  EmbeddingRequest req = make_request(poly, from, to, s.tol_select, s.tol_pair);
  const std::optional<std::uint64_t> seed = o.seed ? o.seed : p.seed;
  if (seed) {
    req.seed = *seed;
    req.phi_choice = PhiChoice::RandomStructured;
  }
  req.residual_gate = std::max(s.residual_gate, 1e-8);
  const EmbeddingResult res = embed(req);
  const EmbeddingReport& r = res.report;
  const bool pass = r.new_residual_relative <= s.residual_gate &&
                    r.retained_residual_relative <= s.residual_gate &&
                    r.retained_deviation <= s.tol_spectrum && r.new_eigen_deviation <= s.tol_spectrum &&
                    r.structure_defect == 0.0;

  report["command"] = "eep";
  report["flavor"] = p.flavor.code();
  report["n"] = poly.size();
  report["replaced"] = complex_list(spectral_values(req.Lambda1, p.flavor));
  report["replacement"] = complex_list(spectral_values(req.Lambda1_new, p.flavor));
  report["phi"] = seed ? "random" : "identity";
  report["new_residual"] = r.new_residual;
  report["new_residual_relative"] = r.new_residual_relative;
  report["retained_residual"] = r.retained_residual;
  report["retained_residual_relative"] = r.retained_residual_relative;
  report["retained_deviation"] = r.retained_deviation;
  report["retained_angle"] = r.retained_angle;
  report["new_eigenvalue_deviation"] = r.new_eigen_deviation;
  report["structure_defect"] = r.structure_defect;
  report["structure_preserved"] = r.structure_defect == 0.0;
  report["pass"] = pass;

  write_matrix(o.out_dir, "A_new.json", res.poly_new.A(), p.flavor);
  write_matrix(o.out_dir, "Q_new.json", res.poly_new.Q(), p.flavor);
  return pass ? 0 : 1;
}

int cmd_verify(const ProblemFile& p, const Settings& s, Json& report) {
  const PalindromicPolynomial poly = load_poly(p, s);
  const Mat& X = need(p.X, "X");
  const Mat& J = need(p.J, "J");
  const double tol = std::max(s.residual_gate, 1e-9);
  const DecompositionReport d = verify_decomposition(poly, X, J, tol, p.Gamma.value_or(Mat()));
  report["command"] = "verify";
  report["flavor"] = p.flavor.code();
  report["n"] = poly.size();
  report["gamma_supplied"] = p.Gamma.has_value();
  report["pair_residual"] = d.pair_residual;
  report["pair_residual_relative"] = d.pair_residual_relative;
  report["pair_residual_flagged"] = d.pair_residual_relative > tol;
  report["skew_defect"] = d.skew_defect;
  report["intertwine_defect"] = d.intertwine_defect;
  report["xgx_defect"] = d.xgx_defect;
  report["roundtrip_error_A"] = d.roundtrip_error_A;
  report["roundtrip_error_Q"] = d.roundtrip_error_Q;
  report["pass"] = d.pass;
  return d.pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Palindromic quadratic eigenvalue tools", "pqep"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "problem file (JSON)")->required();
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_flag("--json", o.json, "structured report");
    sub->add_option("--tol", o.tol, "tolerance override KEY=VAL")->take_all();
  };
  CLI::App* eig = app.add_subcommand("eig", "eigenvalues and pairing check");
  CLI::App* qiep = app.add_subcommand("qiep", "construct a polynomial from a spectrum");
  CLI::App* eep = app.add_subcommand("eep", "replace eigenvalues without spill-over");
  CLI::App* verify = app.add_subcommand("verify", "check a standard pair decomposition");
  for (CLI::App* sub : {eig, qiep, eep, verify}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const ProblemFile p = load_problem(o.file);
    Settings s;
    for (const auto& [key, value] : p.tolerances) s.set(key, value);
    for (const std::string& kv : o.tol) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "--tol expects KEY=VAL");
      double v = 0;
      try {
        std::size_t used = 0;
        v = std::stod(kv.substr(eq + 1), &used);
        if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::ParseError, "bad tolerance value in " + kv);
      }
      s.set(kv.substr(0, eq), v);
    }
    Json report;
    int code = 0;
    if (eig->parsed()) code = cmd_eig(p, s, report);
    else if (qiep->parsed()) code = cmd_qiep(p, s, o, report);
    else if (eep->parsed()) code = cmd_eep(p, s, o, report);
    else code = cmd_verify(p, s, report);
    emit(report, o.json, out);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace pqep
