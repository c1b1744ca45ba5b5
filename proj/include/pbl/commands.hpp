#pragma once

// The three command-line operations, callable in-process. Each returns the
// process exit code together with everything it would print:
//   0 success, 1 a verification check failed, 2 invalid configuration, 3 I/O failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pbl/bogoliubov.hpp"
#include "pbl/config.hpp"
#include "pbl/constraint_solver.hpp"
#include "pbl/error.hpp"
#include "pbl/fock.hpp"
#include "pbl/wavefunction.hpp"

namespace pbl {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInvalid = 2, kExitIo = 3 };

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;  // human-readable text or JSON
  std::string err;
  json report;
};

namespace detail {

inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::IoFailure: return kExitIo;
    default: return kExitInvalid;
  }
}

template <typename Body>
CommandResult guarded(Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_code_for(e);
    r.err = std::string(e.what()) + "\n";
    return r;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// check

inline json check_report(const ModelConfig& cfg) {
  const BogoliubovParams p = cfg.params();
  const auto mu = swanson_coefficients(p);
  const Hermiticity cls = classify(p);
  json rep;
  rep["params"] = params_to_json(p);
  rep["determinant"] = complex_to_json(p.det());
  rep["classification"] = to_string(cls);
  rep["mutually_adjoint"] = mutually_adjoint(p);
  rep["mu"] = {{"mu_ada", complex_to_json(mu.mu_ada)},
               {"mu_aa", complex_to_json(mu.mu_aa)},
               {"mu_adad", complex_to_json(mu.mu_adad)},
               {"mu_0", complex_to_json(mu.mu_0)}};

  if (!p.is_real()) {
    rep["window"] = nullptr;
    rep["ordering"] = {{"applicable", false}, {"reason", "complex quadruple"}};
    return rep;
  }
  const double a = p.alpha().real(), b = p.beta().real(), g = p.gamma().real(), d = p.delta().real();
  const double alpha_over_gamma = g != 0.0 ? a / g : std::numeric_limits<double>::quiet_NaN();
  const double delta_over_beta = b != 0.0 ? d / b : std::numeric_limits<double>::quiet_NaN();
  const bool ordered = 0.0 < alpha_over_gamma && alpha_over_gamma < delta_over_beta && delta_over_beta < 1.0;
  rep["ordering"] = {{"applicable", true},
                     {"alpha_over_gamma", alpha_over_gamma},
                     {"delta_over_beta", delta_over_beta},
                     {"satisfied", ordered}};
  try {
    const LambdaWindow w = admissible_lambda_window(p);
    rep["window"] = {{"excluded_lo", w.excluded_lo}, {"excluded_hi", w.excluded_hi}, {"empty", w.empty()}};
  } catch (const OrderingViolation& e) {
    rep["window"] = nullptr;
    rep["ordering"]["error"] = e.what();
  }
  if (std::abs(a * b - g * d) <= 1e-12 * std::max(1.0, std::abs(a * b))) {
    try {
      const auto hm = hermitian_mass(p, cfg.scales);
      rep["hermitian_mass"] = {{"mass", hm.mass}, {"physical", hm.physical}};
    } catch (const Error& e) {
      rep["hermitian_mass"] = {{"error", e.what()}};
    }
  }
  if (ordered) {
    const auto sm = special_masses(p, cfg.scales);
    rep["special_masses"] = {{"lambda_0", sm.at_zero}, {"lambda_plus_1", sm.at_plus_one}, {"lambda_minus_1", sm.at_minus_one}};
  }
  return rep;
}

inline std::string check_text(const json& rep) {
  std::ostringstream os;
  const auto c = [](const json& z) { return format_double(z[0].get<double>()) + " + " + format_double(z[1].get<double>()) + "i"; };
  os << "classification: " << rep["classification"].get<std::string>() << "\n";
  os << "determinant: " << c(rep["determinant"]) << "\n";
  for (const char* key : {"mu_ada", "mu_aa", "mu_adad", "mu_0"}) {
    os << key << ": " << c(rep["mu"][key]) << "\n";
  }
  const json& ord = rep["ordering"];
  if (!ord["applicable"].get<bool>()) {
    os << "ordering: n/a (" << ord["reason"].get<std::string>() << ")\n";
  } else {
    os << "ordering 0 < alpha/gamma < delta/beta < 1: " << (ord["satisfied"].get<bool>() ? "yes" : "no")
       << " (alpha/gamma = " << format_double(ord["alpha_over_gamma"].get<double>())
       << ", delta/beta = " << format_double(ord["delta_over_beta"].get<double>()) << ")\n";
  }
  if (rep["window"].is_null()) {
    os << "lambda window: n/a\n";
  } else if (rep["window"]["empty"].get<bool>()) {
    os << "lambda window: empty\n";
  } else {
    os << "lambda window: excluded (" << format_double(rep["window"]["excluded_lo"].get<double>()) << ", "
       << format_double(rep["window"]["excluded_hi"].get<double>()) << ")\n";
  }
  if (rep.contains("hermitian_mass") && rep["hermitian_mass"].contains("mass")) {
    os << "hermitian mass: " << format_double(rep["hermitian_mass"]["mass"].get<double>())
       << (rep["hermitian_mass"]["physical"].get<bool>() ? "" : " (non-physical)") << "\n";
  }
  if (rep.contains("special_masses")) {
    const json& sm = rep["special_masses"];
    os << "modified mass at lambda = 0, +1, -1: " << format_double(sm["lambda_0"].get<double>()) << ", "
       << format_double(sm["lambda_plus_1"].get<double>()) << ", " << format_double(sm["lambda_minus_1"].get<double>())
       << "\n";
  }
  return os.str();
}

inline CommandResult cmd_check(const ModelConfig& cfg) {
  return detail::guarded([&] {
    CommandResult r;
    r.report = check_report(cfg);
    r.out = check_text(r.report);
    return r;
  });
}

// ---------------------------------------------------------------------------
// sweep

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "lambda,epsilon,nu,varkappa,mass,defined\n";
  for (const auto& row : rows) {
    out += format_double(row.lambda);
    if (row.defined) {
      out += "," + format_double(row.epsilon) + "," + format_double(row.nu) + "," + format_double(row.varkappa) +
             "," + format_double(row.mass) + ",1\n";
    } else {
      out += ",,,,,0\n";
    }
  }
  return out;
}

inline std::vector<double> sweep_grid(const ModelConfig& cfg) {
  auto grid = linspace(cfg.lambda_grid.start, cfg.lambda_grid.stop, cfg.lambda_grid.count);
  std::sort(grid.begin(), grid.end());
  return grid;
}

inline CommandResult cmd_sweep(const ModelConfig& cfg, const std::filesystem::path& output, unsigned threads = 0) {
  return detail::guarded([&] {
    const auto rows = mass_sweep(cfg.params(), sweep_grid(cfg), cfg.scales, threads);
    const std::string csv = sweep_csv(rows);
    write_file_atomic(output, csv);
    CommandResult r;
    std::size_t defined = 0;
    for (const auto& row : rows) defined += row.defined ? 1 : 0;
    r.out = "wrote " + std::to_string(rows.size()) + " rows (" + std::to_string(defined) + " defined) to " +
            output.string() + "\n";
    return r;
  });
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::optional<long> fock_dim;
  std::optional<long> nmax;
};

namespace detail {

class CheckList {
 public:
  void add(const std::string& name, double value, double tolerance, bool advisory = false) {
    const bool ok = std::isfinite(value) && value <= tolerance;
    json c = {{"name", name}, {"value", value}, {"tolerance", tolerance}, {"passed", ok}};
    if (advisory) c["advisory"] = true;
    if (!ok && !advisory) all_passed_ = false;
    checks_.push_back(std::move(c));
  }

  void fail(const std::string& name, const std::string& error) {
    checks_.push_back({{"name", name}, {"passed", false}, {"error", error}});
    all_passed_ = false;
  }

  void skip(const std::string& name, const std::string& reason) {
    checks_.push_back({{"name", name}, {"skipped", true}, {"reason", reason}});
  }

  template <typename Fn>
  void attempt(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      fail(name, e.what());
    }
  }

  bool all_passed() const noexcept { return all_passed_; }
  const json& checks() const noexcept { return checks_; }

 private:
  json checks_ = json::array();
  bool all_passed_ = true;
};

}  // namespace detail

inline json verify_report(const ModelConfig& cfg, const VerifyOptions& opts = {}) {
  const BogoliubovParams p = cfg.params();
  const long n_dim = opts.fock_dim.value_or(cfg.fock_dim);
  const long nmax = opts.nmax.value_or(cfg.nmax);
  if (n_dim < 4) throw ConfigInvalid("--fock-dim must be at least 4");
  if (nmax < 0 || nmax > 60) throw ConfigInvalid("--nmax must lie in [0, 60]");
  const long window = std::min(cfg.window, n_dim - 1);
  const long levels = std::min(cfg.levels, n_dim);
  const auto& tol = cfg.tolerances;
  const Eigen::Index n = n_dim;

  json rep;
  rep["params"] = params_to_json(p);
  rep["fock_dim"] = n_dim;
  rep["nmax"] = nmax;
  rep["lambda"] = cfg.lambda;
  rep["classification"] = to_string(classify(p));
  detail::CheckList checks;

  checks.attempt("commutator_dc", [&] {
    const auto [d, c] = pseudo_boson_pair(p);
    const MatrixXc comm = commutator(operator_matrix(d, n).entries, operator_matrix(c, n).entries);
    checks.add("commutator_dc", block_residual(comm, MatrixXc::Identity(n, n), n - 1), tol.commutator);
  });
  checks.attempt("hamiltonian_normal_order", [&] {
    const MatrixXc h = hamiltonian_matrix(p, n, cfg.scales).entries;
    const MatrixXc s = swanson_matrix(swanson_coefficients(p), n, cfg.scales).entries;
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    checks.add("hamiltonian_normal_order", block_residual(h, s, n - 1) / scale, tol.commutator);
  });

  // Dyson map and tilde quadruple: solved for real quadruples, identity otherwise.
  std::optional<BogoliubovParams> tilde;
  std::optional<AdjointMapParams> map;
  if (p.is_real()) {
    checks.attempt("constraint_residual", [&] {
      const double eps = cfg.epsilon_override ? *cfg.epsilon_override : epsilon_of_lambda(p, cfg.lambda);
      const double nu = 0.5 * cfg.lambda * eps;
      map = AdjointMapParams{eps, nu};
      rep["epsilon"] = eps;
      rep["nu"] = nu;
      rep["epsilon_source"] = cfg.epsilon_override ? "override" : "solver";
      checks.add("constraint_residual", constraint_residual(p, eps, nu), tol.constraint);
      tilde = compose(p, adjoint_map_quadruple(*map), 1e-10);
      const auto fit = fit_varkappa(*tilde);
      rep["varkappa"] = fit.varkappa.real();
      rep["tilde"] = params_to_json(*tilde);
      const cplx mass = cfg.scales.mass / ((tilde->alpha() + tilde->gamma()) * (tilde->beta() + tilde->delta()));
      rep["modified_mass"] = mass.real();
      checks.add("xi_residual", fit.residual, tol.xi);
    });
  } else {
    tilde = p;
    rep["tilde"] = params_to_json(p);
    checks.skip("constraint_residual", "complex quadruple: no Dyson map is solved");
  }

  if (tilde && map) {
    checks.attempt("h_hermiticity", [&] {
      const MatrixXc h = hamiltonian_matrix(*tilde, n, cfg.scales).entries;
      const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
      checks.add("h_hermiticity", hermiticity_residual(h, n) / scale, tol.hermiticity);
      const auto ev = lowest_hermitian_eigenvalues(h, levels);
      double gap = 0.0;
      const double unit = cfg.scales.hbar * cfg.scales.omega;
      for (std::size_t i = 0; i < ev.size(); ++i) gap = std::max(gap, std::abs(ev[i] - unit * (double(i) + 0.5)));
      checks.add("h_spectrum", gap, tol.spectrum);
      const auto raw = lowest_eigenvalues(hamiltonian_matrix(p, n, cfg.scales).entries, levels);
      double raw_gap = 0.0;
      for (std::size_t i = 0; i < raw.size(); ++i) raw_gap = std::max(raw_gap, std::abs(raw[i] - unit * (double(i) + 0.5)));
      checks.add("H_spectrum", raw_gap, tol.spectrum, /*advisory=*/true);
    });
    checks.attempt("adjoint_action", [&] {
      const auto sim = verify_adjoint_action(*map, n, window);
      checks.add("adjoint_action", sim.max_residual(), tol.adjoint_action);
    });
  }

  if (tilde) {
    QuadratureScheme scheme;
    scheme.tolerance = cfg.quadrature_tolerance;
    checks.attempt("gram", [&] {
      const auto g = gram(*tilde, static_cast<std::size_t>(nmax), scheme);
      rep["basis_regime"] = g.regime == BasisRegime::Basis ? "basis" : "quasi-basis";
      checks.add("gram", g.max_deviation(), tol.gram);
    });
    checks.attempt("number_operator", [&] {
      const auto grid = linspace(-10.0, 10.0, 801);
      const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(nmax), 15);
      double worst = 0.0;
      for (std::size_t k = 0; k <= top; ++k) worst = std::max(worst, number_op_residual(*tilde, k, grid));
      checks.add("number_operator", worst, tol.number_operator);
      const auto lr = ladder_residuals(*tilde, 0, grid);
      checks.add("vacuum", std::max(lr.e_on_phi0, lr.fdag_on_psi0), tol.number_operator);
    });
  }

  rep["checks"] = checks.checks();
  rep["passed"] = checks.all_passed();
  return rep;
}

inline CommandResult cmd_verify(const ModelConfig& cfg, const VerifyOptions& opts = {},
                                const std::optional<std::filesystem::path>& json_out = std::nullopt) {
  return detail::guarded([&] {
    CommandResult r;
    r.report = verify_report(cfg, opts);
    const std::string text = dump_json(r.report);
    if (json_out) {
      write_file_atomic(*json_out, text);
      r.out = std::string(r.report["passed"].get<bool>() ? "all checks passed" : "some checks failed") +
              "; report written to " + json_out->string() + "\n";
    } else {
      r.out = text;
    }
    r.exit_code = r.report["passed"].get<bool>() ? kExitOk : kExitCheckFailed;
    return r;
  });
}

}  // namespace pbl
