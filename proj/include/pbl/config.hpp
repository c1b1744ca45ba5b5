#pragma once

// Model configuration files and deterministic text output.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"
#include "pbl/bogoliubov.hpp"
#include "pbl/constraint_solver.hpp"
#include "pbl/error.hpp"

namespace pbl {

using json = nlohmann::json;

struct LambdaGrid {
  double start = -5.0;
  double stop = 5.0;
  std::size_t count = 201;
};

/// Tolerances the verify command judges residuals against.
struct VerifyTolerances {
  double constraint = 1e-10;
  double xi = 1e-10;
  double commutator = 1e-10;
  double adjoint_action = 1e-6;
  double hermiticity = 1e-10;
  double spectrum = 1e-6;
  double gram = 1e-8;
  double number_operator = 1e-8;
};

struct ModelConfig {
  cplx alpha, beta, gamma, delta;
  PhysicalScales scales;
  LambdaGrid lambda_grid;
  long fock_dim = 60;
  double quadrature_tolerance = 1e-10;
  double lambda = 0.0;
  long window = 8;
  long levels = 6;
  long nmax = 12;
  std::optional<double> epsilon_override;
  VerifyTolerances tolerances;

  BogoliubovParams params() const { return make_params(alpha, beta, gamma, delta); }
};

namespace detail {

inline cplx parse_complex(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigInvalid(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigInvalid(std::string("field '") + key + "' must be a [re, im] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

template <typename T>
T parse_number(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigInvalid(std::string("field '") + key + "' must be a number");
  return v.get<T>();
}

}  // namespace detail

/// Parses and validates. Determinant failures surface as DeterminantViolation,
/// everything else as ConfigInvalid.
inline ModelConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigInvalid("configuration must be a JSON object");
  ModelConfig c;
  try {
    c.alpha = detail::parse_complex(j, "alpha");
    c.beta = detail::parse_complex(j, "beta");
    c.gamma = detail::parse_complex(j, "gamma");
    c.delta = detail::parse_complex(j, "delta");
    c.scales.mass = detail::parse_number(j, "m", 1.0);
    c.scales.omega = detail::parse_number(j, "omega", 1.0);
    c.scales.hbar = detail::parse_number(j, "hbar", 1.0);
    if (j.contains("lambda_grid")) {
      const json& g = j.at("lambda_grid");
      if (!g.is_object()) throw ConfigInvalid("'lambda_grid' must be an object {start, stop, count}");
      c.lambda_grid.start = detail::parse_number(g, "start", c.lambda_grid.start);
      c.lambda_grid.stop = detail::parse_number(g, "stop", c.lambda_grid.stop);
      const long count = detail::parse_number<long>(g, "count", static_cast<long>(c.lambda_grid.count));
      if (count < 2) throw ConfigInvalid("lambda_grid.count must be at least 2");
      c.lambda_grid.count = static_cast<std::size_t>(count);
    }
    c.fock_dim = detail::parse_number(j, "fock_dim", c.fock_dim);
    c.quadrature_tolerance = detail::parse_number(j, "quadrature_tolerance", c.quadrature_tolerance);
    c.lambda = detail::parse_number(j, "lambda", c.lambda);
    c.window = detail::parse_number(j, "window", c.window);
    c.levels = detail::parse_number(j, "levels", c.levels);
    c.nmax = detail::parse_number(j, "nmax", c.nmax);
    if (j.contains("epsilon_override")) c.epsilon_override = detail::parse_number(j, "epsilon_override", 0.0);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      auto& tol = c.tolerances;
      tol.constraint = detail::parse_number(t, "constraint", tol.constraint);
      tol.xi = detail::parse_number(t, "xi", tol.xi);
      tol.commutator = detail::parse_number(t, "commutator", tol.commutator);
      tol.adjoint_action = detail::parse_number(t, "adjoint_action", tol.adjoint_action);
      tol.hermiticity = detail::parse_number(t, "hermiticity", tol.hermiticity);
      tol.spectrum = detail::parse_number(t, "spectrum", tol.spectrum);
      tol.gram = detail::parse_number(t, "gram", tol.gram);
      tol.number_operator = detail::parse_number(t, "number_operator", tol.number_operator);
    }
  } catch (const json::exception& e) {
    throw ConfigInvalid(e.what());
  }
  if (!std::isfinite(c.lambda_grid.start) || !std::isfinite(c.lambda_grid.stop)) {
    throw ConfigInvalid("lambda_grid bounds must be finite");
  }
  if (c.fock_dim < 4) throw ConfigInvalid("fock_dim must be at least 4");
  if (c.window < 1 || c.window >= c.fock_dim) throw ConfigInvalid("window must satisfy 1 <= window < fock_dim");
  if (c.levels < 1 || c.levels > c.fock_dim) throw ConfigInvalid("levels must satisfy 1 <= levels <= fock_dim");
  if (c.nmax < 0 || c.nmax > 60) throw ConfigInvalid("nmax must lie in [0, 60]");
  if (!(c.quadrature_tolerance > 0.0)) throw ConfigInvalid("quadrature_tolerance must be positive");
  try {
    c.scales.validate();
  } catch (const ConstraintViolation& e) {
    throw ConfigInvalid(e.what());
  }
  (void)c.params();  // throws DeterminantViolation
  return c;
}

inline ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open configuration '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigInvalid("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Deterministic formatting

/// %.17g without locale dependence.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

inline void write_json_string(std::ostream& os, const std::string& s) { os << json(s).dump(); }

inline void write_json(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write_json_string(os, it.key());
        os << ": ";
        write_json(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      // JSON has no NaN or infinity
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        os << format_double(v);
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// JSON text with every float printed to 17 significant digits; object keys
/// come out in nlohmann's sorted order, so output is byte-stable.
inline std::string dump_json(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::write_json(os, j, indent, 0);
  os << "\n";
  return os.str();
}

/// Writes to a sibling temporary file and renames it into place, so a failed
/// write never leaves a partial file at `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoFailure("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoFailure("cannot move output into '" + path.string() + "'");
  }
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json params_to_json(const BogoliubovParams& p) {
  return {{"alpha", complex_to_json(p.alpha())},
          {"beta", complex_to_json(p.beta())},
          {"gamma", complex_to_json(p.gamma())},
          {"delta", complex_to_json(p.delta())}};
}

}  // namespace pbl
