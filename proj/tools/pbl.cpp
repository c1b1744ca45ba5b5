// pbl: command-line front end for the pseudo-boson library.
//
//   pbl check  -c config.json
//   pbl sweep  -c config.json -o masses.csv
//   pbl verify -c config.json [--fock-dim N] [--nmax K] [--json out.json]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pbl/commands.hpp"

namespace {

unsigned threads_from_env() {
  const char* raw = std::getenv("PBL_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    const long v = std::stol(raw);
    return v > 0 ? static_cast<unsigned>(v) : 0u;
  } catch (const std::exception&) {
    return 0;
  }
}

int emit(const pbl::CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly Bogoliubov-transformed pseudo-bosons: constraint solving and numerical verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::optional<long> fock_dim;
  std::optional<long> nmax;
  std::optional<std::string> json_path;

  auto* check = app.add_subcommand("check", "classify a model and print its lambda window");
  check->add_option("-c,--config", config_path, "model configuration (JSON)")->required();

  auto* sweep = app.add_subcommand("sweep", "tabulate the modified mass over the lambda grid");
  sweep->add_option("-c,--config", config_path, "model configuration (JSON)")->required();
  sweep->add_option("-o,--output", output_path, "CSV output path")->required();

  auto* verify = app.add_subcommand("verify", "run the Fock-space and position-space verification suites");
  verify->add_option("-c,--config", config_path, "model configuration (JSON)")->required();
  verify->add_option("--fock-dim", fock_dim, "Fock truncation N");
  verify->add_option("--nmax", nmax, "highest eigenfunction index");
  verify->add_option("--json", json_path, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : pbl::kExitInvalid;
  }

  pbl::ModelConfig cfg;
  try {
    cfg = pbl::load_config(config_path);
  } catch (const pbl::Error& e) {
    std::cerr << e.what() << "\n";
    return pbl::kExitInvalid;
  }

  if (*check) return emit(pbl::cmd_check(cfg));
  if (*sweep) return emit(pbl::cmd_sweep(cfg, output_path, threads_from_env()));
  std::optional<std::filesystem::path> out;
  if (json_path) out = *json_path;
  return emit(pbl::cmd_verify(cfg, {fock_dim, nmax}, out));
}
