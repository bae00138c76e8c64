#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wqed/wqed.h"

namespace {

struct Flags {
  std::vector<std::size_t> atoms;
  double phase = 0.0;
  std::string sector;
  std::vector<double> strengths;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  std::size_t bins = 0;
  std::size_t truncate = 0;
  std::string out;
  std::string config;
  std::size_t max_dim = 0;
  std::size_t workers = 0;
  std::string select;
  std::size_t index = 0;
  std::string distribution;
  double fail_threshold = 0.0;
  std::vector<std::string> tasks;
};

struct RunCommand {
  std::string name;
  CLI::App* app = nullptr;
  Flags flags;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add_run_flags(RunCommand& c) {
  auto* a = c.app;
  auto& f = c.flags;
  auto opt = [&](const std::string& key, CLI::Option* o) { c.options.emplace_back(key, o); };
  opt("atoms", a->add_option("--atoms", f.atoms, "number of atoms N (comma list for scaling)")->delimiter(','));
  opt("phase", a->add_option("--phase", f.phase, "phase between neighbouring atoms, phi"));
  opt("sector", a->add_option("--sector", f.sector, "excitation sector")->check(CLI::IsMember({"one", "two"})));
  opt("strengths", a->add_option("--strengths", f.strengths, "disorder strengths chi, ascending")->delimiter(','));
  opt("realizations", a->add_option("--realizations", f.realizations, "disorder realizations per strength"));
  opt("seed", a->add_option("--seed", f.seed, "master seed"));
  opt("bins", a->add_option("--bins", f.bins, "distance histogram bins"));
  opt("truncate", a->add_option("--truncate", f.truncate, "terms kept in the truncated decomposition"));
  opt("out", a->add_option("--out", f.out, "output directory"));
  a->add_option("--config", f.config, "JSON config file; flags override its keys")->check(CLI::ExistingFile);
  opt("max-dim", a->add_option("--max-dim", f.max_dim, "largest dense eigensolve dimension"));
  opt("workers", a->add_option("--workers", f.workers, "parallel realizations"));
  opt("select", a->add_option("--select", f.select, "state to dump")
                    ->check(CLI::IsMember({"most-distant", "brightest", "index"})));
  opt("index", a->add_option("--index", f.index, "state index for --select index"));
  opt("distribution", a->add_option("--distribution", f.distribution, "disorder distribution")
                          ->check(CLI::IsMember({"uniform", "gaussian"})));
  opt("fail-threshold", a->add_option("--fail-threshold", f.fail_threshold,
                                      "largest tolerated fraction of failed realizations"));
  opt("tasks", a->add_option("--tasks", f.tasks, "scaling tasks: decay, wavefunctions, pair")->delimiter(','));
}

nlohmann::json resolve(const RunCommand& c) {
  nlohmann::json j = nlohmann::json::object();
  if (!c.flags.config.empty()) {
    std::ifstream in(c.flags.config);
    std::stringstream ss;
    ss << in.rdbuf();
    j = nlohmann::json::parse(ss.str());
    if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");
  }
  const auto& f = c.flags;
  for (const auto& [key, o] : c.options) {
    if (o->count() == 0) continue;
    if (key == "atoms") j[key] = f.atoms;
    else if (key == "phase") j[key] = f.phase;
    else if (key == "sector") j[key] = f.sector;
    else if (key == "strengths") j[key] = f.strengths;
    else if (key == "realizations") j[key] = f.realizations;
    else if (key == "seed") j[key] = f.seed;
    else if (key == "bins") j[key] = f.bins;
    else if (key == "truncate") j[key] = f.truncate;
    else if (key == "out") j[key] = f.out;
    else if (key == "max-dim") j[key] = f.max_dim;
    else if (key == "workers") j[key] = f.workers;
    else if (key == "select") j[key] = f.select;
    else if (key == "index") j[key] = f.index;
    else if (key == "distribution") j[key] = f.distribution;
    else if (key == "fail-threshold") j[key] = f.fail_threshold;
    else if (key == "tasks") j[key] = f.tasks;
  }
  return j;
}

void print_report() {
  const auto report = nlohmann::json::parse(wqed_last_report(), nullptr, false);
  if (report.is_discarded() || !report.is_object()) return;
  for (const auto& note : report["notes"]) std::cout << note.get<std::string>() << '\n';
  for (const auto& m : report["mismatched"]) std::cout << "digest mismatch: " << m.get<std::string>() << '\n';
  std::cout << "wrote " << report["files"].size() << " files\n";
}

int exit_for(wqed_status st, int exit_code) {
  if (st == WQED_OK) return exit_code;
  std::cerr << "wqed: " << wqed_status_string(st) << ": " << wqed_last_error() << '\n';
  if (st == WQED_ERR_PARTIAL_FAILURE) return exit_code != 0 ? exit_code : 3;
  if (st == WQED_ERR_CONFIG || st == WQED_ERR_INVALID_ARGUMENT) return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalization of atom arrays coupled to a waveguide"};
  app.set_version_flag("--version", std::string(wqed_version()));
  app.require_subcommand(1);

  std::vector<RunCommand> commands;
  commands.reserve(4);
  const std::pair<const char*, const char*> specs[] = {
      {"spectrum", "single- or two-excitation spectrum with distance histogram"},
      {"wavefunction", "one eigenstate; decomposition and Fourier map for the most distant state"},
      {"scaling", "brightest-state decay and edge/centre ratio against N"},
      {"disorder", "seeded disorder ensemble of two-excitation spectra"},
  };
  for (const auto& [name, help] : specs) {
    commands.push_back({name, app.add_subcommand(name, help), {}, {}});
    add_run_flags(commands.back());
  }

  std::string manifest, replay_out;
  auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output digests");
  replay->add_option("--manifest", manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "output directory for the replay")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  int exit_code = 0;
  if (replay->parsed()) {
    const wqed_status st = wqed_replay(manifest.c_str(), replay_out.c_str(), &exit_code);
    print_report();
    return exit_for(st, exit_code);
  }
  for (const auto& c : commands) {
    if (!c.app->parsed()) continue;
    std::string config;
    try {
      config = resolve(c).dump();
    } catch (const std::exception& e) {
      std::cerr << "wqed: configuration error: " << e.what() << '\n';
      return 2;
    }
    const wqed_status st = wqed_run(c.name.c_str(), config.c_str(), &exit_code);
    print_report();
    return exit_for(st, exit_code);
  }
  return 0;
}
