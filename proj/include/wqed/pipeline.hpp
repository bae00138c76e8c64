#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wqed/spectral.hpp"

namespace wqed {

// Parameters of one CLI run. JSON keys are the flag names without dashes
// ("max-dim", "fail-threshold", ...).
struct RunConfig {
  std::vector<std::size_t> atoms{40};
  double phase = 1.0;
  std::string sector = "two";  // one | two
  std::vector<double> strengths{0.0};
  std::size_t realizations = 1;
  std::uint64_t seed = 0;
  std::size_t bins = 60;
  std::size_t truncate = 4;
  std::string out = "out";
  std::size_t max_dim = kDefaultMaxDim;
  std::size_t workers = 1;
  std::string select = "most-distant";  // most-distant | brightest | index
  std::size_t index = 0;
  std::string distribution = "uniform";
  double fail_threshold = 0.1;
  std::vector<std::string> tasks{"decay", "wavefunctions"};  // scaling: decay | wavefunctions | pair

  std::size_t single_atoms() const;  // throws unless exactly one N is given
};

// Overlays `j` on `base`; unknown keys and wrong types throw Error(Config).
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
// Fully resolved config without the output directory.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

enum class Command { Spectrum, Wavefunction, Scaling, Disorder };

Command parse_command(std::string_view name);
std::string_view to_string(Command c);

struct RunReport {
  std::vector<std::string> files;  // written, relative to the run directory
  std::size_t attempted = 0;       // ensemble realizations
  std::size_t failed = 0;
  std::vector<std::string> notes;
  int exit_code = 0;  // 0 ok, 3 too many failed realizations
};

// Runs `command` and writes config.json, the command's outputs and
// manifest.json into cfg.out.
RunReport run(Command command, const RunConfig& cfg);

struct ReplayReport {
  RunReport run;
  std::vector<std::string> mismatched;  // outputs whose digest differs from the manifest
};

// Re-runs the command recorded in `manifest` into `out_dir` and compares digests.
ReplayReport replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir);

}  // namespace wqed
