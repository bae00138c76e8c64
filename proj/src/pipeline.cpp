#include "wqed/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "wqed/analytics.hpp"
#include "wqed/ensemble.hpp"
#include "wqed/error.hpp"
#include "wqed/io.hpp"
#include "wqed/solver.hpp"

namespace wqed {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::size_t RunConfig::single_atoms() const {
  if (atoms.size() != 1)
    throw Error(ErrorCode::Config, fmt::format("this command takes a single --atoms value, got {}", atoms.size()));
  return atoms.front();
}

namespace {

[[noreturn]] void bad_value(const std::string& key, std::string_view want) {
  throw Error(ErrorCode::Config, fmt::format("config key '{}' must be {}", key, want));
}

std::uint64_t as_unsigned(const json& v, const std::string& key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    bad_value(key, "a non-negative integer");
  return v.get<std::uint64_t>();
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) bad_value(key, "a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad_value(key, "a string");
  return v.get<std::string>();
}

template <class F>
auto as_list(const json& v, const std::string& key, F&& item) {
  using T = decltype(item(v, key));
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(item(x, key));
  } else {
    out.push_back(item(v, key));
  }
  return out;
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "run config must be a JSON object");
  RunConfig c = std::move(base);
  for (const auto& [key, v] : j.items()) {
    if (key == "atoms") {
      const auto list = as_list(v, key, as_unsigned);
      c.atoms.assign(list.begin(), list.end());
    } else if (key == "phase") {
      c.phase = as_double(v, key);
    } else if (key == "sector") {
      c.sector = as_string(v, key);
    } else if (key == "strengths") {
      c.strengths = as_list(v, key, as_double);
    } else if (key == "realizations") {
      c.realizations = as_unsigned(v, key);
    } else if (key == "seed") {
      c.seed = as_unsigned(v, key);
    } else if (key == "bins") {
      c.bins = as_unsigned(v, key);
    } else if (key == "truncate") {
      c.truncate = as_unsigned(v, key);
    } else if (key == "out") {
      c.out = as_string(v, key);
    } else if (key == "max-dim") {
      c.max_dim = as_unsigned(v, key);
    } else if (key == "workers") {
      c.workers = as_unsigned(v, key);
    } else if (key == "select") {
      c.select = as_string(v, key);
    } else if (key == "index") {
      c.index = as_unsigned(v, key);
    } else if (key == "distribution") {
      c.distribution = as_string(v, key);
    } else if (key == "fail-threshold") {
      c.fail_threshold = as_double(v, key);
    } else if (key == "tasks") {
      c.tasks = v.is_array() && v.empty() ? std::vector<std::string>{} : as_list(v, key, as_string);
    } else {
      throw Error(ErrorCode::Config, fmt::format("unknown config key '{}'", key));
    }
  }
  if (c.sector != "one" && c.sector != "two") bad_value("sector", "'one' or 'two'");
  if (c.select != "most-distant" && c.select != "brightest" && c.select != "index")
    bad_value("select", "'most-distant', 'brightest' or 'index'");
  if (c.atoms.empty()) bad_value("atoms", "a non-empty list");
  if (c.strengths.empty()) bad_value("strengths", "a non-empty list");
  if (c.workers < 1) bad_value("workers", ">= 1");
  if (c.bins < 2) bad_value("bins", ">= 2");
  if (!(c.fail_threshold >= 0.0 && c.fail_threshold <= 1.0)) bad_value("fail-threshold", "in [0, 1]");
  for (const auto& t : c.tasks)
    if (t != "decay" && t != "wavefunctions" && t != "pair") bad_value("tasks", "a list of decay|wavefunctions|pair");
  parse_distribution(c.distribution);
  return c;
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["atoms"] = c.atoms;
  j["phase"] = c.phase;
  j["sector"] = c.sector;
  j["strengths"] = c.strengths;
  j["realizations"] = c.realizations;
  j["seed"] = c.seed;
  j["bins"] = c.bins;
  j["truncate"] = c.truncate;
  j["max-dim"] = c.max_dim;
  j["workers"] = c.workers;
  j["select"] = c.select;
  j["index"] = c.index;
  j["distribution"] = c.distribution;
  j["fail-threshold"] = c.fail_threshold;
  j["tasks"] = c.tasks;
  return j;
}

Command parse_command(std::string_view name) {
  if (name == "spectrum") return Command::Spectrum;
  if (name == "wavefunction") return Command::Wavefunction;
  if (name == "scaling") return Command::Scaling;
  if (name == "disorder") return Command::Disorder;
  throw Error(ErrorCode::Config, fmt::format("unknown command '{}'", name));
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Wavefunction: return "wavefunction";
    case Command::Scaling: return "scaling";
    case Command::Disorder: return "disorder";
  }
  return "?";
}

namespace {

class Writer {
 public:
  Writer(fs::path dir, RunReport& report) : dir_(std::move(dir)), report_(report) {}

  void operator()(const std::string& name, std::string_view contents) {
    io::write_text(dir_ / name, contents);
    report_.files.push_back(name);
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  RunReport& report_;
};

std::string abs2_matrix_csv(const ComplexMatrix& m) {
  std::string s;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) s += ',';
      s += io::fmt_double(std::norm(m(r, c)));
    }
    s += '\n';
  }
  return s;
}

std::string single_csv(const SingleSpectrum& spec) {
  std::string s = "index,re_eps,im_eps,parity,parity_score\n";
  for (std::size_t k = 0; k < spec.eig.size(); ++k)
    s += fmt::format("{},{},{},{},{}\n", k, io::fmt_double(spec.eig.values[k].real()),
                     io::fmt_double(spec.eig.values[k].imag()), to_string(spec.parity[k].label),
                     io::fmt_double(spec.parity[k].score));
  return s;
}

std::string fourier_csv(const ComplexMatrix& map) {
  const auto grid = fourier_grid(map.rows());
  double total = 0.0;
  for (const auto& z : map.data()) total += std::norm(z);
  std::string s = "k";
  for (double k : grid) s += "," + io::fmt_double(k);
  s += '\n';
  for (std::size_t r = 0; r < map.rows(); ++r) {
    s += io::fmt_double(grid[r]);
    for (std::size_t c = 0; c < map.cols(); ++c) s += "," + io::fmt_double(std::norm(map(r, c)) / total);
    s += '\n';
  }
  return s;
}

std::string vectors_csv(const OrthogonalSymmetricDecomposition& dec, std::size_t k) {
  std::string s = "site";
  for (std::size_t t = 1; t <= k; ++t) s += fmt::format(",re_v{0},im_v{0}", t);
  s += '\n';
  for (std::size_t n = 0; n < dec.vectors.rows(); ++n) {
    s += fmt::format("{}", n + 1);
    for (std::size_t t = 0; t < k; ++t)
      s += "," + io::fmt_double(dec.vectors(n, t).real()) + "," + io::fmt_double(dec.vectors(n, t).imag());
    s += '\n';
  }
  return s;
}

ordered_json energy_json(cplx e) { return ordered_json{{"re", e.real()}, {"im", e.imag()}}; }

void cmd_spectrum(const RunConfig& c, Writer& write, RunReport& report) {
  const std::size_t n = c.single_atoms();
  const ArrayConfig cfg = ArrayConfig::clean(n, c.phase);
  if (c.sector == "one") {
    write("single.csv", single_csv(solve_single(cfg, c.max_dim)));
    return;
  }
  const PairSpectrum spec = solve_pair(cfg, c.max_dim);
  const SingleSpectrum single = solve_single(cfg, c.max_dim);
  const std::size_t width = default_edge_width(n);
  std::vector<SpectrumRecord> records;
  std::vector<double> rhos;
  records.reserve(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    records.push_back(summarize(spec.state(k), width));
    rhos.push_back(records.back().rho);
  }
  write("spectrum.csv", spectrum_csv(records));
  write("single.csv", single_csv(single));
  const Histogram h = distance_histogram(rhos, n, c.bins);
  write("histogram.csv", histogram_csv(h));
  const auto distant = std::count_if(records.begin(), records.end(),
                                     [](const auto& r) { return r.label == StateLabel::DistantBound; });
  report.notes.push_back(fmt::format("{} states, {} distant-bound, histogram mode at rho = {:.3f}, "
                                     "max relative residual {:.2e}",
                                     records.size(), distant, h.bin_center(h.mode_bin()),
                                     spec.eig.max_relative_residual()));
}

std::size_t select_pair_state(const RunConfig& c, const PairSpectrum& spec) {
  if (c.select == "brightest") return 0;
  if (c.select == "index") {
    if (c.index >= spec.size())
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("state index {} out of range (spectrum has {} states)", c.index, spec.size()));
    return c.index;
  }
  std::size_t best = 0;
  double best_rho = -1.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double rho = photon_distance(spec.state(k).amplitudes);
    if (rho > best_rho) {
      best_rho = rho;
      best = k;
    }
  }
  return best;
}

void cmd_wavefunction(const RunConfig& c, Writer& write, RunReport& report) {
  const std::size_t n = c.single_atoms();
  const ArrayConfig cfg = ArrayConfig::clean(n, c.phase);
  ordered_json meta;
  meta["n_atoms"] = n;
  meta["phase"] = c.phase;
  meta["sector"] = c.sector;
  meta["select"] = c.select;

  if (c.sector == "one") {
    if (c.select == "most-distant")
      throw Error(ErrorCode::Config, "select 'most-distant' needs sector 'two'");
    const SingleSpectrum spec = solve_single(cfg, c.max_dim);
    std::size_t k = spec.brightest();
    if (c.select == "index") {
      if (c.index >= spec.eig.size())
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("state index {} out of range (spectrum has {} states)", c.index, spec.eig.size()));
      k = c.index;
    }
    const auto psi = spec.eig.vectors.column(k);
    write("wavefunction.csv", wavefunction_csv(psi));
    meta["index"] = k;
    meta["energy"] = energy_json(spec.eig.values[k]);
    meta["parity"] = to_string(spec.parity[k].label);
    meta["parity_score"] = spec.parity[k].score;
    write("wavefunction.json", meta.dump(2) + "\n");
    return;
  }

  const PairSpectrum spec = solve_pair(cfg, c.max_dim);
  const std::size_t k = select_pair_state(c, spec);
  const TwoExcitationState state = spec.state(k);
  const std::size_t width = default_edge_width(n);
  const SpectrumRecord rec = summarize(state, width);
  write("psi2.csv", abs2_matrix_csv(state.amplitudes));
  meta["index"] = k;
  meta["energy"] = energy_json(rec.energy);
  meta["rho"] = rec.rho;
  meta["edge_mass"] = rec.edge_mass;
  meta["edge_width"] = width;
  meta["parity"] = to_string(rec.parity.label);
  meta["parity_score"] = rec.parity.score;
  meta["label"] = to_string(rec.label);
  write("wavefunction.json", meta.dump(2) + "\n");
  report.notes.push_back(fmt::format("state {}: eps = {:.6f}{:+.6f}i, rho = {:.3f}, edge mass {:.3f}, {}", k,
                                     rec.energy.real(), rec.energy.imag(), rec.rho, rec.edge_mass,
                                     to_string(rec.label)));
  if (c.select != "most-distant") return;

  const OrthogonalSymmetricDecomposition dec = decompose_symmetric(state.amplitudes);
  const std::size_t kt = c.truncate;
  if (kt < 1 || kt > dec.size())
    throw Error(ErrorCode::InvalidArgument, fmt::format("truncate must be in [1, {}], got {}", dec.size(), kt));
  const ComplexMatrix map = fourier2d(state.amplitudes);
  ordered_json svd;
  svd["n_atoms"] = n;
  svd["index"] = k;
  svd["truncate"] = kt;
  svd["truncation_error"] = truncation_error(dec, state.amplitudes, kt);
  svd["reconstruction_error"] = truncation_error(dec, state.amplitudes, dec.size());
  svd["orthogonality_defect"] = unconjugated_orthogonality_defect(dec);
  svd["near_defective"] = dec.near_defective;
  svd["fourier_weight_near_phase"] = fourier_weight_near(map, c.phase, 0.3);
  ordered_json terms = ordered_json::array();
  for (std::size_t t = 0; t < dec.size(); ++t)
    terms.push_back({{"re_lambda", dec.lambdas[t].real()},
                     {"im_lambda", dec.lambdas[t].imag()},
                     {"abs_lambda", std::abs(dec.lambdas[t])},
                     {"parity", to_string(dec.parity[t].label)},
                     {"parity_score", dec.parity[t].score},
                     {"resolved", static_cast<bool>(dec.resolved[t])}});
  svd["terms"] = std::move(terms);
  write("svd.json", svd.dump(2) + "\n");
  write("truncated.csv", abs2_matrix_csv(truncate_decomposition(dec, kt)));
  write("svd_vectors.csv", vectors_csv(dec, kt));
  write("fourier.csv", fourier_csv(map));
}

void cmd_scaling(const RunConfig& c, Writer& write, RunReport&) {
  std::vector<SizeTask> tasks;
  for (const auto& t : c.tasks)
    tasks.push_back(t == "decay" ? SizeTask::Decay : t == "pair" ? SizeTask::PairSpectrum : SizeTask::Wavefunctions);
  const SizeSweepResult res = size_sweep(c.atoms, c.phase, tasks, c.max_dim);
  auto wants = [&](SizeTask t) { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); };
  if (wants(SizeTask::Decay)) {
    write("scaling.csv", scaling_csv(res.rows));
    write("edge_check.csv", edge_check_csv(res.rows));
  }
  if (wants(SizeTask::Wavefunctions))
    for (const auto& row : res.rows) write(fmt::format("wavefunction_N{}.csv", row.n_atoms), wavefunction_csv(row.wavefunction));
  for (const auto& p : res.pair) write(fmt::format("pair_spectrum_N{}.csv", p.n_atoms), spectrum_csv(p.records));
}

ordered_json cmd_disorder(const RunConfig& c, Writer& write, RunReport& report) {
  const std::size_t n = c.single_atoms();
  SweepOptions opt;
  opt.workers = c.workers;
  opt.distribution = parse_distribution(c.distribution);
  opt.max_dim = c.max_dim;
  const SweepResult sweep = disorder_sweep(ArrayConfig::clean(n, c.phase), c.strengths, c.realizations, c.seed, opt);
  write("map.csv", sweep_map_csv(sweep));
  write("summary.csv", sweep_summary_csv(sweep));

  report.attempted = sweep.rows.size();
  report.failed = sweep.failures();
  ordered_json ens;
  ens["base_config"] = {{"n_atoms", n}, {"phase", c.phase}};
  ens["strengths"] = c.strengths;
  ens["distribution"] = c.distribution;
  ens["realizations"] = c.realizations;
  ens["master_seed"] = c.seed;
  ens["seed_scheme"] = "splitmix64(master_seed ^ 0x9e3779b97f4a7c15 * (realization + 1))";
  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < c.realizations; ++r) seeds.push_back(realization_seed(c.seed, r));
  ens["realization_seeds"] = seeds;
  ens["attempted"] = report.attempted;
  ens["failed"] = report.failed;
  ordered_json failures = ordered_json::array();
  for (const auto& row : sweep.rows) {
    if (row.ok) continue;
    failures.push_back({{"strength", sweep.strengths[row.strength_index]},
                        {"realization", row.realization},
                        {"seed", row.seed},
                        {"error", row.error}});
    report.notes.push_back(fmt::format("realization {} at strength {} failed: {}", row.realization,
                                       sweep.strengths[row.strength_index], row.error));
  }
  ens["failures"] = std::move(failures);
  for (const auto& s : sweep.summary)
    report.notes.push_back(fmt::format("strength {}: {}/{} ok, top-decile rho {:.3f}, bottom-decile COM IPR {:.4f}",
                                       s.strength, s.succeeded, s.attempted, s.top_decile_rho,
                                       s.bottom_decile_ipr));
  if (report.attempted > 0 &&
      static_cast<double>(report.failed) > c.fail_threshold * static_cast<double>(report.attempted))
    report.exit_code = 3;
  return ens;
}

}  // namespace

RunReport run(Command command, const RunConfig& cfg) {
  RunReport report;
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));
  Writer write(dir, report);

  const ordered_json resolved = config_to_json(cfg);
  write("config.json", resolved.dump(2) + "\n");

  ordered_json ensemble;
  switch (command) {
    case Command::Spectrum: cmd_spectrum(cfg, write, report); break;
    case Command::Wavefunction: cmd_wavefunction(cfg, write, report); break;
    case Command::Scaling: cmd_scaling(cfg, write, report); break;
    case Command::Disorder: ensemble = cmd_disorder(cfg, write, report); break;
  }

  ordered_json manifest;
  manifest["format"] = "wqed-manifest/1";
  manifest["command"] = to_string(command);
  manifest["config"] = resolved;
  if (!ensemble.is_null()) manifest["ensemble"] = std::move(ensemble);
  ordered_json outputs = ordered_json::array();
  for (const auto& e : inventory(dir, report.files)) outputs.push_back({{"file", e.file}, {"sha256", e.sha256}});
  manifest["outputs"] = std::move(outputs);
  write("manifest.json", manifest.dump(2) + "\n");
  return report;
}

ReplayReport replay(const fs::path& manifest_path, const fs::path& out_dir) {
  json manifest;
  try {
    manifest = json::parse(io::read_text(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, fmt::format("cannot parse manifest {}: {}", manifest_path.string(), e.what()));
  }
  if (!manifest.contains("command") || !manifest.contains("config") || !manifest.contains("outputs"))
    throw Error(ErrorCode::Config, "manifest lacks command, config or outputs");
  RunConfig cfg = config_from_json(manifest.at("config"));
  cfg.out = out_dir.string();

  ReplayReport rep;
  rep.run = run(parse_command(manifest.at("command").get<std::string>()), cfg);
  std::map<std::string, std::string> produced;
  for (const auto& f : rep.run.files)
    if (f != "manifest.json") produced[f] = io::sha256_file(out_dir / f);
  for (const auto& o : manifest.at("outputs")) {
    const auto file = o.at("file").get<std::string>();
    const auto it = produced.find(file);
    if (it == produced.end() || it->second != o.at("sha256").get<std::string>()) rep.mismatched.push_back(file);
  }
  if (!rep.mismatched.empty() && rep.run.exit_code == 0) rep.run.exit_code = 4;
  return rep;
}

}  // namespace wqed
