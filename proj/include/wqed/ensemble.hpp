#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wqed/analytics.hpp"
#include "wqed/lattice.hpp"
#include "wqed/observables.hpp"
#include "wqed/spectral.hpp"

namespace wqed {

enum class DisorderDistribution { Uniform, Gaussian };

std::string_view to_string(DisorderDistribution d);
DisorderDistribution parse_distribution(std::string_view name);

// Counter-based seed splitting (splitmix64 of master ^ counter). Realization r
// uses the same seed at every strength, so a row of the sweep map follows one
// disorder pattern scaled by the strength.
std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t realization);

// n independent samples with zero mean and variance strength^2. Uniform draws
// lie in [-sqrt(3) strength, sqrt(3) strength].
std::vector<double> draw_disorder(double strength, std::size_t n, std::uint64_t seed,
                                  DisorderDistribution dist = DisorderDistribution::Uniform);

struct RealizationResult {
  std::size_t strength_index = 0;
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<double> sorted_rho;  // ascending
  double top_decile_rho = 0.0;
  double bottom_decile_rho = 0.0;
  double bottom_decile_ipr = 0.0;  // centre-of-mass IPR of the smallest-rho states
};

struct StrengthSummary {
  double strength = 0.0;
  std::size_t attempted = 0;
  std::size_t succeeded = 0;
  double top_decile_rho = 0.0;
  double bottom_decile_rho = 0.0;
  double bottom_decile_ipr = 0.0;
};

struct SweepResult {
  std::vector<double> strengths;
  std::vector<RealizationResult> rows;  // strength-major, then realization
  std::vector<StrengthSummary> summary;

  std::size_t failures() const;
};

struct SweepOptions {
  std::size_t workers = 1;
  DisorderDistribution distribution = DisorderDistribution::Uniform;
  std::size_t max_dim = kDefaultMaxDim;
};

// Number of states in a decile of a D-state spectrum (at least one).
std::size_t decile_count(std::size_t dim);

// Runs the two-excitation pipeline for every (strength, realization). Solver
// failures are recorded on the row, never dropped.
SweepResult disorder_sweep(const ArrayConfig& base, std::span<const double> strengths,
                           std::size_t realizations, std::uint64_t master_seed,
                           const SweepOptions& options = {});

std::string sweep_map_csv(const SweepResult& sweep);
std::string sweep_summary_csv(const SweepResult& sweep);

enum class SizeTask { Decay, Wavefunctions, PairSpectrum };

struct PairSizeResult {
  std::size_t n_atoms = 0;
  std::vector<SpectrumRecord> records;
};

struct SizeSweepResult {
  std::vector<ScalingRow> rows;  // filled for Decay or Wavefunctions
  std::vector<PairSizeResult> pair;
};

SizeSweepResult size_sweep(std::span<const std::size_t> sizes, double phase,
                           std::span<const SizeTask> tasks, std::size_t max_dim = kDefaultMaxDim);

// Single-particle wavefunction dump: site, re, im, |psi|^2.
std::string wavefunction_csv(std::span<const cplx> psi);

struct OutputEntry {
  std::string file;
  std::string sha256;
};

// Digests of `files` (relative to `dir`), in the given order.
std::vector<OutputEntry> inventory(const std::filesystem::path& dir, std::span<const std::string> files);

}  // namespace wqed
