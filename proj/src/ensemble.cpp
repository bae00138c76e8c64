#include "wqed/ensemble.hpp"

#include <cblas.h>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "wqed/error.hpp"
#include "wqed/io.hpp"
#include "wqed/solver.hpp"

namespace wqed {

std::string_view to_string(DisorderDistribution d) {
  return d == DisorderDistribution::Uniform ? "uniform" : "gaussian";
}

DisorderDistribution parse_distribution(std::string_view name) {
  if (name == "uniform") return DisorderDistribution::Uniform;
  if (name == "gaussian") return DisorderDistribution::Gaussian;
  throw Error(ErrorCode::Config, fmt::format("unknown disorder distribution '{}'", name));
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t realization) {
  // splitmix64 finalizer over master ^ golden-ratio-spaced counter
  std::uint64_t z = master_seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(realization) + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> draw_disorder(double strength, std::size_t n, std::uint64_t seed,
                                  DisorderDistribution dist) {
  if (!(strength >= 0.0) || !std::isfinite(strength))
    throw Error(ErrorCode::InvalidArgument, "disorder strength must be finite and >= 0");
  std::vector<double> chi(n, 0.0);
  if (strength == 0.0) return chi;
  std::mt19937_64 rng(seed);
  if (dist == DisorderDistribution::Uniform) {
    const double half_width = std::sqrt(3.0) * strength;
    std::uniform_real_distribution<double> u(-half_width, half_width);
    for (auto& x : chi) x = u(rng);
  } else {
    std::normal_distribution<double> g(0.0, strength);
    for (auto& x : chi) x = g(rng);
  }
  return chi;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.ok; }));
}

std::size_t decile_count(std::size_t dim) { return std::max<std::size_t>(1, dim / 10); }

namespace {

void run_realization(const ArrayConfig& base, double strength, const SweepOptions& options,
                     RealizationResult& row) {
  ArrayConfig cfg = base;
  cfg.disorder = draw_disorder(strength, base.n_atoms - 1, row.seed, options.distribution);
  const PairSpectrum spec = solve_pair(cfg, options.max_dim);
  const std::size_t dim = spec.size();
  std::vector<double> rho(dim);
  std::vector<double> ipr(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const TwoExcitationState s = spec.state(k);
    if (s.energy.imag() > 1e-10)
      throw Error(ErrorCode::Convergence, fmt::format("state {} has Im eps = {:.3e} > 0", k, s.energy.imag()));
    rho[k] = photon_distance(s.amplitudes);
    ipr[k] = center_of_mass_ipr(s.amplitudes);
  }
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rho[a] < rho[b]; });
  row.sorted_rho.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) row.sorted_rho[k] = rho[order[k]];
  const std::size_t dec = decile_count(dim);
  double top = 0.0, bottom = 0.0, bottom_ipr = 0.0;
  for (std::size_t k = 0; k < dec; ++k) {
    bottom += rho[order[k]];
    bottom_ipr += ipr[order[k]];
    top += rho[order[dim - 1 - k]];
  }
  row.top_decile_rho = top / static_cast<double>(dec);
  row.bottom_decile_rho = bottom / static_cast<double>(dec);
  row.bottom_decile_ipr = bottom_ipr / static_cast<double>(dec);
  row.ok = true;
}

}  // namespace

SweepResult disorder_sweep(const ArrayConfig& base, std::span<const double> strengths,
                           std::size_t realizations, std::uint64_t master_seed,
                           const SweepOptions& options) {
  base.validate(2);
  if (realizations < 1) throw Error(ErrorCode::InvalidArgument, "need at least one realization");
  if (strengths.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one disorder strength");
  if (!std::is_sorted(strengths.begin(), strengths.end()))
    throw Error(ErrorCode::InvalidArgument, "disorder strengths must be sorted ascending");
  for (double s : strengths)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw Error(ErrorCode::InvalidArgument, "disorder strengths must be finite and >= 0");

  SweepResult result;
  result.strengths.assign(strengths.begin(), strengths.end());
  result.rows.resize(strengths.size() * realizations);
  for (std::size_t s = 0; s < strengths.size(); ++s)
    for (std::size_t r = 0; r < realizations; ++r) {
      auto& row = result.rows[s * realizations + r];
      row.strength_index = s;
      row.realization = r;
      row.seed = realization_seed(master_seed, r);
    }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < result.rows.size(); i = next++) {
      auto& row = result.rows[i];
      try {
        run_realization(base, strengths[row.strength_index], options, row);
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
        row.sorted_rho.clear();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, result.rows.size());
  if (workers == 1) {
    worker();
  } else {
    // Realizations already run in parallel; keep BLAS itself single-threaded.
    const int blas_threads = openblas_get_num_threads();
    openblas_set_num_threads(1);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    openblas_set_num_threads(blas_threads);
  }

  for (std::size_t s = 0; s < strengths.size(); ++s) {
    StrengthSummary sum;
    sum.strength = strengths[s];
    for (std::size_t r = 0; r < realizations; ++r) {
      const auto& row = result.rows[s * realizations + r];
      ++sum.attempted;
      if (!row.ok) continue;
      ++sum.succeeded;
      sum.top_decile_rho += row.top_decile_rho;
      sum.bottom_decile_rho += row.bottom_decile_rho;
      sum.bottom_decile_ipr += row.bottom_decile_ipr;
    }
    if (sum.succeeded > 0) {
      const auto k = static_cast<double>(sum.succeeded);
      sum.top_decile_rho /= k;
      sum.bottom_decile_rho /= k;
      sum.bottom_decile_ipr /= k;
    } else {
      sum.top_decile_rho = sum.bottom_decile_rho = sum.bottom_decile_ipr = std::nan("");
    }
    result.summary.push_back(sum);
  }
  return result;
}

std::string sweep_map_csv(const SweepResult& sweep) {
  std::size_t dim = 0;
  for (const auto& row : sweep.rows) dim = std::max(dim, row.sorted_rho.size());
  std::string s = "strength,realization,seed,status";
  for (std::size_t k = 0; k < dim; ++k) s += fmt::format(",rho_{}", k);
  s += '\n';
  for (const auto& row : sweep.rows) {
    s += fmt::format("{},{},{},{}", io::fmt_double(sweep.strengths[row.strength_index]), row.realization,
                     row.seed, row.ok ? "ok" : "failed");
    for (std::size_t k = 0; k < dim; ++k) {
      s += ',';
      if (k < row.sorted_rho.size()) s += io::fmt_double(row.sorted_rho[k]);
    }
    s += '\n';
  }
  return s;
}

std::string sweep_summary_csv(const SweepResult& sweep) {
  std::string s = "strength,attempted,succeeded,top_decile_rho,bottom_decile_rho,bottom_decile_com_ipr\n";
  for (const auto& sum : sweep.summary)
    s += fmt::format("{},{},{},{},{},{}\n", io::fmt_double(sum.strength), sum.attempted, sum.succeeded,
                     io::fmt_double(sum.top_decile_rho), io::fmt_double(sum.bottom_decile_rho),
                     io::fmt_double(sum.bottom_decile_ipr));
  return s;
}

SizeSweepResult size_sweep(std::span<const std::size_t> sizes, double phase,
                           std::span<const SizeTask> tasks, std::size_t max_dim) {
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw Error(ErrorCode::InvalidArgument, "size list must be ascending");
  auto wants = [&](SizeTask t) { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); };
  SizeSweepResult out;
  for (std::size_t n : sizes) {
    if (wants(SizeTask::Decay) || wants(SizeTask::Wavefunctions))
      out.rows.push_back(scaling_row(n, phase, false));
    if (wants(SizeTask::PairSpectrum)) {
      const PairSpectrum spec = solve_pair(ArrayConfig::clean(n, phase), max_dim);
      PairSizeResult pr;
      pr.n_atoms = n;
      const std::size_t width = default_edge_width(n);
      for (std::size_t k = 0; k < spec.size(); ++k) pr.records.push_back(summarize(spec.state(k), width));
      out.pair.push_back(std::move(pr));
    }
  }
  return out;
}

std::string wavefunction_csv(std::span<const cplx> psi) {
  std::string s = "site,re_psi,im_psi,abs2\n";
  for (std::size_t i = 0; i < psi.size(); ++i)
    s += fmt::format("{},{},{},{}\n", i + 1, io::fmt_double(psi[i].real()), io::fmt_double(psi[i].imag()),
                     io::fmt_double(std::norm(psi[i])));
  return s;
}

std::vector<OutputEntry> inventory(const std::filesystem::path& dir, std::span<const std::string> files) {
  std::vector<OutputEntry> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back({f, io::sha256_file(dir / f)});
  return out;
}

}  // namespace wqed
