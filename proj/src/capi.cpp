#include "wqed/wqed.h"

#include <fmt/format.h>

#include <json.hpp>
#include <new>
#include <string>

#include "wqed/analytics.hpp"
#include "wqed/ensemble.hpp"
#include "wqed/error.hpp"
#include "wqed/lattice.hpp"
#include "wqed/observables.hpp"
#include "wqed/pipeline.hpp"
#include "wqed/solver.hpp"
#include "wqed/spectral.hpp"

struct wqed_config {
  wqed::ArrayConfig cfg;
};

struct wqed_matrix {
  wqed::ComplexMatrix m;
};

struct wqed_spectrum {
  wqed::EigenDecomposition eig;
  std::size_t n_atoms = 0;
  bool pair = false;  // values hold 2*eps
};

struct wqed_decomposition {
  wqed::OrthogonalSymmetricDecomposition dec;
};

namespace {

using wqed::cplx;

thread_local std::string g_last_error;
thread_local std::string g_last_report;

struct NullArgument : std::exception {
  const char* what() const noexcept override { return "null pointer argument"; }
};

template <class... P>
void require(const P*... p) {
  if (((p == nullptr) || ...)) throw NullArgument{};
}

template <class F>
wqed_status guard(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return WQED_OK;
  } catch (const wqed::Error& e) {
    g_last_error = e.what();
    return static_cast<wqed_status>(e.code());
  } catch (const NullArgument& e) {
    g_last_error = e.what();
    return WQED_ERR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WQED_ERR_DIMENSION;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WQED_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return WQED_ERR_INTERNAL;
  }
}

void check_index(std::size_t k, std::size_t n) {
  if (k >= n) throw wqed::Error(wqed::ErrorCode::InvalidArgument, fmt::format("index {} out of range [0, {})", k, n));
}

void copy_out(std::span<const cplx> src, double* dst, std::size_t len) {
  if (len < 2 * src.size())
    throw wqed::Error(wqed::ErrorCode::InvalidArgument,
                      fmt::format("buffer holds {} doubles, need {}", len, 2 * src.size()));
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[2 * i] = src[i].real();
    dst[2 * i + 1] = src[i].imag();
  }
}

cplx energy_of(const wqed_spectrum* s, std::size_t k) {
  check_index(k, s->eig.size());
  return s->pair ? 0.5 * s->eig.values[k] : s->eig.values[k];
}

wqed::TwoExcitationState pair_state(const wqed_spectrum* s, std::size_t k) {
  if (!s->pair) throw wqed::Error(wqed::ErrorCode::InvalidArgument, "spectrum is not a two-excitation spectrum");
  const cplx e = energy_of(s, k);
  const auto v = s->eig.vectors.column(k);
  return wqed::make_state(v, s->n_atoms, e, k);
}

wqed_parity to_c(wqed::Parity p) { return static_cast<wqed_parity>(static_cast<int>(p)); }
wqed_label to_c(wqed::StateLabel l) { return static_cast<wqed_label>(static_cast<int>(l)); }

}  // namespace

extern "C" {

const char* wqed_version(void) { return "1.0.0"; }

const char* wqed_status_string(wqed_status status) {
  switch (status) {
    case WQED_OK: return "ok";
    case WQED_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WQED_ERR_DIMENSION: return "dimension exceeds limit";
    case WQED_ERR_DOMAIN: return "domain error";
    case WQED_ERR_SINGULAR: return "singular point";
    case WQED_ERR_CONVERGENCE: return "no convergence";
    case WQED_ERR_IO: return "i/o error";
    case WQED_ERR_CONFIG: return "configuration error";
    case WQED_ERR_PARTIAL_FAILURE: return "partial failure";
    case WQED_ERR_NULL_POINTER: return "null pointer";
    case WQED_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* wqed_last_error(void) { return g_last_error.c_str(); }
const char* wqed_last_report(void) { return g_last_report.c_str(); }

wqed_status wqed_config_create(size_t n_atoms, double phase, wqed_config** out) {
  return guard([&] {
    require(out);
    *out = nullptr;
    auto cfg = wqed::ArrayConfig::clean(n_atoms, phase);
    cfg.validate();
    *out = new wqed_config{std::move(cfg)};
  });
}

wqed_status wqed_config_set_disorder(wqed_config* cfg, const double* chi, size_t len) {
  return guard([&] {
    require(cfg);
    if (len > 0) require(chi);
    wqed::ArrayConfig next = cfg->cfg;
    next.disorder.assign(chi, chi + len);
    next.validate();
    cfg->cfg = std::move(next);
  });
}

void wqed_config_destroy(wqed_config* cfg) { delete cfg; }

wqed_status wqed_matrix_create(size_t rows, size_t cols, const double* interleaved, wqed_matrix** out) {
  return guard([&] {
    require(out);
    *out = nullptr;
    wqed::ComplexMatrix m(rows, cols);
    if (rows * cols > 0) {
      require(interleaved);
      auto d = m.data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = cplx{interleaved[2 * i], interleaved[2 * i + 1]};
    }
    *out = new wqed_matrix{std::move(m)};
  });
}

wqed_status wqed_matrix_shape(const wqed_matrix* m, size_t* rows, size_t* cols) {
  return guard([&] {
    require(m, rows, cols);
    *rows = m->m.rows();
    *cols = m->m.cols();
  });
}

wqed_status wqed_matrix_get(const wqed_matrix* m, size_t row, size_t col, double* re, double* im) {
  return guard([&] {
    require(m, re, im);
    check_index(row, m->m.rows());
    check_index(col, m->m.cols());
    *re = m->m(row, col).real();
    *im = m->m(row, col).imag();
  });
}

wqed_status wqed_matrix_copy(const wqed_matrix* m, double* interleaved, size_t len) {
  return guard([&] {
    require(m, interleaved);
    copy_out(m->m.data(), interleaved, len);
  });
}

void wqed_matrix_destroy(wqed_matrix* m) { delete m; }

wqed_status wqed_single_hamiltonian(const wqed_config* cfg, wqed_matrix** out) {
  return guard([&] {
    require(cfg, out);
    *out = new wqed_matrix{wqed::build_single_hamiltonian(cfg->cfg)};
  });
}

wqed_status wqed_pair_hamiltonian(const wqed_config* cfg, wqed_matrix** out) {
  return guard([&] {
    require(cfg, out);
    *out = new wqed_matrix{wqed::build_pair_hamiltonian(cfg->cfg, wqed::PairBasis(cfg->cfg.n_atoms))};
  });
}

wqed_status wqed_oracle_hamiltonian(const wqed_config* cfg, wqed_matrix** out) {
  return guard([&] {
    require(cfg, out);
    *out = new wqed_matrix{wqed::oracle_full_space(cfg->cfg)};
  });
}

wqed_status wqed_eig_dense(const wqed_matrix* m, size_t max_dim, wqed_spectrum** out) {
  return guard([&] {
    require(m, out);
    *out = new wqed_spectrum{wqed::eig_dense(m->m, max_dim == 0 ? wqed::kDefaultMaxDim : max_dim), 0, false};
  });
}

wqed_status wqed_solve_single(const wqed_config* cfg, wqed_spectrum** out) {
  return guard([&] {
    require(cfg, out);
    auto spec = wqed::solve_single(cfg->cfg);
    *out = new wqed_spectrum{std::move(spec.eig), cfg->cfg.n_atoms, false};
  });
}

wqed_status wqed_solve_pair(const wqed_config* cfg, size_t max_dim, wqed_spectrum** out) {
  return guard([&] {
    require(cfg, out);
    auto spec = wqed::solve_pair(cfg->cfg, max_dim == 0 ? wqed::kDefaultMaxDim : max_dim);
    *out = new wqed_spectrum{std::move(spec.eig), cfg->cfg.n_atoms, true};
  });
}

wqed_status wqed_spectrum_size(const wqed_spectrum* s, size_t* n) {
  return guard([&] {
    require(s, n);
    *n = s->eig.size();
  });
}

wqed_status wqed_spectrum_energy(const wqed_spectrum* s, size_t k, double* re, double* im) {
  return guard([&] {
    require(s, re, im);
    const cplx e = energy_of(s, k);
    *re = e.real();
    *im = e.imag();
  });
}

wqed_status wqed_spectrum_max_relative_residual(const wqed_spectrum* s, double* out) {
  return guard([&] {
    require(s, out);
    *out = s->eig.max_relative_residual();
  });
}

wqed_status wqed_spectrum_vector(const wqed_spectrum* s, size_t k, double* interleaved, size_t len) {
  return guard([&] {
    require(s, interleaved);
    check_index(k, s->eig.size());
    const auto v = s->eig.vectors.column(k);
    copy_out(v, interleaved, len);
  });
}

void wqed_spectrum_destroy(wqed_spectrum* s) { delete s; }

wqed_status wqed_pair_state_summary(const wqed_spectrum* s, size_t k, size_t edge_width, wqed_state_summary* out) {
  return guard([&] {
    require(s, out);
    const auto state = pair_state(s, k);
    const std::size_t w = edge_width == 0 ? wqed::default_edge_width(s->n_atoms) : edge_width;
    const auto rec = wqed::summarize(state, w);
    *out = wqed_state_summary{rec.energy.real(), rec.energy.imag(), rec.rho, rec.edge_mass,
                              wqed::center_of_mass_ipr(state.amplitudes), rec.parity.score,
                              to_c(rec.parity.label), to_c(rec.label)};
  });
}

wqed_status wqed_pair_state_amplitudes(const wqed_spectrum* s, size_t k, wqed_matrix** out) {
  return guard([&] {
    require(s, out);
    *out = new wqed_matrix{pair_state(s, k).amplitudes};
  });
}

wqed_status wqed_parity_of_vector(const double* interleaved, size_t n, wqed_parity* label, double* score) {
  return guard([&] {
    require(interleaved, label, score);
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = cplx{interleaved[2 * i], interleaved[2 * i + 1]};
    const auto p = wqed::parity_of(std::span<const cplx>(v));
    *label = to_c(p.label);
    *score = p.score;
  });
}

wqed_status wqed_classify(double rho, double edge_mass, size_t n_atoms, wqed_label* out) {
  return guard([&] {
    require(out);
    *out = to_c(wqed::classify(rho, edge_mass, n_atoms));
  });
}

wqed_status wqed_decompose(const wqed_matrix* psi, wqed_decomposition** out) {
  return guard([&] {
    require(psi, out);
    *out = new wqed_decomposition{wqed::decompose_symmetric(psi->m)};
  });
}

wqed_status wqed_decomposition_size(const wqed_decomposition* d, size_t* n) {
  return guard([&] {
    require(d, n);
    *n = d->dec.size();
  });
}

wqed_status wqed_decomposition_term(const wqed_decomposition* d, size_t t, double* re_lambda, double* im_lambda,
                                    wqed_parity* parity, int* resolved) {
  return guard([&] {
    require(d, re_lambda, im_lambda, parity, resolved);
    check_index(t, d->dec.size());
    *re_lambda = d->dec.lambdas[t].real();
    *im_lambda = d->dec.lambdas[t].imag();
    *parity = to_c(d->dec.parity[t].label);
    *resolved = d->dec.resolved[t] ? 1 : 0;
  });
}

wqed_status wqed_decomposition_truncation_error(const wqed_decomposition* d, const wqed_matrix* psi, size_t k,
                                                double* out) {
  return guard([&] {
    require(d, psi, out);
    *out = wqed::truncation_error(d->dec, psi->m, k);
  });
}

wqed_status wqed_decomposition_orthogonality_defect(const wqed_decomposition* d, double* out) {
  return guard([&] {
    require(d, out);
    *out = wqed::unconjugated_orthogonality_defect(d->dec);
  });
}

void wqed_decomposition_destroy(wqed_decomposition* d) { delete d; }

wqed_status wqed_fourier2d(const wqed_matrix* psi, wqed_matrix** out) {
  return guard([&] {
    require(psi, out);
    *out = new wqed_matrix{wqed::fourier2d(psi->m)};
  });
}

wqed_status wqed_fourier_weight_near(const wqed_matrix* map, double k0, double radius, double* out) {
  return guard([&] {
    require(map, out);
    *out = wqed::fourier_weight_near(map->m, k0, radius);
  });
}

wqed_status wqed_dispersion_K(double re_eps, double im_eps, double phase, double* re_K, double* im_K) {
  return guard([&] {
    require(re_K, im_K);
    const cplx k = wqed::dispersion_K({re_eps, im_eps}, phase);
    *re_K = k.real();
    *im_K = k.imag();
  });
}

wqed_status wqed_dispersion_energy(double re_K, double im_K, double phase, double* re_eps, double* im_eps) {
  return guard([&] {
    require(re_eps, im_eps);
    const cplx e = wqed::dispersion_energy({re_K, im_K}, phase);
    *re_eps = e.real();
    *im_eps = e.imag();
  });
}

wqed_status wqed_reflection(double re_K, double im_K, double phase, double* re_r, double* im_r) {
  return guard([&] {
    require(re_r, im_r);
    const cplx r = wqed::reflection_r({re_K, im_K}, phase);
    *re_r = r.real();
    *im_r = r.imag();
  });
}

wqed_status wqed_fabry_perot_residual(double re_eps, double im_eps, size_t n_atoms, double phase, double* out) {
  return guard([&] {
    require(out);
    *out = wqed::fabry_perot_residual({re_eps, im_eps}, n_atoms, phase);
  });
}

wqed_status wqed_lambert_w0(double x, double* out) {
  return guard([&] {
    require(out);
    *out = wqed::lambert_w0(x);
  });
}

wqed_status wqed_decay_prediction(size_t n_atoms, double phase, int law, double* out) {
  return guard([&] {
    require(out);
    if (law != 0 && law != 1) throw wqed::Error(wqed::ErrorCode::InvalidArgument, "law must be 0 or 1");
    *out = wqed::brightest_decay_prediction(n_atoms, phase,
                                            law == 0 ? wqed::DecayLaw::Exact : wqed::DecayLaw::Asymptotic);
  });
}

uint64_t wqed_realization_seed(uint64_t master_seed, size_t realization) {
  return wqed::realization_seed(master_seed, realization);
}

wqed_status wqed_draw_disorder(double strength, size_t n, uint64_t seed, wqed_distribution dist, double* out) {
  return guard([&] {
    if (n > 0) require(out);
    const auto chi = wqed::draw_disorder(
        strength, n, seed, dist == WQED_GAUSSIAN ? wqed::DisorderDistribution::Gaussian : wqed::DisorderDistribution::Uniform);
    std::copy(chi.begin(), chi.end(), out);
  });
}

namespace {

void store_report(const wqed::RunReport& r, const std::vector<std::string>& mismatched) {
  nlohmann::ordered_json j;
  j["files"] = r.files;
  j["attempted"] = r.attempted;
  j["failed"] = r.failed;
  j["notes"] = r.notes;
  j["mismatched"] = mismatched;
  j["exit_code"] = r.exit_code;
  g_last_report = j.dump(2);
}

}  // namespace

wqed_status wqed_run(const char* command, const char* config_json, int* exit_code) {
  g_last_report.clear();
  return guard([&] {
    require(command, config_json, exit_code);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw wqed::Error(wqed::ErrorCode::Config, fmt::format("config is not valid JSON: {}", e.what()));
    }
    const auto report = wqed::run(wqed::parse_command(command), wqed::config_from_json(j));
    store_report(report, {});
    *exit_code = report.exit_code;
    if (report.exit_code != 0)
      throw wqed::Error(wqed::ErrorCode::PartialFailure,
                        fmt::format("{} of {} realizations failed", report.failed, report.attempted));
  });
}

wqed_status wqed_replay(const char* manifest_path, const char* out_dir, int* exit_code) {
  g_last_report.clear();
  return guard([&] {
    require(manifest_path, out_dir, exit_code);
    const auto rep = wqed::replay(manifest_path, out_dir);
    store_report(rep.run, rep.mismatched);
    *exit_code = rep.run.exit_code;
    if (!rep.mismatched.empty())
      throw wqed::Error(wqed::ErrorCode::PartialFailure,
                        fmt::format("{} outputs differ from the manifest", rep.mismatched.size()));
    if (rep.run.exit_code != 0)
      throw wqed::Error(wqed::ErrorCode::PartialFailure,
                        fmt::format("{} of {} realizations failed", rep.run.failed, rep.run.attempted));
  });
}

}  // extern "C"
