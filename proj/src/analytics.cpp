#include "wqed/analytics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "wqed/error.hpp"
#include "wqed/io.hpp"
#include "wqed/solver.hpp"

namespace wqed {

namespace {

void require_nonzero_sin(double phase) {
  if (std::sin(phase) == 0.0)
    throw Error(ErrorCode::Domain, "sin(phase) = 0: polariton dispersion undefined");
}

}  // namespace

cplx dispersion_K(cplx eps, double phase) {
  require_nonzero_sin(phase);
  if (eps == cplx{0.0, 0.0}) throw Error(ErrorCode::Domain, "dispersion has a pole at eps = 0");
  const cplx cos_k = std::cos(phase) + std::sin(phase) / eps;
  cplx k = std::acos(cos_k);
  if (k.imag() < 0.0 || (k.imag() == 0.0 && k.real() < 0.0)) k = -k;
  return k;
}

cplx dispersion_energy(cplx K, double phase) {
  require_nonzero_sin(phase);
  const cplx denom = std::cos(K) - std::cos(phase);
  if (std::abs(denom) == 0.0) throw Error(ErrorCode::Singular, "K = +-phase maps to infinite energy");
  return std::sin(phase) / denom;
}

cplx reflection_r(cplx K, double phase) {
  const cplx i{0.0, 1.0};
  const cplx denom = 1.0 - std::exp(i * (phase + K));
  if (std::abs(denom) < 1e-14)
    throw Error(ErrorCode::Singular, "reflection coefficient has a pole at phase + K = 0 (mod 2 pi)");
  return -(1.0 - std::exp(i * (phase - K))) / denom;
}

double fabry_perot_residual(cplx eps, std::size_t n_atoms, double phase) {
  const cplx i{0.0, 1.0};
  const cplx k = dispersion_K(eps, phase);
  const cplx r = reflection_r(k, phase);
  return std::abs(r * std::exp(i * k * static_cast<double>(n_atoms + 1)) - 1.0);
}

double lambert_w0(double x) {
  if (std::isnan(x) || x < 0.0) throw Error(ErrorCode::Domain, "lambert_w0 is defined here for x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  double w;
  if (x < std::exp(1.0)) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int iter = 0; iter < 50; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::abs(dw) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  return w;
}

double brightest_decay_prediction(std::size_t n_atoms, double phase, DecayLaw law) {
  if (n_atoms < 2) throw Error(ErrorCode::InvalidArgument, "decay law needs N >= 2");
  const double s = std::sin(phase);
  if (!(s > 0.0)) throw Error(ErrorCode::Domain, "decay law needs sin(phase) > 0");
  const double n = static_cast<double>(n_atoms);
  const double x = 2.0 * n * s;
  if (law == DecayLaw::Exact) return n / lambert_w0(x);
  const double l = std::log(x);
  if (!(l > 0.0)) throw Error(ErrorCode::Domain, "asymptotic decay law needs 2 N sin(phase) > 1");
  return n / (l - std::log(l));
}

double edge_center_ratio(std::span<const cplx> psi) {
  if (psi.size() < 2) throw Error(ErrorCode::InvalidArgument, "edge-centre ratio needs N >= 2");
  const double edge = std::norm(psi[0]);
  if (edge == 0.0) throw Error(ErrorCode::Singular, "wavefunction vanishes at the first site");
  return std::norm(psi[psi.size() / 2 - 1]) / edge;
}

ScalingRow scaling_row(std::size_t n_atoms, double phase, bool strict) {
  if (strict && (n_atoms < 20 || n_atoms % 2 != 0))
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("scaling table needs even N >= 20, got {}", n_atoms));
  const SingleSpectrum spec = solve_single(ArrayConfig::clean(n_atoms, phase));
  const std::size_t b = spec.brightest();
  const cplx eps = spec.eig.values[b];
  ScalingRow row;
  row.n_atoms = n_atoms;
  row.minus_im_eps = -eps.imag();
  row.eq_exact = brightest_decay_prediction(n_atoms, phase, DecayLaw::Exact);
  row.eq_asymptotic = brightest_decay_prediction(n_atoms, phase, DecayLaw::Asymptotic);
  row.wavefunction = spec.eig.vectors.column(b);
  row.q = edge_center_ratio(row.wavefunction);
  row.qN = row.q * static_cast<double>(n_atoms);
  row.K = dispersion_K(eps, phase);
  row.edge_check = std::exp(-static_cast<double>(n_atoms - 1) * row.K.imag()) *
                   static_cast<double>(n_atoms) * std::sin(phase);
  return row;
}

std::vector<ScalingRow> edge_center_scaling(std::span<const std::size_t> sizes, double phase) {
  std::vector<ScalingRow> rows;
  rows.reserve(sizes.size());
  for (std::size_t n : sizes) rows.push_back(scaling_row(n, phase, true));
  return rows;
}

std::string scaling_csv(std::span<const ScalingRow> rows) {
  std::string s = "N,minus_im_eps_numeric,decay_lambert,decay_asymptotic,q,qN\n";
  for (const auto& r : rows)
    s += fmt::format("{},{},{},{},{},{}\n", r.n_atoms, io::fmt_double(r.minus_im_eps),
                     io::fmt_double(r.eq_exact), io::fmt_double(r.eq_asymptotic), io::fmt_double(r.q),
                     io::fmt_double(r.qN));
  return s;
}

std::string edge_check_csv(std::span<const ScalingRow> rows) {
  std::string s = "N,re_K,im_K,edge_check\n";
  for (const auto& r : rows)
    s += fmt::format("{},{},{},{}\n", r.n_atoms, io::fmt_double(r.K.real()), io::fmt_double(r.K.imag()),
                     io::fmt_double(r.edge_check));
  return s;
}

}  // namespace wqed
