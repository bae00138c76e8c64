#include "wqed/observables.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "wqed/error.hpp"
#include "wqed/io.hpp"

namespace wqed {

ComplexMatrix amplitudes_from_pair_vector(std::span<const cplx> pair_vector, std::size_t n_atoms) {
  if (n_atoms < 2 || pair_vector.size() != n_atoms * (n_atoms - 1) / 2)
    throw Error(ErrorCode::Dimension, fmt::format("pair vector of length {} does not fit {} atoms",
                                                  pair_vector.size(), n_atoms));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  ComplexMatrix psi(n_atoms, n_atoms);
  std::size_t k = 0;
  for (std::size_t n = 0; n < n_atoms; ++n)
    for (std::size_t m = n + 1; m < n_atoms; ++m, ++k) {
      psi(n, m) = pair_vector[k] * inv_sqrt2;
      psi(m, n) = psi(n, m);
    }
  return psi;
}

TwoExcitationState make_state(std::span<const cplx> pair_vector, std::size_t n_atoms, cplx energy,
                              std::size_t eigen_index) {
  TwoExcitationState s{energy, amplitudes_from_pair_vector(pair_vector, n_atoms), eigen_index};
  const double norm = s.amplitudes.frobenius_norm();
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "zero two-excitation state");
  for (auto& z : s.amplitudes.data()) z /= norm;
  return s;
}

double photon_distance(const ComplexMatrix& psi) {
  if (!psi.square()) throw Error(ErrorCode::Dimension, "amplitude matrix must be square");
  double rho = 0.0;
  for (std::size_t n = 0; n < psi.rows(); ++n)
    for (std::size_t m = 0; m < psi.cols(); ++m)
      rho += std::abs(static_cast<double>(n) - static_cast<double>(m)) * std::norm(psi(n, m));
  return rho;
}

std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Mixed: return "mixed";
  }
  return "mixed";
}

namespace {

ParityResult parity_from_overlap(cplx overlap, double norm_sq) {
  if (norm_sq == 0.0) throw Error(ErrorCode::InvalidArgument, "parity of a zero vector");
  const cplx ratio = overlap / norm_sq;
  ParityResult r;
  r.score = std::min(1.0, std::abs(ratio));
  if (r.score < kParityThreshold)
    r.label = Parity::Mixed;
  else
    r.label = ratio.real() >= 0.0 ? Parity::Even : Parity::Odd;
  return r;
}

}  // namespace

ParityResult parity_of(std::span<const cplx> vec) {
  const std::size_t n = vec.size();
  cplx overlap{0.0, 0.0};
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    overlap += std::conj(vec[n - 1 - i]) * vec[i];
    norm_sq += std::norm(vec[i]);
  }
  return parity_from_overlap(overlap, norm_sq);
}

ParityResult parity_of(const ComplexMatrix& psi) {
  if (!psi.square()) throw Error(ErrorCode::Dimension, "amplitude matrix must be square");
  const std::size_t n = psi.rows();
  cplx overlap{0.0, 0.0};
  double norm_sq = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      overlap += std::conj(psi(n - 1 - a, n - 1 - b)) * psi(a, b);
      norm_sq += std::norm(psi(a, b));
    }
  return parity_from_overlap(overlap, norm_sq);
}

void remix_degenerate_pair(ComplexMatrix& vectors, std::size_t first, std::size_t second) {
  const std::size_t n = vectors.rows();
  std::vector<cplx> u = vectors.column(first);
  std::vector<cplx> w = vectors.column(second);
  auto dot = [](std::span<const cplx> x, std::span<const cplx> y) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
  };
  auto normalize = [&](std::vector<cplx>& v) {
    const double nv = norm2(v);
    if (nv == 0.0) throw Error(ErrorCode::Singular, "degenerate pair is linearly dependent");
    for (auto& z : v) z /= nv;
  };
  auto mirror = [&](std::span<const cplx> v) {
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[n - 1 - i];
    return out;
  };
  normalize(u);
  const cplx proj = dot(u, w);
  for (std::size_t i = 0; i < n; ++i) w[i] -= proj * u[i];
  normalize(w);

  // Mirror operator restricted to span{u, w}: Hermitian 2x2 [[a, b], [conj b, d]].
  const auto pu = mirror(u);
  const auto pw = mirror(w);
  const double a = dot(u, pu).real();
  const double d = dot(w, pw).real();
  const cplx b = dot(u, pw);
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  const double top = 0.5 * (a + d) + half_gap;
  // Eigenvector of the larger eigenvalue: (b, top - a) or (top - d, conj b).
  cplx c1, c2;
  if (std::abs(b) < 1e-300) {
    c1 = a >= d ? 1.0 : 0.0;
    c2 = a >= d ? 0.0 : 1.0;
  } else {
    c1 = b;
    c2 = top - a;
    const double nrm = std::sqrt(std::norm(c1) + std::norm(c2));
    c1 /= nrm;
    c2 /= nrm;
  }
  std::vector<cplx> even(n), odd(n);
  for (std::size_t i = 0; i < n; ++i) {
    even[i] = c1 * u[i] + c2 * w[i];
    odd[i] = -std::conj(c2) * u[i] + std::conj(c1) * w[i];
  }
  vectors.set_column(first, even);
  vectors.set_column(second, odd);
}

std::size_t default_edge_width(std::size_t n_atoms) {
  const std::size_t cap = std::max<std::size_t>(1, n_atoms / 4);
  return std::min(std::max<std::size_t>(2, n_atoms / 10), cap);
}

double edge_mass(const ComplexMatrix& psi, std::size_t width) {
  if (!psi.square()) throw Error(ErrorCode::Dimension, "amplitude matrix must be square");
  const std::size_t n = psi.rows();
  if (width < 1 || width > std::max<std::size_t>(1, n / 4))
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("edge width {} outside [1, {}]", width, std::max<std::size_t>(1, n / 4)));
  auto near_edge = [&](std::size_t i) { return i < width || i >= n - width; };
  double edge = 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double p = std::norm(psi(a, b));
      total += p;
      if (near_edge(a) && near_edge(b)) edge += p;
    }
  return total > 0.0 ? edge / total : 0.0;
}

double center_of_mass_ipr(const ComplexMatrix& psi) {
  const std::size_t n = psi.rows();
  std::vector<double> p(2 * n, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double w = std::norm(psi(a, b));
      p[a + b] += w;
      total += w;
    }
  if (total == 0.0) throw Error(ErrorCode::InvalidArgument, "IPR of a zero state");
  double ipr = 0.0;
  for (double x : p) ipr += (x / total) * (x / total);
  return ipr;
}

std::string_view to_string(StateLabel label) {
  switch (label) {
    case StateLabel::Scattering: return "scattering";
    case StateLabel::Fermionized: return "fermionized";
    case StateLabel::BoundPair: return "bound-pair";
    case StateLabel::EdgeBoundPair: return "edge-bound-pair";
    case StateLabel::InteractionLocalized: return "interaction-localized";
    case StateLabel::DistantBound: return "distant-bound";
    case StateLabel::Unclassified: return "unclassified";
  }
  return "unclassified";
}

StateLabel classify(double rho, double edge, std::size_t n_atoms, const ClassifierThresholds& t) {
  if (!std::isfinite(rho) || !std::isfinite(edge) || n_atoms < 2) return StateLabel::Unclassified;
  const double max_rho = static_cast<double>(n_atoms - 1);
  if (rho >= t.distant_fraction * max_rho && edge >= t.edge_mass) return StateLabel::DistantBound;
  if (rho <= t.bound_distance) return edge >= t.edge_mass ? StateLabel::EdgeBoundPair : StateLabel::BoundPair;
  return StateLabel::Scattering;
}

SpectrumRecord summarize(const TwoExcitationState& state, std::size_t edge_width,
                         const ClassifierThresholds& t) {
  SpectrumRecord r;
  r.index = state.eigen_index;
  r.energy = state.energy;
  r.rho = photon_distance(state.amplitudes);
  r.parity = parity_of(state.amplitudes);
  r.edge_mass = edge_mass(state.amplitudes, edge_width);
  r.label = classify(r.rho, r.edge_mass, state.n_atoms(), t);
  return r;
}

std::size_t Histogram::mode_bin() const {
  if (counts.empty()) throw Error(ErrorCode::InvalidArgument, "empty histogram");
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "histogram of an empty sample");
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "histogram needs at least 2 bins");
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "histogram range is empty");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto bin = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(bin, bins - 1)]++;
  }
  return h;
}

Histogram distance_histogram(std::span<const double> rhos, std::size_t n_atoms, std::size_t bins) {
  if (n_atoms < 2) throw Error(ErrorCode::InvalidArgument, "distance histogram needs N >= 2");
  return histogram(rhos, 0.0, static_cast<double>(n_atoms - 1), bins);
}

std::string spectrum_csv(std::span<const SpectrumRecord> records) {
  std::string s = "index,re_eps,im_eps,rho,parity,parity_score,edge_mass,label\n";
  for (const auto& r : records)
    s += fmt::format("{},{},{},{},{},{},{},{}\n", r.index, io::fmt_double(r.energy.real()),
                     io::fmt_double(r.energy.imag()), io::fmt_double(r.rho), to_string(r.parity.label),
                     io::fmt_double(r.parity.score), io::fmt_double(r.edge_mass), to_string(r.label));
  return s;
}

std::string histogram_csv(const Histogram& h) {
  std::string s = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    s += fmt::format("{},{},{}\n", io::fmt_double(h.edges[i]), io::fmt_double(h.edges[i + 1]), h.counts[i]);
  return s;
}

}  // namespace wqed
