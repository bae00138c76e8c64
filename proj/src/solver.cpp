#include "wqed/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "wqed/error.hpp"

namespace wqed {

namespace {
constexpr double kLargeSolveBytes = 1024.0 * 1024.0 * 1024.0;
}

SingleSpectrum solve_single(const ArrayConfig& cfg, std::size_t max_dim) {
  SingleSpectrum out;
  out.eig = eig_dense(build_single_hamiltonian(cfg), max_dim);
  const std::size_t n = out.eig.size();
  std::vector<bool> remixed(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!remixed[i] && !remixed[j] && std::abs(out.eig.values[i] - out.eig.values[j]) < 1e-8) {
        remix_degenerate_pair(out.eig.vectors, i, j);
        remixed[i] = remixed[j] = true;
      }
  out.parity.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = out.eig.vectors.column(k);
    out.parity.push_back(parity_of(std::span<const cplx>(v)));
  }
  return out;
}

bool is_mirror_symmetric(const ArrayConfig& cfg) {
  if (cfg.disorder.empty()) return true;
  const std::size_t bonds = cfg.disorder.size();
  for (std::size_t k = 0; k < bonds; ++k)
    if (cfg.disorder[k] != cfg.disorder[bonds - 1 - k]) return false;
  return true;
}

TwoExcitationState PairSpectrum::state(std::size_t k) const {
  const auto v = eig.vectors.column(k);
  return make_state(v, n_atoms, energy(k), k);
}

namespace {

// One mirror-adapted basis vector: up to two pair indices with real weights.
struct SectorVector {
  std::size_t first;
  std::size_t second;
  double w_first;
  double w_second;  // zero for mirror-invariant pairs
};

struct Sectors {
  std::vector<SectorVector> even;
  std::vector<SectorVector> odd;
};

Sectors mirror_sectors(const PairBasis& basis) {
  const std::size_t n = basis.n_atoms();
  const double h = 1.0 / std::sqrt(2.0);
  Sectors s;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto [a, b] = basis.pair(i);
    const std::size_t j = basis.index(n + 1 - b, n + 1 - a);
    if (j == i) {
      s.even.push_back({i, i, 1.0, 0.0});
    } else if (i < j) {
      s.even.push_back({i, j, h, h});
      s.odd.push_back({i, j, h, -h});
    }
  }
  return s;
}

ComplexMatrix sector_block(const std::vector<SectorVector>& sector, const ComplexMatrix& single,
                           const ArrayConfig& cfg, const PairBasis& basis) {
  const std::size_t dim = sector.size();
  ComplexMatrix block(dim, dim);
  auto element = [&](std::size_t bra, std::size_t ket) {
    const auto [a, b] = basis.pair(bra);
    const auto [p, q] = basis.pair(ket);
    return pair_element(single, cfg, a, b, p, q);
  };
  for (std::size_t r = 0; r < dim; ++r) {
    const auto& u = sector[r];
    for (std::size_t c = r; c < dim; ++c) {
      const auto& v = sector[c];
      cplx acc = u.w_first * v.w_first * element(u.first, v.first);
      if (v.w_second != 0.0) acc += u.w_first * v.w_second * element(u.first, v.second);
      if (u.w_second != 0.0) {
        acc += u.w_second * v.w_first * element(u.second, v.first);
        if (v.w_second != 0.0) acc += u.w_second * v.w_second * element(u.second, v.second);
      }
      block(r, c) = acc;
      block(c, r) = acc;
    }
  }
  return block;
}

}  // namespace

PairSpectrum solve_pair(const ArrayConfig& cfg, std::size_t max_dim, bool use_mirror) {
  cfg.validate(2);
  const PairBasis basis(cfg.n_atoms);
  const std::size_t dim = basis.dimension();
  if (dim > max_dim)
    throw Error(ErrorCode::Dimension,
                fmt::format("two-excitation dimension {} for N = {} exceeds the cap {} (dense solve "
                            "needs about {:.3g} GiB); raise --max-dim to opt in",
                            dim, cfg.n_atoms, max_dim, eig_memory_estimate(dim) / (1u << 30)));
  if (eig_memory_estimate(dim) > kLargeSolveBytes)
    fmt::print(stderr, "two-excitation dimension {} for N = {}: dense solve needs about {:.3g} GiB\n", dim,
               cfg.n_atoms, eig_memory_estimate(dim) / (1u << 30));

  PairSpectrum out;
  out.n_atoms = cfg.n_atoms;
  if (!use_mirror || !is_mirror_symmetric(cfg) || cfg.n_atoms < 3) {
    out.eig = eig_dense(build_pair_hamiltonian(cfg, basis), max_dim);
    out.sector.assign(dim, Parity::Mixed);
    return out;
  }

  out.mirror_blocks = true;
  const ComplexMatrix single = build_single_hamiltonian(cfg);
  const Sectors sectors = mirror_sectors(basis);

  std::vector<cplx> values;
  std::vector<double> residuals;
  std::vector<Parity> labels;
  std::vector<std::vector<cplx>> columns;
  double norm_sq = 0.0;
  for (const auto& [sector, label] : {std::pair{&sectors.even, Parity::Even},
                                      std::pair{&sectors.odd, Parity::Odd}}) {
    if (sector->empty()) continue;
    EigenDecomposition block_eig = eig_dense(sector_block(*sector, single, cfg, basis), max_dim);
    norm_sq += block_eig.matrix_norm * block_eig.matrix_norm;
    for (std::size_t k = 0; k < block_eig.size(); ++k) {
      std::vector<cplx> full(dim, cplx{0.0, 0.0});
      for (std::size_t a = 0; a < sector->size(); ++a) {
        const auto& sv = (*sector)[a];
        const cplx y = block_eig.vectors(a, k);
        full[sv.first] += sv.w_first * y;
        if (sv.w_second != 0.0) full[sv.second] += sv.w_second * y;
      }
      values.push_back(block_eig.values[k]);
      residuals.push_back(block_eig.residuals[k]);
      labels.push_back(label);
      columns.push_back(std::move(full));
    }
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return brighter_first(values[i], values[j]); });
  out.eig.matrix_norm = std::sqrt(norm_sq);
  out.eig.vectors = ComplexMatrix(dim, dim);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t src = order[k];
    out.eig.values.push_back(values[src]);
    out.eig.residuals.push_back(residuals[src]);
    out.sector.push_back(labels[src]);
    out.eig.vectors.set_column(k, columns[src]);
  }
  return out;
}

}  // namespace wqed
