#include "wqed/lattice.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "wqed/error.hpp"

namespace wqed {

ArrayConfig ArrayConfig::clean(std::size_t n_atoms, double phase) {
  ArrayConfig cfg;
  cfg.n_atoms = n_atoms;
  cfg.phase = phase;
  cfg.disorder.assign(n_atoms > 0 ? n_atoms - 1 : 0, 0.0);
  return cfg;
}

void ArrayConfig::validate(std::size_t min_atoms) const {
  if (n_atoms < min_atoms)
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("need at least {} atoms, got {}", min_atoms, n_atoms));
  if (!std::isfinite(phase)) throw Error(ErrorCode::InvalidArgument, "phase must be finite");
  if (!disorder.empty() && disorder.size() != n_atoms - 1)
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("disorder list has {} entries, expected {}", disorder.size(), n_atoms - 1));
  for (double x : disorder)
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "disorder values must be finite");
}

bool ArrayConfig::has_disorder() const {
  return std::any_of(disorder.begin(), disorder.end(), [](double x) { return x != 0.0; });
}

double ArrayConfig::chi(std::size_t bond) const {
  if (disorder.empty()) return 0.0;
  return disorder.at(bond - 1);
}

PairBasis::PairBasis(std::size_t n_atoms) : n_atoms_(n_atoms) {
  if (n_atoms < 2) throw Error(ErrorCode::InvalidArgument, "pair basis needs at least 2 atoms");
  pairs_.reserve(n_atoms * (n_atoms - 1) / 2);
  for (std::size_t n = 1; n <= n_atoms; ++n)
    for (std::size_t m = n + 1; m <= n_atoms; ++m) pairs_.emplace_back(n, m);
}

std::size_t PairBasis::index(std::size_t n, std::size_t m) const {
  if (n > m) std::swap(n, m);
  if (n < 1 || m > n_atoms_ || n == m)
    throw Error(ErrorCode::InvalidArgument, fmt::format("({}, {}) is not a hard-core pair", n, m));
  // Rows 1..n-1 contribute (N - k) pairs each.
  const std::size_t before = (n - 1) * n_atoms_ - (n - 1) * n / 2;
  return before + (m - n - 1);
}

ComplexMatrix build_single_hamiltonian(const ArrayConfig& cfg) {
  cfg.validate(1);
  const std::size_t n = cfg.n_atoms;
  const cplx minus_i{0.0, -1.0};
  ComplexMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double dist = std::abs(static_cast<double>(r) - static_cast<double>(c));
      h(r, c) = minus_i * std::polar(1.0, cfg.phase * dist);
    }
  return h;
}

cplx pair_element(const ComplexMatrix& single, const ArrayConfig& cfg, std::size_t a, std::size_t b,
                  std::size_t p, std::size_t q) {
  auto h = [&](std::size_t i, std::size_t j) { return single(i - 1, j - 1); };
  cplx v{0.0, 0.0};
  if (b == q) v += h(a, p);
  if (a == q) v += h(b, p);
  if (b == p) v += h(a, q);
  if (a == p) v += h(b, q);
  if (a == p && b == q && q == p + 1) v += cfg.chi(p);
  return v;
}

ComplexMatrix build_pair_hamiltonian(const ArrayConfig& cfg, const PairBasis& basis) {
  cfg.validate(2);
  if (basis.n_atoms() != cfg.n_atoms)
    throw Error(ErrorCode::Dimension,
                fmt::format("pair basis is for {} atoms but config has {}", basis.n_atoms(), cfg.n_atoms));
  const ComplexMatrix single = build_single_hamiltonian(cfg);
  const std::size_t dim = basis.dimension();
  ComplexMatrix m(dim, dim);
  // Only pairs sharing at least one site couple.
  for (std::size_t bra = 0; bra < dim; ++bra) {
    const auto [a, b] = basis.pair(bra);
    for (std::size_t ket = 0; ket < dim; ++ket) {
      const auto [p, q] = basis.pair(ket);
      if (a != p && a != q && b != p && b != q) continue;
      m(bra, ket) = pair_element(single, cfg, a, b, p, q);
    }
  }
  return m;
}

namespace {

// Sparse operator on the 2^N product space; bit k of a state is atom k+1.
using State = std::uint32_t;
using SparseOp = std::map<std::pair<State, State>, cplx>;  // (out, in) -> amplitude

// sigma_n^dagger sigma_m applied to a basis state, with sigma^2 = 0.
bool apply_raise_lower(State in, std::size_t n, std::size_t m, State& out) {
  const State lower_bit = State{1} << (m - 1);
  const State raise_bit = State{1} << (n - 1);
  if (!(in & lower_bit)) return false;
  State mid = in & ~lower_bit;
  if (mid & raise_bit) return false;
  out = mid | raise_bit;
  return true;
}

}  // namespace

ComplexMatrix oracle_full_space(const ArrayConfig& cfg) {
  cfg.validate(2);
  if (cfg.n_atoms > kOracleMaxAtoms)
    throw Error(ErrorCode::Dimension, fmt::format("full-space oracle is capped at {} atoms, got {}",
                                                  kOracleMaxAtoms, cfg.n_atoms));
  const std::size_t n = cfg.n_atoms;
  const State full = State{1} << n;
  const cplx minus_i{0.0, -1.0};

  SparseOp op;
  for (State in = 0; in < full; ++in) {
    for (std::size_t a = 1; a <= n; ++a)
      for (std::size_t b = 1; b <= n; ++b) {
        State out = 0;
        if (!apply_raise_lower(in, a, b, out)) continue;
        const double dist = std::abs(static_cast<double>(a) - static_cast<double>(b));
        op[{out, in}] += minus_i * std::polar(1.0, cfg.phase * dist);
      }
    // chi_k n_k n_{k+1}: diagonal, nonzero only when both atoms are excited.
    for (std::size_t k = 1; k < n; ++k) {
      const State both = (State{1} << (k - 1)) | (State{1} << k);
      if ((in & both) == both && cfg.chi(k) != 0.0) op[{in, in}] += cfg.chi(k);
    }
  }

  const PairBasis basis(n);
  std::vector<std::int64_t> position(full, -1);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto [p, q] = basis.pair(i);
    position[(State{1} << (p - 1)) | (State{1} << (q - 1))] = static_cast<std::int64_t>(i);
  }
  ComplexMatrix projected(basis.dimension(), basis.dimension());
  for (const auto& [key, amp] : op) {
    const auto [out, in] = key;
    if (position[out] < 0 || position[in] < 0) continue;
    projected(static_cast<std::size_t>(position[out]), static_cast<std::size_t>(position[in])) += amp;
  }
  return projected;
}

}  // namespace wqed
