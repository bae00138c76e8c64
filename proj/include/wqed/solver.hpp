#pragma once

#include <cstddef>
#include <vector>

#include "wqed/lattice.hpp"
#include "wqed/observables.hpp"
#include "wqed/spectral.hpp"

namespace wqed {

// Single-excitation eigenstates with mirror parity per state. Nearly
// degenerate pairs (|Δε| < 1e-8) are rotated into mirror-adapted combinations.
struct SingleSpectrum {
  EigenDecomposition eig;
  std::vector<ParityResult> parity;

  // Index of the brightest state (largest -Im eps), i.e. 0 after sorting.
  std::size_t brightest() const noexcept { return 0; }
};

SingleSpectrum solve_single(const ArrayConfig& cfg, std::size_t max_dim = kDefaultMaxDim);

// True when chi_k = chi_{N-k} for every bond, so the pair Hamiltonian commutes
// with the mirror (n, m) -> (N + 1 - m, N + 1 - n).
bool is_mirror_symmetric(const ArrayConfig& cfg);

// Two-excitation eigenstates in the pair basis. `eig.values` hold the total
// energy 2*eps; `energy(k)` returns the per-excitation eps.
struct PairSpectrum {
  std::size_t n_atoms = 0;
  EigenDecomposition eig;
  std::vector<Parity> sector;  // Mixed when the mirror blocks were not used
  bool mirror_blocks = false;

  std::size_t size() const noexcept { return eig.size(); }
  cplx energy(std::size_t k) const { return 0.5 * eig.values[k]; }
  TwoExcitationState state(std::size_t k) const;
};

// Diagonalizes the pair Hamiltonian. With `use_mirror` and a mirror-symmetric
// config the even and odd sectors are solved separately; the result is the
// same spectrum at roughly a quarter of the cost.
PairSpectrum solve_pair(const ArrayConfig& cfg, std::size_t max_dim = kDefaultMaxDim,
                        bool use_mirror = true);

}  // namespace wqed
