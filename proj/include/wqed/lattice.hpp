#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wqed/matrix.hpp"

namespace wqed {

// A finite array of two-level atoms coupled to a waveguide. Energies are in
// units of the single-atom decay rate into the waveguide, measured from the
// atomic resonance. `disorder[n-1]` is the nearest-neighbour interaction
// between atoms n and n+1 (1-based), so it has n_atoms - 1 entries.
struct ArrayConfig {
  std::size_t n_atoms = 2;
  double phase = 1.0;
  std::vector<double> disorder;

  static ArrayConfig clean(std::size_t n_atoms, double phase);

  // Throws Error(InvalidArgument) on an empty array, non-finite values or a
  // disorder list of the wrong length. An empty disorder list means all zero.
  void validate(std::size_t min_atoms = 1) const;
  bool has_disorder() const;
  double chi(std::size_t bond) const;  // bond is 1-based, 1..N-1
};

// Hard-core two-excitation basis: pairs (n, m), 1 <= n < m <= N, in
// lexicographic order.
class PairBasis {
 public:
  explicit PairBasis(std::size_t n_atoms);

  std::size_t n_atoms() const noexcept { return n_atoms_; }
  std::size_t dimension() const noexcept { return pairs_.size(); }

  // 1-based site indices of pair `index`.
  std::pair<std::size_t, std::size_t> pair(std::size_t index) const { return pairs_[index]; }
  // Inverse of pair(); n and m are 1-based and may be given in either order.
  std::size_t index(std::size_t n, std::size_t m) const;

 private:
  std::size_t n_atoms_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

// H_nm = -i exp(i phase |n - m|), N x N.
ComplexMatrix build_single_hamiltonian(const ArrayConfig& cfg);

// Two-excitation Hamiltonian in the pair basis, nearest-neighbour disorder on
// the diagonal. Eigenvalues are the total energy 2*eps.
ComplexMatrix build_pair_hamiltonian(const ArrayConfig& cfg, const PairBasis& basis);

// Element <a,b| H |p,q> of the pair Hamiltonian given the single-excitation
// matrix. All indices 1-based with a < b and p < q.
cplx pair_element(const ComplexMatrix& single, const ArrayConfig& cfg, std::size_t a, std::size_t b,
                  std::size_t p, std::size_t q);

inline constexpr std::size_t kOracleMaxAtoms = 12;

// Builds the Hamiltonian on the full 2^N space of two-level atoms and projects
// it on the two-excitation sector, in PairBasis order. Validation oracle for
// build_pair_hamiltonian.
ComplexMatrix oracle_full_space(const ArrayConfig& cfg);

}  // namespace wqed
