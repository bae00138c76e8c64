#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wqed/matrix.hpp"

namespace wqed {

// Polariton wave vector for energy eps: cos K = cos(phase) + sin(phase) / eps,
// on the branch Im K >= 0 (Re K in [0, pi] when Im K = 0). The sign follows
// from summing -i e^{i phase |m|} e^{iKm} over the infinite array.
cplx dispersion_K(cplx eps, double phase);

// Inverse of dispersion_K: eps = sin(phase) / (cos K - cos(phase)).
cplx dispersion_energy(cplx K, double phase);

// Internal reflection coefficient of a polariton at the array edge,
// r = -(1 - e^{i(phase - K)}) / (1 - e^{i(phase + K)}).
cplx reflection_r(cplx K, double phase);

// |r(eps) e^{i K(eps) (N + 1)} - 1|, zero for even eigenmodes of the finite array.
double fabry_perot_residual(cplx eps, std::size_t n_atoms, double phase);

// Principal branch of the Lambert W function for x >= 0 (Halley iteration).
double lambert_w0(double x);

enum class DecayLaw { Exact, Asymptotic };

// Predicted -Im eps of the brightest single-excitation state:
// N / W(2N sin phase), or N / (log x - log log x) with x = 2N sin phase.
double brightest_decay_prediction(std::size_t n_atoms, double phase, DecayLaw law = DecayLaw::Exact);

// q = |psi_{N/2} / psi_1|^2 for a single-particle vector (1-based sites).
double edge_center_ratio(std::span<const cplx> psi);

struct ScalingRow {
  std::size_t n_atoms = 0;
  double minus_im_eps = 0.0;  // numeric, brightest state
  double eq_exact = 0.0;      // N / W(2N sin phase)
  double eq_asymptotic = 0.0;
  double q = 0.0;
  double qN = 0.0;
  cplx K;                  // dispersion wave vector of the brightest state
  double edge_check = 0.0;  // exp(-(N - 1) Im K) * N * sin(phase), ~1
  std::vector<cplx> wavefunction;
};

// Diagonalizes the single-excitation problem for each (even, >= 20) N and
// tabulates the brightest state's decay and edge-to-centre ratio.
std::vector<ScalingRow> edge_center_scaling(std::span<const std::size_t> sizes, double phase);
// `strict` enforces the even N >= 20 precondition of the scaling table.
ScalingRow scaling_row(std::size_t n_atoms, double phase, bool strict = true);

std::string scaling_csv(std::span<const ScalingRow> rows);
std::string edge_check_csv(std::span<const ScalingRow> rows);

}  // namespace wqed
