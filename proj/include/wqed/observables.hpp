#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/matrix.hpp"

namespace wqed {

// A two-excitation eigenstate. Amplitudes form a symmetric N x N matrix with
// zero diagonal normalized over the full (n, m) grid.
struct TwoExcitationState {
  cplx energy;  // per excitation
  ComplexMatrix amplitudes;
  std::size_t eigen_index = 0;

  std::size_t n_atoms() const noexcept { return amplitudes.rows(); }
};

// Expands a unit-norm pair-basis vector (lexicographic pairs) into the
// symmetric amplitude matrix Psi_nm = Psi_mn = c_(n,m) / sqrt(2).
ComplexMatrix amplitudes_from_pair_vector(std::span<const cplx> pair_vector, std::size_t n_atoms);
TwoExcitationState make_state(std::span<const cplx> pair_vector, std::size_t n_atoms,
                              cplx energy, std::size_t eigen_index = 0);

// sum_{n,m} |n - m| |Psi_nm|^2
double photon_distance(const ComplexMatrix& psi);

enum class Parity { Even, Odd, Mixed };

std::string_view to_string(Parity p);

struct ParityResult {
  Parity label = Parity::Mixed;
  double score = 0.0;  // |<mirror(v), v>| / <v, v>
};

inline constexpr double kParityThreshold = 0.99;

// Mirror parity n -> N + 1 - n of a single-particle vector.
ParityResult parity_of(std::span<const cplx> vec);
// Mirror parity of a two-particle amplitude matrix (mirror on both indices).
ParityResult parity_of(const ComplexMatrix& psi);

// Rotates the columns `first`, `second` of `vectors` (unit-norm, nearly
// degenerate eigenvectors) into mirror-adapted combinations.
void remix_degenerate_pair(ComplexMatrix& vectors, std::size_t first, std::size_t second);

std::size_t default_edge_width(std::size_t n_atoms);

// Fraction of |Psi|^2 with both coordinates within `width` sites of an edge.
double edge_mass(const ComplexMatrix& psi, std::size_t width);

// Inverse participation ratio of the centre-of-mass distribution
// P(s) = sum_{n+m=s} |Psi_nm|^2.
double center_of_mass_ipr(const ComplexMatrix& psi);

enum class StateLabel {
  Scattering,
  Fermionized,
  BoundPair,
  EdgeBoundPair,
  InteractionLocalized,
  DistantBound,
  Unclassified,
};

std::string_view to_string(StateLabel label);

// Heuristic thresholds for the two-photon taxonomy. These are engineering
// defaults, tunable from the run configuration.
struct ClassifierThresholds {
  double distant_fraction = 0.6;  // rho >= fraction * (N - 1)
  double bound_distance = 3.0;    // rho <= bound_distance
  double edge_mass = 0.5;
};

// Fermionized and interaction-localized labels have no detector yet and are
// never produced here.
StateLabel classify(double rho, double edge, std::size_t n_atoms,
                    const ClassifierThresholds& t = {});

struct SpectrumRecord {
  std::size_t index = 0;
  cplx energy;
  double rho = 0.0;
  ParityResult parity;
  double edge_mass = 0.0;
  StateLabel label = StateLabel::Unclassified;
};

SpectrumRecord summarize(const TwoExcitationState& state, std::size_t edge_width,
                         const ClassifierThresholds& t = {});

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::size_t> counts;

  std::size_t mode_bin() const;
  double bin_center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
};

// Uniform bins on [0, N - 1].
Histogram distance_histogram(std::span<const double> rhos, std::size_t n_atoms, std::size_t bins = 60);
Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins);

std::string spectrum_csv(std::span<const SpectrumRecord> records);
std::string histogram_csv(const Histogram& h);

}  // namespace wqed
