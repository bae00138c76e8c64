#pragma once

#include <cstddef>
#include <vector>

#include "wqed/matrix.hpp"
#include "wqed/observables.hpp"

namespace wqed {

inline constexpr std::size_t kDefaultMaxDim = 20000;
inline constexpr double kResidualTolerance = 1e-9;  // relative to ||A||_F

// Right eigenpairs, brightest (largest -Im) first. Columns of `vectors` have
// unit Euclidean norm; residuals[k] = ||A v_k - lambda_k v_k||_2.
struct EigenDecomposition {
  std::vector<cplx> values;
  ComplexMatrix vectors;
  std::vector<double> residuals;
  double matrix_norm = 0.0;  // ||A||_F

  std::size_t size() const noexcept { return values.size(); }
  double max_relative_residual() const;
};

// Ordering key: descending -Im, ties by ascending Re.
bool brighter_first(cplx a, cplx b);

// Bytes a dense eigensolve of dimension `dim` needs (matrix, vectors, copies).
double eig_memory_estimate(std::size_t dim);

// Dense non-Hermitian eigensolve with residual certification.
EigenDecomposition eig_dense(const ComplexMatrix& a, std::size_t max_dim = kDefaultMaxDim);

// Sorts the pairs brightest first and fixes each vector's phase so that its
// first largest-magnitude component is real positive.
void canonicalize(EigenDecomposition& eig);

// Psi = sum_nu lambda_nu psi^nu (psi^nu)^T with sum_n (psi_n^nu)^2 = 1.
struct OrthogonalSymmetricDecomposition {
  std::vector<cplx> lambdas;  // descending |lambda|
  ComplexMatrix vectors;      // one column per term
  std::vector<ParityResult> parity;
  std::vector<bool> resolved;  // false for quasi-null (isotropic) vectors
  bool near_defective = false;

  std::size_t size() const noexcept { return lambdas.size(); }
  std::size_t resolved_count() const;
};

inline constexpr double kQuasiNullThreshold = 1e-10;

OrthogonalSymmetricDecomposition decompose_symmetric(const ComplexMatrix& psi);

// Sum of the first k resolved terms, without renormalization.
ComplexMatrix partial_reconstruction(const OrthogonalSymmetricDecomposition& dec, std::size_t k);
// Same, renormalized to unit Frobenius norm.
ComplexMatrix truncate_decomposition(const OrthogonalSymmetricDecomposition& dec, std::size_t k);
// ||Psi - partial_reconstruction(k)||_F / ||Psi||_F
double truncation_error(const OrthogonalSymmetricDecomposition& dec, const ComplexMatrix& psi,
                        std::size_t k);
// max |sum_n psi_n^nu psi_n^mu - delta| over resolved terms.
double unconjugated_orthogonality_defect(const OrthogonalSymmetricDecomposition& dec);

// k_j = -pi + 2 pi j / N, j = 0..N-1
std::vector<double> fourier_grid(std::size_t n);

// F(j, l) = sum_{m,n=1..N} exp(-i k_j m - i k_l n) Psi_mn
ComplexMatrix fourier2d(const ComplexMatrix& psi);
ComplexMatrix inverse_fourier2d(const ComplexMatrix& map);

// Fraction of sum |F|^2 within `radius` (max-norm) of the points (+-k0, +-k0).
double fourier_weight_near(const ComplexMatrix& map, double k0, double radius);

}  // namespace wqed
