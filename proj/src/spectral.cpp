#include "wqed/spectral.hpp"

#include <fmt/format.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wqed/error.hpp"

namespace wqed {

double EigenDecomposition::max_relative_residual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return matrix_norm > 0.0 ? worst / matrix_norm : worst;
}

bool brighter_first(cplx a, cplx b) {
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  return a.real() < b.real();
}

double eig_memory_estimate(std::size_t dim) {
  // input, working copy, right vectors, residual product
  return 4.0 * 16.0 * static_cast<double>(dim) * static_cast<double>(dim);
}

void canonicalize(EigenDecomposition& eig) {
  const std::size_t n = eig.values.size();
  const std::size_t rows = eig.vectors.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return brighter_first(eig.values[i], eig.values[j]);
  });
  EigenDecomposition sorted;
  sorted.matrix_norm = eig.matrix_norm;
  sorted.values.resize(n);
  sorted.vectors = ComplexMatrix(rows, n);
  if (!eig.residuals.empty()) sorted.residuals.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    sorted.values[k] = eig.values[src];
    if (!eig.residuals.empty()) sorted.residuals[k] = eig.residuals[src];
    std::vector<cplx> v = eig.vectors.column(src);
    std::size_t big = 0;
    double big_abs = -1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      // Mirror-symmetric vectors have tied magnitudes; the tolerance keeps the
      // choice on the first of them.
      const double a = std::abs(v[i]);
      if (a > big_abs * (1.0 + 1e-10)) {
        big_abs = a;
        big = i;
      }
    }
    if (big_abs > 0.0) {
      const cplx phase = std::conj(v[big]) / std::abs(v[big]);
      for (auto& z : v) z *= phase;
      v[big] = std::abs(v[big]);
    }
    sorted.vectors.set_column(k, v);
  }
  eig = std::move(sorted);
}

EigenDecomposition eig_dense(const ComplexMatrix& a, std::size_t max_dim) {
  if (!a.square()) throw Error(ErrorCode::Dimension, "eigensolve requires a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) throw Error(ErrorCode::Dimension, "eigensolve of an empty matrix");
  if (n > max_dim)
    throw Error(ErrorCode::Dimension,
                fmt::format("dimension {} exceeds the cap {} (dense solve needs about {:.3g} GiB); "
                            "raise --max-dim to opt in",
                            n, max_dim, eig_memory_estimate(n) / (1024.0 * 1024.0 * 1024.0)));
  if (!a.all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");

  // LAPACK is column-major: pass the transpose of our row-major buffer.
  std::vector<cplx> work(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) work[c * n + r] = a(r, c);
  std::vector<cplx> w(n);
  std::vector<cplx> vr(n * n);
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', ln, reinterpret_cast<lapack_complex_double*>(work.data()),
                    ln, reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, ln,
                    reinterpret_cast<lapack_complex_double*>(vr.data()), ln);
  if (info > 0)
    throw Error(ErrorCode::Convergence,
                fmt::format("QR iteration failed to converge: eigenvalue {} and above not computed",
                            info));
  if (info < 0) throw Error(ErrorCode::InvalidArgument, fmt::format("zgeev argument {} invalid", -info));
  work.clear();
  work.shrink_to_fit();

  EigenDecomposition eig;
  eig.values = std::move(w);
  eig.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = vr[k * n + i];
  vr.clear();
  vr.shrink_to_fit();
  for (std::size_t k = 0; k < n; ++k) {
    auto v = eig.vectors.column(k);
    const double nv = norm2(v);
    for (auto& z : v) z /= nv;
    eig.vectors.set_column(k, v);
  }
  eig.matrix_norm = a.frobenius_norm();
  canonicalize(eig);

  const ComplexMatrix av = a * eig.vectors;
  eig.residuals.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(av(i, k) - eig.values[k] * eig.vectors(i, k));
    eig.residuals[k] = std::sqrt(s);
  }
  const double bound = kResidualTolerance * std::max(eig.matrix_norm, 1e-300);
  for (std::size_t k = 0; k < n; ++k)
    if (!(eig.residuals[k] <= bound))
      throw Error(ErrorCode::Convergence,
                  fmt::format("eigenpair {} failed residual certification ({:.3e} > {:.3e})", k,
                              eig.residuals[k], bound));
  return eig;
}

std::size_t OrthogonalSymmetricDecomposition::resolved_count() const {
  return static_cast<std::size_t>(std::count(resolved.begin(), resolved.end(), true));
}

OrthogonalSymmetricDecomposition decompose_symmetric(const ComplexMatrix& psi) {
  if (!psi.square()) throw Error(ErrorCode::Dimension, "decomposition requires a square matrix");
  if (!psi.is_symmetric(1e-10))
    throw Error(ErrorCode::InvalidArgument, "decomposition requires Psi = Psi^T");
  const std::size_t n = psi.rows();
  const EigenDecomposition eig = eig_dense(psi);
  const double scale = psi.frobenius_norm();

  OrthogonalSymmetricDecomposition dec;
  std::vector<cplx> lambdas(n);
  ComplexMatrix vecs(n, n);
  std::vector<bool> resolved(n, true);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cplx> v = eig.vectors.column(k);
    cplx sq{0.0, 0.0};
    double conj_sq = 0.0;
    for (const auto& z : v) {
      sq += z * z;
      conj_sq += std::norm(z);
    }
    lambdas[k] = eig.values[k];
    if (std::abs(sq) < kQuasiNullThreshold * conj_sq) {
      resolved[k] = false;
    } else {
      const cplx root = std::sqrt(sq);
      std::size_t big = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (std::abs(v[i]) > std::abs(v[big]) * (1.0 + 1e-10)) big = i;
      for (auto& z : v) z /= root;
      const double arg = std::arg(v[big]);
      if (!(arg > -std::numbers::pi / 2 && arg <= std::numbers::pi / 2))
        for (auto& z : v) z = -z;
    }
    vecs.set_column(k, v);
  }
  for (std::size_t i = 0; i < n && !dec.near_defective; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(lambdas[i] - lambdas[j]) < 1e-10 * scale) {
        dec.near_defective = true;
        break;
      }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(lambdas[i]) > std::abs(lambdas[j]); });
  dec.lambdas.resize(n);
  dec.vectors = ComplexMatrix(n, n);
  dec.resolved.resize(n);
  dec.parity.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    dec.lambdas[k] = lambdas[order[k]];
    dec.resolved[k] = resolved[order[k]];
    const auto v = vecs.column(order[k]);
    dec.vectors.set_column(k, v);
    dec.parity[k] = parity_of(std::span<const cplx>(v));
  }
  return dec;
}

ComplexMatrix partial_reconstruction(const OrthogonalSymmetricDecomposition& dec, std::size_t k) {
  const std::size_t available = dec.resolved_count();
  if (k < 1 || k > available)
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("truncation order {} outside [1, {}]", k, available));
  const std::size_t n = dec.vectors.rows();
  ComplexMatrix out(n, n);
  std::size_t used = 0;
  for (std::size_t t = 0; t < dec.size() && used < k; ++t) {
    if (!dec.resolved[t]) continue;
    ++used;
    for (std::size_t r = 0; r < n; ++r) {
      const cplx lr = dec.lambdas[t] * dec.vectors(r, t);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += lr * dec.vectors(c, t);
    }
  }
  return out;
}

ComplexMatrix truncate_decomposition(const OrthogonalSymmetricDecomposition& dec, std::size_t k) {
  ComplexMatrix out = partial_reconstruction(dec, k);
  const double nrm = out.frobenius_norm();
  if (nrm == 0.0) throw Error(ErrorCode::Singular, "truncated reconstruction vanishes");
  for (auto& z : out.data()) z /= nrm;
  return out;
}

double truncation_error(const OrthogonalSymmetricDecomposition& dec, const ComplexMatrix& psi,
                        std::size_t k) {
  return (psi - partial_reconstruction(dec, k)).frobenius_norm() / psi.frobenius_norm();
}

double unconjugated_orthogonality_defect(const OrthogonalSymmetricDecomposition& dec) {
  const std::size_t n = dec.vectors.rows();
  double worst = 0.0;
  for (std::size_t a = 0; a < dec.size(); ++a) {
    if (!dec.resolved[a]) continue;
    for (std::size_t b = a; b < dec.size(); ++b) {
      if (!dec.resolved[b]) continue;
      cplx s{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) s += dec.vectors(i, a) * dec.vectors(i, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

std::vector<double> fourier_grid(std::size_t n) {
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j)
    k[j] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return k;
}

namespace {

// E(j, m) = exp(-i k_j (m + 1)), m 0-based.
ComplexMatrix phase_matrix(std::size_t n) {
  const auto k = fourier_grid(n);
  ComplexMatrix e(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m) e(j, m) = std::polar(1.0, -k[j] * static_cast<double>(m + 1));
  return e;
}

ComplexMatrix conj(const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (auto& z : out.data()) z = std::conj(z);
  return out;
}

}  // namespace

ComplexMatrix fourier2d(const ComplexMatrix& psi) {
  if (!psi.square()) throw Error(ErrorCode::Dimension, "Fourier map requires a square matrix");
  const ComplexMatrix e = phase_matrix(psi.rows());
  return e * psi * e.transpose();
}

ComplexMatrix inverse_fourier2d(const ComplexMatrix& map) {
  if (!map.square()) throw Error(ErrorCode::Dimension, "Fourier map must be square");
  const std::size_t n = map.rows();
  const ComplexMatrix eh = conj(phase_matrix(n)).transpose();
  ComplexMatrix out = eh * map * eh.transpose();
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (auto& z : out.data()) z *= scale;
  return out;
}

double fourier_weight_near(const ComplexMatrix& map, double k0, double radius) {
  const auto k = fourier_grid(map.rows());
  auto near = [&](double kx, double centre) {
    return std::abs(std::remainder(kx - centre, 2.0 * std::numbers::pi)) <= radius;
  };
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < map.rows(); ++j)
    for (std::size_t l = 0; l < map.cols(); ++l) {
      const double w = std::norm(map(j, l));
      total += w;
      const bool x_near = near(k[j], k0) || near(k[j], -k0);
      const bool y_near = near(k[l], k0) || near(k[l], -k0);
      if (x_near && y_near) inside += w;
    }
  return total > 0.0 ? inside / total : 0.0;
}

}  // namespace wqed
