#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wqed {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Carrier for Hamiltonians, two-photon
// amplitude matrices and eigenvector stacks (one vector per column).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  std::vector<cplx> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const cplx> v);

  ComplexMatrix transpose() const;
  double frobenius_norm() const;
  bool all_finite() const;

  // Unconjugated symmetry M = M^T within rel_tol * ||M||_F.
  bool is_symmetric(double rel_tol = 1e-12) const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double norm2(std::span<const cplx> v);

// JSON descriptor {"rows","cols","data":[re,im,...]} with 17 significant digits.
std::string to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

// Two row-major CSV files, one for real parts and one for imaginary parts.
void write_csv(const ComplexMatrix& m, const std::filesystem::path& real_path,
               const std::filesystem::path& imag_path);

}  // namespace wqed
