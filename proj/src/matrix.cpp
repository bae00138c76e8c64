#include "wqed/matrix.hpp"

#include <cblas.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "wqed/error.hpp"
#include "wqed/io.hpp"

namespace wqed {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw Error(ErrorCode::Dimension,
                fmt::format("matrix data length {} does not match {}x{}", data_.size(), rows_, cols_));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<cplx> ComplexMatrix::column(std::size_t c) const {
  std::vector<cplx> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const cplx> v) {
  if (v.size() != rows_) throw Error(ErrorCode::Dimension, "column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double ComplexMatrix::frobenius_norm() const { return norm2(data_); }

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool ComplexMatrix::is_symmetric(double rel_tol) const {
  if (!square()) return false;
  const double scale = std::max(frobenius_norm(), 1e-300);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if (std::abs((*this)(r, c) - (*this)(c, r)) > rel_tol * scale) return false;
  return true;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::Dimension, "matrix product shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) return out;
  const cplx one{1.0, 0.0};
  const cplx zero{0.0, 0.0};
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
              static_cast<int>(b.cols()), static_cast<int>(a.cols()), &one, a.data().data(),
              static_cast<int>(a.cols()), b.data().data(), static_cast<int>(b.cols()), &zero,
              out.data().data(), static_cast<int>(out.cols()));
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::Dimension, "matrix difference shape mismatch");
  ComplexMatrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) throw Error(ErrorCode::Dimension, "matrix-vector shape mismatch");
  std::vector<cplx> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cplx acc{0.0, 0.0};
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::Dimension, "matrix comparison shape mismatch");
  double worst = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) worst = std::max(worst, std::abs(ad[i] - bd[i]));
  return worst;
}

double norm2(std::span<const cplx> v) {
  // Scaled accumulation keeps tiny and huge entries from under/overflowing.
  double scale = 0.0;
  for (const auto& z : v) scale = std::max({scale, std::abs(z.real()), std::abs(z.imag())});
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z / scale);
  return scale * std::sqrt(sum);
}

std::string to_json(const ComplexMatrix& m) {
  std::string s = fmt::format("{{\"rows\":{},\"cols\":{},\"data\":[", m.rows(), m.cols());
  bool first = true;
  for (const auto& z : m.data()) {
    if (!first) s += ',';
    first = false;
    s += io::fmt_double(z.real());
    s += ',';
    s += io::fmt_double(z.imag());
  }
  s += "]}";
  return s;
}

ComplexMatrix matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("matrix JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(ErrorCode::InvalidArgument, "matrix JSON requires rows, cols and data");
  const auto rows = j["rows"].get<std::size_t>();
  const auto cols = j["cols"].get<std::size_t>();
  const auto& data = j["data"];
  if (!data.is_array() || data.size() != 2 * rows * cols)
    throw Error(ErrorCode::Dimension, "matrix JSON data length does not match rows*cols*2");
  std::vector<cplx> entries(rows * cols);
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i] = {data[2 * i].get<double>(), data[2 * i + 1].get<double>()};
  return ComplexMatrix(rows, cols, std::move(entries));
}

void write_csv(const ComplexMatrix& m, const std::filesystem::path& real_path,
               const std::filesystem::path& imag_path) {
  std::string re;
  std::string im;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) {
        re += ',';
        im += ',';
      }
      re += io::fmt_double(m(r, c).real());
      im += io::fmt_double(m(r, c).imag());
    }
    re += '\n';
    im += '\n';
  }
  io::write_text(real_path, re);
  io::write_text(imag_path, im);
}

}  // namespace wqed
