#pragma once

#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wqed/lattice.hpp"
#include "wqed/matrix.hpp"

namespace testing {

using wqed::ComplexMatrix;
using wqed::cplx;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) z = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix m = random_matrix(n, n, rng);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < r; ++c) m(r, c) = m(c, r);
  return m;
}

inline ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

inline wqed::ArrayConfig random_config(std::size_t n, std::mt19937_64& rng, double chi_scale = 2.0) {
  std::uniform_real_distribution<double> phase(0.05, 3.1);
  std::uniform_real_distribution<double> chi(-chi_scale, chi_scale);
  wqed::ArrayConfig cfg = wqed::ArrayConfig::clean(n, phase(rng));
  cfg.disorder.resize(n - 1);
  for (auto& x : cfg.disorder) x = chi(rng);
  return cfg;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("wqed_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
