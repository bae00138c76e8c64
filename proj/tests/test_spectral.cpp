#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wqed/error.hpp"
#include "wqed/lattice.hpp"
#include "wqed/solver.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;

namespace {

cplx trace(const ComplexMatrix& a) {
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

}  // namespace

TEST_CASE("diagonal matrix") {
  ComplexMatrix a(2, 2);
  a(0, 0) = {1, 2};
  a(1, 1) = {3, 0};
  const auto eig = eig_dense(a);
  REQUIRE(eig.size() == 2);
  CHECK(std::abs(eig.values[0] - cplx{3, 0}) < 1e-14);
  CHECK(std::abs(eig.values[1] - cplx{1, 2}) < 1e-14);
  CHECK(std::abs(eig.vectors(1, 0) - 1.0) < 1e-14);
  CHECK(std::abs(eig.vectors(0, 1) - 1.0) < 1e-14);
}

TEST_CASE("two-atom single-excitation closed form") {
  const auto eig = eig_dense(build_single_hamiltonian(ArrayConfig::clean(2, 1.0)));
  const cplx i{0, 1};
  const cplx plus = -i * (1.0 + std::exp(i));
  const cplx minus = -i * (1.0 - std::exp(i));
  // -Im(plus) = 1 + cos 1 is the larger decay
  CHECK(std::abs(eig.values[0] - plus) < 1e-12);
  CHECK(std::abs(eig.values[1] - minus) < 1e-12);
}

TEST_CASE("residual certification, ordering and trace on random matrices") {
  std::mt19937_64 rng(21);
  for (std::size_t n : {1u, 3u, 10u, 40u}) {
    const auto a = testing::random_matrix(n, n, rng);
    const auto eig = eig_dense(a);
    REQUIRE(eig.size() == n);
    cplx sum{};
    for (std::size_t k = 0; k < n; ++k) {
      sum += eig.values[k];
      CHECK(eig.residuals[k] <= kResidualTolerance * eig.matrix_norm);
      CHECK(norm2(eig.vectors.column(k)) == doctest::Approx(1.0).epsilon(1e-12));
      if (k > 0) CHECK_FALSE(brighter_first(eig.values[k], eig.values[k - 1]));
    }
    CHECK(std::abs(sum - trace(a)) <= 1e-8 * a.frobenius_norm());
    CHECK(eig.max_relative_residual() <= kResidualTolerance);
  }
}

TEST_CASE("canonical phase: largest entry real positive") {
  std::mt19937_64 rng(22);
  const auto eig = eig_dense(testing::random_matrix(12, 12, rng));
  for (std::size_t k = 0; k < eig.size(); ++k) {
    const auto v = eig.vectors.column(k);
    std::size_t big = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[big]) * (1 + 1e-10)) big = i;
    CHECK(std::abs(v[big].imag()) < 1e-12);
    CHECK(v[big].real() > 0);
  }
}

TEST_CASE("eigensolve preconditions") {
  CHECK_THROWS_AS(eig_dense(ComplexMatrix(2, 3)), Error);
  ComplexMatrix bad(2, 2);
  bad(0, 1) = {NAN, 0};
  CHECK_THROWS_AS(eig_dense(bad), Error);
  try {
    eig_dense(ComplexMatrix(30, 30), 20);
    FAIL("cap not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Dimension);
    CHECK(std::string(e.what()).find("GiB") != std::string::npos);
  }
  CHECK(eig_memory_estimate(19900) > 20.0 * (1u << 30));
}

TEST_CASE("three-atom pair spectrum matches the oracle projection") {
  std::mt19937_64 rng(23);
  for (int draw = 0; draw < 10; ++draw) {
    const auto cfg = draw == 0 ? ArrayConfig::clean(3, 1.0) : testing::random_config(3, rng);
    const auto a = eig_dense(build_pair_hamiltonian(cfg, PairBasis(3)));
    const auto b = eig_dense(oracle_full_space(cfg));
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a.values[k] - b.values[k]) < 1e-10);
  }
}

TEST_CASE("mirror-block pair solve agrees with the full solve") {
  for (std::size_t n : {3u, 4u, 7u, 10u}) {
    const auto cfg = ArrayConfig::clean(n, 0.8);
    const auto blocks = solve_pair(cfg, kDefaultMaxDim, true);
    const auto full = solve_pair(cfg, kDefaultMaxDim, false);
    CHECK(blocks.mirror_blocks);
    REQUIRE(blocks.size() == full.size());
    for (std::size_t k = 0; k < full.size(); ++k) CHECK(std::abs(blocks.eig.values[k] - full.eig.values[k]) < 1e-10);
    const auto h = build_pair_hamiltonian(cfg, PairBasis(n));
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const auto v = blocks.eig.vectors.column(k);
      auto r = h * std::span<const cplx>(v);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= blocks.eig.values[k] * v[i];
      CHECK(norm2(r) <= kResidualTolerance * h.frobenius_norm());
    }
  }
  auto cfg = ArrayConfig::clean(5, 1.0);
  cfg.disorder = {0.3, -0.1, -0.1, 0.3};
  CHECK(is_mirror_symmetric(cfg));
  cfg.disorder = {0.3, -0.1, 0.2, 0.3};
  CHECK_FALSE(is_mirror_symmetric(cfg));
  CHECK_FALSE(solve_pair(cfg).mirror_blocks);
}

TEST_CASE("pair eigenvectors are unconjugated-orthogonal") {
  const auto spec = solve_pair(ArrayConfig::clean(8, 1.0));
  const std::size_t d = spec.size();
  std::vector<std::vector<cplx>> u;
  for (std::size_t k = 0; k < d; ++k) {
    auto v = spec.eig.vectors.column(k);
    cplx s{};
    for (const auto& x : v) s += x * x;
    REQUIRE(std::abs(s) > kQuasiNullThreshold);
    const cplx root = std::sqrt(s);
    for (auto& x : v) x /= root;
    u.push_back(std::move(v));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      cplx s{};
      for (std::size_t i = 0; i < u[a].size(); ++i) s += u[a][i] * u[b][i];
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("decomposition examples") {
  ComplexMatrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = cplx{0, 1};
  auto dec = decompose_symmetric(d);
  CHECK(std::abs(dec.lambdas[0] - 2.0) < 1e-14);
  CHECK(std::abs(dec.lambdas[1] - cplx{0, 1}) < 1e-14);
  CHECK(std::abs(dec.vectors(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(dec.vectors(1, 1) - 1.0) < 1e-14);

  ComplexMatrix x(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  dec = decompose_symmetric(x);
  const double h = 1.0 / std::sqrt(2.0);
  REQUIRE(dec.size() == 2);
  // |lambda| ties: order by the eigen-ordering
  for (std::size_t t = 0; t < 2; ++t) {
    if (std::abs(dec.lambdas[t] - 1.0) < 1e-12) {
      CHECK(std::abs(dec.vectors(0, t) - h) < 1e-12);
      CHECK(std::abs(dec.vectors(1, t) - h) < 1e-12);
    } else {
      CHECK(std::abs(dec.lambdas[t] + 1.0) < 1e-12);
      CHECK(std::abs(dec.vectors(0, t) * dec.vectors(1, t) + 0.5) < 1e-12);
    }
  }
  CHECK_THROWS_AS(decompose_symmetric(ComplexMatrix(2, 3)), Error);
  ComplexMatrix asym(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(decompose_symmetric(asym), Error);
}

TEST_CASE("rank-one a a^T recovers a") {
  std::mt19937_64 rng(24);
  const auto col = testing::random_matrix(6, 1, rng);
  std::vector<cplx> a = col.column(0);
  cplx s{};
  for (const auto& z : a) s += z * z;
  const cplx root = std::sqrt(s);
  for (auto& z : a) z /= root;
  ComplexMatrix psi(6, 6);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) psi(r, c) = a[r] * a[c];
  const auto dec = decompose_symmetric(psi);
  CHECK(std::abs(dec.lambdas[0] - 1.0) < 1e-10);
  const double sign = std::real(dec.vectors(0, 0) / a[0]) > 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(dec.vectors(i, 0) - sign * a[i]) < 1e-8);
  CHECK(truncation_error(dec, psi, 1) < 1e-8);
}

TEST_CASE("rank-two truncation error") {
  const std::size_t n = 5;
  const cplx l1{2.0, 1.0}, l2{0.5, -0.7};
  const double want = std::abs(l2) / std::sqrt(std::norm(l1) + std::norm(l2));

  ComplexMatrix psi(n, n);
  psi(0, 0) = l1;
  psi(1, 1) = l2;
  const auto dec = decompose_symmetric(psi);
  CHECK(truncation_error(dec, psi, 1) == doctest::Approx(want).epsilon(1e-12));
  const auto tr = truncate_decomposition(dec, 1);
  CHECK(tr.frobenius_norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(truncate_decomposition(dec, n + 1), Error);
  CHECK_THROWS_AS(truncate_decomposition(dec, 0), Error);

  // complex rotation: terms stay unconjugated-orthonormal but not unitary
  const cplx t{0.3, 0.4};
  std::vector<cplx> u(n), w(n);
  u[0] = std::cos(t);
  u[1] = std::sin(t);
  w[0] = -std::sin(t);
  w[1] = std::cos(t);
  ComplexMatrix rot(n, n), one(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      one(r, c) = l1 * u[r] * u[c];
      rot(r, c) = one(r, c) + l2 * w[r] * w[c];
    }
  const auto dec_rot = decompose_symmetric(rot);
  CHECK(std::abs(dec_rot.lambdas[0] - l1) < 1e-10);
  CHECK(std::abs(dec_rot.lambdas[1] - l2) < 1e-10);
  CHECK(truncation_error(dec_rot, rot, 1) ==
        doctest::Approx((rot - one).frobenius_norm() / rot.frobenius_norm()).epsilon(1e-8));
}

TEST_CASE("decompose then reconstruct on random symmetric matrices") {
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = testing::random_symmetric(size(rng), rng);
    const auto dec = decompose_symmetric(psi);
    CHECK(dec.resolved_count() == dec.size());
    CHECK(truncation_error(dec, psi, dec.size()) <= 1e-8);
    CHECK(unconjugated_orthogonality_defect(dec) <= 1e-8);
    for (std::size_t t = 1; t < dec.size(); ++t) CHECK(std::abs(dec.lambdas[t]) <= std::abs(dec.lambdas[t - 1]));
    for (std::size_t t = 0; t < dec.size(); ++t) {
      std::size_t big = 0;
      for (std::size_t i = 1; i < dec.vectors.rows(); ++i)
        if (std::abs(dec.vectors(i, t)) > std::abs(dec.vectors(big, t))) big = i;
      const double arg = std::arg(dec.vectors(big, t));
      CHECK(arg > -std::numbers::pi / 2 - 1e-12);
      CHECK(arg <= std::numbers::pi / 2 + 1e-12);
    }
  }
}

TEST_CASE("isotropic vectors are flagged unresolved") {
  // (1, i) has sum v^2 = 0
  ComplexMatrix psi(2, 2);
  psi(0, 0) = 1.0;
  psi(0, 1) = psi(1, 0) = cplx{0, 1};
  psi(1, 1) = -1.0;
  const auto dec = decompose_symmetric(psi);
  CHECK(dec.resolved_count() < dec.size());
}

TEST_CASE("Fourier map examples") {
  const std::size_t n = 16;
  const auto grid = fourier_grid(n);
  CHECK(grid.front() == doctest::Approx(-std::numbers::pi));
  CHECK(grid[1] - grid[0] == doctest::Approx(2 * std::numbers::pi / n));

  ComplexMatrix point(n, n);
  point(0, 0) = 1.0;
  const auto flat = fourier2d(point);
  for (const auto& z : flat.data()) CHECK(std::abs(z) == doctest::Approx(1.0));

  const double phi = 1.0;
  ComplexMatrix wave(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t l = 0; l < n; ++l) wave(m, l) = std::exp(cplx{0, phi * static_cast<double>(m + l + 2)});
  const auto map = fourier2d(wave);
  std::size_t bj = 0, bl = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      if (std::abs(map(j, l)) > std::abs(map(bj, bl))) {
        bj = j;
        bl = l;
      }
  std::size_t nearest = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(grid[j] - phi) < std::abs(grid[nearest] - phi)) nearest = j;
  CHECK(bj == nearest);
  CHECK(bl == nearest);
  CHECK(fourier_weight_near(map, phi, 0.5) > 0.5);
}

TEST_CASE("Fourier map is linear and invertible") {
  std::mt19937_64 rng(27);
  for (std::size_t n : {5u, 12u, 31u}) {
    const auto a = testing::random_matrix(n, n, rng);
    const auto b = testing::random_matrix(n, n, rng);
    CHECK(max_abs_diff(inverse_fourier2d(fourier2d(a)), a) <= 1e-10);
    ComplexMatrix s(n, n);
    for (std::size_t i = 0; i < n * n; ++i) s.data()[i] = a.data()[i] + cplx{0, 2} * b.data()[i];
    ComplexMatrix lin = fourier2d(a);
    const auto fb = fourier2d(b);
    for (std::size_t i = 0; i < n * n; ++i) lin.data()[i] += cplx{0, 2} * fb.data()[i];
    CHECK(max_abs_diff(fourier2d(s), lin) <= 1e-9);
  }
}

TEST_CASE("Fourier weight box uses the periodic max-norm") {
  const std::size_t n = 40;
  const auto grid = fourier_grid(n);
  ComplexMatrix map(n, n);
  map(0, 0) = 1.0;  // (-pi, -pi)
  CHECK(fourier_weight_near(map, std::numbers::pi, 0.1) == doctest::Approx(1.0));
  CHECK(fourier_weight_near(map, 1.0, 0.3) == doctest::Approx(0.0));
  (void)grid;
}
