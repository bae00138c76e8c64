#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wqed/analytics.hpp"
#include "wqed/ensemble.hpp"
#include "wqed/error.hpp"
#include "wqed/solver.hpp"

using namespace wqed;

namespace {

// Bisection on w e^w = x, independent of the Halley solver.
double lambert_bisect(double x) {
  double lo = 0.0, hi = std::max(1.0, std::log(x + 1.0) + 1.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("dispersion round trip") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> re(-5, 5), im(-5, 0.5);
  for (double phi : {0.5, 1.0, 2.0})
    for (int i = 0; i < 300; ++i) {
      const cplx eps{re(rng), im(rng)};
      const cplx k = dispersion_K(eps, phi);
      CHECK(k.imag() >= 0.0);
      CHECK(std::abs(dispersion_energy(k, phi) - eps) <= 1e-10 * std::max(1.0, std::abs(eps)));
    }
}

TEST_CASE("dispersion special points") {
  const double phi = 1.0;
  // cos K = cos(phi) + sin(phi) / eps vanishes at eps = -tan(phi)
  const cplx k = dispersion_K(-std::tan(phi), phi);
  CHECK(std::abs(k - std::numbers::pi / 2) < 1e-12);
  CHECK_THROWS_AS(dispersion_K(0.0, phi), Error);
  CHECK_THROWS_AS(dispersion_K(1.0, 0.0), Error);
  CHECK_THROWS_AS(dispersion_energy(phi, phi), Error);
  // large |eps| approaches the light line K -> phi
  CHECK(std::abs(dispersion_K(1e9, phi) - phi) < 1e-6);
}

TEST_CASE("reflection coefficient") {
  const double phi = 1.0;
  CHECK_THROWS_AS(reflection_r(-phi, phi), Error);
  // r(phi) = 0: no reflection on the light line
  CHECK(std::abs(reflection_r(phi, phi)) < 1e-15);
  const cplx k{0.4, 0.2};
  const cplx i{0, 1};
  const cplx want = -(1.0 - std::exp(i * (phi - k))) / (1.0 - std::exp(i * (phi + k)));
  CHECK(std::abs(reflection_r(k, phi) - want) < 1e-15);
}

TEST_CASE("even single-particle modes satisfy the Fabry-Perot condition") {
  for (std::size_t n : {10u, 24u, 50u}) {
    const auto spec = solve_single(ArrayConfig::clean(n, 1.0));
    std::size_t checked = 0;
    for (std::size_t k = 0; k < spec.eig.size() && checked < 5; ++k) {
      if (spec.parity[k].label != Parity::Even) continue;
      CHECK(fabry_perot_residual(spec.eig.values[k], n, 1.0) < 1e-6);
      ++checked;
    }
    CHECK(checked == 5);
  }
}

TEST_CASE("Lambert W") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-15));
  CHECK(lambert_w0(10.0) == doctest::Approx(1.7455280027406994).epsilon(1e-15));
  for (int e = -6; e <= 6; ++e)
    for (double m : {1.0, 2.5, 7.0}) {
      const double x = m * std::pow(10.0, e);
      const double w = lambert_w0(x);
      CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, x));
      CHECK(w == doctest::Approx(lambert_bisect(x)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(lambert_w0(-0.1), Error);
  CHECK_THROWS_AS(lambert_w0(NAN), Error);
}

TEST_CASE("brightest-state decay laws") {
  CHECK(brightest_decay_prediction(200, 1.0) == doctest::Approx(45.988315285033096).epsilon(1e-12));
  CHECK(brightest_decay_prediction(50, 1.0) == doctest::Approx(15.370467803086642).epsilon(1e-12));
  CHECK(brightest_decay_prediction(200, 1.0, DecayLaw::Asymptotic) ==
        doctest::Approx(49.288322255998246).epsilon(1e-12));
  const double x = 2.0 * 100 * std::sin(1.0);
  CHECK(brightest_decay_prediction(100, 1.0) == doctest::Approx(100.0 / lambert_bisect(x)).epsilon(1e-12));
  CHECK_THROWS_AS(brightest_decay_prediction(10, 0.0), Error);
  CHECK_THROWS_AS(brightest_decay_prediction(10, -1.0), Error);
  CHECK_THROWS_AS(brightest_decay_prediction(1, 1.0), Error);
}

TEST_CASE("edge-to-centre ratio") {
  const std::vector<cplx> psi{2.0, 0.5, 1.0, 0.5, 0.5, 2.0};
  // |psi_3|^2 / |psi_1|^2 for N = 6
  CHECK(edge_center_ratio(psi) == doctest::Approx(0.25));
  CHECK_THROWS_AS(edge_center_ratio(std::vector<cplx>{0.0, 1.0}), Error);
  CHECK_THROWS_AS(scaling_row(21, 1.0), Error);
  CHECK_THROWS_AS(scaling_row(18, 1.0), Error);
  CHECK_NOTHROW(scaling_row(18, 1.0, false));
}

TEST_CASE("size sweep trends") {
  const std::vector<std::size_t> sizes{16, 32, 64};
  const std::vector<SizeTask> tasks{SizeTask::Decay};
  const auto res = size_sweep(sizes, 1.0, tasks);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].minus_im_eps < res.rows[1].minus_im_eps);
  CHECK(res.rows[1].minus_im_eps < res.rows[2].minus_im_eps);
  CHECK(res.pair.empty());

  const auto& psi = res.rows[0].wavefunction;
  std::size_t argmax = 0, argmin = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (std::abs(psi[i]) > std::abs(psi[argmax]) + 1e-12) argmax = i;
    if (std::abs(psi[i]) < std::abs(psi[argmin]) - 1e-12) argmin = i;
  }
  CHECK((argmax == 0 || argmax == 15));
  CHECK(std::abs(std::abs(psi[0]) - std::abs(psi[15])) < 1e-10);
  CHECK(argmin >= 4);
  CHECK(argmin <= 11);

  CHECK(size_sweep(sizes, 1.0, std::vector<SizeTask>{}).rows.empty());
  CHECK_THROWS_AS(size_sweep(std::vector<std::size_t>{32, 16}, 1.0, tasks), Error);
}

TEST_CASE("scaling csv columns") {
  const std::vector<std::size_t> sizes{20};
  const auto rows = edge_center_scaling(sizes, 1.0);
  const auto csv = scaling_csv(rows);
  CHECK(csv.rfind("N,minus_im_eps_numeric,decay_lambert,decay_asymptotic,q,qN\n20,", 0) == 0);
  CHECK(edge_check_csv(rows).rfind("N,re_K,im_K,edge_check\n20,", 0) == 0);
}
