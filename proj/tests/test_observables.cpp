#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cvbeam/detection.hpp"
#include "cvbeam/observables.hpp"
#include "cvbeam/states.hpp"

using cvbeam::build;
using cvbeam::Complex;
using cvbeam::Dof;
using cvbeam::GaussianState;
using cvbeam::QuadraticObservable;

namespace {

GaussianState coherent2(Complex a0, Complex a1) {
  return displace(displace(GaussianState(2), 0, a0), 1, a1);
}

}  // namespace

TEST_CASE("quadrature and photon-number statistics on basic states") {
  const auto x0 = QuadraticObservable::quadrature(1, 0);
  const auto vac = cvbeam::quadratic_stats(GaussianState(1), x0);
  CHECK(vac.mean == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vac.variance == doctest::Approx(1.0).epsilon(1e-14));

  const GaussianState one = displace(GaussianState(1), 0, Complex(1, 0));
  const auto n = QuadraticObservable::photon_number(1, {0});
  const auto poisson = cvbeam::quadratic_stats(one, n);
  CHECK(poisson.mean == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(poisson.variance == doctest::Approx(1.0).epsilon(1e-13));

  const auto dark = cvbeam::quadratic_stats(GaussianState(1), n);
  CHECK(std::abs(dark.mean) < 1e-14);
  CHECK(std::abs(dark.variance) < 1e-14);

  const GaussianState sq = squeeze(GaussianState(1), 0, Complex(0.3, 0));
  CHECK(cvbeam::quadratic_stats(sq, x0).variance ==
        doctest::Approx(std::exp(-0.6)).epsilon(1e-13));
  const auto p0 = QuadraticObservable::quadrature(1, 0, M_PI / 2);
  CHECK(cvbeam::quadratic_stats(sq, p0).variance ==
        doctest::Approx(std::exp(0.6)).epsilon(1e-13));
}

TEST_CASE("observable arithmetic matches the statistics it induces") {
  const GaussianState s = displace(
      squeeze(GaussianState(2), 0, Complex(0.4, 0)), 1, Complex(1, 1));
  const auto n0 = QuadraticObservable::photon_number(2, {0});
  const auto n1 = QuadraticObservable::photon_number(2, {1});
  const auto both = QuadraticObservable::photon_number(2, {0, 1});

  const auto sum = cvbeam::quadratic_stats(s, n0 + n1);
  const auto direct = cvbeam::quadratic_stats(s, both);
  CHECK(sum.mean == doctest::Approx(direct.mean).epsilon(1e-13));
  CHECK(sum.variance == doctest::Approx(direct.variance).epsilon(1e-13));

  QuadraticObservable scaled = n0;
  scaled *= 3.0;
  CHECK(cvbeam::quadratic_stats(s, scaled).mean ==
        doctest::Approx(3 * cvbeam::quadratic_stats(s, n0).mean).epsilon(1e-13));
  CHECK(cvbeam::quadratic_stats(s, n0 - n1).mean ==
        doctest::Approx(cvbeam::quadratic_stats(s, n0).mean -
                        cvbeam::quadratic_stats(s, n1).mean)
            .epsilon(1e-12));

  CHECK(QuadraticObservable::quadrature(1, 0).is_linear());
  CHECK_FALSE(n0.is_linear());
  CHECK_THROWS_AS(cvbeam::quadratic_stats(GaussianState(1), n0 + n1),
                  std::invalid_argument);
}

TEST_CASE("covariances separate the symmetric and commutator parts") {
  const GaussianState v(1);
  const auto x = QuadraticObservable::quadrature(1, 0);
  const auto p = QuadraticObservable::quadrature(1, 0, M_PI / 2);
  CHECK(cvbeam::quadratic_covariance(v, x, x) == doctest::Approx(1.0));
  CHECK(cvbeam::quadratic_covariance(v, x, p) ==
        doctest::Approx(0.0).epsilon(1e-14));
  // [x, p] = 2i regardless of the state.
  const Complex half = cvbeam::quadratic_commutator_half(v, x, p);
  CHECK(half.real() == doctest::Approx(0.0));
  CHECK(half.imag() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(cvbeam::quadratic_covariance_full(v, x, p) - Complex(0, 1)) <
        1e-14);

  const GaussianState bright = coherent2(Complex(2, 0), Complex(1, 1));
  const auto s2 = cvbeam::stokes_observable(Dof::Pol, 2, {0, 1}, 2);
  const auto s3 = cvbeam::stokes_observable(Dof::Pol, 3, {0, 1}, 2);
  CHECK(std::abs(cvbeam::quadratic_covariance(bright, s2, s3)) < 1e-12);
}

TEST_CASE("Stokes means and variances on coherent inputs") {
  // x-polarized |alpha|^2 = 4
  const GaussianState four = coherent2(Complex(2, 0), Complex(0, 0));
  const auto s0 = cvbeam::stokes_observable(Dof::Pol, 0, {0, 1}, 2);
  const auto s1 = cvbeam::stokes_observable(Dof::Pol, 1, {0, 1}, 2);
  const auto s2 = cvbeam::stokes_observable(Dof::Pol, 2, {0, 1}, 2);
  const auto s3 = cvbeam::stokes_observable(Dof::Pol, 3, {0, 1}, 2);

  const auto m1 = cvbeam::quadratic_stats(four, s1);
  CHECK(m1.mean == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(m1.variance == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(cvbeam::quadratic_stats(four, s3).mean ==
        doctest::Approx(0.0).epsilon(1e-13));

  const GaussianState nine = coherent2(Complex(3, 0), Complex(0, 0));
  CHECK(cvbeam::quadratic_stats(nine, s1).mean ==
        doctest::Approx(9.0).epsilon(1e-13));

  const GaussianState balanced = coherent2(Complex(1, 0), Complex(1, 0));
  CHECK(cvbeam::quadratic_stats(balanced, s2).mean ==
        doctest::Approx(2.0).epsilon(1e-13));

  // Circularly polarized light has S3 = S0.
  const GaussianState circular = coherent2(Complex(1, 0), Complex(0, 1));
  CHECK(cvbeam::quadratic_stats(circular, s3).mean ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(cvbeam::quadratic_stats(circular, s0).mean ==
        doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("all Stokes variances on coherent states sit at shot noise") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  for (int i = 0; i < 25; ++i) {
    const GaussianState s =
        coherent2(Complex(amp(rng), amp(rng)), Complex(amp(rng), amp(rng)));
    const auto s0 = cvbeam::stokes_observable(Dof::Pol, 0, {0, 1}, 2);
    const double total = cvbeam::quadratic_stats(s, s0).mean;
    double sum_sq = 0.0;
    for (int mu = 0; mu <= 3; ++mu) {
      const auto obs = cvbeam::stokes_observable(Dof::Spa, mu, {0, 1}, 2);
      const auto stats = cvbeam::quadratic_stats(s, obs);
      CHECK(stats.variance == doctest::Approx(total).epsilon(1e-10));
      if (mu > 0) sum_sq += stats.mean * stats.mean;
    }
    // Coherent beams are fully polarized: the Stokes vector saturates S0.
    CHECK(sum_sq == doctest::Approx(total * total).epsilon(1e-10));
  }
}

TEST_CASE("squeezed Stokes vector stays inside the S0 ball") {
  const GaussianState s = build({cvbeam::ModeKind::Azimuthal, Complex(2, 0),
                                 Complex(0.5, 0),
                                 cvbeam::Construction::Composite});
  double sum_sq = 0.0;
  for (int mu = 1; mu <= 3; ++mu) {
    const auto obs = cvbeam::stokes_observable(Dof::Pol, mu, {0, 1}, 2);
    const double m = cvbeam::quadratic_stats(s, obs).mean;
    sum_sq += m * m;
  }
  const auto s0 = cvbeam::stokes_observable(Dof::Pol, 0, {0, 1}, 2);
  const double total = cvbeam::quadratic_stats(s, s0).mean;
  CHECK(sum_sq <= total * total + 1e-10);
}

TEST_CASE("linearized Stokes forms and their validity domain") {
  const double lo = 250.0;
  const auto lin2 = cvbeam::linearized_stokes(Dof::Pol, 2, lo, 0, 1);
  const auto lin3 = cvbeam::linearized_stokes(Dof::Pol, 3, lo, 0, 1);
  CHECK(lin2.is_linear());

  const auto on_vac = cvbeam::quadratic_stats(GaussianState(1), lin2);
  CHECK(on_vac.variance == doctest::Approx(4 * lo * lo).epsilon(1e-12));

  const double r = 0.4;
  const GaussianState sq = squeeze(GaussianState(1), 0, Complex(r, 0));
  CHECK(cvbeam::quadratic_stats(sq, lin2).variance ==
        doctest::Approx(4 * lo * lo * std::exp(-2 * r)).epsilon(1e-12));
  CHECK(cvbeam::quadratic_stats(sq, lin3).variance ==
        doctest::Approx(4 * lo * lo * std::exp(2 * r)).epsilon(1e-12));

  CHECK_THROWS_AS(cvbeam::linearized_stokes(Dof::Pol, 0, lo, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cvbeam::linearized_stokes(Dof::Pol, 1, lo, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cvbeam::linearized_stokes(Dof::Pol, 2, 0.0, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("exact Stokes variance approaches the linearized value") {
  // Signal mode 0 squeezed, auxiliary mode 1 carries amplitude 2*lo.
  const double r = 0.3;
  const double alpha_sig = 1.0;
  double previous_gap = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double lo = 100.0 * std::pow(4.0, k);
    GaussianState s = squeeze(GaussianState(2), 0, Complex(r, 0));
    s = displace(s, 0, Complex(alpha_sig, 0));
    s = displace(s, 1, Complex(2 * lo, 0));
    const auto exact = cvbeam::stokes_observable(Dof::Pol, 2, {0, 1}, 2);
    const auto lin = cvbeam::linearized_stokes(Dof::Pol, 2, lo, 0, 2);
    const double ve = cvbeam::quadratic_stats(s, exact).variance;
    const double vl = cvbeam::quadratic_stats(s, lin).variance;
    const double gap = std::abs(ve - vl) / ve;
    if (k == 0) {
      CHECK(gap < 0.01);  // already inside 1% at lo = 100 x signal
    } else {
      CHECK(gap < 0.5 * previous_gap);
    }
    previous_gap = gap;
  }
  CHECK(previous_gap < 1e-4);
}

TEST_CASE("direct detection reports shot-noise-referenced statistics") {
  const GaussianState bright = coherent2(Complex(2, 0), Complex(1, 0));
  const auto r = cvbeam::direct_detection(bright, {0, 1});
  CHECK(r.mean == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(r.variance == doctest::Approx(r.qnl_variance).epsilon(1e-12));
  REQUIRE(r.db_vs_qnl.has_value());
  CHECK(*r.db_vs_qnl == doctest::Approx(0.0).epsilon(1e-10));

  const auto dark = cvbeam::direct_detection(GaussianState(1), {0});
  CHECK_FALSE(dark.db_vs_qnl.has_value());

  CHECK_THROWS_AS(cvbeam::direct_detection(bright, {}), std::invalid_argument);
  CHECK_THROWS_AS(cvbeam::sum_difference(bright, {0}, {0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cvbeam::sum_difference(bright, {0}, {1}, 2),
                  std::invalid_argument);
}

TEST_CASE("sum photocurrent equals direct detection; difference stays at shot noise") {
  const GaussianState s = build({cvbeam::ModeKind::Azimuthal, Complex(4, 0),
                                 Complex(0.2, 0),
                                 cvbeam::Construction::Composite});
  const auto sum = cvbeam::sum_difference(s, {0}, {1}, 1);
  const auto direct = cvbeam::direct_detection(s, {0, 1});
  CHECK(sum.mean == doctest::Approx(direct.mean).epsilon(1e-12));
  CHECK(sum.variance == doctest::Approx(direct.variance).epsilon(1e-12));
  CHECK(sum.qnl_variance == doctest::Approx(direct.qnl_variance).epsilon(1e-12));
  REQUIRE(sum.db_vs_qnl.has_value());
  CHECK(*sum.db_vs_qnl < -0.5);

  // The orthogonal composite mode stays vacuum, so the arm difference beats
  // against it: Var = <A'A> = |alpha|^2 + sinh^2(s), slightly above the
  // equal-amplitude coherent reference.
  const auto diff = cvbeam::sum_difference(s, {0}, {1}, -1);
  REQUIRE(diff.db_vs_qnl.has_value());
  const double sh2 = std::sinh(0.2) * std::sinh(0.2);
  const double expected_db = 10.0 * std::log10((16.0 + sh2) / 16.0);
  CHECK(*diff.db_vs_qnl == doctest::Approx(expected_db).epsilon(1e-9));
  CHECK(*diff.db_vs_qnl > 0.0);
  CHECK(*diff.db_vs_qnl < 0.05);
}

TEST_CASE("losses pull a squeezed reading back toward the shot-noise limit") {
  cvbeam::DetectionModel model;
  model.kind = cvbeam::ModeKind::Azimuthal;
  model.alpha = Complex(20, 0);
  model.s = 0.3;
  model.scheme = cvbeam::DetectionScheme::Direct;

  double last_db = -1e9;
  for (double eta : {1.0, 0.8, 0.6, 0.4, 0.1}) {
    model.eta = eta;
    const auto r = cvbeam::run_detection(model);
    REQUIRE(r.db_vs_qnl.has_value());
    CHECK(*r.db_vs_qnl > last_db);
    last_db = *r.db_vs_qnl;
  }
  CHECK(last_db < 0.0);

  model.eta = 1.0;
  model.s = 0.0;
  const auto coherent = cvbeam::run_detection(model);
  CHECK(*coherent.db_vs_qnl == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("decibel conversion and its reference values") {
  CHECK(cvbeam::to_decibel(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(cvbeam::to_decibel(0.87096, 1.0) == doctest::Approx(-0.6).epsilon(1e-4));
  CHECK(cvbeam::to_decibel(0.891251, 1.0) ==
        doctest::Approx(-0.5).epsilon(1e-4));
  CHECK(cvbeam::to_decibel(2.0, 1.0) == doctest::Approx(3.0103).epsilon(1e-4));
  CHECK_THROWS_AS(cvbeam::to_decibel(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cvbeam::to_decibel(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("detection fits hit their targets and report unreachable ones") {
  cvbeam::DetectionModel model;
  model.kind = cvbeam::ModeKind::Azimuthal;
  model.alpha = Complex(20, 0);
  model.scheme = cvbeam::DetectionScheme::Direct;

  const auto fit =
      cvbeam::fit_db(model, cvbeam::FitParameter::Squeezing, -0.6);
  REQUIRE(fit.reachable);
  CHECK(std::abs(fit.achieved_db - (-0.6)) < 1e-5);
  CHECK(fit.value == doctest::Approx(0.0691).epsilon(1e-2));
  REQUIRE(fit.result.db_vs_qnl.has_value());
  CHECK(std::abs(*fit.result.db_vs_qnl - (-0.6)) < 1e-5);

  model.s = fit.value;
  model.scheme = cvbeam::DetectionScheme::Sum;
  const auto loss_fit =
      cvbeam::fit_db(model, cvbeam::FitParameter::Transmission, -0.5);
  REQUIRE(loss_fit.reachable);
  CHECK(std::abs(loss_fit.achieved_db - (-0.5)) < 1e-5);
  CHECK(loss_fit.value == doctest::Approx(0.8428).epsilon(1e-2));

  model.scheme = cvbeam::DetectionScheme::Direct;
  model.eta = 1.0;
  const auto impossible =
      cvbeam::fit_db(model, cvbeam::FitParameter::Squeezing, -30.0);
  CHECK_FALSE(impossible.reachable);
  CHECK(impossible.achieved_db > -30.0);
  CHECK(impossible.achieved_db < -5.0);
}

TEST_CASE("labels round-trip") {
  using namespace cvbeam;
  CHECK(parse_dof(to_string(Dof::Pol)) == Dof::Pol);
  CHECK(parse_dof(to_string(Dof::Spa)) == Dof::Spa);
  CHECK_THROWS_AS(parse_dof("time"), std::invalid_argument);
  CHECK(parse_detection_scheme(to_string(DetectionScheme::Difference)) ==
        DetectionScheme::Difference);
  CHECK_THROWS_AS(parse_detection_scheme("homodyne"), std::invalid_argument);
  CHECK(parse_fit_parameter(to_string(FitParameter::Transmission)) ==
        FitParameter::Transmission);
  CHECK_THROWS_AS(parse_fit_parameter("gain"), std::invalid_argument);
}
