#include "warpmesh/analysis.hpp"
#include "warpmesh/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace warpmesh;

TEST_CASE("dispersion relation") {
  SUBCASE("band edge along the waveguide axis") {
    const SpatialFrequency edge(kSpatialBandEdge, 0.0);
    // cos(omega) = (1/3)(cos(2 pi / sqrt 3) + 2 cos(pi / sqrt 3))
    const double oracle = std::acos((std::cos(2.0 * M_PI / std::sqrt(3.0)) + 2.0 * std::cos(M_PI / std::sqrt(3.0))) / 3.0);
    CHECK(twm_dispersion_omega(edge) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(twm_dispersion_omega(edge) == doctest::Approx(2.043334183058418).epsilon(1e-12));
    CHECK(speed_ratio(edge) == doctest::Approx(0.7965905631910376).epsilon(1e-12));
  }
  SUBCASE("long wavelengths travel at the nominal speed") {
    for (double theta : {0.0, 0.3, M_PI / 6, 1.0}) {
      const SpatialFrequency k(1e-5 * std::cos(theta), 1e-5 * std::sin(theta));
      CHECK(twm_dispersion_omega(k) / k.norm() == doctest::Approx(kNominalSpeed).epsilon(1e-9));
    }
  }
  SUBCASE("dc") { CHECK(twm_dispersion_omega(SpatialFrequency::Zero()) == 0.0); }
  SUBCASE("beyond the band") {
    CHECK_THROWS_AS(twm_dispersion_omega(SpatialFrequency(kSpatialBandEdge * 1.01, 0.0)), numerical_domain_error);
  }
}

TEST_CASE("dispersion curves") {
  const auto axis = dispersion_curve(0.0, 512);
  REQUIRE(axis.size() == 512);
  CHECK(axis.speed_ratio(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(axis.omega_nominal(511) == doctest::Approx(kTemporalBandEdge).epsilon(1e-12));
  for (Eigen::Index i = 1; i < axis.size(); ++i) CHECK(axis.speed_ratio(i) <= axis.speed_ratio(i - 1));

  const auto diagonal = dispersion_curve(M_PI / 6, 512);
  double spread = 0.0;
  for (Eigen::Index i = 0; i < axis.size(); ++i) {
    if (axis.omega_nominal(i) > 0.75 * kTemporalBandEdge) break;
    spread = std::max(spread, std::abs(axis.speed_ratio(i) - diagonal.speed_ratio(i)));
  }
  CHECK(spread > 0.005);
  CHECK(spread < 0.05);

  const auto flat = warped_dispersion_curve(0.0, 0.0, 512);
  CHECK((flat.speed_ratio - axis.speed_ratio).abs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(dispersion_curve(0.0, 1), usage_error);
}

TEST_CASE("tolerance band") {
  DispersionCurve c;
  c.omega_nominal = Eigen::ArrayXd::LinSpaced(5, 0.0, kTemporalBandEdge);
  c.speed_ratio = Eigen::ArrayXd::Ones(5);
  CHECK(tolerance_band_fraction(c, 0.02) == doctest::Approx(1.0));
  c.speed_ratio(3) = 0.97;
  CHECK(tolerance_band_fraction(c, 0.02) == doctest::Approx(0.5));
  c.speed_ratio(1) = 1.03;
  CHECK(tolerance_band_fraction(c, 0.02) == doctest::Approx(0.0));
}

TEST_CASE("rate comparison") {
  const auto r = compare_with_dense_mesh(-0.45);
  CHECK(r.realignment == doctest::Approx(2.0 / 0.55));
  CHECK(r.reference_realignment == doctest::Approx(2.0));
  CHECK(r.rate_factor == doctest::Approx(1.0 / 0.55));
  CHECK(r.dense_band_fraction == doctest::Approx(1.0));
  CHECK(r.warped_band_fraction > 0.7);
}

TEST_CASE("theoretical modes") {
  const int side = 24;
  const auto modes = theoretical_modes(side, kTemporalBandEdge);
  REQUIRE_FALSE(modes.empty());
  CHECK(modes.front().m == 1);
  CHECK(modes.front().n == 1);
  CHECK(modes.front().omega_ideal == doctest::Approx(M_PI / side).epsilon(1e-12));

  // Brute-force enumeration of odd (m, n) pairs below the band.
  int pairs = 0;
  int total = 0;
  for (int m = 1; m < 200; m += 2) {
    for (int n = m; n < 200; n += 2) {
      if (kNominalSpeed * M_PI / side * std::hypot(m, n) <= kTemporalBandEdge) {
        ++pairs;
        total += m == n ? 1 : 2;
      }
    }
  }
  CHECK(modes.size() == static_cast<std::size_t>(pairs));
  CHECK(pairs == 81);
  int multiplicity = 0;
  for (const auto& m : modes) multiplicity += m.multiplicity;
  CHECK(multiplicity == total);
  CHECK(total == 152);
  for (std::size_t i = 1; i < modes.size(); ++i) CHECK(modes[i].omega_ideal >= modes[i - 1].omega_ideal);

  CHECK(theoretical_modes(side, 0.5 * M_PI / side).empty());
  CHECK_THROWS_AS(theoretical_modes(1, 1.0), invalid_size);

  const auto predicted = predicted_modes(modes, side);
  for (const auto& m : predicted) {
    const SpatialFrequency k(M_PI / side * m.m, M_PI / side * m.n);
    CHECK(m.omega_predicted == doctest::Approx(twm_dispersion_omega(k)).epsilon(1e-12));
  }
  const auto warped = predicted_modes(modes, side, 0.0);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    CHECK(warped[i].omega_predicted == doctest::Approx(predicted[i].omega_predicted).epsilon(1e-12));
  }
}

TEST_CASE("spectrum") {
  SUBCASE("impulse is flat") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(64);
    x(0) = 1.0;
    const auto s = spectrum(x, 256);
    CHECK(s.omega.size() == 129);
    CHECK((s.magnitude - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(find_peaks(s).empty());
  }
  SUBCASE("Parseval") {
    Eigen::VectorXd x(300);
    for (int i = 0; i < 300; ++i) x(i) = std::sin(0.37 * i) * std::exp(-0.01 * i) + 0.1 * std::cos(2.9 * i);
    const auto s = spectrum(x, 1024);
    CHECK(spectral_energy(s) == doctest::Approx(x.squaredNorm()).epsilon(1e-9));
  }
  SUBCASE("bin-centred sinusoid gives one peak") {
    const int n = 1024;
    const double w = 2.0 * M_PI * 100 / n;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = std::cos(w * i);
    const auto s = spectrum(x, n);
    const auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].omega == doctest::Approx(w).epsilon(1e-9));
    CHECK_FALSE(peaks[0].twin);
  }
  SUBCASE("two close sinusoids are resolved") {
    const int n = 4096;
    const double w1 = 0.50, w2 = 0.52;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = std::sin(w1 * i) + 0.8 * std::sin(w2 * i);
    const auto s = spectrum(x, 16384);
    const auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0].omega - w1) < s.bin_width());
    CHECK(std::abs(peaks[1].omega - w2) < s.bin_width());
    CHECK_FALSE(peaks[0].twin);
  }
  SUBCASE("size checks") {
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(100);
    CHECK_THROWS_AS(spectrum(x, 64), usage_error);
    CHECK_THROWS_AS(spectrum(x, 200), usage_error);
    CHECK_NOTHROW(spectrum(x, 128));
  }
}

TEST_CASE("mode matching") {
  auto modes = predicted_modes(theoretical_modes(24, 1.0), 24);
  std::vector<double> exact;
  std::vector<double> shifted;
  for (const auto& m : modes) {
    exact.push_back(m.omega_predicted);
    shifted.push_back(1.01 * m.omega_predicted);
  }
  const auto same = match_modes(modes, exact);
  CHECK(same.matched_count() == modes.size());
  CHECK(same.max_abs_deviation() == doctest::Approx(0.0));

  // Shift the lowest mode only, so its pairing is unambiguous.
  std::vector<double> one = exact;
  one[0] = shifted[0];
  const auto off = match_modes(modes, one);
  CHECK(off.entries[0].deviation.value() == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(off.max_abs_deviation() == doctest::Approx(0.01).epsilon(1e-9));

  const auto none = match_modes(modes, {});
  CHECK(none.matched_count() == 0);
  CHECK_FALSE(none.entries[0].omega_measured.has_value());

  // A stray line far from every prediction stays unmatched.
  const auto stray = match_modes(modes, {5.0});
  CHECK(stray.matched_count() == 0);
}
