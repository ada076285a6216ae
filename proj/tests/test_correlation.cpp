#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dephasim/correlation.hpp"
#include "dephasim/errors.hpp"
#include "oracles.hpp"

using namespace dephasim;

namespace {

constexpr double kWidth = 1e12;  // rad/s
const ChannelParams kChannel = ChannelParams::from_k(500.0, kWidth);

double length_for_u(double u) { return u / 500.0; }

std::vector<double> log_lengths(int count, double lo = 1e-5, double hi = 1e-1) {
  std::vector<double> l(count);
  for (int i = 0; i < count; ++i)
    l[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return l;
}

struct NamedSpectrum {
  const char* name;
  SpectrumEnvelope spec;
};

std::vector<NamedSpectrum> oracle_families() {
  return {
      {"gaussian", SpectrumEnvelope::gaussian(kWidth)},
      {"lorentzian", SpectrumEnvelope::lorentzian(kWidth)},
      {"rectangular", SpectrumEnvelope::rectangular(kWidth)},
      {"multidelta2", SpectrumEnvelope::multi_delta_pair(kWidth)},
      {"multidelta3", SpectrumEnvelope::multi_delta(
                          {{-1.5 * kWidth, 0.25}, {0.2 * kWidth, 0.4}, {kWidth, 0.35}})},
      {"double-gaussian", SpectrumEnvelope::double_gaussian(kWidth)},
      {"double-lorentzian", SpectrumEnvelope::double_lorentzian(kWidth)},
      {"pdc-gaussian", SpectrumEnvelope::gaussian(kWidth, 0.0, 2)},
      {"pdc-lorentzian", SpectrumEnvelope::lorentzian(kWidth, 0.0, 2)},
      {"pdc-double-gaussian", SpectrumEnvelope::double_gaussian(kWidth, {}, 0.0, 2)},
      {"pdc-double-lorentzian", SpectrumEnvelope::double_lorentzian(kWidth, {}, 0.0, 2)},
      {"off-center-gaussian", SpectrumEnvelope::gaussian(kWidth, 0.7 * kWidth)},
  };
}

}  // namespace

TEST_CASE("closed forms reproduce the per-family reference points") {
  SUBCASE("any spectrum at l = 0 gives exactly 1") {
    for (const auto& [name, spec] : oracle_families()) {
      CAPTURE(name);
      CHECK(closed_form(spec, kChannel, 0.0) == CorrelationValue(1.0, 0.0));
    }
    CHECK(closed_form(SpectrumEnvelope::white(), kChannel, 0.0) == CorrelationValue(1.0, 0.0));
  }
  SUBCASE("Gaussian at u = 1: |F| = exp(-1/4)") {
    const auto f = closed_form(SpectrumEnvelope::gaussian(kWidth), kChannel, length_for_u(1.0));
    CHECK(std::abs(f) == doctest::Approx(0.7788007830714049).epsilon(1e-14));
    CHECK(f.imag() == 0.0);
  }
  SUBCASE("Lorentzian at u = ln 2: |F| = 1/2") {
    const auto f =
        closed_form(SpectrumEnvelope::lorentzian(kWidth), kChannel, length_for_u(std::log(2.0)));
    CHECK(std::abs(f) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("rectangular at u = pi: first sinc zero") {
    const auto f = closed_form(SpectrumEnvelope::rectangular(kWidth), kChannel,
                               length_for_u(3.141592653589793));
    CHECK(std::abs(f) <= 1e-15);
  }
  SUBCASE("N = 2 comb revives fully after one period") {
    const auto spec = SpectrumEnvelope::multi_delta_pair(kWidth);
    const double period = 2.0 * 3.141592653589793 /
                          (kChannel.delay_rate() * kWidth);  // 2 pi c / (dn s)
    CHECK(std::abs(closed_form(spec, kChannel, period)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(closed_form(spec, kChannel, 0.5 * period)) <= 1e-12);
  }
  SUBCASE("white spectrum is the Markovian indicator") {
    const auto white = SpectrumEnvelope::white();
    CHECK(closed_form(white, kChannel, 0.0) == CorrelationValue(1.0, 0.0));
    CHECK(closed_form(white, kChannel, 1e-9) == CorrelationValue(0.0, 0.0));
    CHECK(closed_form(white, kChannel, 0.02) == CorrelationValue(0.0, 0.0));
  }
}

TEST_CASE("closed form rejects what it cannot represent") {
  CHECK_THROWS_AS(closed_form(SpectrumEnvelope::gaussian(kWidth), kChannel, -1e-3), Error);
  auto tab = normalize_tabulated({{-1.0, 1.0}, {1.0, 1.0}});
  try {
    closed_form(tab, kChannel, 1e-3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::tabulated_needs_quadrature);
  }
}

TEST_CASE("quadrature matches every closed form to 1e-8 absolute") {
  const auto lengths = log_lengths(16);
  for (const auto& [name, spec] : oracle_families()) {
    CAPTURE(name);
    double worst = 0.0;
    for (double l : lengths)
      worst = std::max(worst, std::abs(closed_form(spec, kChannel, l) -
                                       quadrature(spec, kChannel, l, 1e-10)));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("quadrature agrees with a brute-force Simpson transform") {
  const auto spec = SpectrumEnvelope::double_gaussian(kWidth);
  for (double u : {0.3, 1.0, 2.5}) {
    const double l = length_for_u(u);
    const double t = kChannel.delay_rate() * l;
    const auto brute = oracle::simpson_transform(
        [&](double x) { return spec.evaluate(x); }, -14.0 * kWidth, 14.0 * kWidth, t, 60000);
    const auto q = quadrature(spec, kChannel, l, 1e-10);
    CHECK(std::abs(q - brute) <= 1e-9);
  }
}

TEST_CASE("frozen reference: double-Gaussian at the first revival length") {
  // l = 2 pi / 2500 m, u = 2 pi / 5: F = exp(-(u/2)^2) cos(pi) and
  // |F| = 0.67382545123143356 (30-digit evaluation of the closed form).
  const double l = 2.0 * 3.141592653589793 / 2500.0;
  const auto spec = SpectrumEnvelope::double_gaussian(kWidth);
  const auto q = quadrature(spec, kChannel, l, 1e-10);
  CHECK(std::abs(q) == doctest::Approx(0.6738254512314336).epsilon(1e-9));
  CHECK(q.real() < 0.0);  // cos factor sits at -1
  const auto c = closed_form(spec, kChannel, l);
  CHECK(std::abs(c) == doctest::Approx(0.6738254512314336).epsilon(1e-12));
}

TEST_CASE("quadrature keeps the Gaussian normalization at l = 0") {
  CHECK(std::abs(quadrature(SpectrumEnvelope::gaussian(kWidth), kChannel, 0.0, 1e-10) - 1.0) <=
        1e-12);
  CHECK(std::abs(quadrature(SpectrumEnvelope::lorentzian(kWidth), kChannel, 0.0, 1e-10) - 1.0) <=
        1e-10);
  auto tab = normalize_tabulated({{-2.0, 0.1}, {-0.5, 1.0}, {0.0, 2.0}, {1.0, 0.3}, {2.5, 0.05}});
  CHECK(std::abs(quadrature(tab, ChannelParams::from_delta_n(0.15), 0.0, 1e-10) - 1.0) <= 1e-12);
}

TEST_CASE("Hermitian symmetry: F(-l) is the conjugate of F(l)") {
  auto tab = normalize_tabulated({{-2e12, 0.1}, {-0.5e12, 1.0}, {0.0, 2.0}, {1e12, 0.3}});
  std::vector<NamedSpectrum> specs = {
      {"gaussian-offset", SpectrumEnvelope::gaussian(kWidth, 0.6 * kWidth)},
      {"double-gaussian", SpectrumEnvelope::double_gaussian(kWidth, {}, 0.3 * kWidth)},
      {"rectangular", SpectrumEnvelope::rectangular(kWidth, -0.2 * kWidth)},
      {"multidelta3", SpectrumEnvelope::multi_delta(
                          {{-1.5 * kWidth, 0.25}, {0.2 * kWidth, 0.4}, {kWidth, 0.35}})},
      {"tabulated", tab},
  };
  for (const auto& [name, spec] : specs) {
    CAPTURE(name);
    for (double l : {1e-4, 1.7e-3, 9e-3}) {
      const auto plus = quadrature(spec, kChannel, l, 1e-11);
      const auto minus = quadrature(spec, kChannel, -l, 1e-11);
      CHECK(std::abs(minus - std::conj(plus)) <= 1e-10);
    }
  }
}

TEST_CASE("correlation modulus never exceeds 1") {
  oracle::Rng rng(19);
  for (const auto& [name, spec] : oracle_families()) {
    CAPTURE(name);
    for (int i = 0; i < 24; ++i) {
      const double l = rng.uniform(0.0, 0.1);
      CHECK(std::abs(closed_form(spec, kChannel, l)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("Gaussian and Lorentzian moduli decay strictly") {
  const SpectrumEnvelope specs[] = {
      SpectrumEnvelope::gaussian(kWidth),
      SpectrumEnvelope::gaussian(kWidth, 0.0, 2),
      SpectrumEnvelope::lorentzian(kWidth),
      SpectrumEnvelope::lorentzian(kWidth, 0.0, 2),
  };
  for (const auto& spec : specs) {
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
      const double l = 0.05 * i / 100.0;
      const double mag = std::abs(closed_form(spec, kChannel, l));
      CHECK(mag < prev);
      prev = mag;
    }
  }
}

TEST_CASE("commensurate combs revive periodically") {
  const auto spec = SpectrumEnvelope::multi_delta_pair(kWidth);
  const double period = 2.0 * 3.141592653589793 / (kChannel.delay_rate() * kWidth);
  oracle::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const double l = rng.uniform(0.0, 0.05);
    const double a = std::abs(closed_form(spec, kChannel, l));
    const double b = std::abs(closed_form(spec, kChannel, l + period));
    CHECK(std::abs(a - b) <= 1e-12);
  }
}

TEST_CASE("Filon route reproduces the Gaussian transform from samples") {
  std::vector<SpectralSample> samples;
  for (int i = 0; i <= 6000; ++i) {
    const double nu = (-9.0 + 18.0 * i / 6000.0) * kWidth;
    samples.push_back({nu, std::exp(-nu * nu / (kWidth * kWidth))});
  }
  const auto tab = normalize_tabulated(std::move(samples));
  const auto exact = SpectrumEnvelope::gaussian(kWidth);
  for (double u : {0.25, 1.0, 3.0}) {
    const double l = length_for_u(u);
    CHECK(std::abs(quadrature(tab, kChannel, l, 1e-10) - closed_form(exact, kChannel, l)) <=
          2e-6);
  }
}

TEST_CASE("quadrature input validation") {
  const auto g = SpectrumEnvelope::gaussian(kWidth);
  CHECK_THROWS_AS(quadrature(g, kChannel, 1e-3, 1e-14), Error);
  CHECK_THROWS_AS(quadrature(g, kChannel, 1e-3, 1e-5), Error);
  try {
    quadrature(SpectrumEnvelope::white(), kChannel, 1e-3, 1e-10);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::white_is_singular);
  }
}

TEST_CASE("exhausted panel budgets surface the best estimate") {
  const auto spec = SpectrumEnvelope::double_gaussian(kWidth);
  detail::QuadratureLimits limits;
  limits.max_panels = 8;
  try {
    detail::quadrature_with_limits(spec, kChannel, length_for_u(40.0), 1e-12, limits);
    CHECK(false);
  } catch (const NotConvergedError& e) {
    CHECK(e.error_bound() > 0.0);
    CHECK(std::abs(e.best_estimate()) <= 1.5);
  }
}
