#include <cmath>
#include <random>
#include <type_traits>

#include "doctest.h"
#include "qdspin/units.hpp"

using namespace qdspin;

namespace {

// |a - b| measured in ulps of b.
bool within_ulps(double a, double b, int ulps) {
  double lo = b, hi = b;
  for (int i = 0; i < ulps; ++i) {
    lo = std::nextafter(lo, -INFINITY);
    hi = std::nextafter(hi, INFINITY);
  }
  return a >= lo && a <= hi;
}

}  // namespace

TEST_SUITE("units") {

TEST_CASE("hbar carried to 10 significant figures") {
  CHECK(kHbarUevPs == 658.2119569);
}

TEST_CASE("energy to angular frequency") {
  CHECK(energy_to_omega(Energy::micro_ev(0.0)).rad_per_ps() == 0.0);
  CHECK(energy_to_omega(Energy::micro_ev(2.01)).rad_per_ps() ==
        doctest::Approx(3.0537275704722155e-3).epsilon(1e-12));
  CHECK(energy_to_omega(Energy::micro_ev(31.2)).rad_per_ps() ==
        doctest::Approx(4.740114437747917e-2).epsilon(1e-12));
}

TEST_CASE("energy <-> omega round trip stays within 1 ulp over 1e6 draws") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> exponent(-6.0, 6.0);
  std::bernoulli_distribution negative(0.5);
  int failures = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    double e = std::pow(10.0, exponent(gen));
    if (negative(gen)) e = -e;
    const double back =
        omega_to_energy(energy_to_omega(Energy::micro_ev(e))).micro_ev();
    if (!within_ulps(back, e, 1)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("intensity conversions and round trip") {
  CHECK(Intensity::kw_per_cm2(0.0).w_per_um2() == 0.0);
  CHECK(Intensity::kw_per_cm2(0.44).w_per_um2() ==
        doctest::Approx(4.4e-6).epsilon(1e-14));
  CHECK(Intensity::kw_per_cm2(0.25).w_per_um2() ==
        doctest::Approx(2.5e-6).epsilon(1e-14));

  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> exponent(-6.0, 6.0);
  int failures = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    const double v = std::pow(10.0, exponent(gen));
    if (!within_ulps(Intensity::kw_per_cm2(v).kw_per_cm2(), v, 1)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("non-negative quantities reject negative magnitudes") {
  CHECK_THROWS_AS(Rate::per_ps(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(Time::ps(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Intensity::kw_per_cm2(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(Rate::per_ps(std::nan("")), std::invalid_argument);
  // Energies and fields may be negative (detunings, shifts).
  CHECK(Energy::micro_ev(-5.0).micro_ev() == -5.0);
  CHECK(Field::kv_per_cm(-1.0).kv_per_cm() == -1.0);
}

TEST_CASE("dimensional tags are enforced at compile time") {
  static_assert(std::is_invocable_v<decltype(&energy_to_omega), Energy>);
  static_assert(!std::is_invocable_v<decltype(&energy_to_omega), Rate>);
  static_assert(!std::is_invocable_v<decltype(&energy_to_omega), double>);
  static_assert(!std::is_constructible_v<Energy, Rate>);
  CHECK(true);
}

TEST_CASE("bias to field map") {
  CHECK(bias_to_field(Voltage::volts(-0.76)).kv_per_cm() == 0.0);
  CHECK(bias_to_field(Voltage::volts(0.896)).kv_per_cm() ==
        doctest::Approx(72.0).epsilon(1e-12));
  CHECK(bias_to_field(Voltage::volts(0.62)).kv_per_cm() ==
        doctest::Approx(60.0).epsilon(1e-12));
  DiodeGeometry bad{0.76, 0.0};
  CHECK_THROWS_AS(bias_to_field(Voltage::volts(0.5), bad),
                  std::invalid_argument);
}

TEST_CASE("bias <-> field round trip") {
  // The chain has three roundings plus a subtraction, so allow 4 ulps on
  // inputs that do not cancel the built-in voltage.
  std::mt19937_64 gen(44);
  std::uniform_real_distribution<double> volts(-0.5, 2.0);
  int failures = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    const double v = volts(gen);
    if (std::abs(v + 0.76) < 1e-3) continue;
    const double back =
        field_to_bias(bias_to_field(Voltage::volts(v))).volts();
    if (!within_ulps(back, v, 4)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("quantity arithmetic") {
  const Energy a = Energy::micro_ev(2.0) + Energy::micro_ev(0.5);
  CHECK(a.micro_ev() == 2.5);
  CHECK((a - Energy::micro_ev(1.0)).micro_ev() == 1.5);
  CHECK((2.0 * a).micro_ev() == 5.0);
  CHECK(a / Energy::micro_ev(0.5) == 5.0);
  CHECK(Energy::milli_ev(0.2).micro_ev() == doctest::Approx(200.0));
  CHECK(Time::ns(10.0).ps() == 10000.0);
  CHECK(Energy::micro_ev(1.0) < Energy::micro_ev(2.0));
}

}  // TEST_SUITE
