// Units, constants and the water-dipole parameter set.
//
// Reference values: CODATA 2018 (NIST). hbar = 1.054571817e-34 J s,
// k_B = 1.380649e-23 J/K (exact), m_p/m_e = 1836.15267343.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "quasyn/constants.hpp"
#include "quasyn/rng.hpp"
#include "quasyn/units.hpp"

using namespace quasyn;
using Catch::Matchers::WithinRel;

TEST_CASE("constants match the CODATA 2018 table") {
  const auto c = constants();
  CHECK_THAT(c.hbar, WithinRel(1.054571817e-34, 1e-9));
  CHECK_THAT(c.k_b, WithinRel(1.380649e-23, 1e-12));
  CHECK_THAT(c.m_p, WithinRel(1.67262192369e-27, 1e-10));
  CHECK_THAT(c.m_e, WithinRel(9.1093837015e-31, 1e-10));
  CHECK_THAT(c.e_p, WithinRel(1.602176634e-19, 1e-12));
  CHECK_THAT(c.k_b_ev_per_k(), WithinRel(8.617333262e-5, 1e-9));
}

TEST_CASE("proton/electron mass ratio sits in the CODATA window") {
  const double ratio = constants().proton_electron_mass_ratio();
  CHECK(ratio >= 1836.0);
  CHECK(ratio <= 1836.3);
  CHECK_THAT(ratio, WithinRel(1836.15267343, 1e-8));
}

TEST_CASE("constants() is referentially transparent") {
  const auto a = constants();
  const auto b = constants();
  CHECK(a.hbar == b.hbar);
  CHECK(a.k_b == b.k_b);
  CHECK(a.m_p == b.m_p);
  CHECK(a.m_e == b.m_e);
  CHECK(a.e_p == b.e_p);
}

TEST_CASE("all constants are strictly positive") {
  const auto c = constants();
  for (double v : {c.hbar, c.k_b, c.m_p, c.m_e, c.e_p}) CHECK(v > 0.0);
}

TEST_CASE("water parameters: gap, derived inertia and dipole moment") {
  const auto w = water_params(constants());

  CHECK(w.epsilon_j == 24.8e-3 * unit::electron_volt);
  CHECK_THAT(w.epsilon().in_electron_volts(), WithinRel(24.8e-3, 1e-12));

  // I = 2 m_p d^2 and mu = 2 e_p P hold exactly because they are computed.
  CHECK(w.moment_of_inertia_kg_m2() == 2.0 * constants().m_p * w.d_m * w.d_m);
  CHECK(w.dipole_moment_c_m() == 2.0 * constants().e_p * w.p_m);

  // Against an independent extended-precision evaluation.
  const long double inertia = 2.0L * 1.67262192369e-27L * 0.82e-10L * 0.82e-10L;
  const long double dipole = 2.0L * 1.602176634e-19L * 0.2e-10L;
  CHECK_THAT(w.moment_of_inertia_kg_m2(), WithinRel(static_cast<double>(inertia), 1e-12));
  CHECK_THAT(w.dipole_moment_c_m(), WithinRel(static_cast<double>(dipole), 1e-12));
  CHECK_THAT(w.moment_of_inertia_kg_m2(), WithinRel(2.25e-47, 2e-3));
  CHECK_THAT(w.dipole_moment_c_m(), WithinRel(6.41e-30, 2e-3));
}

TEST_CASE("transition frequency is epsilon/hbar and scales linearly") {
  auto w = water_params(constants());
  const double omega = transition_frequency(w).in_radians_per_second();
  CHECK_THAT(omega, WithinRel(3.77e13, 2e-3));
  CHECK_THAT(omega, WithinRel(w.epsilon_j / constants().hbar, 1e-15));

  auto doubled = w;
  doubled.epsilon_j *= 2.0;
  CHECK(transition_frequency(doubled).in_radians_per_second() == 2.0 * (w.epsilon_j / constants().hbar));

  auto degenerate = w;
  degenerate.epsilon_j = 0.0;
  CHECK_THROWS_AS(transition_frequency(degenerate), std::invalid_argument);
}

TEST_CASE("particle masses reproduce the isotope ladder") {
  CHECK(particle_mass_kg(Particle::protium) == constants().m_p);
  CHECK(particle_mass_kg(Particle::proton) == particle_mass_kg(Particle::protium));
  CHECK(particle_mass_kg(Particle::deuterium) > particle_mass_kg(Particle::protium));
  CHECK(particle_mass_kg(Particle::tritium) > particle_mass_kg(Particle::deuterium));
  CHECK(particle_from_name("electron") == Particle::electron);
  CHECK_THROWS_AS(particle_from_name("muon"), std::invalid_argument);
}

TEST_CASE("quantity round-trips through SI are exact") {
  rng::Xoshiro256StarStar gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double v = (gen.uniform01() * 2.0 - 1.0) * std::pow(10.0, 40.0 * gen.uniform01() - 20.0);
    CHECK(Energy::joules(Energy::joules(v).in_joules()) == Energy::joules(v));
    CHECK(Length::metres(Length::metres(v).in_metres()) == Length::metres(v));
    CHECK(Mass::kilograms(v).in_kilograms() == v);
    CHECK(Temperature::kelvin(v).in_kelvin() == v);
    CHECK(AngularFrequency::radians_per_second(v).in_radians_per_second() == v);
    CHECK(Rate::per_second(v).in_per_second() == v);
    CHECK(Time::seconds(v).in_seconds() == v);
  }
}

TEST_CASE("non-SI factories convert on the way in") {
  CHECK(Energy::electron_volts(1.0).in_joules() == unit::electron_volt);
  CHECK_THAT(Energy::milli_electron_volts(24.8).in_joules(),
             WithinRel(24.8e-3 * unit::electron_volt, 1e-15));
  CHECK(Length::angstroms(1.0).in_metres() == 1e-10);
  CHECK(Length::nanometres(2.5).in_metres() == 2.5e-9);
  CHECK_THAT(Length::nanometres(2.5).in_nanometres(), WithinRel(2.5, 1e-15));
}
