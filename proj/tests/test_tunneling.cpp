// Thermal activation and semiclassical tunneling rates.
//
// Closed forms used as oracles:
//   rectangular barrier:  Theta = 2 w sqrt(2 m (dV - E)) / hbar
//   parabolic barrier:    Theta = pi L sqrt(2 m) (V_max - E) / (hbar sqrt(V_max))

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "quasyn/constants.hpp"
#include "quasyn/numerics.hpp"
#include "quasyn/rng.hpp"
#include "quasyn/tunneling.hpp"

using namespace quasyn;
using namespace quasyn::tunneling;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double rect_theta(double m, double dv_minus_e, double w) {
  return 2.0 * w * std::sqrt(2.0 * m * dv_minus_e) / constants().hbar;
}

double parab_theta(double m, double v_max, double e, double l) {
  return std::numbers::pi * l * std::sqrt(2.0 * m) * (v_max - e) /
         (constants().hbar * std::sqrt(v_max));
}

BarrierPotential double_hump() {
  // Two separated bumps of 1 eV with a 0.2 eV saddle between them.
  std::vector<double> q, v;
  for (int i = 0; i <= 80; ++i) {
    const double x = -2.0 + 4.0 * i / 80.0;  // nm
    const double bump = std::exp(-std::pow((x + 1.0) / 0.3, 2)) + std::exp(-std::pow((x - 1.0) / 0.3, 2));
    q.push_back(x * unit::nanometre);
    v.push_back(bump * unit::electron_volt);
  }
  return BarrierPotential::tabulated(q, v);
}

}  // namespace

TEST_CASE("arrhenius: zero activation energy gives the bare prefactor") {
  const auto m = ThermalModel::make(Rate::per_second(1e12), Energy::joules(0.0),
                                    Temperature::kelvin(310.0));
  CHECK(arrhenius_rate_per_s(m) == 1e12);
}

TEST_CASE("arrhenius: 0.5 eV at 310 K against extended-precision evaluation") {
  const auto m = ThermalModel::make(Rate::per_second(1e12), Energy::electron_volts(0.5),
                                    Temperature::kelvin(310.0));
  const long double exponent =
      -(0.5L * 1.602176634e-19L) / (1.380649e-23L * 310.0L);
  const double expected = static_cast<double>(1e12L * std::exp(exponent));
  CHECK_THAT(arrhenius_rate_per_s(m), WithinRel(expected, 1e-12));
  CHECK_THAT(arrhenius_rate_per_s(m), WithinRel(7.4e3, 2e-2));
}

TEST_CASE("arrhenius: cooling strictly decreases the rate") {
  const auto m = ThermalModel::make(Rate::per_second(1e12), Energy::electron_volts(0.3),
                                    Temperature::kelvin(300.0));
  CHECK(arrhenius_rate_per_s(m.with_temperature(150.0)) < arrhenius_rate_per_s(m));

  rng::Xoshiro256StarStar gen(11);
  for (int i = 0; i < 50; ++i) {
    const double vc = std::pow(10.0, 8.0 + 6.0 * gen.uniform01());
    const double ea = gen.uniform01();
    const double t = 100.0 + 400.0 * gen.uniform01();
    const auto model = ThermalModel::make(Rate::per_second(vc), Energy::electron_volts(ea),
                                          Temperature::kelvin(t));
    const double k = arrhenius_rate_per_s(model);
    CHECK(k > 0.0);
    CHECK(k <= vc);
  }
}

TEST_CASE("thermal model validation") {
  CHECK_THROWS_AS(ThermalModel::make(Rate::per_second(0.0), Energy::joules(0.0),
                                     Temperature::kelvin(300.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ThermalModel::make(Rate::per_second(1e12), Energy::electron_volts(-1.0),
                                     Temperature::kelvin(300.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ThermalModel::make(Rate::per_second(1e12), Energy::joules(0.0),
                                     Temperature::kelvin(0.0)),
                  std::invalid_argument);
}

TEST_CASE("turning points: rectangular edges are returned directly") {
  const auto b = BarrierPotential::rectangular(Energy::electron_volts(0.5), Length::nanometres(0.2));
  const auto tp = find_turning_points(b, Energy::electron_volts(0.1).in_joules());
  CHECK(tp.a_m == 0.0);
  CHECK(tp.b_m == 0.2 * unit::nanometre);
  CHECK_THROWS_AS(find_turning_points(b, Energy::electron_volts(0.5).in_joules()), NoBarrierError);
}

TEST_CASE("turning points: parabolic roots are analytic") {
  const double l = 0.3 * unit::nanometre;
  const auto b = BarrierPotential::parabolic(Energy::electron_volts(1.0), Length::metres(l));

  SECTION("E = 0 hits the domain edges") {
    const auto tp = find_turning_points(b, 0.0);
    CHECK_THAT(tp.a_m, WithinAbs(-l, 1e-18));
    CHECK_THAT(tp.b_m, WithinAbs(l, 1e-18));
  }
  SECTION("E = V_max/2 gives +-L/sqrt(2)") {
    const auto tp = find_turning_points(b, 0.5 * unit::electron_volt);
    CHECK_THAT(tp.a_m, WithinRel(-l / std::sqrt(2.0), 1e-12));
    CHECK_THAT(tp.b_m, WithinRel(l / std::sqrt(2.0), 1e-12));
    // |V(root) - E| tight against the barrier scale
    CHECK(std::abs(b(tp.a_m) - 0.5 * unit::electron_volt) < 1e-12 * b.peak_height());
    CHECK(std::abs(b(tp.b_m) - 0.5 * unit::electron_volt) < 1e-12 * b.peak_height());
  }
  SECTION("E above the top is NoBarrier") {
    CHECK_THROWS_AS(find_turning_points(b, 1.5 * unit::electron_volt), NoBarrierError);
  }
}

TEST_CASE("turning points: two humps are rejected, not summed") {
  CHECK_THROWS_AS(find_turning_points(double_hump(), 0.5 * unit::electron_volt),
                  MultiBarrierError);
  // Below the saddle the outer pair would enclose a classically allowed
  // valley; that is still a multi-barrier topology.
  CHECK_THROWS_AS(find_turning_points(double_hump(), 0.1 * unit::electron_volt),
                  MultiBarrierError);
}

TEST_CASE("wkb action: rectangular barrier matches the closed form") {
  const double m = constants().m_p;
  const auto problem = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(m), Energy::electron_volts(0.1),
      BarrierPotential::rectangular(Energy::electron_volts(0.5), Length::nanometres(0.08)),
      AngularFrequency::radians_per_second(1e13));
  const double expected = rect_theta(m, 0.4 * unit::electron_volt, 0.08 * unit::nanometre);
  CHECK_THAT(wkb_action(problem), WithinRel(expected, 1e-10));
}

TEST_CASE("wkb action: parabolic barrier matches the closed form") {
  const double m = constants().m_e;
  const auto problem = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(m), Energy::electron_volts(0.25),
      BarrierPotential::parabolic(Energy::electron_volts(1.0), Length::nanometres(0.5)),
      AngularFrequency::radians_per_second(1e13));
  const double expected =
      parab_theta(m, unit::electron_volt, 0.25 * unit::electron_volt, 0.5 * unit::nanometre);
  CHECK_THAT(wkb_action(problem), WithinRel(expected, 1e-8));
}

TEST_CASE("wkb action: vanishing barrier and sqrt(m) scaling") {
  const auto near_top = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(constants().m_e), Energy::electron_volts(0.999999),
      BarrierPotential::parabolic(Energy::electron_volts(1.0), Length::nanometres(0.5)),
      AngularFrequency::radians_per_second(1e13));
  CHECK(wkb_action(near_top) < 1e-2);

  const auto barrier = BarrierPotential::rectangular(Energy::electron_volts(0.5),
                                                     Length::nanometres(0.1));
  const auto light = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(constants().m_p), Energy::joules(0.0), barrier,
      AngularFrequency::radians_per_second(1e13));
  const auto heavy = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(2.0 * constants().m_p), Energy::joules(0.0), barrier,
      AngularFrequency::radians_per_second(1e13));
  CHECK_THAT(wkb_action(heavy) / wkb_action(light), WithinRel(std::sqrt(2.0), 1e-12));
}

TEST_CASE("wkb action grows with width, height and mass") {
  rng::Xoshiro256StarStar gen(23);
  for (int i = 0; i < 25; ++i) {
    const double m = constants().m_e * std::pow(10.0, 3.0 * gen.uniform01());
    const double dv = (0.2 + gen.uniform01()) * unit::electron_volt;
    const double w = (0.05 + 0.5 * gen.uniform01()) * unit::nanometre;
    auto theta = [&](double mm, double vv, double ww) {
      return wkb_action(TunnelingProblem::with_attempt_frequency(
          Mass::kilograms(mm), Energy::joules(0.0),
          BarrierPotential::rectangular(Energy::joules(vv), Length::metres(ww)),
          AngularFrequency::radians_per_second(1e13)));
    };
    const double base = theta(m, dv, w);
    CHECK(theta(m, dv, 1.3 * w) > base);
    CHECK(theta(m, 1.3 * dv, w) > base);
    CHECK(theta(1.3 * m, dv, w) > base);
  }
}

TEST_CASE("wkb rate: algebraic checks against the action") {
  // Width chosen so Theta = ln 2 exactly: k = omega_0 / 2.
  const double m = constants().m_e;
  const double dv = 0.5 * unit::electron_volt;
  const double w = std::log(2.0) * constants().hbar / (2.0 * std::sqrt(2.0 * m * dv));
  const auto problem = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(m), Energy::joules(0.0),
      BarrierPotential::rectangular(Energy::joules(dv), Length::metres(w)),
      AngularFrequency::radians_per_second(1e13));
  CHECK_THAT(wkb_rate_per_s(problem), WithinRel(0.5e13, 1e-9));

  // 0 < k <= omega_0 across random draws.
  rng::Xoshiro256StarStar gen(37);
  for (int i = 0; i < 25; ++i) {
    const auto p = TunnelingProblem::with_attempt_frequency(
        Mass::kilograms(constants().m_e * (1.0 + 10.0 * gen.uniform01())),
        Energy::joules(0.0),
        BarrierPotential::rectangular(Energy::electron_volts(0.1 + gen.uniform01()),
                                      Length::nanometres(0.02 + 0.2 * gen.uniform01())),
        AngularFrequency::radians_per_second(1e12));
    const double k = wkb_rate_per_s(p);
    CHECK(k > 0.0);
    CHECK(k <= 1e12);
  }
}

TEST_CASE("protium matches an electron tunneling 43x further at equal action") {
  // Same barrier height above E; widths in the ratio sqrt(m_e/m_p).
  const double dv = 0.4 * unit::electron_volt;
  const double w_e = 2.5 * unit::nanometre;
  const double w_p = w_e * std::sqrt(constants().m_e / constants().m_p);
  const auto electron = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(constants().m_e), Energy::joules(0.0),
      BarrierPotential::rectangular(Energy::joules(dv), Length::metres(w_e)),
      AngularFrequency::radians_per_second(1e13));
  const auto proton = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(constants().m_p), Energy::joules(0.0),
      BarrierPotential::rectangular(Energy::joules(dv), Length::metres(w_p)),
      AngularFrequency::radians_per_second(1e13));
  CHECK_THAT(wkb_rate_per_s(proton), WithinRel(wkb_rate_per_s(electron), 1e-9));
}

TEST_CASE("equal-probability distances reproduce the isotope ladder") {
  const double d_e = 2.5;  // nm
  const double p = equal_probability_distance_m(constants().m_e, d_e,
                                                particle_mass_kg(Particle::protium));
  const double d = equal_probability_distance_m(constants().m_e, d_e,
                                                particle_mass_kg(Particle::deuterium));
  const double t = equal_probability_distance_m(constants().m_e, d_e,
                                                particle_mass_kg(Particle::tritium));
  CHECK_THAT(p, WithinRel(0.058, 0.02));
  CHECK_THAT(d, WithinRel(0.041, 0.02));
  CHECK_THAT(t, WithinRel(0.034, 0.02));

  // Identity and composition.
  CHECK(equal_probability_distance_m(constants().m_p, 1.25, constants().m_p) == 1.25);
  const double m1 = constants().m_e, m2 = constants().m_p, m3 = particle_mass_kg(Particle::tritium);
  const double step = equal_probability_distance_m(
      m2, equal_probability_distance_m(m1, d_e, m2), m3);
  CHECK_THAT(step, WithinRel(equal_probability_distance_m(m1, d_e, m3), 1e-14));

  CHECK_THROWS_AS(equal_probability_distance_m(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("quadrature oracle: 50 randomized barriers against closed forms") {
  rng::Xoshiro256StarStar gen(101);
  for (int draw = 0; draw < 50; ++draw) {
    const double m = constants().m_e * std::pow(10.0, 4.3 * gen.uniform01());
    const double v = (0.05 + 1.95 * gen.uniform01()) * unit::electron_volt;
    const double e = gen.uniform01() * 0.9 * v;
    const double size = (0.05 + 1.95 * gen.uniform01()) * unit::nanometre;
    const bool rectangular = gen.bernoulli(0.5);
    const auto barrier = rectangular
                             ? BarrierPotential::rectangular(Energy::joules(v), Length::metres(size))
                             : BarrierPotential::parabolic(Energy::joules(v), Length::metres(size));
    const auto problem = TunnelingProblem::with_attempt_frequency(
        Mass::kilograms(m), Energy::joules(e), barrier,
        AngularFrequency::radians_per_second(1e13));
    const double expected = rectangular ? rect_theta(m, v - e, size) : parab_theta(m, v, e, size);
    REQUIRE_THAT(wkb_action(problem), WithinRel(expected, 1e-8));
  }
}

TEST_CASE("attempt frequency from the localization length") {
  const double dq = 0.05 * unit::nanometre;
  const auto p = TunnelingProblem::with_localization(
      Mass::kilograms(constants().m_p), Energy::joules(0.0),
      BarrierPotential::rectangular(Energy::electron_volts(0.3), Length::nanometres(0.1)),
      Length::metres(dq));
  CHECK_THAT(p.attempt_frequency_per_s(),
             WithinRel(constants().hbar / (2.0 * constants().m_p * dq * dq), 1e-15));

  // Consistent pair accepted, inconsistent pair rejected.
  CHECK_NOTHROW(TunnelingProblem::full(
      Mass::kilograms(constants().m_p), Energy::joules(0.0),
      BarrierPotential::rectangular(Energy::electron_volts(0.3), Length::nanometres(0.1)),
      AngularFrequency::radians_per_second(p.attempt_frequency_per_s()), Length::metres(dq)));
  CHECK_THROWS_AS(TunnelingProblem::full(
                      Mass::kilograms(constants().m_p), Energy::joules(0.0),
                      BarrierPotential::rectangular(Energy::electron_volts(0.3),
                                                    Length::nanometres(0.1)),
                      AngularFrequency::radians_per_second(1.5 * p.attempt_frequency_per_s()),
                      Length::metres(dq)),
                  std::invalid_argument);
}

TEST_CASE("temperature sweep: the tunneling column is one bit pattern") {
  const auto problem = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(constants().m_p), Energy::electron_volts(0.05),
      BarrierPotential::rectangular(Energy::electron_volts(0.4), Length::nanometres(0.05)),
      AngularFrequency::radians_per_second(2e13));
  const auto table = temperature_sweep(problem, 250.0, 350.0, 101);
  REQUIRE(table.size() == 101);
  for (const auto& row : table) CHECK(row.rate_per_s == table.front().rate_per_s);
}

TEST_CASE("temperature sweep: ln k vs 1/T recovers -E_A/k_B") {
  const double ea = 0.5 * unit::electron_volt;
  const auto model = ThermalModel::make(Rate::per_second(1e12), Energy::joules(ea),
                                        Temperature::kelvin(300.0));
  const auto table = temperature_sweep(model, 250.0, 350.0, 60);
  std::vector<double> inv_t, ln_k;
  for (const auto& row : table) {
    inv_t.push_back(1.0 / row.temperature_k);
    ln_k.push_back(std::log(row.rate_per_s));
  }
  const auto fit = numerics::fit_line(inv_t, ln_k);
  CHECK_THAT(fit.slope, WithinRel(-ea / constants().k_b, 1e-10));
  CHECK_THAT(fit.intercept, WithinRel(std::log(1e12), 1e-10));

  // E_A = 0: flat at the prefactor.
  const auto flat = temperature_sweep(
      ThermalModel::make(Rate::per_second(3e11), Energy::joules(0.0), Temperature::kelvin(300.0)),
      250.0, 350.0, 10);
  for (const auto& row : flat) CHECK(row.rate_per_s == 3e11);
}

TEST_CASE("tabulated barriers: csv ingestion in both header conventions") {
  const char* metres =
      "q_m,V_eV\n-1e-10,0\n-0.5e-10,0.45\n0,0.5\n0.5e-10,0.45\n1e-10,0\n";
  const char* angstroms =
      "q_angstrom,V_eV\n-1,0\n-0.5,0.45\n0,0.5\n0.5,0.45\n1,0\n";
  std::istringstream a(metres), b(angstroms);
  const auto ba = barrier_from_csv(a);
  const auto bb = barrier_from_csv(b);
  CHECK(ba.domain_min() == bb.domain_min());
  CHECK_THAT(ba(0.0), WithinRel(0.5 * unit::electron_volt, 1e-12));
  CHECK(ba(0.25e-10) == bb(0.25e-10));
  CHECK_THAT(ba.peak_height(), WithinRel(0.5 * unit::electron_volt, 1e-12));

  // Interpolation is continuous across knots (difference bounded by the
  // local slope times the probe spacing).
  const double knot = 0.5e-10;
  CHECK_THAT(ba(knot - 1e-17), WithinRel(ba(knot + 1e-17), 1e-6));
}

TEST_CASE("tabulated barriers: malformed inputs are rejected") {
  std::istringstream bad_header("q_feet,V_eV\n1,2\n");
  CHECK_THROWS_AS(barrier_from_csv(bad_header), std::invalid_argument);
  std::istringstream too_short("q_m,V_eV\n0,0\n1,1\n2,0\n");
  CHECK_THROWS_AS(barrier_from_csv(too_short), std::invalid_argument);
  std::istringstream non_monotone("q_m,V_eV\n0,0\n2,1\n1,1\n3,0\n");
  CHECK_THROWS_AS(barrier_from_csv(non_monotone), std::invalid_argument);
  std::istringstream bad_number("q_m,V_eV\n0,0\n1,x\n2,1\n3,0\n");
  CHECK_THROWS_AS(barrier_from_csv(bad_number), std::invalid_argument);
}

TEST_CASE("wkb action on a tabulated barrier tracks the sampled shape") {
  // Dense samples of the parabolic cap; pchip through them should land close
  // to the analytic action.
  std::vector<double> q, v;
  const double l = 0.4 * unit::nanometre;
  for (int i = 0; i <= 400; ++i) {
    const double x = -l + 2.0 * l * i / 400.0;
    q.push_back(x);
    v.push_back(std::max(0.0, unit::electron_volt * (1.0 - (x / l) * (x / l))));
  }
  const auto problem = TunnelingProblem::with_attempt_frequency(
      Mass::kilograms(constants().m_e), Energy::electron_volts(0.3),
      BarrierPotential::tabulated(q, v), AngularFrequency::radians_per_second(1e13));
  const double expected =
      parab_theta(constants().m_e, unit::electron_volt, 0.3 * unit::electron_volt, l);
  CHECK_THAT(wkb_action(problem), WithinRel(expected, 1e-5));
}
