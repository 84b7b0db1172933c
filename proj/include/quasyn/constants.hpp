#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "quasyn/units.hpp"

namespace quasyn {

/// Fundamental constants, CODATA 2018, SI units throughout.
struct PhysicalConstants {
  double hbar;  // reduced Planck constant [J s]
  double k_b;   // Boltzmann constant [J/K]
  double m_p;   // proton mass [kg]
  double m_e;   // electron mass [kg]
  double e_p;   // elementary charge [C]

  constexpr double k_b_ev_per_k() const { return k_b / e_p; }
  constexpr double proton_electron_mass_ratio() const { return m_p / m_e; }
};

/// The single constant set used everywhere in the library.
constexpr PhysicalConstants constants() {
  return PhysicalConstants{
      1.054571817e-34,    // hbar
      1.380649e-23,       // k_B (exact)
      1.67262192369e-27,  // m_p
      9.1093837015e-31,   // m_e
      1.602176634e-19,    // e (exact)
  };
}

enum class Particle { electron, proton, protium, deuterium, tritium };

/// Nuclear/lepton masses for the tunneling comparisons. Protium is the
/// hydrogen-1 nucleus, i.e. a proton.
constexpr double particle_mass_kg(Particle p) {
  switch (p) {
    case Particle::electron:
      return constants().m_e;
    case Particle::proton:
    case Particle::protium:
      return constants().m_p;
    case Particle::deuterium:
      return 3.3435837724e-27;  // deuteron
    case Particle::tritium:
      return 5.0073567446e-27;  // triton
  }
  return 0.0;  // unreachable
}

inline Particle particle_from_name(std::string_view name) {
  if (name == "electron") return Particle::electron;
  if (name == "proton") return Particle::proton;
  if (name == "protium") return Particle::protium;
  if (name == "deuterium") return Particle::deuterium;
  if (name == "tritium") return Particle::tritium;
  throw std::invalid_argument("unknown particle '" + std::string(name) +
                              "' (expected electron|proton|protium|deuterium|tritium)");
}

/// Water-molecule dipole parameters used by the collective-emission model.
/// The moment of inertia and dipole moment are derived quantities and are
/// computed, never stored, so I = 2 m_p d^2 and mu = 2 e_p P hold exactly.
struct WaterDipoleParams {
  double d_m;        // rotational arm [m]
  double p_m;        // charge displacement [m]
  double epsilon_j;  // gap between the two principal levels [J]
  double m_p_kg;     // proton mass used in the derivations
  double e_p_c;      // proton charge used in the derivations

  constexpr double moment_of_inertia_kg_m2() const { return 2.0 * m_p_kg * d_m * d_m; }
  constexpr double dipole_moment_c_m() const { return 2.0 * e_p_c * p_m; }
  constexpr Energy epsilon() const { return Energy::joules(epsilon_j); }
};

constexpr WaterDipoleParams water_params(const PhysicalConstants& c) {
  return WaterDipoleParams{
      0.82e-10,                 // d = 0.82 A
      0.2e-10,                  // P = 0.2 A
      24.8e-3 * unit::electron_volt,  // 24.8 meV two-level gap
      c.m_p,
      c.e_p,
  };
}

/// Angular frequency of the two-level transition, epsilon / hbar.
inline AngularFrequency transition_frequency(const WaterDipoleParams& w) {
  if (!(w.epsilon_j > 0.0)) {
    throw std::invalid_argument("transition_frequency: level gap must be positive");
  }
  return AngularFrequency::radians_per_second(w.epsilon_j / constants().hbar);
}

}  // namespace quasyn
