#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "quasyn/constants.hpp"
#include "quasyn/lanczos.hpp"
#include "quasyn/units.hpp"

namespace quasyn::mixed {

struct GridTooSmallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Doublet identification failed (missing partner or ambiguous symmetry
/// character, e.g. near a level crossing). Reported, never silently resolved.
struct PairingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coupling between the tunneling coordinate xi and the transverse mode eta.
///   symmetric:      c * xi^2 * eta   [J/m^3]  (V keeps xi -> -xi symmetry)
///   antisymmetric:  c * xi  * eta    [J/m^2]  (V keeps (xi,eta) -> -(xi,eta))
/// For both forms +c and -c give identical spectra (an eta or combined mirror
/// maps one onto the other), so the shape of the coupling, not its sign,
/// decides how transverse excitation acts on the splitting.
enum class CouplingForm { none, symmetric, antisymmetric };

inline std::string_view to_string(CouplingForm f) {
  switch (f) {
    case CouplingForm::none: return "none";
    case CouplingForm::symmetric: return "symmetric";
    case CouplingForm::antisymmetric: return "antisymmetric";
  }
  return "?";
}

struct Pes2DSpec {
  double barrier_height_j;       // V_b of the quartic double well
  double well_position_m;        // minima at +-xi0
  double eta_frequency_rad_s;    // transverse harmonic frequency
  double mass_xi_kg;
  double mass_eta_kg;
  CouplingForm form = CouplingForm::none;
  double coupling = 0.0;         // units depend on the form
};

/// V(xi, eta) = V_b ((xi/xi0)^2 - 1)^2 + 1/2 m_eta w^2 eta^2 + coupling term.
class Pes2D {
 public:
  explicit Pes2D(const Pes2DSpec& s) : s_(s) {
    if (!(s.barrier_height_j > 0.0)) throw std::invalid_argument("pes: barrier height must be positive");
    if (!(s.well_position_m > 0.0)) throw std::invalid_argument("pes: well position must be positive");
    if (!(s.eta_frequency_rad_s > 0.0)) throw std::invalid_argument("pes: eta frequency must be positive");
    if (!(s.mass_xi_kg > 0.0) || !(s.mass_eta_kg > 0.0)) {
      throw std::invalid_argument("pes: masses must be positive");
    }
    if (s.form == CouplingForm::none && s.coupling != 0.0) {
      throw std::invalid_argument("pes: coupling strength given without a coupling form");
    }
  }

  double value(double xi, double eta) const {
    double v = double_well(xi) + 0.5 * s_.mass_eta_kg * s_.eta_frequency_rad_s *
                                     s_.eta_frequency_rad_s * eta * eta;
    switch (s_.form) {
      case CouplingForm::none: break;
      case CouplingForm::symmetric: v += s_.coupling * xi * xi * eta; break;
      case CouplingForm::antisymmetric: v += s_.coupling * xi * eta; break;
    }
    return v;
  }

  double double_well(double xi) const {
    const double u = (xi / s_.well_position_m) * (xi / s_.well_position_m) - 1.0;
    return s_.barrier_height_j * u * u;
  }

  /// min over eta of V(xi, .) at fixed xi; both coupling forms are linear in
  /// eta so the transverse section stays a shifted parabola.
  double transverse_floor(double xi) const {
    const double mw2 = s_.mass_eta_kg * s_.eta_frequency_rad_s * s_.eta_frequency_rad_s;
    double f = 0.0;
    switch (s_.form) {
      case CouplingForm::none: break;
      case CouplingForm::symmetric: f = s_.coupling * xi * xi; break;
      case CouplingForm::antisymmetric: f = s_.coupling * xi; break;
    }
    return double_well(xi) - 0.5 * f * f / mw2;
  }

  /// Transverse curvature frequency at fixed xi; constant for linear-in-eta
  /// couplings.
  double local_eta_frequency(double /*xi*/) const { return s_.eta_frequency_rad_s; }

  /// True when V(xi, eta) = V(-xi, eta); the antisymmetric form only keeps
  /// the combined inversion V(xi, eta) = V(-xi, -eta).
  bool xi_mirror_symmetric() const { return s_.form != CouplingForm::antisymmetric; }

  const Pes2DSpec& spec() const { return s_; }

 private:
  Pes2DSpec s_;
};

inline Pes2D build_pes(const Pes2DSpec& spec) { return Pes2D(spec); }

/// Uniform interior-point grid on [-L, L] per axis (Dirichlet walls at +-L).
/// Points are mirror symmetric: x_{n-1-i} = -x_i.
struct Grid2D {
  int n_xi;
  int n_eta;
  double xi_half_extent_m;
  double eta_half_extent_m;

  static Grid2D make(int n_xi, int n_eta, Length xi_half_extent, Length eta_half_extent) {
    if (n_xi < 32 || n_eta < 32) throw std::invalid_argument("grid: need at least 32 points per axis");
    const double lx = xi_half_extent.in_metres(), le = eta_half_extent.in_metres();
    if (!(lx > 0.0) || !(le > 0.0)) throw std::invalid_argument("grid: extents must be positive");
    return {n_xi, n_eta, lx, le};
  }

  double xi_step() const { return 2.0 * xi_half_extent_m / (n_xi + 1); }
  double eta_step() const { return 2.0 * eta_half_extent_m / (n_eta + 1); }
  double xi_at(int i) const { return -xi_half_extent_m + (i + 1) * xi_step(); }
  double eta_at(int j) const { return -eta_half_extent_m + (j + 1) * eta_step(); }
  std::size_t size() const { return static_cast<std::size_t>(n_xi) * n_eta; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_eta + j; }

  Grid2D halved() const {
    return {std::max(32, n_xi / 2), std::max(32, n_eta / 2), xi_half_extent_m, eta_half_extent_m};
  }
};

/// Second-order 5-point finite-difference Hamiltonian for an arbitrary
/// potential sampled on the grid. Full symmetric storage.
inline Eigen::SparseMatrix<double> fd_hamiltonian(
    const std::function<double(double, double)>& potential, const Grid2D& grid,
    double mass_xi_kg, double mass_eta_kg) {
  const double hbar = constants().hbar;
  const double hx = grid.xi_step(), he = grid.eta_step();
  const double tx = hbar * hbar / (2.0 * mass_xi_kg * hx * hx);
  const double te = hbar * hbar / (2.0 * mass_eta_kg * he * he);
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * 5);
  for (int i = 0; i < grid.n_xi; ++i) {
    for (int j = 0; j < grid.n_eta; ++j) {
      const auto row = static_cast<Eigen::Index>(grid.index(i, j));
      const double v = potential(grid.xi_at(i), grid.eta_at(j));
      entries.emplace_back(row, row, v + 2.0 * tx + 2.0 * te);
      if (i + 1 < grid.n_xi) {
        const auto col = static_cast<Eigen::Index>(grid.index(i + 1, j));
        entries.emplace_back(row, col, -tx);
        entries.emplace_back(col, row, -tx);
      }
      if (j + 1 < grid.n_eta) {
        const auto col = static_cast<Eigen::Index>(grid.index(i, j + 1));
        entries.emplace_back(row, col, -te);
        entries.emplace_back(col, row, -te);
      }
    }
  }
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

struct SolverOptions {
  double residual_tol_rel = 1e-10;   // vs the Gershgorin bound on ||H||
  double boundary_tol = 1e-8;        // max boundary-layer amplitude, relative
  std::uint64_t seed = 0x5eedULL;
  int max_iterations = 0;
};

struct EigenSolution {
  std::vector<double> energies_j;   // ascending
  Eigen::MatrixXd wavefunctions;    // grid-major columns, unit L2 norm
  std::vector<double> residuals;
  double operator_norm;
  Grid2D grid;
};

/// Lowest n_states eigenpairs of the finite-difference Hamiltonian for an
/// arbitrary potential. Boundary amplitudes of every returned state must stay
/// below boundary_tol or the grid is rejected as too small.
inline EigenSolution eigensolve_potential(const std::function<double(double, double)>& potential,
                                          double mass_xi_kg, double mass_eta_kg,
                                          const Grid2D& grid, int n_states,
                                          const SolverOptions& opts = {}) {
  if (n_states < 1) throw std::invalid_argument("eigensolve: need at least one state");
  const auto h = fd_hamiltonian(potential, grid, mass_xi_kg, mass_eta_kg);

  double v_min = potential(grid.xi_at(0), grid.eta_at(0));
  for (int i = 0; i < grid.n_xi; ++i) {
    for (int j = 0; j < grid.n_eta; ++j) {
      v_min = std::min(v_min, potential(grid.xi_at(i), grid.eta_at(j)));
    }
  }

  lanczos::Options lopts;
  lopts.residual_tol_rel = opts.residual_tol_rel;
  lopts.seed = opts.seed;
  lopts.max_iterations = opts.max_iterations;
  // Kinetic part is positive semidefinite, so the spectrum lies above v_min;
  // shift slightly below it.
  const double sigma = v_min - 1e-3 * lanczos::gershgorin_norm(h);
  auto res = lanczos::lowest_eigenpairs(h, n_states, sigma, lopts);

  EigenSolution sol{{}, std::move(res.vectors), std::move(res.residuals), res.operator_norm, grid};
  sol.energies_j.assign(res.values.data(), res.values.data() + res.values.size());

  for (int s = 0; s < sol.wavefunctions.cols(); ++s) {
    double boundary = 0.0, peak = 0.0;
    for (int i = 0; i < grid.n_xi; ++i) {
      for (int j = 0; j < grid.n_eta; ++j) {
        const double a = std::abs(sol.wavefunctions(grid.index(i, j), s));
        peak = std::max(peak, a);
        if (i == 0 || j == 0 || i + 1 == grid.n_xi || j + 1 == grid.n_eta) {
          boundary = std::max(boundary, a);
        }
      }
    }
    if (boundary > opts.boundary_tol * peak) {
      throw GridTooSmallError("state " + std::to_string(s) +
                              " has boundary amplitude above the tolerance; enlarge the grid extents");
    }
  }
  return sol;
}

inline EigenSolution eigensolve(const Pes2D& pes, const Grid2D& grid, int n_states,
                                const SolverOptions& opts = {}) {
  return eigensolve_potential([&pes](double x, double e) { return pes.value(x, e); },
                              pes.spec().mass_xi_kg, pes.spec().mass_eta_kg, grid, n_states, opts);
}

namespace detail {

/// xi-mirror character <psi | M_xi psi>; +-1 for exact parity eigenstates,
/// degraded magnitude (a Franck-Condon overlap) under antisymmetric coupling
/// where only the sign remains meaningful.
inline double xi_mirror_character(const Eigen::MatrixXd& states, int s, const Grid2D& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.n_xi; ++i) {
    for (int j = 0; j < grid.n_eta; ++j) {
      acc += states(grid.index(i, j), s) * states(grid.index(grid.n_xi - 1 - i, j), s);
    }
  }
  return acc;
}

/// Transverse node count along the eta slice through the right well.
inline int eta_node_count(const Eigen::MatrixXd& states, int s, const Grid2D& grid,
                          double well_position_m) {
  int i_well = 0;
  double best = std::abs(grid.xi_at(0) - well_position_m);
  for (int i = 1; i < grid.n_xi; ++i) {
    const double d = std::abs(grid.xi_at(i) - well_position_m);
    if (d < best) {
      best = d;
      i_well = i;
    }
  }
  double peak = 0.0;
  for (int j = 0; j < grid.n_eta; ++j) {
    peak = std::max(peak, std::abs(states(grid.index(i_well, j), s)));
  }
  const double floor = 1e-3 * peak;
  int nodes = 0;
  double prev = 0.0;
  for (int j = 0; j < grid.n_eta; ++j) {
    const double a = states(grid.index(i_well, j), s);
    if (std::abs(a) <= floor) continue;
    if (prev != 0.0 && (a > 0.0) != (prev > 0.0)) ++nodes;
    prev = a;
  }
  return nodes;
}

}  // namespace detail

/// Tunneling doublets per transverse quantum number. splittings_j[n] is the
/// gap between the xi-antisymmetric and xi-symmetric member of the channel-n
/// doublet; positive whenever the doublet is below the barrier.
struct SplittingSpectrum {
  std::vector<double> splittings_j;
  std::vector<double> symmetric_energies_j;
  std::vector<double> antisymmetric_energies_j;

  int levels() const { return static_cast<int>(splittings_j.size()); }
};

/// Pair doublets by (xi-mirror character sign, eta node count) rather than by
/// adjacency in energy, so level crossings as the coupling grows do not
/// scramble the pairing.
inline SplittingSpectrum splitting_spectrum(const Pes2D& pes, const Grid2D& grid,
                                            int n_transverse_max,
                                            const SolverOptions& opts = {}) {
  if (n_transverse_max < 0) throw std::invalid_argument("splitting_spectrum: n_transverse_max >= 0");
  constexpr double kCharacterFloor = 0.2;

  int n_states = std::max(16, 4 * (n_transverse_max + 1) + 4);
  for (int attempt = 0;; ++attempt) {
    const auto sol = eigensolve(pes, grid, n_states, opts);

    struct Slot {
      std::optional<int> state;
      double energy = 0.0;
    };
    std::vector<Slot> sym(n_transverse_max + 1), anti(n_transverse_max + 1);
    std::vector<int> ambiguous;
    for (int s = 0; s < static_cast<int>(sol.energies_j.size()); ++s) {
      const double character = detail::xi_mirror_character(sol.wavefunctions, s, grid);
      if (std::abs(character) < kCharacterFloor) {
        ambiguous.push_back(s);
        continue;
      }
      const int nodes =
          detail::eta_node_count(sol.wavefunctions, s, grid, pes.spec().well_position_m);
      if (nodes > n_transverse_max) continue;
      auto& slot = character > 0.0 ? sym[nodes] : anti[nodes];
      if (!slot.state) {
        slot.state = s;
        slot.energy = sol.energies_j[s];
      }
    }

    bool complete = true;
    for (int n = 0; n <= n_transverse_max; ++n) {
      if (!sym[n].state || !anti[n].state) complete = false;
    }
    if (complete) {
      SplittingSpectrum out;
      for (int n = 0; n <= n_transverse_max; ++n) {
        out.symmetric_energies_j.push_back(sym[n].energy);
        out.antisymmetric_energies_j.push_back(anti[n].energy);
        out.splittings_j.push_back(anti[n].energy - sym[n].energy);
      }
      return out;
    }
    // States of indeterminate mirror character cannot be paired no matter how
    // many more eigenpairs are computed; report instead of guessing.
    if (!ambiguous.empty()) {
      std::string msg = "splitting_spectrum: ambiguous xi-mirror character (level crossing or "
                        "overwhelming coupling) for state(s)";
      for (int s : ambiguous) msg += ' ' + std::to_string(s);
      throw PairingError(msg);
    }
    if (attempt == 2) {
      throw PairingError("splitting_spectrum: could not pair doublets up to n = " +
                         std::to_string(n_transverse_max) + " from " +
                         std::to_string(sol.energies_j.size()) + " states");
    }
    n_states = n_states + n_states / 2;
  }
}

enum class ModeEffect { neutral, promoting, suppressing, oscillating };

inline std::string_view to_string(ModeEffect e) {
  switch (e) {
    case ModeEffect::neutral: return "neutral";
    case ModeEffect::promoting: return "promoting";
    case ModeEffect::suppressing: return "suppressing";
    case ModeEffect::oscillating: return "oscillating";
  }
  return "?";
}

/// How transverse excitation acts on the splitting: flat within tol ->
/// neutral; monotone growth/decay beyond tol -> promoting/suppressing;
/// anything else oscillating.
inline ModeEffect classify_mode_effect(const SplittingSpectrum& spectrum, double rel_tol = 0.02) {
  if (spectrum.levels() < 2) throw std::invalid_argument("classify_mode_effect: need >= 2 levels");
  const double base = spectrum.splittings_j.front();
  if (base == 0.0) throw std::invalid_argument("classify_mode_effect: vanishing ground splitting");
  std::vector<double> ratio;
  for (double d : spectrum.splittings_j) ratio.push_back(d / base);

  bool up = true, down = true;
  double spread = 0.0;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    spread = std::max(spread, std::abs(ratio[i] - 1.0));
    if (i > 0) {
      if (ratio[i] < ratio[i - 1] - rel_tol) up = false;
      if (ratio[i] > ratio[i - 1] + rel_tol) down = false;
    }
  }
  if (spread < rel_tol) return ModeEffect::neutral;
  if (up && !down) return ModeEffect::promoting;
  if (down && !up) return ModeEffect::suppressing;
  return ModeEffect::oscillating;
}

/// Pointwise classification at total energy E and transverse channel energy
/// E_eta:
///   R - classically allowed, V <= E;
///   C - forbidden in xi but the transverse motion at this xi slice is still
///       classically energetic: E_eta > min_eta V(xi,.) + hbar w_local / 2;
///   I - forbidden in every direction.
struct RegionMap {
  int n_xi;
  int n_eta;
  std::vector<char> labels;  // 'R' | 'C' | 'I', xi-major

  char at(int i, int j) const { return labels[static_cast<std::size_t>(i) * n_eta + j]; }
  std::size_t count(char label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
  }
};

inline RegionMap classify_regions(const Pes2D& pes, double e_total_j, double e_eta_j,
                                  const Grid2D& grid) {
  if (!(e_total_j > 0.0)) throw std::invalid_argument("classify_regions: E_total must be positive");
  RegionMap map{grid.n_xi, grid.n_eta, {}};
  map.labels.resize(grid.size());
  const double hbar = constants().hbar;
  for (int i = 0; i < grid.n_xi; ++i) {
    const double xi = grid.xi_at(i);
    const double channel_gate =
        pes.transverse_floor(xi) + 0.5 * hbar * pes.local_eta_frequency(xi);
    for (int j = 0; j < grid.n_eta; ++j) {
      char label;
      if (pes.value(xi, grid.eta_at(j)) <= e_total_j) {
        label = 'R';
      } else if (e_eta_j > channel_gate) {
        label = 'C';
      } else {
        label = 'I';
      }
      map.labels[grid.index(i, j)] = label;
    }
  }
  return map;
}

/// Richardson estimate of the grid error of the ground splitting: solve at
/// half resolution and scale the h^2 difference.
inline double splitting_convergence_estimate(const Pes2D& pes, const Grid2D& grid,
                                             const SolverOptions& opts = {}) {
  const auto fine = splitting_spectrum(pes, grid, 0, opts);
  const auto coarse = splitting_spectrum(pes, grid.halved(), 0, opts);
  return std::abs(fine.splittings_j[0] - coarse.splittings_j[0]) / 3.0;
}

struct MixedPreset {
  std::string name;
  Pes2DSpec pes;
  Grid2D grid;
};

/// Named desk-scale surfaces. All use a proton in both coordinates, a 0.3 eV
/// barrier with wells at +-0.3 A and a 0.1 eV transverse quantum; they differ
/// only in the coupling:
///   neutral     - uncoupled; transverse excitation leaves the splitting alone
///   promoting   - symmetric   c = +3.0 eV/A^3 (corner-cutting path)
///   suppressing - antisymmetric c = +0.25 eV/A^2 (oppositely displaced wells)
inline MixedPreset mixed_preset(std::string_view name) {
  const auto c = constants();
  Pes2DSpec pes{
      Energy::electron_volts(0.3).in_joules(),
      Length::angstroms(0.3).in_metres(),
      Energy::electron_volts(0.1).in_joules() / c.hbar,
      c.m_p,
      c.m_p,
      CouplingForm::none,
      0.0,
  };
  const Grid2D grid = Grid2D::make(128, 64, Length::angstroms(1.3), Length::angstroms(1.8));
  if (name == "neutral") {
    return {"neutral", pes, grid};
  }
  if (name == "promoting") {
    pes.form = CouplingForm::symmetric;
    pes.coupling = 3.0 * unit::electron_volt / (unit::angstrom * unit::angstrom * unit::angstrom);
    return {"promoting", pes, grid};
  }
  if (name == "suppressing") {
    pes.form = CouplingForm::antisymmetric;
    pes.coupling = 0.25 * unit::electron_volt / (unit::angstrom * unit::angstrom);
    return {"suppressing", pes, grid};
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (expected neutral|promoting|suppressing)");
}

}  // namespace quasyn::mixed
