#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "quasyn/constants.hpp"
#include "quasyn/units.hpp"

namespace quasyn::dicke {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// N identical two-level dipoles with gap epsilon, treated as one collective
/// pseudo-spin S = N/2 (symmetric sector).
struct TwoLevelEnsemble {
  int size;             // N
  double epsilon_j;     // level gap
  double dipole_c_m;    // electric dipole moment (informational; the coupling
                        // matrix element lives in CavityMode)

  static TwoLevelEnsemble make(int n, Energy epsilon, double dipole_c_m = 0.0) {
    if (n < 1) throw std::invalid_argument("ensemble: N must be >= 1");
    if (!(epsilon.in_joules() > 0.0)) throw std::invalid_argument("ensemble: epsilon must be positive");
    if (dipole_c_m < 0.0) throw std::invalid_argument("ensemble: dipole moment must be >= 0");
    return {n, epsilon.in_joules(), dipole_c_m};
  }

  static TwoLevelEnsemble water(int n) {
    const auto w = water_params(constants());
    return {n, w.epsilon_j, w.dipole_moment_c_m()};
  }
};

/// One quantized field mode. `coupling_j` is the full interaction matrix
/// element in joules: the dipole moment and the field normalization (mode
/// volume, polarization) are absorbed into it, since the model fixes neither.
struct CavityMode {
  double omega_rad_s;
  std::array<double, 3> wavevector_per_m;
  double coupling_j;
};

struct CavityModeSet {
  std::vector<CavityMode> modes;
  int photon_cutoff;  // max Fock occupation per mode

  static CavityModeSet single_resonant(double epsilon_j, double coupling_j, int cutoff) {
    const double omega = epsilon_j / constants().hbar;
    return make({CavityMode{omega, {0.0, 0.0, 0.0}, coupling_j}}, cutoff);
  }

  static CavityModeSet make(std::vector<CavityMode> modes, int cutoff) {
    if (modes.empty()) throw std::invalid_argument("mode set: need at least one mode");
    if (cutoff < 1) throw std::invalid_argument("mode set: photon cutoff must be >= 1");
    for (const auto& m : modes) {
      if (!(m.omega_rad_s > 0.0)) throw std::invalid_argument("mode set: omega must be positive");
      if (!std::isfinite(m.coupling_j)) throw std::invalid_argument("mode set: coupling must be finite");
    }
    return {std::move(modes), cutoff};
  }
};

/// Product basis |S=N/2, m> (x) |n_1 ... n_K>, m = -N/2 .. N/2 stored as the
/// index 0..N. Flat index is spin-major with the Fock labels in mixed radix.
class CollectiveBasis {
 public:
  CollectiveBasis(int n_molecules, int n_modes, int photon_cutoff)
      : n_molecules_(n_molecules), n_modes_(n_modes), photon_cutoff_(photon_cutoff) {
    if (n_molecules < 1) throw std::invalid_argument("basis: N must be >= 1");
    if (n_modes < 1) throw std::invalid_argument("basis: need at least one mode");
    if (photon_cutoff < 1) throw std::invalid_argument("basis: photon cutoff must be >= 1");
    fock_dim_ = 1;
    for (int k = 0; k < n_modes_; ++k) {
      fock_dim_ *= static_cast<std::size_t>(photon_cutoff_ + 1);
    }
    dim_ = static_cast<std::size_t>(n_molecules_ + 1) * fock_dim_;
  }

  static CollectiveBasis for_system(const TwoLevelEnsemble& ens, const CavityModeSet& modes) {
    return CollectiveBasis(ens.size, static_cast<int>(modes.modes.size()), modes.photon_cutoff);
  }

  std::size_t dimension() const { return dim_; }
  int n_molecules() const { return n_molecules_; }
  int n_modes() const { return n_modes_; }
  int photon_cutoff() const { return photon_cutoff_; }
  double total_spin() const { return 0.5 * n_molecules_; }
  /// m value for spin index 0..N (half-integer for odd N).
  double spin_m(int m_index) const { return m_index - 0.5 * n_molecules_; }

  std::size_t flatten(int m_index, const std::vector<int>& fock) const {
    if (m_index < 0 || m_index > n_molecules_ ||
        fock.size() != static_cast<std::size_t>(n_modes_)) {
      throw std::out_of_range("basis: label out of range");
    }
    std::size_t idx = static_cast<std::size_t>(m_index);
    for (int k = 0; k < n_modes_; ++k) {
      if (fock[k] < 0 || fock[k] > photon_cutoff_) throw std::out_of_range("basis: Fock label out of range");
      idx = idx * (photon_cutoff_ + 1) + fock[k];
    }
    return idx;
  }

  struct Label {
    int m_index;
    std::vector<int> fock;
  };

  Label unflatten(std::size_t index) const {
    if (index >= dim_) throw std::out_of_range("basis: flat index out of range");
    Label lab;
    lab.fock.resize(n_modes_);
    for (int k = n_modes_ - 1; k >= 0; --k) {
      lab.fock[k] = static_cast<int>(index % (photon_cutoff_ + 1));
      index /= (photon_cutoff_ + 1);
    }
    lab.m_index = static_cast<int>(index);
    return lab;
  }

  friend bool operator==(const CollectiveBasis&, const CollectiveBasis&) = default;

 private:
  int n_molecules_;
  int n_modes_;
  int photon_cutoff_;
  std::size_t fock_dim_ = 0;
  std::size_t dim_ = 0;
};

enum HamiltonianTerm : unsigned {
  kTermWM = 1u,   // molecular part
  kTermEM = 2u,   // field part
  kTermInt = 4u,  // dipole-field interaction
};

struct HamiltonianMatrix {
  Matrix matrix;
  CollectiveBasis basis;
  unsigned terms = 0;
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& m, double rel_tol = 1e-12) {
  const double scale = std::max(max_abs(m), 1e-300);
  return max_abs(Matrix(m - m.adjoint())) < rel_tol * scale;
}

/// Molecular Hamiltonian: epsilon * S_z, diagonal in m, identity on photons.
inline HamiltonianMatrix build_hwm(const TwoLevelEnsemble& ens, const CollectiveBasis& basis) {
  if (basis.n_molecules() != ens.size) {
    throw std::invalid_argument("build_hwm: basis was built for a different ensemble size");
  }
  Matrix h = Matrix::Zero(basis.dimension(), basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto lab = basis.unflatten(i);
    h(i, i) = ens.epsilon_j * basis.spin_m(lab.m_index);
  }
  return {std::move(h), basis, kTermWM};
}

/// Field Hamiltonian: sum_k hbar omega_k (n_k + 1/2), diagonal in the Fock
/// labels including the zero-point shift.
inline HamiltonianMatrix build_hem(const CavityModeSet& modes, const CollectiveBasis& basis) {
  if (static_cast<int>(modes.modes.size()) != basis.n_modes()) {
    throw std::invalid_argument("build_hem: basis was built for a different mode count");
  }
  const double hbar = constants().hbar;
  Matrix h = Matrix::Zero(basis.dimension(), basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto lab = basis.unflatten(i);
    double e = 0.0;
    for (std::size_t k = 0; k < modes.modes.size(); ++k) {
      e += hbar * modes.modes[k].omega_rad_s * (lab.fock[k] + 0.5);
    }
    h(i, i) = e;
  }
  return {std::move(h), basis, kTermEM};
}

/// Interaction in the rotating-wave form sum_k g_k (a_k^dag S^- + a_k S^+),
/// with S^+- acting as collective ladder operators,
/// <m+-1| S^+- |m> = sqrt(S(S+1) - m(m+-1)). With `counter_rotating` the
/// energy-non-conserving pair g_k (a_k S^- + a_k^dag S^+) is added as well.
inline HamiltonianMatrix build_interaction(const TwoLevelEnsemble& ens,
                                           const CavityModeSet& modes,
                                           const CollectiveBasis& basis,
                                           bool counter_rotating = false) {
  if (basis.n_molecules() != ens.size) {
    throw std::invalid_argument("build_interaction: basis/ensemble size mismatch");
  }
  if (static_cast<int>(modes.modes.size()) != basis.n_modes()) {
    throw std::invalid_argument("build_interaction: basis/mode count mismatch");
  }
  const double s = basis.total_spin();
  Matrix h = Matrix::Zero(basis.dimension(), basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto lab = basis.unflatten(i);
    const double m = basis.spin_m(lab.m_index);
    // S^- matrix element out of |m>.
    const double lower = std::sqrt(std::max(0.0, s * (s + 1.0) - m * (m - 1.0)));
    for (std::size_t k = 0; k < modes.modes.size(); ++k) {
      const double g = modes.modes[k].coupling_j;
      if (g == 0.0) continue;
      if (lab.m_index >= 1) {
        if (lab.fock[k] + 1 <= basis.photon_cutoff()) {
          // a_k^dag S^- |m, n_k>  ->  |m-1, n_k+1>
          auto to = lab.fock;
          ++to[k];
          const std::size_t j = basis.flatten(lab.m_index - 1, to);
          const double el = g * lower * std::sqrt(static_cast<double>(lab.fock[k] + 1));
          h(j, i) += el;
          h(i, j) += el;
        }
        if (counter_rotating && lab.fock[k] >= 1) {
          // a_k S^- |m, n_k>  ->  |m-1, n_k-1>
          auto to = lab.fock;
          --to[k];
          const std::size_t j = basis.flatten(lab.m_index - 1, to);
          const double el = g * lower * std::sqrt(static_cast<double>(lab.fock[k]));
          h(j, i) += el;
          h(i, j) += el;
        }
      }
    }
  }
  return {std::move(h), basis, kTermInt};
}

inline HamiltonianMatrix build_total(const TwoLevelEnsemble& ens, const CavityModeSet& modes,
                                     const CollectiveBasis& basis,
                                     bool counter_rotating = false) {
  auto wm = build_hwm(ens, basis);
  auto em = build_hem(modes, basis);
  auto in = build_interaction(ens, modes, basis, counter_rotating);
  Matrix total = wm.matrix + em.matrix + in.matrix;
  return {std::move(total), basis, kTermWM | kTermEM | kTermInt};
}

/// Total excitation number N_exc = sum_k n_k + S_z + N/2; commutes with the
/// rotating-wave Hamiltonian.
inline Matrix excitation_operator(const CollectiveBasis& basis) {
  Matrix n = Matrix::Zero(basis.dimension(), basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto lab = basis.unflatten(i);
    double exc = basis.spin_m(lab.m_index) + basis.total_spin();
    for (int f : lab.fock) exc += f;
    n(i, i) = exc;
  }
  return n;
}

struct QuantumState {
  Vector amplitudes;
  CollectiveBasis basis;

  double norm() const { return amplitudes.norm(); }

  /// All molecules excited, all modes empty.
  static QuantumState fully_excited(const CollectiveBasis& basis) {
    Vector v = Vector::Zero(basis.dimension());
    std::vector<int> vac(basis.n_modes(), 0);
    v(basis.flatten(basis.n_molecules(), vac)) = Complex(1.0, 0.0);
    return {std::move(v), basis};
  }

  static QuantumState ground(const CollectiveBasis& basis) {
    Vector v = Vector::Zero(basis.dimension());
    std::vector<int> vac(basis.n_modes(), 0);
    v(basis.flatten(0, vac)) = Complex(1.0, 0.0);
    return {std::move(v), basis};
  }
};

struct Observables {
  double inversion;                    // <S_z>
  std::vector<double> photon_numbers;  // <n_k>
  double total_excitation;             // <N_exc>
  double norm;
};

inline Observables measure(const QuantumState& state) {
  const auto& basis = state.basis;
  Observables obs{0.0, std::vector<double>(basis.n_modes(), 0.0), 0.0, state.norm()};
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const double p = std::norm(state.amplitudes(i));
    if (p == 0.0) continue;
    const auto lab = basis.unflatten(i);
    obs.inversion += p * basis.spin_m(lab.m_index);
    for (int k = 0; k < basis.n_modes(); ++k) obs.photon_numbers[k] += p * lab.fock[k];
  }
  obs.total_excitation = obs.inversion + basis.total_spin();
  for (double nk : obs.photon_numbers) obs.total_excitation += nk;
  return obs;
}

/// Photon growth rate d<n_tot>/dt = (2/hbar) sum_k g_k Im <a_k^dag S^->,
/// obtained from the Heisenberg equation for n under the rotating-wave
/// interaction. Avoids finite differencing of the trajectory.
inline double emission_rate_per_s(const QuantumState& state, const CavityModeSet& modes) {
  const auto& basis = state.basis;
  const double s = basis.total_spin();
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const Complex ci = state.amplitudes(i);
    if (ci == Complex(0.0, 0.0)) continue;
    const auto lab = basis.unflatten(i);
    const double m = basis.spin_m(lab.m_index);
    if (lab.m_index < 1) continue;
    const double lower = std::sqrt(std::max(0.0, s * (s + 1.0) - m * (m - 1.0)));
    for (std::size_t k = 0; k < modes.modes.size(); ++k) {
      if (lab.fock[k] + 1 > basis.photon_cutoff()) continue;
      auto to = lab.fock;
      ++to[k];
      const std::size_t j = basis.flatten(lab.m_index - 1, to);
      const double el = modes.modes[k].coupling_j * lower *
                        std::sqrt(static_cast<double>(lab.fock[k] + 1));
      acc += std::conj(state.amplitudes(j)) * el * ci;
    }
  }
  return 2.0 * acc.imag() / constants().hbar;
}

struct Trajectory {
  std::vector<double> times_s;
  std::vector<Vector> states;
  CollectiveBasis basis;

  QuantumState state_at(std::size_t i) const { return {states.at(i), basis}; }
};

/// Unitary evolution under a fixed Hamiltonian, sampled every dt up to
/// t_final. Exact eigendecomposition propagator for dimensions <= dense_cap;
/// a scaling-and-squaring matrix exponential of the one-step propagator
/// otherwise. Either way the step map is unitary to rounding.
inline Trajectory evolve(const QuantumState& initial, const HamiltonianMatrix& h,
                         double t_final_s, double dt_s, std::size_t dense_cap = 512) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (t_final_s < 0.0) throw std::invalid_argument("evolve: t_final must be >= 0");
  if (!(h.basis == initial.basis)) throw std::invalid_argument("evolve: state/Hamiltonian basis mismatch");
  if (!is_hermitian(h.matrix)) throw std::invalid_argument("evolve: Hamiltonian is not Hermitian");
  if (std::abs(initial.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("evolve: initial state must be normalized");
  }

  const std::size_t dim = initial.basis.dimension();
  const auto n_steps = static_cast<std::size_t>(std::llround(t_final_s / dt_s));
  Trajectory traj{{}, {}, initial.basis};
  traj.times_s.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times_s.push_back(0.0);
  traj.states.push_back(initial.amplitudes);

  const Complex minus_i_dt_over_hbar(0.0, -dt_s / constants().hbar);
  if (dim <= dense_cap) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
    if (es.info() != Eigen::Success) throw std::runtime_error("evolve: eigendecomposition failed");
    const Eigen::VectorXd& w = es.eigenvalues();
    const Matrix& u = es.eigenvectors();
    Vector phases(dim);
    for (std::size_t i = 0; i < dim; ++i) phases(i) = std::exp(minus_i_dt_over_hbar * w(i));
    Vector coeff = u.adjoint() * initial.amplitudes;
    for (std::size_t step = 1; step <= n_steps; ++step) {
      coeff.array() *= phases.array();
      traj.times_s.push_back(step * dt_s);
      traj.states.push_back(u * coeff);
    }
  } else {
    const Matrix u_step = (minus_i_dt_over_hbar * h.matrix).exp();
    Vector psi = initial.amplitudes;
    for (std::size_t step = 1; step <= n_steps; ++step) {
      psi = u_step * psi;
      traj.times_s.push_back(step * dt_s);
      traj.states.push_back(psi);
    }
  }
  return traj;
}

struct ScanPoint {
  int n_molecules;
  double peak_emission_rate_per_s;
};

struct ScanSettings {
  double epsilon_j;
  double coupling_j;
  double horizon_s;
  double dt_s;
  std::size_t dimension_cap = 4096;
};

/// Peak of d<n>/dt over the horizon for the fully excited collective state
/// coupled to one resonant mode. Photon cutoff N + 2: excitation conservation
/// bounds occupation at N, with margin for the counter-rotating flag.
inline std::vector<ScanPoint> superradiance_scan(const std::vector<int>& n_list,
                                                 const ScanSettings& s) {
  if (!(s.coupling_j >= 0.0)) throw std::invalid_argument("scan: coupling must be >= 0");
  std::vector<ScanPoint> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const auto ens = TwoLevelEnsemble::make(n, Energy::joules(s.epsilon_j));
    const auto modes = CavityModeSet::single_resonant(s.epsilon_j, s.coupling_j, n + 2);
    const CollectiveBasis basis = CollectiveBasis::for_system(ens, modes);
    if (basis.dimension() > s.dimension_cap) {
      throw std::invalid_argument("scan: basis dimension exceeds the configured cap");
    }
    const auto h = build_total(ens, modes, basis);
    const auto traj = evolve(QuantumState::fully_excited(basis), h, s.horizon_s, s.dt_s);
    double peak = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      peak = std::max(peak, std::abs(emission_rate_per_s(traj.state_at(i), modes)));
    }
    out.push_back({n, peak});
  }
  return out;
}

/// The same N molecules evolved as N uncoupled single-spin systems, each with
/// its own resonant mode. The systems are identical and evolve in lockstep,
/// so the summed emission trajectory is N times the single-molecule one.
inline std::vector<ScanPoint> independent_scan(const std::vector<int>& n_list,
                                               const ScanSettings& s) {
  ScanSettings single = s;
  const auto base = superradiance_scan({1}, single);
  std::vector<ScanPoint> out;
  out.reserve(n_list.size());
  for (int n : n_list) out.push_back({n, n * base.front().peak_emission_rate_per_s});
  return out;
}

}  // namespace quasyn::dicke
