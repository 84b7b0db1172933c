#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// math.h (not just cmath) first: boost 1.74 pchip calls unqualified isnan and
// needs the global-namespace declaration.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "quasyn/constants.hpp"
#include "quasyn/numerics.hpp"
#include "quasyn/units.hpp"

namespace quasyn::tunneling {

/// Incident energy at or above the barrier top: no classically forbidden
/// region exists.
struct NoBarrierError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// More than one interval with V > E. The semiclassical single-barrier rate
/// does not apply; rejected rather than silently summed.
struct MultiBarrierError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One-dimensional barrier V(q) on a finite domain. Four shapes: rectangular
/// (edges known analytically, no root finding), parabolic cap, gaussian, and
/// tabulated samples interpolated with a monotone cubic (PCHIP), which cannot
/// overshoot the data.
class BarrierPotential {
 public:
  static BarrierPotential rectangular(Energy height, Length width) {
    const double h = height.in_joules(), w = width.in_metres();
    if (!(h > 0.0) || !(w > 0.0)) {
      throw std::invalid_argument("rectangular barrier: height and width must be positive");
    }
    BarrierPotential b;
    b.impl_ = Rect{h, w};
    b.q_min_ = -0.5 * w;
    b.q_max_ = 1.5 * w;
    return b;
  }

  /// V(q) = v_max (1 - (q/L)^2) on [-L, L].
  static BarrierPotential parabolic(Energy v_max, Length half_width) {
    const double v = v_max.in_joules(), l = half_width.in_metres();
    if (!(v > 0.0) || !(l > 0.0)) {
      throw std::invalid_argument("parabolic barrier: v_max and half width must be positive");
    }
    BarrierPotential b;
    b.impl_ = Parabola{v, l};
    b.q_min_ = -l;
    b.q_max_ = l;
    return b;
  }

  /// V(q) = v_max exp(-q^2 / 2 sigma^2) on [-8 sigma, 8 sigma].
  static BarrierPotential gaussian(Energy v_max, Length sigma) {
    const double v = v_max.in_joules(), s = sigma.in_metres();
    if (!(v > 0.0) || !(s > 0.0)) {
      throw std::invalid_argument("gaussian barrier: v_max and sigma must be positive");
    }
    BarrierPotential b;
    b.impl_ = Gauss{v, s};
    b.q_min_ = -8.0 * s;
    b.q_max_ = 8.0 * s;
    return b;
  }

  /// Samples (q [m], V [J]) on a strictly increasing grid of at least 4 points.
  static BarrierPotential tabulated(std::vector<double> q_m, std::vector<double> v_j) {
    if (q_m.size() != v_j.size()) {
      throw std::invalid_argument("tabulated barrier: length mismatch between q and V");
    }
    if (q_m.size() < 4) {
      throw std::invalid_argument("tabulated barrier: need at least 4 samples");
    }
    for (std::size_t i = 1; i < q_m.size(); ++i) {
      if (!(q_m[i] > q_m[i - 1])) {
        throw std::invalid_argument("tabulated barrier: q grid must be strictly increasing");
      }
    }
    for (double v : v_j) {
      if (!std::isfinite(v)) throw std::invalid_argument("tabulated barrier: non-finite sample");
    }
    BarrierPotential b;
    b.q_min_ = q_m.front();
    b.q_max_ = q_m.back();
    const double peak = *std::max_element(v_j.begin(), v_j.end());
    auto qs = q_m;
    auto vs = v_j;
    b.impl_ = Table{std::move(q_m), std::move(v_j),
                    boost::math::interpolators::pchip<std::vector<double>>(std::move(qs), std::move(vs)),
                    peak};
    return b;
  }

  double operator()(double q_m) const {
    return std::visit([q_m](const auto& f) { return f.value(q_m); }, impl_);
  }

  double domain_min() const { return q_min_; }
  double domain_max() const { return q_max_; }

  /// Maximum of V over the domain. PCHIP never overshoots its knots, so the
  /// tabulated case reduces to the sample maximum.
  double peak_height() const {
    return std::visit([](const auto& f) { return f.peak(); }, impl_);
  }

  bool is_rectangular() const { return std::holds_alternative<Rect>(impl_); }
  /// Barrier edges; only meaningful for the rectangular shape.
  std::pair<double, double> rectangular_edges() const {
    const auto& r = std::get<Rect>(impl_);
    return {0.0, r.width};
  }

 private:
  struct Rect {
    double height, width;
    double value(double q) const { return (q >= 0.0 && q <= width) ? height : 0.0; }
    double peak() const { return height; }
  };
  struct Parabola {
    double v_max, half_width;
    double value(double q) const {
      const double u = q / half_width;
      return v_max * (1.0 - u * u);
    }
    double peak() const { return v_max; }
  };
  struct Gauss {
    double v_max, sigma;
    double value(double q) const { return v_max * std::exp(-0.5 * q * q / (sigma * sigma)); }
    double peak() const { return v_max; }
  };
  struct Table {
    std::vector<double> q, v;
    boost::math::interpolators::pchip<std::vector<double>> spline;
    double peak_v;
    double value(double x) const { return spline(x); }
    double peak() const { return peak_v; }
  };

  BarrierPotential() = default;
  std::variant<Rect, Parabola, Gauss, Table> impl_;
  double q_min_ = 0.0, q_max_ = 0.0;
};

/// Classical turning points: the innermost pair with V(a) = V(b) = E and
/// V > E strictly between them.
struct TurningPoints {
  double a_m;
  double b_m;
};

inline TurningPoints find_turning_points(const BarrierPotential& barrier, double energy_j,
                                         int scan_samples = 4096) {
  const double peak = barrier.peak_height();
  if (energy_j >= peak) {
    throw NoBarrierError("incident energy is at or above the barrier top");
  }
  if (barrier.is_rectangular()) {
    auto [a, b] = barrier.rectangular_edges();
    return {a, b};
  }

  const double lo = barrier.domain_min(), hi = barrier.domain_max();
  const double h = (hi - lo) / static_cast<double>(scan_samples);
  auto above = [&](double q) { return barrier(q) - energy_j; };

  // Locate maximal runs of V > E on the scan grid.
  struct Run {
    int first, last;
  };
  std::vector<Run> runs;
  bool inside = false;
  for (int i = 0; i <= scan_samples; ++i) {
    const double q = (i == scan_samples) ? hi : lo + i * h;
    const bool up = above(q) > 0.0;
    if (up && !inside) {
      runs.push_back({i, i});
      inside = true;
    } else if (up) {
      runs.back().last = i;
    } else {
      inside = false;
    }
  }
  if (runs.empty()) throw NoBarrierError("no interval with V > E found in the domain");
  if (runs.size() > 1) {
    throw MultiBarrierError("found " + std::to_string(runs.size()) +
                            " disjoint intervals with V > E; single-barrier model only");
  }

  const Run run = runs.front();
  double a, b;
  if (run.first == 0) {
    if (above(lo) > 1e-9 * peak) {
      throw std::invalid_argument("barrier is not enclosed by the domain on the left");
    }
    a = lo;
  } else {
    a = numerics::find_root(above, lo + (run.first - 1) * h, lo + run.first * h);
  }
  if (run.last == scan_samples) {
    if (above(hi) > 1e-9 * peak) {
      throw std::invalid_argument("barrier is not enclosed by the domain on the right");
    }
    b = hi;
  } else {
    b = numerics::find_root(above, lo + run.last * h, std::min(lo + (run.last + 1) * h, hi));
  }
  if (!(a < b)) throw NoBarrierError("degenerate turning points");
  return {a, b};
}

/// Thermally activated barrier crossing: k = V_C exp(-E_A / k_B T).
struct ThermalModel {
  double prefactor_per_s;      // V_C
  double activation_energy_j;  // E_A
  double temperature_k;        // T

  static ThermalModel make(Rate v_c, Energy e_a, Temperature t) {
    ThermalModel m{v_c.in_per_second(), e_a.in_joules(), t.in_kelvin()};
    if (!(m.prefactor_per_s > 0.0)) throw std::invalid_argument("thermal model: V_C must be positive");
    if (m.activation_energy_j < 0.0) throw std::invalid_argument("thermal model: E_A must be >= 0");
    if (!(m.temperature_k > 0.0)) throw std::invalid_argument("thermal model: T must be positive");
    return m;
  }

  ThermalModel with_temperature(double t_k) const {
    ThermalModel m = *this;
    if (!(t_k > 0.0)) throw std::invalid_argument("thermal model: T must be positive");
    m.temperature_k = t_k;
    return m;
  }
};

inline double arrhenius_rate_per_s(const ThermalModel& m) {
  return m.prefactor_per_s *
         std::exp(-m.activation_energy_j / (constants().k_b * m.temperature_k));
}

inline Rate arrhenius_rate(const ThermalModel& m) {
  return Rate::per_second(arrhenius_rate_per_s(m));
}

/// Semiclassical one-dimensional tunneling problem. The attempt frequency is
/// omega_0 = E_0 / hbar with E_0 the zero-point energy of the particle
/// localized over delta_q, i.e. omega_0 = hbar / (2 m delta_q^2) when only the
/// localization length is known.
class TunnelingProblem {
 public:
  static TunnelingProblem with_attempt_frequency(Mass m, Energy e, BarrierPotential v,
                                                 AngularFrequency omega0) {
    return TunnelingProblem(m.in_kilograms(), e.in_joules(), std::move(v),
                            omega0.in_radians_per_second(), std::nullopt);
  }

  static TunnelingProblem with_localization(Mass m, Energy e, BarrierPotential v,
                                            Length delta_q) {
    const double dq = delta_q.in_metres();
    if (!(dq > 0.0)) throw std::invalid_argument("tunneling problem: delta_q must be positive");
    const double omega0 = constants().hbar / (2.0 * m.in_kilograms() * dq * dq);
    return TunnelingProblem(m.in_kilograms(), e.in_joules(), std::move(v), omega0, dq);
  }

  static TunnelingProblem full(Mass m, Energy e, BarrierPotential v, AngularFrequency omega0,
                               Length delta_q) {
    const double dq = delta_q.in_metres();
    const double expected = constants().hbar / (2.0 * m.in_kilograms() * dq * dq);
    const double got = omega0.in_radians_per_second();
    if (std::abs(got - expected) > 1e-12 * expected) {
      throw std::invalid_argument(
          "tunneling problem: omega_0 is inconsistent with the zero-point energy of the "
          "stated localization length");
    }
    return TunnelingProblem(m.in_kilograms(), e.in_joules(), std::move(v), got, dq);
  }

  double mass_kg() const { return mass_kg_; }
  double energy_j() const { return energy_j_; }
  const BarrierPotential& barrier() const { return barrier_; }
  double attempt_frequency_per_s() const { return omega0_; }
  std::optional<double> localization_m() const { return delta_q_; }

 private:
  TunnelingProblem(double m, double e, BarrierPotential v, double omega0,
                   std::optional<double> dq)
      : mass_kg_(m), energy_j_(e), barrier_(std::move(v)), omega0_(omega0), delta_q_(dq) {
    if (!(mass_kg_ > 0.0)) throw std::invalid_argument("tunneling problem: mass must be positive");
    if (energy_j_ < 0.0) throw std::invalid_argument("tunneling problem: energy must be >= 0");
    if (!(omega0_ > 0.0)) {
      throw std::invalid_argument("tunneling problem: attempt frequency must be positive");
    }
  }

  double mass_kg_;
  double energy_j_;
  BarrierPotential barrier_;
  double omega0_;
  std::optional<double> delta_q_;
};

/// Dimensionless barrier action Theta = (2/hbar) Int_a^b sqrt(2m (V - E)) dq.
/// The integrand has square-root zeros at both turning points; q = a +
/// (b - a) sin^2(theta) maps them away, after which the theta integrand is
/// smooth and plain Gauss-Legendre converges fast.
inline double wkb_action(const TunnelingProblem& p, double rel_tol = 1e-10) {
  const auto tp = find_turning_points(p.barrier(), p.energy_j());
  const double span = tp.b_m - tp.a_m;
  const double two_m = 2.0 * p.mass_kg();
  auto integrand = [&](double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double q = tp.a_m + span * s * s;
    double dv = p.barrier()(q) - p.energy_j();
    if (dv < 0.0) dv = 0.0;  // endpoint rounding
    return std::sqrt(two_m * dv) * span * 2.0 * s * c;
  };
  const double integral =
      numerics::integrate_adaptive(integrand, 0.0, std::numbers::pi / 2.0, rel_tol);
  return 2.0 * integral / constants().hbar;
}

/// k = omega_0 exp(-Theta).
inline double wkb_rate_per_s(const TunnelingProblem& p) {
  return p.attempt_frequency_per_s() * std::exp(-wkb_action(p));
}

inline Rate wkb_rate(const TunnelingProblem& p) {
  return Rate::per_second(wkb_rate_per_s(p));
}

/// Distance over which a particle of mass m_target tunnels with the same
/// probability as m_ref over d_ref: equal action on a rectangular barrier at
/// fixed height above E gives d sqrt(m) = const.
inline double equal_probability_distance_m(double m_ref_kg, double d_ref_m,
                                           double m_target_kg) {
  if (!(m_ref_kg > 0.0) || !(d_ref_m > 0.0) || !(m_target_kg > 0.0)) {
    throw std::invalid_argument("equal_probability_distance: all arguments must be positive");
  }
  return d_ref_m * std::sqrt(m_ref_kg / m_target_kg);
}

inline Length equal_probability_distance(Mass m_ref, Length d_ref, Mass m_target) {
  return Length::metres(equal_probability_distance_m(
      m_ref.in_kilograms(), d_ref.in_metres(), m_target.in_kilograms()));
}

struct SweepPoint {
  double temperature_k;
  double rate_per_s;
};

/// Arrhenius rate over a temperature grid; ln k is affine in 1/T by
/// construction with slope -E_A / k_B.
inline std::vector<SweepPoint> temperature_sweep(const ThermalModel& model, double t_min_k,
                                                 double t_max_k, int n_points) {
  if (n_points < 2) throw std::invalid_argument("temperature_sweep: need at least 2 points");
  if (!(t_min_k > 0.0) || !(t_max_k >= t_min_k)) {
    throw std::invalid_argument("temperature_sweep: need 0 < t_min <= t_max");
  }
  std::vector<SweepPoint> out;
  out.reserve(n_points);
  const double step = (t_max_k - t_min_k) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double t = t_min_k + step * i;
    out.push_back({t, arrhenius_rate_per_s(model.with_temperature(t))});
  }
  return out;
}

/// Tunneling rate over a temperature grid. Temperature is not an input to the
/// semiclassical rate, so the column is one value computed once; the sweep
/// exists to make that structural independence visible in output tables.
inline std::vector<SweepPoint> temperature_sweep(const TunnelingProblem& problem,
                                                 double t_min_k, double t_max_k, int n_points) {
  if (n_points < 2) throw std::invalid_argument("temperature_sweep: need at least 2 points");
  if (!(t_min_k > 0.0) || !(t_max_k >= t_min_k)) {
    throw std::invalid_argument("temperature_sweep: need 0 < t_min <= t_max");
  }
  const double k = wkb_rate_per_s(problem);
  std::vector<SweepPoint> out;
  out.reserve(n_points);
  const double step = (t_max_k - t_min_k) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) out.push_back({t_min_k + step * i, k});
  return out;
}

/// Reads a tabulated barrier from CSV with header `q_m,V_eV` or
/// `q_angstrom,V_eV`; at least 4 rows, strictly increasing q.
inline BarrierPotential barrier_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("barrier csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  double q_scale = 0.0;
  if (line == "q_m,V_eV") {
    q_scale = 1.0;
  } else if (line == "q_angstrom,V_eV") {
    q_scale = unit::angstrom;
  } else {
    throw std::invalid_argument("barrier csv: header must be 'q_m,V_eV' or 'q_angstrom,V_eV', got '" +
                                line + "'");
  }
  std::vector<double> q, v;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("barrier csv: line " + std::to_string(line_no) +
                                  " is not 'q,V'");
    }
    double qi, vi;
    try {
      qi = std::stod(line.substr(0, comma));
      vi = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("barrier csv: bad number on line " + std::to_string(line_no));
    }
    q.push_back(qi * q_scale);
    v.push_back(vi * unit::electron_volt);
  }
  return BarrierPotential::tabulated(std::move(q), std::move(v));
}

}  // namespace quasyn::tunneling
