// quasyn - batch front-end for the simulation library.
//
// One subcommand per simulation; every run echoes its fully resolved
// configuration into the output header so results are reproducible from the
// file alone. Exit codes: 0 ok, 1 simulation error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasyn/constants.hpp"
#include "quasyn/dicke.hpp"
#include "quasyn/exocytosis.hpp"
#include "quasyn/io.hpp"
#include "quasyn/mixed.hpp"
#include "quasyn/numerics.hpp"
#include "quasyn/tunneling.hpp"
#include "quasyn/units.hpp"
#include "quasyn/version.hpp"

namespace {

using quasyn::io::format_double;
using quasyn::io::RunMetadata;

struct OutputOptions {
  std::string path;  // empty: default directory + subcommand name
  std::string format = "csv";
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--out", out.path, "output file (default: $QUASYN_OUT_DIR or ./<subcommand>.<format>)");
  cmd->add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->set_config("--config", "", "flat key = value file with the same names as the long options");
  cmd->allow_config_extras(false);
}

std::string resolve_path(const OutputOptions& out, const std::string& subcommand) {
  if (!out.path.empty()) return out.path;
  const char* dir = std::getenv("QUASYN_OUT_DIR");
  std::filesystem::path base = dir ? dir : ".";
  return (base / (subcommand + "." + out.format)).string();
}

void ensure_finite(const std::vector<std::vector<std::string>>& rows) {
  for (const auto& row : rows) {
    for (const auto& cell : row) {
      if (auto v = quasyn::io::parse_double(cell); v && !std::isfinite(*v)) {
        throw std::runtime_error("refusing to write non-finite value '" + cell + "'");
      }
    }
  }
}

void emit(const OutputOptions& out, const RunMetadata& meta,
          const std::vector<std::string>& columns,
          const std::vector<std::vector<std::string>>& rows,
          const std::vector<std::pair<std::string, std::string>>& results = {}) {
  ensure_finite(rows);
  const std::string path = resolve_path(out, meta.subcommand);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  if (out.format == "csv") {
    quasyn::io::write_header(os, meta);
    for (const auto& [k, v] : results) os << "## " << k << " = " << v << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << columns[c] << (c + 1 == columns.size() ? '\n' : ',');
    }
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        os << row[c] << (c + 1 == row.size() ? '\n' : ',');
      }
    }
  } else {
    nlohmann::json j{{"meta", quasyn::io::meta_json(meta)}, {"columns", columns}};
    for (const auto& [k, v] : results) j["results"][k] = v;
    nlohmann::json data = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& cell : row) {
        if (auto num = quasyn::io::parse_double(cell)) {
          r.push_back(*num);
        } else {
          r.push_back(cell);
        }
      }
      data.push_back(std::move(r));
    }
    j["data"] = std::move(data);
    os << j.dump(2) << "\n";
  }
  if (!os.good()) throw std::runtime_error("write failed for '" + path + "'");
  std::cout << path << "\n";
}

// ---------------------------------------------------------------------------
// rate-arrhenius

struct ArrheniusArgs {
  double vc_per_s = 1e12;
  double ea_ev = 0.5;
  double temp_k = 310.0;
  OutputOptions out;
};

void run_arrhenius(const ArrheniusArgs& a) {
  const auto model = quasyn::tunneling::ThermalModel::make(
      quasyn::Rate::per_second(a.vc_per_s), quasyn::Energy::electron_volts(a.ea_ev),
      quasyn::Temperature::kelvin(a.temp_k));
  const double k = quasyn::tunneling::arrhenius_rate_per_s(model);
  RunMetadata meta{"rate-arrhenius",
                   {{"vc-per-s", format_double(a.vc_per_s)},
                    {"ea-ev", format_double(a.ea_ev)},
                    {"temp-k", format_double(a.temp_k)},
                    {"format", a.out.format}},
                   std::nullopt};
  emit(a.out, meta, {"T_K", "k_per_s"}, {{format_double(a.temp_k), format_double(k)}});
}

// ---------------------------------------------------------------------------
// Shared barrier/problem options for rate-wkb and sweep-temp --model wkb.

struct WkbArgs {
  std::string mass = "protium";
  double mass_kg = 0.0;  // overrides the particle name when > 0
  double energy_ev = 0.0;
  double omega0_per_s = 0.0;
  double delta_q_nm = 0.0;
  std::string barrier = "rectangular";
  double height_ev = 0.5;
  double width_nm = 0.1;
  double half_width_nm = 0.1;
  double sigma_nm = 0.05;
  std::string barrier_csv;
};

void add_wkb_options(CLI::App* cmd, WkbArgs& w) {
  cmd->add_option("--mass", w.mass, "tunneling particle")
      ->check(CLI::IsMember({"electron", "proton", "protium", "deuterium", "tritium"}))
      ->capture_default_str();
  cmd->add_option("--mass-kg", w.mass_kg, "explicit mass in kg (overrides --mass)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--energy-ev", w.energy_ev, "particle energy E")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--omega0-per-s", w.omega0_per_s, "attempt frequency omega_0")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--delta-q-nm", w.delta_q_nm,
                  "localization length; omega_0 = hbar/(2 m delta_q^2) when given")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--barrier", w.barrier, "barrier shape")
      ->check(CLI::IsMember({"rectangular", "parabolic", "gaussian", "csv"}))
      ->capture_default_str();
  cmd->add_option("--height-ev", w.height_ev, "barrier height (rectangular/parabolic/gaussian)")
      ->capture_default_str();
  cmd->add_option("--width-nm", w.width_nm, "rectangular barrier width")->capture_default_str();
  cmd->add_option("--half-width-nm", w.half_width_nm, "parabolic barrier half width")
      ->capture_default_str();
  cmd->add_option("--sigma-nm", w.sigma_nm, "gaussian barrier sigma")->capture_default_str();
  cmd->add_option("--barrier-csv", w.barrier_csv,
                  "tabulated barrier, header q_m,V_eV or q_angstrom,V_eV");
}

quasyn::tunneling::TunnelingProblem build_problem(const WkbArgs& w) {
  using namespace quasyn;
  tunneling::BarrierPotential barrier = [&] {
    if (w.barrier == "rectangular") {
      return tunneling::BarrierPotential::rectangular(Energy::electron_volts(w.height_ev),
                                                      Length::nanometres(w.width_nm));
    }
    if (w.barrier == "parabolic") {
      return tunneling::BarrierPotential::parabolic(Energy::electron_volts(w.height_ev),
                                                    Length::nanometres(w.half_width_nm));
    }
    if (w.barrier == "gaussian") {
      return tunneling::BarrierPotential::gaussian(Energy::electron_volts(w.height_ev),
                                                   Length::nanometres(w.sigma_nm));
    }
    if (w.barrier_csv.empty()) {
      throw std::runtime_error("--barrier csv requires --barrier-csv <file>");
    }
    std::ifstream in(w.barrier_csv);
    if (!in) throw std::runtime_error("cannot open barrier file '" + w.barrier_csv + "'");
    return tunneling::barrier_from_csv(in);
  }();

  const double mass_kg =
      w.mass_kg > 0.0 ? w.mass_kg : particle_mass_kg(particle_from_name(w.mass));
  const auto mass = Mass::kilograms(mass_kg);
  const auto energy = Energy::electron_volts(w.energy_ev);
  const bool has_omega = w.omega0_per_s > 0.0, has_dq = w.delta_q_nm > 0.0;
  if (has_omega && has_dq) {
    return tunneling::TunnelingProblem::full(mass, energy, std::move(barrier),
                                             AngularFrequency::radians_per_second(w.omega0_per_s),
                                             Length::nanometres(w.delta_q_nm));
  }
  if (has_omega) {
    return tunneling::TunnelingProblem::with_attempt_frequency(
        mass, energy, std::move(barrier), AngularFrequency::radians_per_second(w.omega0_per_s));
  }
  if (has_dq) {
    return tunneling::TunnelingProblem::with_localization(mass, energy, std::move(barrier),
                                                          Length::nanometres(w.delta_q_nm));
  }
  throw std::runtime_error("need --omega0-per-s or --delta-q-nm to fix the attempt frequency");
}

std::vector<std::pair<std::string, std::string>> wkb_params(const WkbArgs& w) {
  return {{"mass", w.mass},
          {"mass-kg", format_double(w.mass_kg)},
          {"energy-ev", format_double(w.energy_ev)},
          {"omega0-per-s", format_double(w.omega0_per_s)},
          {"delta-q-nm", format_double(w.delta_q_nm)},
          {"barrier", w.barrier},
          {"height-ev", format_double(w.height_ev)},
          {"width-nm", format_double(w.width_nm)},
          {"half-width-nm", format_double(w.half_width_nm)},
          {"sigma-nm", format_double(w.sigma_nm)},
          {"barrier-csv", w.barrier_csv}};
}

struct RateWkbArgs {
  WkbArgs wkb;
  OutputOptions out;
};

void run_rate_wkb(const RateWkbArgs& a) {
  const auto problem = build_problem(a.wkb);
  const double theta = quasyn::tunneling::wkb_action(problem);
  const double k = problem.attempt_frequency_per_s() * std::exp(-theta);
  auto params = wkb_params(a.wkb);
  params.emplace_back("format", a.out.format);
  RunMetadata meta{"rate-wkb", std::move(params), std::nullopt};
  emit(a.out, meta, {"theta", "k_per_s"}, {{format_double(theta), format_double(k)}});
}

// ---------------------------------------------------------------------------
// isotope

struct IsotopeArgs {
  std::string ref = "electron";
  double ref_d_nm = 2.5;
  std::string target = "protium";
  OutputOptions out;
};

void run_isotope(const IsotopeArgs& a) {
  using namespace quasyn;
  const double d = tunneling::equal_probability_distance_m(
      particle_mass_kg(particle_from_name(a.ref)), a.ref_d_nm * unit::nanometre,
      particle_mass_kg(particle_from_name(a.target)));
  RunMetadata meta{"isotope",
                   {{"ref", a.ref},
                    {"ref-d-nm", format_double(a.ref_d_nm)},
                    {"target", a.target},
                    {"format", a.out.format}},
                   std::nullopt};
  emit(a.out, meta, {"ref", "target", "ref_d_nm", "target_d_nm"},
       {{a.ref, a.target, format_double(a.ref_d_nm), format_double(d / unit::nanometre)}});
}

// ---------------------------------------------------------------------------
// sweep-temp

struct SweepArgs {
  std::string model = "thermal";
  double tmin_k = 250.0;
  double tmax_k = 350.0;
  int points = 50;
  double vc_per_s = 1e12;
  double ea_ev = 0.5;
  WkbArgs wkb;
  OutputOptions out;
};

void run_sweep(const SweepArgs& a) {
  using namespace quasyn;
  std::vector<tunneling::SweepPoint> table;
  if (a.model == "thermal") {
    const auto model = tunneling::ThermalModel::make(Rate::per_second(a.vc_per_s),
                                                     Energy::electron_volts(a.ea_ev),
                                                     Temperature::kelvin(a.tmin_k));
    table = tunneling::temperature_sweep(model, a.tmin_k, a.tmax_k, a.points);
  } else {
    table = tunneling::temperature_sweep(build_problem(a.wkb), a.tmin_k, a.tmax_k, a.points);
  }
  std::vector<std::pair<std::string, std::string>> params{
      {"model", a.model},
      {"tmin-k", format_double(a.tmin_k)},
      {"tmax-k", format_double(a.tmax_k)},
      {"points", std::to_string(a.points)},
      {"vc-per-s", format_double(a.vc_per_s)},
      {"ea-ev", format_double(a.ea_ev)}};
  for (auto& kv : wkb_params(a.wkb)) params.push_back(std::move(kv));
  params.emplace_back("format", a.out.format);
  RunMetadata meta{"sweep-temp", std::move(params), std::nullopt};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.size());
  for (const auto& p : table) {
    rows.push_back({format_double(p.temperature_k), format_double(p.rate_per_s)});
  }
  emit(a.out, meta, {"T_K", "k_per_s"}, rows);
}

// ---------------------------------------------------------------------------
// dicke-evolve

struct DickeEvolveArgs {
  int n = 1;
  double epsilon_mev = 24.8;
  double coupling_mev = 1.24;
  double detuning_mev = 0.0;
  int cutoff = 0;  // 0: N + 2
  double periods = 10.0;
  int steps_per_period = 200;
  bool counter_rotating = false;
  OutputOptions out;
};

void run_dicke_evolve(const DickeEvolveArgs& a) {
  using namespace quasyn;
  const double eps = Energy::milli_electron_volts(a.epsilon_mev).in_joules();
  const double g = Energy::milli_electron_volts(a.coupling_mev).in_joules();
  const double omega = (eps + Energy::milli_electron_volts(a.detuning_mev).in_joules()) / constants().hbar;
  const int cutoff = a.cutoff > 0 ? a.cutoff : a.n + 2;

  const auto ens = dicke::TwoLevelEnsemble::make(a.n, Energy::joules(eps));
  const auto modes =
      dicke::CavityModeSet::make({dicke::CavityMode{omega, {0, 0, 0}, g}}, cutoff);
  const dicke::CollectiveBasis basis = dicke::CollectiveBasis::for_system(ens, modes);
  const auto h = dicke::build_total(ens, modes, basis, a.counter_rotating);

  const double period_s = std::numbers::pi * constants().hbar / g;
  const double t_final = a.periods * period_s;
  const double dt = period_s / a.steps_per_period;
  const auto traj = dicke::evolve(dicke::QuantumState::fully_excited(basis), h, t_final, dt);

  std::vector<std::string> columns{"t_s", "inversion", "excited_fraction"};
  for (std::size_t k = 0; k < modes.modes.size(); ++k) columns.push_back("n_" + std::to_string(k));
  columns.insert(columns.end(), {"n_exc", "emission_rate_per_s", "norm"});

  std::vector<std::vector<std::string>> rows;
  rows.reserve(traj.times_s.size());
  for (std::size_t i = 0; i < traj.times_s.size(); ++i) {
    const auto state = traj.state_at(i);
    const auto obs = dicke::measure(state);
    std::vector<std::string> row{format_double(traj.times_s[i]), format_double(obs.inversion),
                                 format_double((obs.inversion + 0.5 * a.n) / a.n)};
    for (double nk : obs.photon_numbers) row.push_back(format_double(nk));
    row.push_back(format_double(obs.total_excitation));
    row.push_back(format_double(dicke::emission_rate_per_s(state, modes)));
    row.push_back(format_double(obs.norm));
    rows.push_back(std::move(row));
  }

  RunMetadata meta{"dicke-evolve",
                   {{"n", std::to_string(a.n)},
                    {"epsilon-mev", format_double(a.epsilon_mev)},
                    {"coupling-mev", format_double(a.coupling_mev)},
                    {"detuning-mev", format_double(a.detuning_mev)},
                    {"cutoff", std::to_string(cutoff)},
                    {"periods", format_double(a.periods)},
                    {"steps-per-period", std::to_string(a.steps_per_period)},
                    {"counter-rotating", a.counter_rotating ? "true" : "false"},
                    {"format", a.out.format}},
                   std::nullopt};
  emit(a.out, meta, columns, rows);
}

// ---------------------------------------------------------------------------
// dicke-scan

struct DickeScanArgs {
  std::string n_list = "1,2,4,8";
  double epsilon_mev = 24.8;
  double coupling_mev = 1.24;
  double horizon_natural = 8.0;  // units of hbar/g
  int steps = 4000;
  std::size_t dimension_cap = 4096;
  OutputOptions out;
};

void run_dicke_scan(const DickeScanArgs& a) {
  using namespace quasyn;
  std::vector<int> ns;
  std::stringstream ss(a.n_list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      ns.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::runtime_error("bad n-list entry '" + item + "'");
    }
  }
  if (ns.empty()) throw std::runtime_error("empty --n-list");

  const double g = Energy::milli_electron_volts(a.coupling_mev).in_joules();
  dicke::ScanSettings settings{Energy::milli_electron_volts(a.epsilon_mev).in_joules(), g,
                               a.horizon_natural * constants().hbar / g,
                               a.horizon_natural * constants().hbar / g / a.steps,
                               a.dimension_cap};
  const auto collective = dicke::superradiance_scan(ns, settings);
  const auto independent = dicke::independent_scan(ns, settings);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < collective.size(); ++i) {
    rows.push_back({std::to_string(collective[i].n_molecules),
                    format_double(collective[i].peak_emission_rate_per_s),
                    format_double(independent[i].peak_emission_rate_per_s)});
  }
  RunMetadata meta{"dicke-scan",
                   {{"n-list", a.n_list},
                    {"epsilon-mev", format_double(a.epsilon_mev)},
                    {"coupling-mev", format_double(a.coupling_mev)},
                    {"horizon-natural", format_double(a.horizon_natural)},
                    {"steps", std::to_string(a.steps)},
                    {"dimension-cap", std::to_string(a.dimension_cap)},
                    {"format", a.out.format}},
                   std::nullopt};
  emit(a.out, meta, {"n", "peak_collective_per_s", "peak_independent_per_s"}, rows);
}

// ---------------------------------------------------------------------------
// mixed-splitting

struct MixedArgs {
  std::string preset = "neutral";
  int nmax = 3;
  int nxi = 0;   // 0: preset grid
  int neta = 0;
  double tol = 0.02;
  OutputOptions out;
};

void run_mixed_splitting(const MixedArgs& a) {
  using namespace quasyn;
  auto preset = mixed::mixed_preset(a.preset);
  if (a.nxi > 0) preset.grid.n_xi = a.nxi;
  if (a.neta > 0) preset.grid.n_eta = a.neta;
  const auto pes = mixed::build_pes(preset.pes);
  const auto spectrum = mixed::splitting_spectrum(pes, preset.grid, a.nmax);
  const auto effect = mixed::classify_mode_effect(spectrum, a.tol);

  std::vector<std::vector<std::string>> rows;
  for (int n = 0; n <= a.nmax; ++n) {
    rows.push_back({std::to_string(n),
                    format_double(spectrum.splittings_j[n] / unit::electron_volt),
                    format_double(spectrum.symmetric_energies_j[n] / unit::electron_volt),
                    format_double(spectrum.antisymmetric_energies_j[n] / unit::electron_volt)});
  }
  RunMetadata meta{"mixed-splitting",
                   {{"preset", a.preset},
                    {"nmax", std::to_string(a.nmax)},
                    {"nxi", std::to_string(preset.grid.n_xi)},
                    {"neta", std::to_string(preset.grid.n_eta)},
                    {"tol", format_double(a.tol)},
                    {"format", a.out.format}},
                   std::nullopt};
  emit(a.out, meta, {"n", "delta_e_ev", "e_sym_ev", "e_antisym_ev"}, rows,
       {{"classification", std::string(mixed::to_string(effect))}});
}

// ---------------------------------------------------------------------------
// region-map

struct RegionArgs {
  std::string preset = "promoting";
  double e_total_ev = 0.15;
  double e_eta_ev = 0.15;
  int nxi = 0;
  int neta = 0;
  OutputOptions out;
};

void run_region_map(const RegionArgs& a) {
  using namespace quasyn;
  auto preset = mixed::mixed_preset(a.preset);
  if (a.nxi > 0) preset.grid.n_xi = a.nxi;
  if (a.neta > 0) preset.grid.n_eta = a.neta;
  const auto pes = mixed::build_pes(preset.pes);
  const auto map = mixed::classify_regions(pes, a.e_total_ev * unit::electron_volt,
                                           a.e_eta_ev * unit::electron_volt, preset.grid);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(preset.grid.size());
  for (int i = 0; i < preset.grid.n_xi; ++i) {
    for (int j = 0; j < preset.grid.n_eta; ++j) {
      rows.push_back({format_double(preset.grid.xi_at(i)), format_double(preset.grid.eta_at(j)),
                      std::string(1, map.at(i, j))});
    }
  }
  RunMetadata meta{"region-map",
                   {{"preset", a.preset},
                    {"e-total-ev", format_double(a.e_total_ev)},
                    {"e-eta-ev", format_double(a.e_eta_ev)},
                    {"nxi", std::to_string(preset.grid.n_xi)},
                    {"neta", std::to_string(preset.grid.n_eta)},
                    {"format", a.out.format}},
                   std::nullopt};
  emit(a.out, meta, {"xi_m", "eta_m", "label"}, rows,
       {{"count_R", std::to_string(map.count('R'))},
        {"count_C", std::to_string(map.count('C'))},
        {"count_I", std::to_string(map.count('I'))}});
}

// ---------------------------------------------------------------------------
// exo-sim

struct ExoArgs {
  double rate_per_s = 0.0;
  double tau_s = 0.0;
  double p = 0.0;  // direct probability; overrides rate/tau when > 0
  std::size_t pulses = 10000;
  std::uint64_t seed = 42;
  OutputOptions out;
};

void run_exo(const ExoArgs& a) {
  using namespace quasyn;
  double p = a.p;
  if (p <= 0.0) {
    if (a.rate_per_s <= 0.0 || a.tau_s <= 0.0) {
      throw std::runtime_error("need --p or both --rate-per-s and --tau-s");
    }
    p = exo::TriggerModel::make(Rate::per_second(a.rate_per_s), Time::seconds(a.tau_s))
            .release_probability();
  }
  const auto train = exo::simulate_train(p, a.pulses, a.seed);
  const auto stats = exo::empirical_stats(train);

  RunMetadata meta{"exo-sim",
                   {{"rate-per-s", format_double(a.rate_per_s)},
                    {"tau-s", format_double(a.tau_s)},
                    {"p", format_double(p)},
                    {"pulses", std::to_string(a.pulses)},
                    {"seed", std::to_string(a.seed)},
                    {"format", a.out.format}},
                   a.seed};
  std::vector<std::pair<std::string, std::string>> results{
      {"rng_algorithm", std::string(rng::Xoshiro256StarStar::algorithm)},
      {"releases", std::to_string(stats.releases)},
      {"frequency", format_double(stats.frequency)},
      {"wilson95_lower", format_double(stats.ci95.lower)},
      {"wilson95_upper", format_double(stats.ci95.upper)},
  };
  if (a.out.format == "json") {
    nlohmann::json j{{"meta", quasyn::io::meta_json(meta)}};
    j["meta"]["rng_algorithm"] = std::string(rng::Xoshiro256StarStar::algorithm);
    j["summary"] = {{"impulses", stats.impulses},
                    {"releases", stats.releases},
                    {"frequency", stats.frequency},
                    {"wilson95", {stats.ci95.lower, stats.ci95.upper}}};
    nlohmann::json rel = nlohmann::json::object(), fail = nlohmann::json::object();
    for (const auto& [len, count] : stats.release_run_lengths) rel[std::to_string(len)] = count;
    for (const auto& [len, count] : stats.failure_run_lengths) fail[std::to_string(len)] = count;
    j["summary"]["release_run_lengths"] = std::move(rel);
    j["summary"]["failure_run_lengths"] = std::move(fail);
    const std::string path = resolve_path(a.out, meta.subcommand);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    os << j.dump(2) << "\n";
    if (!os.good()) throw std::runtime_error("write failed for '" + path + "'");
    std::cout << path << "\n";
    return;
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(train.outcomes.size());
  for (std::size_t i = 0; i < train.outcomes.size(); ++i) {
    rows.push_back({std::to_string(i), train.outcomes[i] ? "1" : "0"});
  }
  emit(a.out, meta, {"impulse_index", "released"}, rows, results);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasyn - collective dipole emission, barrier tunneling rates and synaptic "
               "release statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(quasyn::kVersion));

  ArrheniusArgs arr;
  auto* cmd_arr = app.add_subcommand("rate-arrhenius", "thermal activation rate k = V_C exp(-E_A/k_B T)");
  cmd_arr->add_option("--vc-per-s", arr.vc_per_s, "coupling prefactor V_C")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_arr->add_option("--ea-ev", arr.ea_ev, "activation energy E_A")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_arr->add_option("--temp-k", arr.temp_k, "temperature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output_options(cmd_arr, arr.out);

  RateWkbArgs wkb;
  auto* cmd_wkb = app.add_subcommand("rate-wkb", "semiclassical tunneling rate k = omega_0 exp(-Theta)");
  add_wkb_options(cmd_wkb, wkb.wkb);
  add_output_options(cmd_wkb, wkb.out);

  IsotopeArgs iso;
  auto* cmd_iso = app.add_subcommand("isotope", "equal-probability tunneling distance across masses");
  cmd_iso->add_option("--ref", iso.ref, "reference particle")
      ->check(CLI::IsMember({"electron", "proton", "protium", "deuterium", "tritium"}))
      ->capture_default_str();
  cmd_iso->add_option("--ref-d-nm", iso.ref_d_nm, "reference tunneling distance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_iso->add_option("--target", iso.target, "target particle")
      ->check(CLI::IsMember({"electron", "proton", "protium", "deuterium", "tritium"}))
      ->capture_default_str();
  add_output_options(cmd_iso, iso.out);

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("sweep-temp", "rate vs temperature for either barrier model");
  cmd_sweep->add_option("--model", sweep.model, "rate model")
      ->check(CLI::IsMember({"thermal", "wkb"}))
      ->required();
  cmd_sweep->add_option("--tmin-k", sweep.tmin_k, "lowest temperature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sweep->add_option("--tmax-k", sweep.tmax_k, "highest temperature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sweep->add_option("--points", sweep.points, "grid size")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  cmd_sweep->add_option("--vc-per-s", sweep.vc_per_s, "thermal model prefactor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sweep->add_option("--ea-ev", sweep.ea_ev, "thermal model activation energy")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_wkb_options(cmd_sweep, sweep.wkb);
  add_output_options(cmd_sweep, sweep.out);

  DickeEvolveArgs devo;
  auto* cmd_devo = app.add_subcommand("dicke-evolve", "unitary collective dipole-field evolution");
  cmd_devo->add_option("--n", devo.n, "number of molecules")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  cmd_devo->add_option("--epsilon-mev", devo.epsilon_mev, "two-level gap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_devo->add_option("--coupling-mev", devo.coupling_mev, "dipole-mode coupling g")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_devo->add_option("--detuning-mev", devo.detuning_mev, "hbar omega - epsilon (0: resonant)")
      ->capture_default_str();
  cmd_devo->add_option("--cutoff", devo.cutoff, "photon cutoff per mode (0: N + 2)")
      ->check(CLI::Range(0, 4096))
      ->capture_default_str();
  cmd_devo->add_option("--periods", devo.periods, "horizon in vacuum-Rabi periods pi hbar/g")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_devo->add_option("--steps-per-period", devo.steps_per_period, "sampling density")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  cmd_devo->add_flag("--counter-rotating", devo.counter_rotating,
                     "include the energy-non-conserving coupling terms");
  add_output_options(cmd_devo, devo.out);

  DickeScanArgs dscan;
  auto* cmd_dscan = app.add_subcommand("dicke-scan", "peak emission rate vs molecule count");
  cmd_dscan->add_option("--n-list", dscan.n_list, "comma separated molecule counts")
      ->capture_default_str();
  cmd_dscan->add_option("--epsilon-mev", dscan.epsilon_mev, "two-level gap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_dscan->add_option("--coupling-mev", dscan.coupling_mev, "dipole-mode coupling g")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_dscan->add_option("--horizon-natural", dscan.horizon_natural, "horizon in units of hbar/g")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_dscan->add_option("--steps", dscan.steps, "trajectory samples over the horizon")
      ->check(CLI::Range(10, 1000000))
      ->capture_default_str();
  cmd_dscan->add_option("--dimension-cap", dscan.dimension_cap, "refuse larger bases")
      ->capture_default_str();
  add_output_options(cmd_dscan, dscan.out);

  MixedArgs mixed_args;
  auto* cmd_mixed = app.add_subcommand("mixed-splitting",
                                       "tunneling splitting per transverse quantum number");
  cmd_mixed->add_option("--preset", mixed_args.preset, "surface preset")
      ->check(CLI::IsMember({"neutral", "promoting", "suppressing"}))
      ->capture_default_str();
  cmd_mixed->add_option("--nmax", mixed_args.nmax, "highest transverse quantum number")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  cmd_mixed->add_option("--nxi", mixed_args.nxi, "xi grid points (0: preset)")
      ->check(CLI::Range(0, 1024))
      ->capture_default_str();
  cmd_mixed->add_option("--neta", mixed_args.neta, "eta grid points (0: preset)")
      ->check(CLI::Range(0, 1024))
      ->capture_default_str();
  cmd_mixed->add_option("--tol", mixed_args.tol, "relative tolerance for the classification")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output_options(cmd_mixed, mixed_args.out);

  RegionArgs region;
  auto* cmd_region = app.add_subcommand("region-map", "R/C/I classification of the surface");
  cmd_region->add_option("--preset", region.preset, "surface preset")
      ->check(CLI::IsMember({"neutral", "promoting", "suppressing"}))
      ->capture_default_str();
  cmd_region->add_option("--e-total-ev", region.e_total_ev, "total energy")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_region->add_option("--e-eta-ev", region.e_eta_ev, "transverse channel energy")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_region->add_option("--nxi", region.nxi, "xi grid points (0: preset)")
      ->check(CLI::Range(0, 1024))
      ->capture_default_str();
  cmd_region->add_option("--neta", region.neta, "eta grid points (0: preset)")
      ->check(CLI::Range(0, 1024))
      ->capture_default_str();
  add_output_options(cmd_region, region.out);

  ExoArgs exo_args;
  auto* cmd_exo = app.add_subcommand("exo-sim", "Bernoulli release train for a quantum trigger");
  cmd_exo->add_option("--rate-per-s", exo_args.rate_per_s, "trigger rate k")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_exo->add_option("--tau-s", exo_args.tau_s, "gate window tau")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_exo->add_option("--p", exo_args.p, "release probability directly (overrides rate/tau)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_exo->add_option("--pulses", exo_args.pulses, "impulse count")
      ->capture_default_str();
  cmd_exo->add_option("--seed", exo_args.seed, "RNG seed")->capture_default_str();
  add_output_options(cmd_exo, exo_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_arr->parsed()) run_arrhenius(arr);
    if (cmd_wkb->parsed()) run_rate_wkb(wkb);
    if (cmd_iso->parsed()) run_isotope(iso);
    if (cmd_sweep->parsed()) run_sweep(sweep);
    if (cmd_devo->parsed()) run_dicke_evolve(devo);
    if (cmd_dscan->parsed()) run_dicke_scan(dscan);
    if (cmd_mixed->parsed()) run_mixed_splitting(mixed_args);
    if (cmd_region->parsed()) run_region_map(region);
    if (cmd_exo->parsed()) run_exo(exo_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
