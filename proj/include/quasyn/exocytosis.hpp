#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "quasyn/rng.hpp"
#include "quasyn/units.hpp"

namespace quasyn::exo {

/// Quantum trigger for vesicle release: a trigger firing at rate k must land
/// inside a gate window tau for the impulse to release. With a memoryless
/// trigger the per-impulse probability is the Poisson-window survival
/// complement p = 1 - exp(-k tau).
struct TriggerModel {
  double rate_per_s;
  double window_s;

  static TriggerModel make(Rate k, Time tau) {
    TriggerModel m{k.in_per_second(), tau.in_seconds()};
    if (!(m.rate_per_s > 0.0)) throw std::invalid_argument("trigger model: rate must be positive");
    if (!(m.window_s > 0.0)) throw std::invalid_argument("trigger model: window must be positive");
    const double p = m.release_probability();
    if (!(p > 0.0) || !(p < 1.0)) {
      throw std::invalid_argument("trigger model: k*tau yields a degenerate release probability");
    }
    return m;
  }

  double release_probability() const { return -std::expm1(-rate_per_s * window_s); }
};

inline double release_probability(const TriggerModel& m) { return m.release_probability(); }

/// Bernoulli outcomes for a train of presynaptic impulses.
struct ReleaseTrain {
  std::vector<bool> outcomes;
  std::uint64_t seed;
  double probability;
};

/// i.i.d. Bernoulli(p) outcomes from the named deterministic generator; the
/// same (p, n, seed) always yields the same train.
inline ReleaseTrain simulate_train(double p, std::size_t n_impulses, std::uint64_t seed) {
  if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("simulate_train: p must be in (0, 1)");
  if (n_impulses < 1) throw std::invalid_argument("simulate_train: need at least one impulse");
  rng::Xoshiro256StarStar gen(seed);
  ReleaseTrain train{{}, seed, p};
  train.outcomes.reserve(n_impulses);
  for (std::size_t i = 0; i < n_impulses; ++i) train.outcomes.push_back(gen.bernoulli(p));
  return train;
}

struct WilsonInterval {
  double lower;
  double upper;
};

/// Wilson score interval for a binomial proportion.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054) {
  if (n == 0) throw std::invalid_argument("wilson_interval: empty sample");
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {centre - half, centre + half};
}

struct TrainStats {
  std::size_t impulses;
  std::size_t releases;
  double frequency;
  WilsonInterval ci95;
  std::map<std::size_t, std::size_t> release_run_lengths;  // run length -> count
  std::map<std::size_t, std::size_t> failure_run_lengths;
};

inline TrainStats empirical_stats(const ReleaseTrain& train) {
  if (train.outcomes.empty()) throw std::invalid_argument("empirical_stats: empty train");
  TrainStats st{};
  st.impulses = train.outcomes.size();
  for (bool o : train.outcomes) st.releases += o ? 1 : 0;
  st.frequency = static_cast<double>(st.releases) / static_cast<double>(st.impulses);
  st.ci95 = wilson_interval(st.releases, st.impulses);

  std::size_t run = 1;
  for (std::size_t i = 1; i <= train.outcomes.size(); ++i) {
    if (i < train.outcomes.size() && train.outcomes[i] == train.outcomes[i - 1]) {
      ++run;
      continue;
    }
    auto& hist = train.outcomes[i - 1] ? st.release_run_lengths : st.failure_run_lengths;
    ++hist[run];
    run = 1;
  }
  return st;
}

}  // namespace quasyn::exo
