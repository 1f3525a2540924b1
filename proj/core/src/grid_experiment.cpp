#include "pegasus/grid_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "pegasus/threading.hpp"

namespace pegasus::grid {

std::string variant_name(Variant v) { return v == Variant::Normal ? "normal" : "complex"; }

namespace {

constexpr int kCells = kSize * kSize;
constexpr int kGoalId = 4 * kSize + 4;

struct StaticTables {
  // next[a][c]: one-step move with wall clamping
  std::array<std::array<std::uint8_t, kCells>, kNumActions> next{};
  std::array<std::int8_t, kCells> obs{};  // observation id, -1 at the goal
  StaticTables() {
    for (int id = 0; id < kCells; ++id) {
      Cell c = cell_from_id(id);
      for (int a = 0; a < kNumActions; ++a)
        next[a][id] = static_cast<std::uint8_t>(cell_id(step(c, a)));
      obs[id] = c == kGoal ? -1 : static_cast<std::int8_t>(observation_id(c));
    }
  }
};

const StaticTables& tables() {
  static const StaticTables t;
  return t;
}

// Noise branch of the model: returns the forced direction for p <= 0.2,
// otherwise -1 (intended action applies).
inline int noise_branch(double p) {
  if (p <= 0.05) return kUp;
  if (p <= 0.10) return kLeft;
  if (p <= 0.15) return kDown;
  if (p <= 0.20) return kRight;
  return -1;
}

// Values of the 65536 policies on one scenario are computed by walking the
// tree of distinct behaviors: the rollout of a policy depends only on the
// base-4 digits of the observations it actually visits, so policies sharing
// those digits share the rollout. Each full policy falls under exactly one
// leaf, and the leaf value is added to its slot in `acc`.
class ScenarioSweep {
 public:
  ScenarioSweep(const std::uint8_t* step_table, int h, const std::vector<double>& leaf_value,
                std::vector<double>& acc)
      : step_table_(step_table), h_(h), leaf_value_(leaf_value), acc_(acc) {
    assigned_.fill(-1);
  }

  void run(int start_cell) { walk(0, start_cell); }

 private:
  void walk(int t, int c) {
    if (c == kGoalId) {
      add_leaf(leaf_value_[t]);
      return;
    }
    if (t == h_) {
      add_leaf(leaf_value_[h_ + 1]);
      return;
    }
    const std::uint8_t* row = step_table_ + (static_cast<std::size_t>(t) * kCells + c) * kNumActions;
    if (row[0] == row[1] && row[1] == row[2] && row[2] == row[3]) {
      // Outcome independent of the action: nothing to pin down.
      walk(t + 1, row[0]);
      return;
    }
    const int o = tables().obs[c];
    if (assigned_[o] >= 0) {
      walk(t + 1, row[assigned_[o]]);
      return;
    }
    for (int a = 0; a < kNumActions; ++a) {
      assigned_[o] = static_cast<std::int8_t>(a);
      walk(t + 1, row[a]);
    }
    assigned_[o] = -1;
  }

  void add_leaf(double value) {
    // Enumerate every policy index consistent with the assigned digits.
    std::uint32_t base = 0;
    std::uint32_t free_pos[kNumObservations];
    int num_free = 0;
    for (int k = 0; k < kNumObservations; ++k) {
      if (assigned_[k] >= 0)
        base |= static_cast<std::uint32_t>(assigned_[k]) << (2 * k);
      else
        free_pos[num_free++] = static_cast<std::uint32_t>(2 * k);
    }
    fill(base, free_pos, num_free, value);
  }

  void fill(std::uint32_t idx, const std::uint32_t* free_pos, int num_free, double value) {
    if (num_free == 0) {
      acc_[idx] += value;
      return;
    }
    const std::uint32_t shift = free_pos[num_free - 1];
    for (std::uint32_t d = 0; d < 4; ++d) fill(idx | (d << shift), free_pos, num_free - 1, value);
  }

  const std::uint8_t* step_table_;
  int h_;
  const std::vector<double>& leaf_value_;
  std::vector<double>& acc_;
  std::array<std::int8_t, kNumObservations> assigned_{};
};

// step_table[t][c][a] = next cell id at step t, with the scenario's noise entry
// folded in.
void build_step_table(const double* noise, int h, Variant variant, const int* hash_table,
                      std::vector<std::uint8_t>& out) {
  const auto& tab = tables();
  out.resize(static_cast<std::size_t>(h) * kCells * kNumActions);
  for (int t = 0; t < h; ++t) {
    const double p = noise[t];
    std::uint8_t* slab = out.data() + static_cast<std::size_t>(t) * kCells * kNumActions;
    if (variant == Variant::Normal) {
      const int forced = noise_branch(p);
      for (int c = 0; c < kCells; ++c) {
        for (int a = 0; a < kNumActions; ++a) {
          const int dir = forced >= 0 ? forced : a;
          slab[c * kNumActions + a] = tab.next[dir][c];
        }
      }
    } else {
      for (int c = 0; c < kCells; ++c) {
        for (int a = 0; a < kNumActions; ++a) {
          const double scaled = hash_table[c * kNumActions + a] * p;
          const double u = scaled - std::floor(scaled);
          const int forced = noise_branch(u);
          const int dir = forced >= 0 ? forced : a;
          slab[c * kNumActions + a] = tab.next[dir][c];
        }
      }
    }
  }
}

}  // namespace

std::vector<double> sweep_all_policies(const std::vector<double>& noise, int m, int h,
                                       double gamma, Variant variant,
                                       std::uint64_t complex_seed) {
  if (m < 1 || h < 1) throw std::invalid_argument("sweep_all_policies: m and h must be >= 1");
  if (noise.size() != static_cast<std::size_t>(m) * h)
    throw std::invalid_argument("sweep_all_policies: noise size mismatch");

  // leaf_value[T] = discounted return when the goal is first entered at step T;
  // index h+1 means "not reached within the horizon".
  std::vector<double> leaf_value(h + 2);
  for (int T = 0; T <= h + 1; ++T) {
    double sum = 0.0, g = 1.0;
    const int steps = std::min(T, h + 1);
    for (int t = 0; t < steps; ++t) {
      sum -= g;
      g *= gamma;
    }
    leaf_value[T] = sum;
  }

  HashTable hash{};
  if (variant == Variant::Complex) hash = complex_hash_table(complex_seed);

  std::vector<double> acc(kPolicyClassSize, 0.0);
  std::vector<std::uint8_t> step_table;
  const int start = cell_id(kStart);
  for (int i = 0; i < m; ++i) {
    build_step_table(noise.data() + static_cast<std::size_t>(i) * h, h, variant, hash.data(),
                     step_table);
    ScenarioSweep sweep(step_table.data(), h, leaf_value, acc);
    sweep.run(start);
  }
  for (double& v : acc) v /= static_cast<double>(m);
  return acc;
}

std::vector<double> exact_policy_values(double gamma, int threads) {
  const TabularMdp mdp = tabular_gridworld(gamma);
  std::vector<double> values(kPolicyClassSize, 0.0);
  parallel_for(64, threads, [&](int chunk) {
    const std::uint32_t lo = static_cast<std::uint32_t>(chunk) * (kPolicyClassSize / 64);
    const std::uint32_t hi = lo + kPolicyClassSize / 64;
    for (std::uint32_t idx = lo; idx < hi; ++idx) {
      auto actions = state_action_table(policy_from_index(idx));
      values[idx] = exact_value_tabular(mdp, actions, gamma);
    }
  });
  return values;
}

std::uint64_t trial_scenario_seed(std::uint64_t seed, int m, int trial) {
  Rng level1 = Rng::substream(seed, static_cast<std::uint64_t>(m));
  Rng level2 = Rng::substream(level1.next_u64(), static_cast<std::uint64_t>(trial));
  return level2.next_u64();
}

namespace {

// m uniform scenarios of h noise entries each; the gridworld start state is
// deterministic so the noise block is the whole scenario. Matches the draw
// order of draw_scenarios on the gridworld model.
std::vector<double> trial_noise(std::uint64_t scenario_seed, int m, int h) {
  std::vector<double> noise(static_cast<std::size_t>(m) * h);
  for (int i = 0; i < m; ++i) {
    Rng rng = Rng::substream(scenario_seed, static_cast<std::uint64_t>(i));
    for (int t = 0; t < h; ++t) noise[static_cast<std::size_t>(i) * h + t] = rng.next_uniform();
  }
  return noise;
}

}  // namespace

GridExperimentResult gridworld_experiment(const std::vector<int>& m_values, int trials, int h,
                                          double gamma, std::uint64_t seed, int threads) {
  if (trials < 2) throw std::invalid_argument("gridworld_experiment: trials must be >= 2");
  GridExperimentResult result;

  const std::vector<double> exact = exact_policy_values(gamma, threads);
  result.opt_value = exact[0];
  result.opt_index = 0;
  result.worst_value = exact[0];
  for (std::uint32_t idx = 1; idx < kPolicyClassSize; ++idx) {
    if (exact[idx] > result.opt_value) {
      result.opt_value = exact[idx];
      result.opt_index = idx;
    }
    result.worst_value = std::min(result.worst_value, exact[idx]);
  }

  for (Variant variant : {Variant::Normal, Variant::Complex}) {
    for (int m : m_values) {
      GridExperimentCell cell;
      cell.variant = variant;
      cell.m = m;
      cell.winner_index.assign(trials, 0);
      cell.winner_value.assign(trials, 0.0);
      parallel_for(trials, threads, [&](int trial) {
        const std::uint64_t sc_seed = trial_scenario_seed(seed, m, trial);
        const std::vector<double> noise = trial_noise(sc_seed, m, h);
        const std::vector<double> vhat = sweep_all_policies(noise, m, h, gamma, variant, seed);
        std::uint32_t best = 0;
        for (std::uint32_t idx = 1; idx < kPolicyClassSize; ++idx)
          if (vhat[idx] > vhat[best]) best = idx;
        cell.winner_index[trial] = best;
        cell.winner_value[trial] = exact[best];
      });
      double sum = 0.0;
      for (double v : cell.winner_value) sum += v;
      cell.mean_value = sum / trials;
      double ss = 0.0;
      for (double v : cell.winner_value) ss += (v - cell.mean_value) * (v - cell.mean_value);
      cell.stderr_mean = std::sqrt(ss / (trials - 1) / trials);
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace pegasus::grid
