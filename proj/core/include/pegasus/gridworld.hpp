#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pegasus/search.hpp"
#include "pegasus/sim_model.hpp"
#include "pegasus/tabular.hpp"

namespace pegasus::grid {

/// 5x5 open-room gridworld. The agent starts at (0,0), the absorbing goal is
/// at (4,4), reward is -1 per step until the goal is reached and 0 afterward.
struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

inline constexpr int kSize = 5;
inline constexpr Cell kStart{0, 0};
inline constexpr Cell kGoal{4, 4};
inline constexpr int kNumActions = 4;
inline constexpr int kNumObservations = 8;
inline constexpr std::uint32_t kPolicyClassSize = 65536;  // 4^8

/// Actions in the model's noise-branch order.
enum Action : int { kUp = 0, kLeft = 1, kDown = 2, kRight = 3 };

/// 8 wall bits for the adjoining squares, one bit per direction in the fixed
/// order N, NE, E, SE, S, SW, W, NW (bit 0 = N). A bit is set iff the square
/// lies outside the grid; the room has no interior walls.
struct WallObservation {
  std::uint8_t bits = 0;
  bool operator==(const WallObservation&) const = default;
};

WallObservation observe(Cell cell);

/// One-step move with wall clamping: the result of moving from `cell` in the
/// direction of `action`, or `cell` itself if that would leave the grid.
Cell step(Cell cell, int action);

int cell_id(Cell cell);          // y * 5 + x
Cell cell_from_id(int id);

/// The 8 distinct observations of non-goal cells, sorted by bit pattern; this
/// order defines the policy-table layout.
const std::array<WallObservation, kNumObservations>& observation_catalogue();

/// Index of a cell's observation in the catalogue.
int observation_id(Cell cell);

/// Base-4 digit k of idx picks the action for catalogue observation k.
TabularPolicy policy_from_index(std::uint32_t idx);
std::uint32_t index_of_policy(const TabularPolicy& policy);

using GridModel = SimModel<Cell, int>;

/// The deterministic simulative model: p <= 0.05 moves up, <= 0.10 left,
/// <= 0.15 down, <= 0.20 right, otherwise the intended action.
GridModel build_gridworld(double gamma = 0.99);

using HashTable = std::array<int, kSize * kSize * kNumActions>;

/// The frozen per-(state, action) hash integers k in {1, ..., 1000}, drawn
/// once from `seed` in state-major order.
HashTable complex_hash_table(std::uint64_t seed);

/// Wraps a d_P = 1 model with per-(state, action) hash functions
/// h(p) = fract(k * p). The wrapped model represents the same MDP through a
/// deliberately convoluted noise mapping.
GridModel wrap_complex(const GridModel& model, std::uint64_t seed);
GridModel wrap_complex_with_table(const GridModel& model, const HashTable& table);

/// Analytic next-cell distribution of one (cell, action) pair:
/// 0.05 per compass direction plus 0.80 for the intended action, with
/// wall-blocked mass folded onto staying in place.
std::vector<std::pair<Cell, double>> analytic_next_distribution(Cell cell, int action);

/// Explicit tabular form of the same MDP (the oracle side).
TabularMdp tabular_gridworld(double gamma = 0.99);

/// Callable adapter: maps cells to actions through the observation table.
struct GridPolicyFn {
  const TabularPolicy* policy;
  int operator()(const Cell& c) const { return policy->table[observation_id(c)]; }
};

/// Per-policy-state action table for the tabular oracle.
std::vector<int> state_action_table(const TabularPolicy& policy);

std::string cell_to_text(Cell cell);
Cell cell_from_text(const std::string& text);

}  // namespace pegasus::grid
