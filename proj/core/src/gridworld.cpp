#include "pegasus/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace pegasus::grid {

namespace {

// Direction offsets in observation bit order N, NE, E, SE, S, SW, W, NW.
constexpr int kObsDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kObsDy[8] = {1, 1, 0, -1, -1, -1, 0, 1};

// Action offsets in branch order up, left, down, right.
constexpr int kActDx[4] = {0, -1, 0, 1};
constexpr int kActDy[4] = {1, 0, -1, 0};

bool in_grid(int x, int y) { return x >= 0 && x < kSize && y >= 0 && y < kSize; }

}  // namespace

WallObservation observe(Cell cell) {
  if (!in_grid(cell.x, cell.y)) throw std::invalid_argument("observe: cell outside grid");
  WallObservation obs;
  for (int b = 0; b < 8; ++b) {
    if (!in_grid(cell.x + kObsDx[b], cell.y + kObsDy[b])) obs.bits |= static_cast<std::uint8_t>(1u << b);
  }
  return obs;
}

Cell step(Cell cell, int action) {
  const int nx = cell.x + kActDx[action];
  const int ny = cell.y + kActDy[action];
  if (!in_grid(nx, ny)) return cell;
  return Cell{nx, ny};
}

int cell_id(Cell cell) { return cell.y * kSize + cell.x; }

Cell cell_from_id(int id) { return Cell{id % kSize, id / kSize}; }

const std::array<WallObservation, kNumObservations>& observation_catalogue() {
  static const std::array<WallObservation, kNumObservations> catalogue = [] {
    std::vector<std::uint8_t> seen;
    for (int y = 0; y < kSize; ++y) {
      for (int x = 0; x < kSize; ++x) {
        Cell c{x, y};
        if (c == kGoal) continue;
        const std::uint8_t bits = observe(c).bits;
        if (std::find(seen.begin(), seen.end(), bits) == seen.end()) seen.push_back(bits);
      }
    }
    std::sort(seen.begin(), seen.end());
    if (seen.size() != kNumObservations)
      throw std::logic_error("gridworld: expected exactly 8 distinct observations");
    std::array<WallObservation, kNumObservations> out{};
    for (int i = 0; i < kNumObservations; ++i) out[i].bits = seen[i];
    return out;
  }();
  return catalogue;
}

int observation_id(Cell cell) {
  static const std::array<int, kSize * kSize> lookup = [] {
    std::array<int, kSize * kSize> table{};
    table.fill(-1);
    const auto& catalogue = observation_catalogue();
    for (int id = 0; id < kSize * kSize; ++id) {
      Cell c = cell_from_id(id);
      if (c == kGoal) continue;
      const auto obs = observe(c);
      for (int k = 0; k < kNumObservations; ++k) {
        if (catalogue[k] == obs) {
          table[id] = k;
          break;
        }
      }
    }
    return table;
  }();
  const int k = lookup[cell_id(cell)];
  if (k < 0) throw std::invalid_argument("observation_id: goal cell has no policy observation");
  return k;
}

TabularPolicy policy_from_index(std::uint32_t idx) {
  if (idx >= kPolicyClassSize) throw std::out_of_range("policy_from_index: index out of range");
  TabularPolicy policy;
  policy.class_index = idx;
  policy.table.resize(kNumObservations);
  std::uint32_t v = idx;
  for (int k = 0; k < kNumObservations; ++k) {
    policy.table[k] = static_cast<int>(v & 3u);
    v >>= 2;
  }
  return policy;
}

std::uint32_t index_of_policy(const TabularPolicy& policy) {
  std::uint32_t idx = 0;
  for (int k = kNumObservations - 1; k >= 0; --k) {
    idx = (idx << 2) | static_cast<std::uint32_t>(policy.table[k] & 3);
  }
  return idx;
}

GridModel build_gridworld(double gamma) {
  GridModel model;
  model.state_kind = StateKind::Discrete;
  model.state_dim = 0;
  model.noise_dim = 1;
  model.gamma = gamma;
  model.r_max = 1.0;
  model.transition = [](const Cell& s, const int& a, std::span<const double> p) {
    const double u = p[0];
    if (u <= 0.05) return step(s, kUp);
    if (u <= 0.10) return step(s, kLeft);
    if (u <= 0.15) return step(s, kDown);
    if (u <= 0.20) return step(s, kRight);
    return step(s, a);
  };
  model.reward = [](const Cell& s) { return s == kGoal ? 0.0 : -1.0; };
  model.initial = [](Rng&) { return kStart; };
  model.absorbing = [](const Cell& s) { return s == kGoal; };
  model.state_to_text = [](const Cell& s) { return cell_to_text(s); };
  model.state_from_text = [](const std::string& t) { return cell_from_text(t); };
  return model;
}

HashTable complex_hash_table(std::uint64_t seed) {
  HashTable table{};
  Rng rng(seed);
  for (auto& k : table) k = 1 + static_cast<int>(rng.next_u64() % 1000u);
  return table;
}

GridModel wrap_complex_with_table(const GridModel& model, const HashTable& table) {
  if (model.noise_dim != 1) throw std::invalid_argument("wrap_complex: requires noise_dim == 1");
  auto shared = std::make_shared<HashTable>(table);
  GridModel wrapped = model;
  auto inner = model.transition;
  wrapped.transition = [shared, inner](const Cell& s, const int& a, std::span<const double> p) {
    const int k = (*shared)[cell_id(s) * kNumActions + a];
    const double scaled = k * p[0];
    const double hashed = scaled - std::floor(scaled);
    const double buf[1] = {hashed};
    return inner(s, a, std::span<const double>(buf, 1));
  };
  return wrapped;
}

GridModel wrap_complex(const GridModel& model, std::uint64_t seed) {
  return wrap_complex_with_table(model, complex_hash_table(seed));
}

std::vector<std::pair<Cell, double>> analytic_next_distribution(Cell cell, int action) {
  std::map<int, double> mass;
  mass[cell_id(step(cell, kUp))] += 0.05;
  mass[cell_id(step(cell, kLeft))] += 0.05;
  mass[cell_id(step(cell, kDown))] += 0.05;
  mass[cell_id(step(cell, kRight))] += 0.05;
  mass[cell_id(step(cell, action))] += 0.80;
  std::vector<std::pair<Cell, double>> out;
  out.reserve(mass.size());
  for (const auto& [id, p] : mass) out.emplace_back(cell_from_id(id), p);
  return out;
}

TabularMdp tabular_gridworld(double) {
  TabularMdp mdp;
  mdp.num_states = kSize * kSize;
  mdp.num_actions = kNumActions;
  mdp.prob.assign(mdp.num_states,
                  std::vector<std::vector<double>>(mdp.num_actions,
                                                   std::vector<double>(mdp.num_states, 0.0)));
  mdp.reward.assign(mdp.num_states, -1.0);
  mdp.initial.assign(mdp.num_states, 0.0);
  mdp.absorbing.assign(mdp.num_states, 0);

  const int goal = cell_id(kGoal);
  mdp.reward[goal] = 0.0;
  mdp.absorbing[goal] = 1;
  mdp.initial[cell_id(kStart)] = 1.0;

  for (int id = 0; id < mdp.num_states; ++id) {
    Cell c = cell_from_id(id);
    for (int a = 0; a < kNumActions; ++a) {
      if (id == goal) {
        mdp.prob[id][a][id] = 1.0;
        continue;
      }
      for (const auto& [next, p] : analytic_next_distribution(c, a)) {
        mdp.prob[id][a][cell_id(next)] += p;
      }
    }
  }
  return mdp;
}

std::vector<int> state_action_table(const TabularPolicy& policy) {
  std::vector<int> actions(kSize * kSize, 0);
  for (int id = 0; id < kSize * kSize; ++id) {
    Cell c = cell_from_id(id);
    if (c == kGoal) continue;  // action at the absorbing goal is irrelevant
    actions[id] = policy.table[observation_id(c)];
  }
  return actions;
}

std::string cell_to_text(Cell cell) {
  std::ostringstream os;
  os << cell.x << ' ' << cell.y;
  return os.str();
}

Cell cell_from_text(const std::string& text) {
  std::istringstream is(text);
  Cell c;
  if (!(is >> c.x >> c.y)) throw std::invalid_argument("cell_from_text: bad cell record");
  return c;
}

}  // namespace pegasus::grid
