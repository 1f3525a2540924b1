#include <cmath>
#include <string>

#include "doctest.h"
#include "pegasus/gridworld.hpp"
#include "pegasus/tabular.hpp"

using namespace pegasus;

namespace {

TabularMdp two_state_chain() {
  // State 0 moves to the absorbing state 1 with probability 1; R(0) = -1.
  TabularMdp mdp;
  mdp.num_states = 2;
  mdp.num_actions = 1;
  mdp.prob = {{{0.0, 1.0}}, {{0.0, 1.0}}};
  mdp.reward = {-1.0, 0.0};
  mdp.initial = {1.0, 0.0};
  mdp.absorbing = {0, 1};
  return mdp;
}

}  // namespace

TEST_CASE("one step to an absorbing goal is worth exactly -1") {
  const auto mdp = two_state_chain();
  const int policy[] = {0, 0};
  CHECK(exact_value_tabular(mdp, policy, 0.9) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("a self-loop with unit reward sums the geometric series") {
  TabularMdp mdp;
  mdp.num_states = 1;
  mdp.num_actions = 1;
  mdp.prob = {{{1.0}}};
  mdp.reward = {1.0};
  mdp.initial = {1.0};
  mdp.absorbing = {0};
  const int policy[] = {0};
  CHECK(exact_value_tabular(mdp, policy, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("non-stochastic transition rows are rejected") {
  auto mdp = two_state_chain();
  mdp.prob[0][0] = {0.3, 0.3};
  const int policy[] = {0, 0};
  CHECK_THROWS(exact_value_tabular(mdp, policy, 0.9));
}

TEST_CASE("truncated recursion approaches the linear solve") {
  const auto mdp = grid::tabular_gridworld();
  // Head-right-then-up policy: reaches the goal quickly.
  pegasus::TabularPolicy pol;
  pol.table.assign(8, grid::kRight);
  const auto& cat = grid::observation_catalogue();
  for (int k = 0; k < 8; ++k)
    if (cat[k].bits & (1u << 2)) pol.table[k] = grid::kUp;
  const auto actions = grid::state_action_table(pol);

  const double gamma = 0.99;
  const double exact = exact_value_tabular(mdp, actions, gamma);
  const double truncated = exact_value_tabular(mdp, actions, gamma, 100);
  const double bound = std::pow(gamma, 100) * 1.0 / (1.0 - gamma);
  CHECK(std::fabs(truncated - exact) <= bound);
  // And the truncation error vanishes as h grows.
  const double truncated_long = exact_value_tabular(mdp, actions, gamma, 2000);
  CHECK(std::fabs(truncated_long - exact) < 1e-6);
}

TEST_CASE("inverse CDF honors the closed-left boundary convention") {
  const auto g = inverse_cdf_model<std::string>({"sp", "spp"}, {1.0 / 3.0, 2.0 / 3.0});
  CHECK(g(0.2) == "sp");
  CHECK(g(1.0 / 3.0) == "sp");  // boundary belongs to the left outcome
  CHECK(g(0.5) == "spp");
  CHECK(g(1.0) == "spp");
}

TEST_CASE("inverse CDF rejects invalid tables") {
  CHECK_THROWS(inverse_cdf_model<int>({1, 2}, {0.5, 0.6}));
  CHECK_THROWS(inverse_cdf_model<int>({1, 2}, {1.2, -0.2}));
  CHECK_THROWS(inverse_cdf_model<int>({}, {}));
}

TEST_CASE("inverse CDF pushforward matches the table frequencies") {
  const auto g = inverse_cdf_model<int>({0, 1}, {1.0 / 3.0, 2.0 / 3.0});
  const int n = 100000;
  Rng rng(5150);
  long c0 = 0;
  for (int i = 0; i < n; ++i)
    if (g(rng.next_uniform()) == 0) ++c0;
  const double sd = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) * n);
  CHECK(std::fabs(c0 - n / 3.0) < 3.0 * sd);
}

TEST_CASE("fidelity_check validates pushforward distributions") {
  const auto name_int = [](int v) { return std::to_string(v); };

  SUBCASE("a model built from the reference passes") {
    const auto g = inverse_cdf_model<int>({0, 1}, {1.0 / 3.0, 2.0 / 3.0});
    auto sampler = [&](std::span<const double> p) { return g(p[0]); };
    const auto rep =
        fidelity_check<int>(sampler, 1, {{0, 1.0 / 3.0}, {1, 2.0 / 3.0}}, 100000, 9, name_int);
    CHECK(rep.pass);
  }
  SUBCASE("a grossly swapped reference fails") {
    const auto g = inverse_cdf_model<int>({0, 1}, {1.0 / 3.0, 2.0 / 3.0});
    auto sampler = [&](std::span<const double> p) { return g(p[0]); };
    const auto rep =
        fidelity_check<int>(sampler, 1, {{0, 2.0 / 3.0}, {1, 1.0 / 3.0}}, 100000, 9, name_int);
    CHECK(!rep.pass);
  }
  SUBCASE("an outcome outside the support fails with a diagnostic") {
    auto sampler = [](std::span<const double>) { return 7; };
    const auto rep = fidelity_check<int>(sampler, 1, {{0, 1.0}}, 1000, 9, name_int);
    CHECK(!rep.pass);
    CHECK(rep.diagnostic.find("7") != std::string::npos);
  }
  SUBCASE("n below 1000 is rejected") {
    auto sampler = [](std::span<const double>) { return 0; };
    CHECK_THROWS(fidelity_check<int>(sampler, 1, {{0, 1.0}}, 10, 9, name_int));
  }
}

TEST_CASE("gridworld transitions pass fidelity against the analytic branch table") {
  const auto model = grid::build_gridworld();
  const grid::Cell cell{0, 0};
  const int action = grid::kRight;
  auto sampler = [&](std::span<const double> p) { return model.transition(cell, action, p); };
  std::vector<std::pair<grid::Cell, double>> reference = grid::analytic_next_distribution(cell, action);
  const auto rep = fidelity_check<grid::Cell>(sampler, 1, reference, 100000, 123,
                                              [](grid::Cell c) { return grid::cell_to_text(c); });
  CHECK(rep.pass);
}
