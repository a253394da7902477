#include "ipg/costs.hpp"

#include "ipg/dynamics.hpp"
#include "instances.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace ipg;

TEST_SUITE_BEGIN("costs");

namespace {

GameSpec one_agent_spec(const AgentParams& p, int horizon = 5) {
  GameSpec spec;
  spec.agents = {p};
  spec.d_safe = Eigen::MatrixXd::Zero(1, 1);
  spec.horizon = horizon;
  return spec;
}

}  // namespace

TEST_CASE("stage cost hand evaluations") {
  AgentParams p;
  p.goal = {0.0, 0.0};

  CHECK(stage_cost({0, 0, 0, 0}, {0, 0}, p) == 0.0);
  CHECK(stage_cost({1, 0, 0, 0}, {0, 0}, p) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(stage_cost({0, 0, 0, 0}, {1, 1}, p) == doctest::Approx(2.0).epsilon(1e-12));

  SUBCASE("heading and speed targets engage only with nonzero weights") {
    AgentState off_heading{0, 0, 1.0, 0.5};
    CHECK(stage_cost(off_heading, {0, 0}, p) == 0.0);
    p.state_weight = {0.01, 0.01, 2.0, 3.0};
    CHECK(stage_cost(off_heading, {0, 0}, p) ==
          doctest::Approx(2.0 * 1.0 + 3.0 * 0.25).epsilon(1e-12));
  }
}

TEST_CASE("collision cost ramp, symmetry, and boundary smoothness") {
  const AgentState a{0, 0, 0, 0};
  const AgentState far{2, 0, 0, 0};
  const AgentState near{1, 0, 0, 0};

  CHECK(collision_cost(a, far, 1.5, 40.0) == 0.0);
  CHECK(collision_cost(a, near, 1.5, 40.0) == doctest::Approx(10.0).epsilon(1e-12));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const AgentState xi{oracles::uniform(rng, -3, 3), oracles::uniform(rng, -3, 3),
                        oracles::uniform(rng, -3, 3), oracles::uniform(rng, -1, 2)};
    const AgentState xj{oracles::uniform(rng, -3, 3), oracles::uniform(rng, -3, 3),
                        oracles::uniform(rng, -3, 3), oracles::uniform(rng, -1, 2)};
    const double d_safe = oracles::uniform(rng, 0.5, 2.5);
    const double w = oracles::uniform(rng, 1, 80);
    CHECK(collision_cost(xi, xj, d_safe, w) == collision_cost(xj, xi, d_safe, w));
    CHECK(collision_cost(xi, xj, d_safe, w) >= 0.0);
  }

  SUBCASE("value and slope vanish at the activation distance") {
    const double d_safe = 1.5;
    const double eps = 1e-7;
    const AgentState just_inside{d_safe - eps, 0, 0, 0};
    const AgentState just_outside{d_safe + eps, 0, 0, 0};
    CHECK(collision_cost(a, just_outside, d_safe, 40.0) == 0.0);
    CHECK(collision_cost(a, just_inside, d_safe, 40.0) < 40.0 * eps * eps * 1.01);
    // slope ~ 2*w*eps near the kink, which also tends to zero
    const AgentState inside{d_safe - 1e-4, 0, 0, 0};
    const AgentState inside2{d_safe - 2e-4, 0, 0, 0};
    const double slope = (collision_cost(a, inside2, d_safe, 40.0) -
                          collision_cost(a, inside, d_safe, 40.0)) /
                         1e-4;
    CHECK(std::abs(slope) < 40.0 * 5e-4);
  }
}

TEST_CASE("backup cost activates only for reversing") {
  CHECK(backup_cost({0, 0, 0, 0.5}, 10.0) == 0.0);
  CHECK(backup_cost({0, 0, 0, -0.5}, 10.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(backup_cost({0, 0, 0, 0.0}, 10.0) == 0.0);
}

TEST_CASE("constraint penalties hand evaluations") {
  AgentParams p;
  GameSpec spec = one_agent_spec(p);

  SUBCASE("all hinges inactive") {
    spec.obstacles.push_back(Obstacle::circle({100, 100}, 1.0));
    CHECK(constraint_penalties({{0, 0, 0, 0}}, {{0, 0}}, spec) == 0.0);
  }

  SUBCASE("obstacle clearance hinge") {
    // 0.5 m from the boundary of a circle whose required clearance is 1.0.
    spec.obstacles.push_back(Obstacle::circle({3.0, 0.0}, 2.5, 1.0));
    CHECK(constraint_penalties({{0, 0, 0, 0}}, {{0, 0}}, spec) ==
          doctest::Approx(25.0).epsilon(1e-9));
  }

  SUBCASE("input box hinge") {
    CHECK(constraint_penalties({{0, 0, 0, 0}}, {{2.5, 0}}, spec) ==
          doctest::Approx(25.0).epsilon(1e-9));
  }

  SUBCASE("speed box hinge") {
    CHECK(constraint_penalties({{0, 0, 0, 2.5}}, {{0, 0}}, spec) ==
          doctest::Approx(25.0).epsilon(1e-9));
  }
}

TEST_CASE("potential vanishes for a parked agent at its goal") {
  AgentParams p;
  p.goal = {1.0, -2.0};
  GameSpec spec = one_agent_spec(p, 4);
  const Eigen::VectorXd x0 = stack_states({{1.0, -2.0, 0.3, 0.0}});
  const std::vector<Eigen::VectorXd> us(4, Eigen::VectorXd::Zero(2));
  const auto xs = joint_rollout(x0, us, spec.ts, spec.speed_bounds());
  CHECK(potential(xs, us, spec) == 0.0);
}

TEST_CASE("far-apart agents decompose into independent potentials") {
  std::mt19937_64 rng(11);
  auto inst = instances::random_instance(rng, 2, 10, false);
  // Push the second agent far away, goal included.
  inst.x0[1].px += 100.0;
  inst.spec.agents[1].goal.x() += 100.0;

  const auto xs = instances::rollout_of(inst);
  const double joint = potential(xs, inst.controls, inst.spec);

  double split = 0.0;
  for (int i = 0; i < 2; ++i) {
    GameSpec solo = one_agent_spec(inst.spec.agents[static_cast<size_t>(i)], inst.spec.horizon);
    solo.obstacles = inst.spec.obstacles;
    std::vector<Eigen::VectorXd> us;
    for (const auto& uk : inst.controls) us.push_back(uk.segment<2>(2 * i));
    split += potential_of_controls(stack_states({inst.x0[static_cast<size_t>(i)]}), us, solo);
  }
  CHECK(joint == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("length mismatch is rejected") {
  AgentParams p;
  GameSpec spec = one_agent_spec(p, 3);
  const std::vector<Eigen::VectorXd> us(3, Eigen::VectorXd::Zero(2));
  std::vector<Eigen::VectorXd> xs(3, Eigen::VectorXd::Zero(4));  // should be 4
  CHECK_THROWS_AS(potential(xs, us, spec), std::invalid_argument);
}

TEST_CASE("potential-game property: per-agent control gradients coincide") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    auto inst = instances::random_instance(rng, n, 8);
    const Eigen::VectorXd x0 = stack_states(inst.x0);

    for (int agent = 0; agent < n; ++agent) {
      const auto of_flat = [&](const Eigen::VectorXd& flat, auto&& fn) {
        const auto us = instances::with_agent_controls(inst.controls, agent, flat);
        return fn(us);
      };
      const Eigen::VectorXd flat = instances::extract_agent_controls(inst.controls, agent);
      const Eigen::VectorXd g_pot = oracles::fd_gradient(
          [&](const Eigen::VectorXd& f) {
            return of_flat(f, [&](const auto& us) {
              return potential_of_controls(x0, us, inst.spec);
            });
          },
          flat);
      const Eigen::VectorXd g_ind = oracles::fd_gradient(
          [&](const Eigen::VectorXd& f) {
            return of_flat(f, [&](const auto& us) {
              return individual_cost_of_controls(agent, x0, us, inst.spec);
            });
          },
          flat);
      CHECK(oracles::relative_error(g_pot, g_ind) <= 1e-6);
    }
  }
}

TEST_CASE("quadratize gradients match finite differences of the potential") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    auto inst = instances::random_instance(rng, n, 6);
    auto xs = instances::rollout_of(inst);
    const auto quad = quadratize(xs, inst.controls, inst.spec);

    for (size_t k = 0; k < inst.controls.size(); ++k) {
      const Eigen::VectorXd gx_fd = oracles::fd_gradient(
          [&](const Eigen::VectorXd& xk) {
            auto xs2 = xs;
            xs2[k] = xk;
            return potential(xs2, inst.controls, inst.spec);
          },
          xs[k], 1e-6);
      const Eigen::VectorXd gu_fd = oracles::fd_gradient(
          [&](const Eigen::VectorXd& uk) {
            auto us2 = inst.controls;
            us2[k] = uk;
            return potential(xs, us2, inst.spec);
          },
          inst.controls[k], 1e-6);
      CHECK(oracles::relative_error(quad.steps[k].grad_x, gx_fd) < 1e-5);
      CHECK(oracles::relative_error(quad.steps[k].grad_u, gu_fd) < 1e-5);
    }

    const Eigen::VectorXd gT_fd = oracles::fd_gradient(
        [&](const Eigen::VectorXd& xT) {
          auto xs2 = xs;
          xs2.back() = xT;
          return potential(xs2, inst.controls, inst.spec);
        },
        xs.back(), 1e-6);
    CHECK(oracles::relative_error(quad.terminal_grad, gT_fd) < 1e-5);
  }
}

TEST_CASE("quadratize structure: PSD Hessians, zero cross terms, active input floor") {
  std::mt19937_64 rng(31);
  auto inst = instances::random_instance(rng, 3, 6);
  const auto xs = instances::rollout_of(inst);
  const auto quad = quadratize(xs, inst.controls, inst.spec);

  double r_min = 1e9;
  for (const auto& p : inst.spec.agents) r_min = std::min({r_min, p.input_weight[0], p.input_weight[1]});

  for (const auto& q : quad.steps) {
    CHECK((q.hess_xx - q.hess_xx.transpose()).norm() == 0.0);
    CHECK(q.hess_ux.norm() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_x(q.hess_xx);
    CHECK(es_x.eigenvalues().minCoeff() > -1e-9);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_u(q.hess_uu);
    CHECK(es_u.eigenvalues().minCoeff() > -1e-9);
    CHECK(q.hess_uu.diagonal().minCoeff() >= 2.0 * r_min - 1e-12);
  }
}

TEST_CASE("inactive hinges contribute exactly zero blocks") {
  AgentParams p;
  p.goal = {50, 50};
  GameSpec spec;
  spec.agents = {p, p};
  spec.agents[1].goal = {-50, -50};
  spec.d_safe = Eigen::MatrixXd::Constant(2, 2, 1.5);
  spec.horizon = 3;
  spec.obstacles.push_back(Obstacle::circle({0, 30}, 1.0));

  // Agents far apart, away from the obstacle, inside all boxes.
  const Eigen::VectorXd x0 = stack_states({{0, 0, 0, 0.5}, {20, 0, 0, 0.5}});
  const std::vector<Eigen::VectorXd> us(3, Eigen::VectorXd::Zero(4));
  const auto xs = joint_rollout(x0, us, spec.ts, spec.speed_bounds());
  const auto quad = quadratize(xs, us, spec);

  for (const auto& q : quad.steps) {
    // Only the goal quadratic remains: position gradient present, but the
    // off-diagonal inter-agent coupling must be exactly zero.
    CHECK(q.hess_xx.block<4, 4>(0, 4).norm() == 0.0);
    CHECK(q.hess_xx.block<4, 4>(4, 0).norm() == 0.0);
    CHECK(q.grad_x[3] == 0.0);  // no backup, no speed hinge on v
  }
}

TEST_CASE("all cost terms are nonnegative on random inputs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = instances::random_instance(rng, 2, 6);
    const auto xs = instances::rollout_of(inst);
    CHECK(potential(xs, inst.controls, inst.spec) >= 0.0);
    CHECK(individual_cost(0, xs, inst.controls, inst.spec) >= 0.0);
    CHECK(individual_cost(1, xs, inst.controls, inst.spec) >= 0.0);
  }
}

TEST_SUITE_END();
