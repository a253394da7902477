#include "ipg/dynamics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace ipg;

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("step matches the tabulated Euler updates") {
  const Interval vb{-1.5, 2.0};

  AgentState a = step({0, 0, 0, 1}, {0, 0}, 0.1, vb);
  CHECK(a.px == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(a.py == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.theta == 0.0);
  CHECK(a.v == 1.0);

  AgentState b = step({1, 2, M_PI / 2, 2}, {0, 0}, 0.1, vb);
  CHECK(b.px == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.py == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(b.theta == M_PI / 2);
  CHECK(b.v == 2.0);

  AgentState c = step({0, 0, 0, 0}, {1, 0.5}, 0.1, vb);
  CHECK(c.px == 0.0);
  CHECK(c.py == 0.0);
  CHECK(c.theta == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(c.v == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("step agrees with an independently coded evaluator on random samples") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const AgentState x{oracles::uniform(rng, -10, 10), oracles::uniform(rng, -10, 10),
                       oracles::uniform(rng, -8, 8), oracles::uniform(rng, -1.5, 2.0)};
    const ControlInput u{oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2)};
    const AgentState got = step(x, u, 0.1, {-1.5, 2.0});
    const AgentState want = oracles::euler_reference(x, u, 0.1, -1.5, 2.0);
    CHECK(got.px == doctest::Approx(want.px).epsilon(1e-12));
    CHECK(got.py == doctest::Approx(want.py).epsilon(1e-12));
    CHECK(got.theta == doctest::Approx(want.theta).epsilon(1e-12));
    CHECK(got.v == doctest::Approx(want.v).epsilon(1e-12));
  }
}

TEST_CASE("step clamps speed and is bit-deterministic") {
  const AgentState fast = step({0, 0, 0, 1.95}, {2, 0}, 0.1, {-1.5, 2.0});
  CHECK(fast.v == 2.0);
  const AgentState slow = step({0, 0, 0, -1.45}, {-2, 0}, 0.1, {-1.5, 2.0});
  CHECK(slow.v == -1.5);

  const AgentState x{0.3, -0.7, 1.1, 0.9};
  const ControlInput u{0.4, -0.2};
  const AgentState s1 = step(x, u, 0.1, {-1.5, 2.0});
  const AgentState s2 = step(x, u, 0.1, {-1.5, 2.0});
  CHECK(s1.px == s2.px);
  CHECK(s1.py == s2.py);
  CHECK(s1.theta == s2.theta);
  CHECK(s1.v == s2.v);
}

TEST_CASE("step rejects non-finite input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step({nan, 0, 0, 0}, {0, 0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(step({0, 0, 0, 0}, {nan, 0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(step({0, 0, 0, 0}, {0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("rollout chains per-agent steps and keeps element zero") {
  const JointState x0{{0, 0, 0, 1}};
  const JointControls zeros(3, std::vector<ControlInput>{{0, 0}});
  const auto xs = rollout(x0, zeros, 0.1, {{-1.5, 2.0}});
  REQUIRE(xs.size() == 4);
  CHECK(xs[0][0].px == 0.0);
  CHECK(xs[1][0].px == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(xs[2][0].px == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(xs[3][0].px == doctest::Approx(0.3).epsilon(1e-12));

  SUBCASE("empty plan returns only the initial state") {
    const auto only = rollout(x0, {}, 0.1, {{-1.5, 2.0}});
    REQUIRE(only.size() == 1);
    CHECK(only[0][0].v == 1.0);
  }

  SUBCASE("agent count mismatch throws") {
    const JointControls bad(2, std::vector<ControlInput>{{0, 0}, {0, 0}});
    CHECK_THROWS_AS(rollout(x0, bad, 0.1, {{-1.5, 2.0}}), std::invalid_argument);
  }
}

TEST_CASE("two-agent rollout equals two independent single-agent rollouts") {
  std::mt19937_64 rng(21);
  const JointState x0{{0, 0, 0.4, 1.0}, {5, -2, -1.2, 0.5}};
  JointControls controls(10);
  JointControls solo_a(10), solo_b(10);
  for (int k = 0; k < 10; ++k) {
    const ControlInput ua{oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2)};
    const ControlInput ub{oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2)};
    controls[k] = {ua, ub};
    solo_a[k] = {ua};
    solo_b[k] = {ub};
  }
  const std::vector<Interval> vb{{-1.5, 2.0}, {-1.5, 2.0}};
  const auto joint = rollout(x0, controls, 0.1, vb);
  const auto a = rollout({x0[0]}, solo_a, 0.1, {vb[0]});
  const auto b = rollout({x0[1]}, solo_b, 0.1, {vb[1]});
  for (size_t k = 0; k < joint.size(); ++k) {
    CHECK(joint[k][0].px == a[k][0].px);
    CHECK(joint[k][0].v == a[k][0].v);
    CHECK(joint[k][1].py == b[k][0].py);
    CHECK(joint[k][1].theta == b[k][0].theta);
  }
}

TEST_CASE("zero controls and zero speed keep every agent stationary") {
  const JointState x0{{1, 2, 0.7, 0}, {-3, 4, -2.1, 0}};
  const JointControls zeros(25, std::vector<ControlInput>(2));
  const auto xs = rollout(x0, zeros, 0.1, {{-1.5, 2.0}, {-1.5, 2.0}});
  for (const auto& state : xs) {
    for (size_t i = 0; i < 2; ++i) {
      CHECK(state[i].px == x0[i].px);
      CHECK(state[i].py == x0[i].py);
      CHECK(state[i].v == 0.0);
    }
  }
}

TEST_CASE("linearize matches central finite differences of the unclamped step") {
  // Wide speed bounds keep the clamp inactive, matching the linearization's
  // assumption.
  const Interval wide{-1e9, 1e9};
  const double h = 1e-5;
  std::mt19937_64 rng(99);

  for (int trial = 0; trial < 1000; ++trial) {
    const AgentState x{oracles::uniform(rng, -5, 5), oracles::uniform(rng, -5, 5),
                       oracles::uniform(rng, -6, 6), oracles::uniform(rng, -1.5, 2.0)};
    const ControlInput u{oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2)};

    Eigen::Matrix4d a;
    Eigen::Matrix<double, 4, 2> b;
    linearize(x, u, 0.1, a, b);

    Eigen::Matrix4d a_fd;
    for (int c = 0; c < 4; ++c) {
      Eigen::Vector4d xp = x.vec(), xm = x.vec();
      xp[c] += h;
      xm[c] -= h;
      a_fd.col(c) = (step(AgentState::from_vec(xp), u, 0.1, wide).vec() -
                     step(AgentState::from_vec(xm), u, 0.1, wide).vec()) /
                    (2 * h);
    }
    Eigen::Matrix<double, 4, 2> b_fd;
    for (int c = 0; c < 2; ++c) {
      Eigen::Vector2d up = u.vec(), um = u.vec();
      up[c] += h;
      um[c] -= h;
      b_fd.col(c) = (step(x, ControlInput::from_vec(up), 0.1, wide).vec() -
                     step(x, ControlInput::from_vec(um), 0.1, wide).vec()) /
                    (2 * h);
    }
    CHECK((a - a_fd).norm() / std::max(1.0, a.norm()) < 1e-6);
    CHECK((b - b_fd).norm() / std::max(1.0, b.norm()) < 1e-6);
  }
}

TEST_CASE("linearize closed forms at simple points") {
  Eigen::Matrix4d a;
  Eigen::Matrix<double, 4, 2> b;
  linearize({0, 0, 0, 1}, {0, 0}, 0.1, a, b);
  CHECK(a(0, 2) == 0.0);                              // -ts*v*sin(0)
  CHECK(a(0, 3) == doctest::Approx(0.1));             // ts*cos(0)
  CHECK(b(3, 0) == doctest::Approx(0.1));             // dv'/da = ts
  CHECK(b(2, 1) == doctest::Approx(0.1));             // dtheta'/dw = ts
  linearize({3, -1, 2.2, -0.4}, {1, 1}, 0.1, a, b);
  CHECK(b(3, 0) == doctest::Approx(0.1));             // ts for all states
}

TEST_SUITE_END();
