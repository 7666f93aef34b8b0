#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fkclock/config.hpp"
#include "fkclock/dynamics.hpp"
#include "fkclock/vqe.hpp"
#include "helpers.hpp"

namespace fkclock {
namespace {

using std::numbers::pi;

FkConfig make(std::size_t ns, std::size_t na, double dt) {
  FkConfig c;
  c.tfim = {ns, 0.25, 1.0};
  c.clock = {na, Encoding::Gray};
  c.dt = dt;
  return c;
}

std::vector<double> finite_difference(const Circuit& c, const FkHamiltonian& h, std::vector<double> theta,
                                      double step) {
  std::vector<double> g(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double t0 = theta[k];
    theta[k] = t0 + step;
    const double up = circuit_energy(c, h, theta);
    theta[k] = t0 - step;
    const double down = circuit_energy(c, h, theta);
    theta[k] = t0;
    g[k] = (up - down) / (2 * step);
  }
  return g;
}

TEST(Gradient, AnalyticSingleRotation) {
  // RX(θ) on spin 0 of |00⟩⊗|+⟩ at dt = 0: only C₀ sees it, E = (1 − cos θ)/4.
  const FkHamiltonian h(make(2, 1, 0.0));
  Circuit c(3);
  c.add(Gate::fixed(GateKind::H, 2));
  c.add(Gate::rx(0, 0));
  for (double t : {0.3, pi / 2, 2.0}) {
    const std::vector<double> theta{t};
    const auto eg = energy_and_gradient(c, h, theta);
    EXPECT_NEAR(eg.energy, (1 - std::cos(t)) / 4, 1e-14);
    EXPECT_NEAR(eg.gradient[0], std::sin(t) / 4, 1e-14);
  }
}

TEST(Gradient, SharedParameterSumsShifts) {
  const FkHamiltonian h(make(2, 1, 0.0));
  Circuit c(3);
  c.add(Gate::fixed(GateKind::H, 2));
  c.add(Gate::rx(0, 0));
  c.add(Gate::ry(1, 0));
  const std::vector<double> theta{0.7};
  const auto fd = finite_difference(c, h, theta, 1e-5);
  EXPECT_NEAR(parameter_shift_gradient(c, h, theta)[0], fd[0], 1e-8);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(12);
  for (std::size_t na : {1, 2}) {
    const FkConfig cfg = make(2, na, default_dt(3.0, na));
    const FkHamiltonian h(cfg);
    const Circuit c = build_vfk_circuit({2, na, 1}, 0);
    for (int trial = 0; trial < 5; ++trial) {
      const auto theta = test::random_angles(c.num_parameters(), rng);
      const auto ps = parameter_shift_gradient(c, h, theta);
      const auto fd = finite_difference(c, h, theta, 1e-5);
      for (std::size_t k = 0; k < ps.size(); ++k) EXPECT_NEAR(ps[k], fd[k], 1e-6);
    }
  }
}

TEST(Gradient, ThreadedMatchesSerialBitForBit) {
  std::mt19937_64 rng(13);
  const FkHamiltonian h(make(2, 2, 1.5));
  const Circuit c = build_vfk_circuit({2, 2, 2}, 0);
  const auto theta = test::random_angles(c.num_parameters(), rng);
  const auto a = energy_and_gradient(c, h, theta, 1);
  const auto b = energy_and_gradient(c, h, theta, 4);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_EQ(a.gradient, b.gradient);
}

TEST(Gradient, VanishesAtExactGround) {
  const FkHamiltonian h(make(2, 2, 0.0));
  const Circuit c = build_vfk_circuit({2, 2, 1}, 0);
  const std::vector<double> zero(c.num_parameters(), 0.0);
  double n = 0;
  for (double g : parameter_shift_gradient(c, h, zero)) n += g * g;
  EXPECT_LT(std::sqrt(n), 1e-8);
}

TEST(Gradient, RejectsParameterisedTwoQubitRotation) {
  Gate h = Gate::fixed(GateKind::H, 0);
  h.param = 0;
  EXPECT_THROW(Circuit(3).add(h), std::invalid_argument);
  Gate zz = Gate::rzz(0, 1, 0.0);
  zz.param = 0;
  Circuit c(3);
  c.add(zz);
  const std::vector<double> theta{0.1};
  EXPECT_THROW(parameter_shift_gradient(c, FkHamiltonian(make(2, 1, 0.0)), theta), std::invalid_argument);
}

TEST(Adam, ZeroGradientLeavesTheta) {
  std::vector<double> theta{0.3, -1.2};
  AdamState s(2);
  const std::vector<double> g{0.0, 0.0};
  adam_step(theta, g, s, OptimizerConfig{});
  EXPECT_EQ(theta, (std::vector<double>{0.3, -1.2}));
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
  OptimizerConfig opt;
  std::vector<double> theta{0.0, 0.0, 1.0};
  const std::vector<double> g{0.5, -2.0, 1e-3};
  AdamState s(3);
  adam_step(theta, g, s, opt);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_NEAR(theta[k], (k == 2 ? 1.0 : 0.0) - opt.learning_rate * g[k] / (std::abs(g[k]) + opt.epsilon), 1e-15);
}

TEST(Adam, ReducesConvexQuadratic) {
  OptimizerConfig opt;
  opt.learning_rate = 0.1;
  std::vector<double> x{2.0};
  AdamState s(1);
  auto f = [](double v) { return (v - 0.5) * (v - 0.5); };
  const double before = f(x[0]);
  for (int k = 0; k < 2; ++k) {
    const std::vector<double> g{2 * (x[0] - 0.5)};
    adam_step(x, g, s, opt);
  }
  EXPECT_LT(f(x[0]), before);
}

TEST(Adam, SizeMismatchThrows) {
  std::vector<double> x{1.0};
  AdamState s(1);
  const std::vector<double> g{1.0, 2.0};
  EXPECT_THROW(adam_step(x, g, s, OptimizerConfig{}), std::invalid_argument);
}

TEST(Anneal, FinalStageHitsTarget) {
  for (auto m : {AnnealMapping::Linear, AnnealMapping::Root}) {
    const AnnealSchedule s{7, m};
    EXPECT_EQ(s.stage_dt(0.75, 6), 0.75);
    for (std::size_t k = 1; k < 7; ++k) EXPECT_GT(s.stage_dt(0.75, k), s.stage_dt(0.75, k - 1));
  }
  EXPECT_DOUBLE_EQ((AnnealSchedule{4, AnnealMapping::Linear}.stage_dt(1.0, 0)), 0.25);
  EXPECT_DOUBLE_EQ((AnnealSchedule{4, AnnealMapping::Root}.stage_dt(1.0, 0)), 0.25);
  EXPECT_DOUBLE_EQ((AnnealSchedule{4, AnnealMapping::Root}.stage_dt(1.0, 2)), 0.5);
  EXPECT_THROW((AnnealSchedule{4, AnnealMapping::Linear}.stage_dt(1.0, 4)), std::out_of_range);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig o;
  EXPECT_NO_THROW(o.validate());
  o.learning_rate = 0.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.convergence_ratio = 1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(InitialTheta, SeededAndBounded) {
  const auto a = initial_theta(50, 1e-3, 9), b = initial_theta(50, 1e-3, 9);
  EXPECT_EQ(a, b);
  for (double x : a) EXPECT_LE(std::abs(x), 1e-3);
  EXPECT_NE(a, initial_theta(50, 1e-3, 10));
  for (double x : initial_theta(5, 0.0, 1)) EXPECT_EQ(x, 0.0);
}

TEST(RunVqe, ZeroStepConvergesImmediately) {
  VqeProblem p;
  p.target = make(2, 2, 0.0);
  p.ansatz = {2, 2, 1};
  p.optimizer.jitter = 0.0;
  p.anneal.stages = 1;
  const VqeRecord r = run_vqe(p);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.final_energy, 1e-10);
}

TEST(RunVqe, ConvergesAndIsDeterministic) {
  ExperimentConfig cfg;
  cfg.n_spins = 2;
  cfg.n_aux = 2;
  cfg.seed = 3;
  const VqeProblem p = make_problem(cfg);
  EXPECT_EQ(p.target.dt, 1.5);
  std::size_t last_stage = 0;
  bool stage_monotone = true, non_negative = true;
  const VqeRecord a = run_vqe(p, [&](const IterationRecord& r, const FkHamiltonian&, std::span<const double>) {
    stage_monotone &= r.stage >= last_stage;
    last_stage = r.stage;
    non_negative &= r.energy >= -1e-9;
  });
  EXPECT_TRUE(a.converged);
  EXPECT_LT(a.ratio(), 1e-2);
  EXPECT_TRUE(stage_monotone);
  EXPECT_TRUE(non_negative);
  EXPECT_EQ(a.trace.back().stage_dt, p.target.dt);
  const VqeRecord b = run_vqe(p);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) EXPECT_EQ(a.trace[k].energy, b.trace[k].energy);
  EXPECT_EQ(a.theta, b.theta);
}

TEST(RunVqe, EscalatesUntilConverged) {
  ExperimentConfig cfg;
  cfg.n_aux = 2;
  cfg.optimizer.max_iter = 5;
  cfg.anneal.stages = 1;
  const auto attempts = run_vqe_escalating(make_problem(cfg), 3);
  ASSERT_EQ(attempts.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(attempts[k].depth, k + 1);
    EXPECT_FALSE(attempts[k].converged);
  }
}

TEST(RunVqe, MismatchedAnsatzThrows) {
  VqeProblem p;
  p.target = make(2, 2, 1.5);
  p.ansatz = {3, 2, 1};
  EXPECT_THROW(run_vqe(p), std::invalid_argument);
}

}  // namespace
}  // namespace fkclock
