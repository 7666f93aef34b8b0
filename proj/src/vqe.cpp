#include "fkclock/vqe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace fkclock {

void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state,
               const OptimizerConfig& opt) {
  if (grad.size() != theta.size() || state.m.size() != theta.size()) {
    throw std::invalid_argument("adam_step: size mismatch");
  }
  ++state.t;
  const double b1t = 1.0 - std::pow(opt.beta1, static_cast<double>(state.t));
  const double b2t = 1.0 - std::pow(opt.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < theta.size(); ++k) {
    state.m[k] = opt.beta1 * state.m[k] + (1.0 - opt.beta1) * grad[k];
    state.v[k] = opt.beta2 * state.v[k] + (1.0 - opt.beta2) * grad[k] * grad[k];
    const double mhat = state.m[k] / b1t;
    const double vhat = state.v[k] / b2t;
    theta[k] -= opt.learning_rate * mhat / (std::sqrt(vhat) + opt.epsilon);
  }
}

StateVector circuit_state(const Circuit& circuit, std::span<const double> theta) {
  return apply(circuit, theta, StateVector(circuit.width()));
}

double circuit_energy(const Circuit& circuit, const FkHamiltonian& h, std::span<const double> theta) {
  return h.energy(circuit_state(circuit, theta));
}

EnergyGradient energy_and_gradient(const Circuit& circuit, const FkHamiltonian& h,
                                   std::span<const double> theta, std::size_t threads) {
  if (theta.size() < circuit.num_parameters()) {
    throw std::invalid_argument("parameter vector shorter than the circuit expects");
  }
  if (circuit.width() != h.width()) throw std::invalid_argument("circuit and Hamiltonian widths differ");
  const auto& gates = circuit.gates();
  std::vector<std::size_t> shifted;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    if (!gates[g].param) continue;
    if (!is_rotation(gates[g].kind) || is_two_qubit(gates[g].kind)) {
      throw std::invalid_argument(std::string("shift rule needs a single-qubit rotation, got ") +
                                  gate_name(gates[g].kind));
    }
    shifted.push_back(g);
  }

  // prefix[g] is the state just before gate g.
  std::vector<StateVector> prefix;
  prefix.reserve(gates.size() + 1);
  prefix.emplace_back(circuit.width());
  for (const auto& g : gates) {
    StateVector next = prefix.back();
    apply_gate(g, theta, next);
    prefix.push_back(std::move(next));
  }

  std::vector<double> contrib(shifted.size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t k = begin; k < shifted.size(); k += stride) {
      const std::size_t g = shifted[k];
      const double base = gates[g].resolved_angle(theta);
      double e[2];
      for (int side = 0; side < 2; ++side) {
        Gate moved = gates[g];
        moved.param.reset();
        moved.angle = base + (side == 0 ? 0.5 : -0.5) * std::numbers::pi;
        StateVector psi = prefix[g];
        apply_gate(moved, theta, psi);
        for (std::size_t r = g + 1; r < gates.size(); ++r) apply_gate(gates[r], theta, psi);
        e[side] = h.energy(psi);
      }
      contrib[k] = 0.5 * (e[0] - e[1]);
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(threads, shifted.size()));
  if (n_workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work, w, n_workers);
  }

  EnergyGradient out;
  out.energy = h.energy(prefix.back());
  out.gradient.assign(theta.size(), 0.0);
  for (std::size_t k = 0; k < shifted.size(); ++k) out.gradient[*gates[shifted[k]].param] += contrib[k];
  return out;
}

std::vector<double> parameter_shift_gradient(const Circuit& circuit, const FkHamiltonian& h,
                                             std::span<const double> theta, std::size_t threads) {
  return energy_and_gradient(circuit, h, theta, threads).gradient;
}

VqeProblem make_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  VqeProblem p;
  p.target = cfg.fk_config();
  p.ansatz = cfg.ansatz();
  p.optimizer = cfg.optimizer;
  p.anneal = cfg.anneal;
  p.seed = cfg.seed;
  p.threads = cfg.threads;
  return p;
}

std::vector<double> initial_theta(std::size_t n, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-jitter, jitter);
  std::vector<double> theta(n);
  for (auto& t : theta) t = jitter > 0.0 ? dist(rng) : 0.0;
  return theta;
}

VqeRecord run_vqe(const VqeProblem& problem, const VqeObserver& observer) {
  problem.target.validate();
  problem.optimizer.validate();
  problem.anneal.validate();
  if (problem.ansatz.n_spins != problem.target.n_spins() || problem.ansatz.n_aux != problem.target.n_aux()) {
    throw std::invalid_argument("ansatz register does not match the Hamiltonian");
  }
  const Circuit circuit = build_vfk_circuit(problem.ansatz, problem.target.initial_state);
  const auto& opt = problem.optimizer;

  VqeRecord rec;
  rec.depth = problem.ansatz.depth;
  rec.e1 = gap_formula(problem.target.n_aux());
  rec.theta = initial_theta(circuit.num_parameters(), opt.jitter, problem.seed);

  const auto start = std::chrono::steady_clock::now();
  std::size_t global = 0;
  AdamState adam(rec.theta.size());
  for (std::size_t stage = 0; stage < problem.anneal.stages; ++stage) {
    const bool last = stage + 1 == problem.anneal.stages;
    FkConfig cfg = problem.target;
    cfg.dt = problem.anneal.stage_dt(problem.target.dt, stage);
    const FkHamiltonian h(cfg);
    if (opt.reset_moments) adam = AdamState(rec.theta.size());
    for (std::size_t it = 0;; ++it) {
      const auto eg = energy_and_gradient(circuit, h, rec.theta, problem.threads);
      double gn = 0.0;
      for (double g : eg.gradient) gn += g * g;
      gn = std::sqrt(gn);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const IterationRecord r{global++, stage, cfg.dt, eg.energy, gn, wall};
      rec.trace.push_back(r);
      if (observer) observer(r, h, rec.theta);
      rec.final_energy = eg.energy;
      if (last && eg.energy / rec.e1 < opt.convergence_ratio) {
        rec.converged = true;
        break;
      }
      if (!last && gn < opt.stage_grad_tol) break;
      if (it == opt.max_iter) break;
      adam_step(rec.theta, eg.gradient, adam, opt);
    }
  }
  return rec;
}

std::vector<VqeRecord> run_vqe_escalating(VqeProblem problem, std::size_t max_depth,
                                          const VqeObserver& observer) {
  std::vector<VqeRecord> attempts;
  for (std::size_t d = problem.ansatz.depth; d <= max_depth; ++d) {
    problem.ansatz.depth = d;
    attempts.push_back(run_vqe(problem, observer));
    if (attempts.back().converged) break;
  }
  return attempts;
}

}  // namespace fkclock
