#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fkclock/config.hpp"
#include "fkclock/fk_hamiltonian.hpp"
#include "fkclock/sim.hpp"

namespace fkclock {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t t = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected ADAM update of θ in place.
void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state,
               const OptimizerConfig& opt);

/// Energy and parameter-shift gradient of ⟨ψ(θ)|C|ψ(θ)⟩ for ψ(θ) = circuit(θ)|0…0⟩.
struct EnergyGradient {
  double energy = 0.0;
  std::vector<double> gradient;
};

/**
 * Two-point shift rule ½[E(θ + π/2) − E(θ − π/2)] applied gate by gate.
 * Prefix states are cached so every shifted evaluation only replays the
 * suffix. A parameter reused by several gates receives the sum of the
 * per-gate shifts. Throws std::invalid_argument if a parameterised gate is not
 * a single-qubit rotation.
 */
EnergyGradient energy_and_gradient(const Circuit& circuit, const FkHamiltonian& h,
                                   std::span<const double> theta, std::size_t threads = 1);

/// Shift-rule gradient only.
std::vector<double> parameter_shift_gradient(const Circuit& circuit, const FkHamiltonian& h,
                                             std::span<const double> theta,
                                             std::size_t threads = 1);

double circuit_energy(const Circuit& circuit, const FkHamiltonian& h, std::span<const double> theta);
StateVector circuit_state(const Circuit& circuit, std::span<const double> theta);

struct IterationRecord {
  std::size_t iter = 0;   // global iteration counter
  std::size_t stage = 0;  // annealing stage
  double stage_dt = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double wall_seconds = 0.0;  // since the start of the run; not part of the deterministic trace
};

struct VqeRecord {
  std::vector<IterationRecord> trace;
  std::vector<double> theta;
  double final_energy = 0.0;
  double e1 = 0.0;
  bool converged = false;
  std::size_t depth = 0;

  double ratio() const { return final_energy / e1; }
};

struct VqeProblem {
  FkConfig target;
  AnsatzSpec ansatz;
  OptimizerConfig optimizer;
  AnnealSchedule anneal;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

VqeProblem make_problem(const ExperimentConfig& cfg);

/// Called after each logged iterate with the current stage Hamiltonian and θ.
using VqeObserver =
    std::function<void(const IterationRecord&, const FkHamiltonian&, std::span<const double>)>;

/// Initial parameters: uniform in [−jitter, jitter] from a seeded mt19937_64.
std::vector<double> initial_theta(std::size_t n, double jitter, std::uint64_t seed);

/**
 * Annealed ADAM minimisation. Each stage rebuilds C at its effective dt and
 * warm-starts from the previous θ with fresh moment estimates. Intermediate
 * stages stop when the gradient norm falls below the stage tolerance, the final
 * stage when E/E₁ falls below the convergence ratio; every stage is capped at
 * max_iter updates. Deterministic for a fixed seed and thread count.
 */
VqeRecord run_vqe(const VqeProblem& problem, const VqeObserver& observer = {});

/// Runs depth d = start, start+1, … until convergence or max_depth; returns every attempt.
std::vector<VqeRecord> run_vqe_escalating(VqeProblem problem, std::size_t max_depth,
                                          const VqeObserver& observer = {});

}  // namespace fkclock
