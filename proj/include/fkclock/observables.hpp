#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fkclock/clock.hpp"
#include "fkclock/pauli.hpp"
#include "fkclock/sim.hpp"

namespace fkclock {

/// Probability below which a clock branch is treated as empty.
inline constexpr double kMinBranchProbability = 1e-12;

struct ClockBranch {
  StateVector state;  // normalized physical state
  double probability = 0.0;
};

/// Unnormalized ⟨i|Ψ⟩ over the physical register (clock qubits are the trailing n_aux).
StateVector clock_branch(const StateVector& psi, std::size_t level, const ClockSpec& clock);

/// Normalized branch and its clock probability; throws std::domain_error for an empty branch.
ClockBranch project_clock(const StateVector& psi, std::size_t level, const ClockSpec& clock);

/// Probability of every clock level, in level order.
std::vector<double> clock_probabilities(const StateVector& psi, const ClockSpec& clock);

/// ⟨Ψ|O⊗P_t|Ψ⟩ / ⟨Ψ|I⊗P_t|Ψ⟩ for a Hermitian physical observable O.
double expectation_at(const StateVector& psi, const PauliSum& observable, std::size_t level,
                      const ClockSpec& clock);

/// (1/n_s) Σ Z_i
PauliSum average_z(std::size_t n_spins);
double magnetization(const StateVector& psi, std::size_t level, const ClockSpec& clock);

/// ⟨ψ(t_i)|ψ(t_j)⟩ between normalized clock branches.
cplx loschmidt_direct(const StateVector& psi, std::size_t level_i, std::size_t level_j,
                      const ClockSpec& clock);

enum class EchoPart { Real, Imaginary };

/**
 * Ancilla-side gates of the Hadamard test on a register of `width` qubits with
 * the ancilla appended last: H (then S† for the imaginary part), a CNOT from
 * the ancilla onto every clock bit where the two level codes differ, and a
 * closing H.
 */
struct EchoCircuit {
  std::size_t ancilla = 0;
  std::vector<std::size_t> swap_qubits;  // T_ij
  std::size_t post_select_level = 0;
  EchoPart part = EchoPart::Real;
  Circuit gates;
};

EchoCircuit build_echo_circuit(std::size_t width, const ClockSpec& clock, std::size_t level_i,
                               std::size_t level_j, EchoPart part);

struct EchoEstimate {
  std::uint64_t shots = 0;
  std::uint64_t n0 = 0;  // ancilla 0 with the clock post-selected
  std::uint64_t n1 = 0;
  double weighted = 0.0;             // 2^{n_a}(N₀ − N₁)/N_shots
  double weighted_stderr = 0.0;
  double conditional = 0.0;       // (N₀ − N₁)/(N₀ + N₁)
  double conditional_stderr = 0.0;
  double acceptance() const { return shots ? static_cast<double>(n0 + n1) / static_cast<double>(shots) : 0.0; }
};

/**
 * Sampled Hadamard-test estimate of the real or imaginary part of ⟨ψ(t_i)|ψ(t_j)⟩.
 * Throws std::invalid_argument for zero shots and std::domain_error when no
 * shot survives post-selection.
 */
EchoEstimate loschmidt_hadamard(const StateVector& psi, const ClockSpec& clock, std::size_t level_i,
                                std::size_t level_j, EchoPart part, std::uint64_t shots,
                                std::uint64_t seed);
EchoEstimate loschmidt_hadamard(const Circuit& base, std::span<const double> theta,
                                const ClockSpec& clock, std::size_t level_i, std::size_t level_j,
                                EchoPart part, std::uint64_t shots, std::uint64_t seed);

/// −log(L)/D; returns +infinity (with a warning on stderr) for L ≤ 0.
double rate_function(double loschmidt, double dof);

}  // namespace fkclock
