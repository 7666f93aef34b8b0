#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fkclock/sim.hpp"

namespace fkclock {

/// Layered G-block ansatz over n_s physical and n_a clock qubits.
struct AnsatzSpec {
  std::size_t n_spins = 2;
  std::size_t n_aux = 1;
  std::size_t depth = 1;

  std::size_t width() const { return n_spins + n_aux; }
  /// 2·d·n_a·(n_s² + n_s)
  std::size_t num_parameters() const;
  /// d·n_a·(n_s² + n_s)/2
  std::size_t num_cnots() const;
  std::size_t num_blocks() const { return num_cnots(); }
  void validate() const;
};

/**
 * RX(θ1) q1, RX(θ3) q2, RY(θ2) q1, RY(θ4) q2, CNOT(q1 → q2), drawing
 * θ1..θ4 from consecutive parameter slots starting at `first_param`.
 */
std::vector<Gate> g_block(std::size_t q1, std::size_t q2, std::size_t first_param);

/**
 * Variational part V(θ). Each layer visits the clock qubits in ascending
 * order; for every clock qubit it emits blocks on all physical pairs i<j
 * (lexicographic) followed by one block per physical qubit coupling it to the
 * clock qubit. In the physical–clock blocks the physical qubit is the CNOT
 * control, so V(0) acts trivially on |0…0⟩ ⊗ (any clock state).
 */
Circuit build_ansatz(const AnsatzSpec& spec);

/// X on the set bits of the initial physical state, then H on every clock qubit.
std::vector<Gate> prep_layer(std::uint64_t initial_state, std::size_t n_spins, std::size_t n_aux);

/// prep_layer followed by build_ansatz, acting on |0…0⟩.
Circuit build_vfk_circuit(const AnsatzSpec& spec, std::uint64_t initial_state);

}  // namespace fkclock
