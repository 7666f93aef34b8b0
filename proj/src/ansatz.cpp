#include "fkclock/ansatz.hpp"

#include <stdexcept>

namespace fkclock {

std::size_t AnsatzSpec::num_parameters() const {
  return 2 * depth * n_aux * (n_spins * n_spins + n_spins);
}

std::size_t AnsatzSpec::num_cnots() const {
  return depth * n_aux * (n_spins * n_spins + n_spins) / 2;
}

void AnsatzSpec::validate() const {
  if (n_spins < 2) throw std::invalid_argument("ansatz needs n_s >= 2");
  if (n_aux < 1) throw std::invalid_argument("ansatz needs n_a >= 1");
  if (depth < 1) throw std::invalid_argument("ansatz needs depth >= 1");
}

std::vector<Gate> g_block(std::size_t q1, std::size_t q2, std::size_t first_param) {
  if (q1 == q2) throw std::invalid_argument("G block needs two distinct qubits");
  return {
      Gate::rx(q1, first_param),
      Gate::rx(q2, first_param + 2),
      Gate::ry(q1, first_param + 1),
      Gate::ry(q2, first_param + 3),
      Gate::cnot(q1, q2),
  };
}

Circuit build_ansatz(const AnsatzSpec& spec) {
  spec.validate();
  Circuit c(spec.width());
  std::size_t next = 0;
  auto emit = [&](std::size_t q1, std::size_t q2) {
    c.append(g_block(q1, q2, next));
    next += 4;
  };
  for (std::size_t layer = 0; layer < spec.depth; ++layer) {
    for (std::size_t a = 0; a < spec.n_aux; ++a) {
      const std::size_t clock_qubit = spec.n_spins + a;
      for (std::size_t i = 0; i < spec.n_spins; ++i) {
        for (std::size_t j = i + 1; j < spec.n_spins; ++j) emit(i, j);
      }
      for (std::size_t p = 0; p < spec.n_spins; ++p) emit(p, clock_qubit);
    }
  }
  return c;
}

std::vector<Gate> prep_layer(std::uint64_t initial_state, std::size_t n_spins, std::size_t n_aux) {
  if (initial_state >= (std::uint64_t{1} << n_spins)) {
    throw std::invalid_argument("initial state index outside the physical register");
  }
  std::vector<Gate> gates;
  for (std::size_t q = 0; q < n_spins; ++q) {
    if (initial_state & (std::uint64_t{1} << (n_spins - 1 - q))) gates.push_back(Gate::fixed(GateKind::X, q));
  }
  for (std::size_t a = 0; a < n_aux; ++a) gates.push_back(Gate::fixed(GateKind::H, n_spins + a));
  return gates;
}

Circuit build_vfk_circuit(const AnsatzSpec& spec, std::uint64_t initial_state) {
  Circuit c(spec.width());
  c.append(prep_layer(initial_state, spec.n_spins, spec.n_aux));
  c.append(build_ansatz(spec));
  return c;
}

}  // namespace fkclock
