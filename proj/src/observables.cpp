#include "fkclock/observables.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

namespace fkclock {

namespace {

std::size_t physical_width(const StateVector& psi, const ClockSpec& clock) {
  clock.validate();
  if (psi.width() <= clock.n_aux) throw std::invalid_argument("state has no physical register");
  return psi.width() - clock.n_aux;
}

}  // namespace

StateVector clock_branch(const StateVector& psi, std::size_t level, const ClockSpec& clock) {
  const std::size_t ns = physical_width(psi, clock);
  const std::uint64_t code = encode(level, clock);
  const std::uint64_t pdim = std::uint64_t{1} << ns;
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(pdim));
  for (std::uint64_t p = 0; p < pdim; ++p) amps[static_cast<Eigen::Index>(p)] = psi[(p << clock.n_aux) | code];
  return StateVector(ns, std::move(amps));
}

ClockBranch project_clock(const StateVector& psi, std::size_t level, const ClockSpec& clock) {
  StateVector b = clock_branch(psi, level, clock);
  const double prob = b.amplitudes().squaredNorm();
  if (prob < kMinBranchProbability) {
    throw std::domain_error("clock level " + std::to_string(level) + " has zero probability");
  }
  b.normalize();
  return {std::move(b), prob};
}

std::vector<double> clock_probabilities(const StateVector& psi, const ClockSpec& clock) {
  std::vector<double> out;
  for (std::size_t i = 0; i < clock.levels(); ++i) out.push_back(clock_branch(psi, i, clock).amplitudes().squaredNorm());
  return out;
}

double expectation_at(const StateVector& psi, const PauliSum& observable, std::size_t level,
                      const ClockSpec& clock) {
  const StateVector b = clock_branch(psi, level, clock);
  if (observable.width() != b.width()) throw std::invalid_argument("observable width differs from the physical register");
  const double weight = b.amplitudes().squaredNorm();
  if (weight < kMinBranchProbability) {
    throw std::domain_error("clock level " + std::to_string(level) + " has zero probability");
  }
  return expectation(b, observable) / weight;
}

PauliSum average_z(std::size_t n_spins) {
  PauliSum z(n_spins);
  for (std::size_t q = 0; q < n_spins; ++q) {
    z.add_term(PauliString(n_spins).with(q, Pauli::Z), 1.0 / static_cast<double>(n_spins));
  }
  return z;
}

double magnetization(const StateVector& psi, std::size_t level, const ClockSpec& clock) {
  return expectation_at(psi, average_z(physical_width(psi, clock)), level, clock);
}

cplx loschmidt_direct(const StateVector& psi, std::size_t level_i, std::size_t level_j,
                      const ClockSpec& clock) {
  const ClockBranch a = project_clock(psi, level_i, clock);
  const ClockBranch b = project_clock(psi, level_j, clock);
  return overlap(a.state, b.state);
}

EchoCircuit build_echo_circuit(std::size_t width, const ClockSpec& clock, std::size_t level_i,
                               std::size_t level_j, EchoPart part) {
  if (width <= clock.n_aux) throw std::invalid_argument("register has no physical qubits");
  const std::uint64_t diff = encode(level_i, clock) ^ encode(level_j, clock);
  EchoCircuit e;
  e.ancilla = width;
  e.post_select_level = level_i;
  e.part = part;
  e.gates = Circuit(width + 1);
  e.gates.add(Gate::fixed(GateKind::H, e.ancilla));
  if (part == EchoPart::Imaginary) e.gates.add(Gate::fixed(GateKind::Sdg, e.ancilla));
  const std::size_t first_clock = width - clock.n_aux;
  for (std::size_t a = 0; a < clock.n_aux; ++a) {
    if (diff & (std::uint64_t{1} << (clock.n_aux - 1 - a))) {
      e.swap_qubits.push_back(first_clock + a);
      e.gates.add(Gate::cnot(e.ancilla, first_clock + a));
    }
  }
  e.gates.add(Gate::fixed(GateKind::H, e.ancilla));
  return e;
}

EchoEstimate loschmidt_hadamard(const StateVector& psi, const ClockSpec& clock, std::size_t level_i,
                                std::size_t level_j, EchoPart part, std::uint64_t shots,
                                std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("Hadamard test needs at least one shot");
  const EchoCircuit echo = build_echo_circuit(psi.width(), clock, level_i, level_j, part);

  // Append the ancilla in |0⟩ as the least significant bit.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.dim() * 2));
  for (std::uint64_t k = 0; k < psi.dim(); ++k) amps[static_cast<Eigen::Index>(2 * k)] = psi[k];
  StateVector full(psi.width() + 1, std::move(amps));
  full = apply(echo.gates, {}, std::move(full));

  std::vector<std::size_t> measured{echo.ancilla};
  const std::size_t first_clock = psi.width() - clock.n_aux;
  for (std::size_t a = 0; a < clock.n_aux; ++a) measured.push_back(first_clock + a);
  const auto counts = sample(full, measured, shots, seed);

  const std::uint64_t code = encode(level_i, clock);
  const std::uint64_t ancilla_bit = std::uint64_t{1} << clock.n_aux;
  EchoEstimate est;
  est.shots = shots;
  if (auto it = counts.find(code); it != counts.end()) est.n0 = it->second;
  if (auto it = counts.find(ancilla_bit | code); it != counts.end()) est.n1 = it->second;
  const std::uint64_t accepted = est.n0 + est.n1;
  if (accepted == 0) throw std::domain_error("no shot survived clock post-selection");

  const double n = static_cast<double>(shots);
  const double scale = static_cast<double>(clock.levels());
  const double d = static_cast<double>(est.n0) - static_cast<double>(est.n1);
  est.weighted = scale * d / n;
  // Per-shot variable is ±scale on accepted shots and 0 otherwise.
  const double second = scale * scale * static_cast<double>(accepted) / n;
  est.weighted_stderr = std::sqrt(std::max(0.0, second - est.weighted * est.weighted) / n);
  est.conditional = d / static_cast<double>(accepted);
  est.conditional_stderr =
      std::sqrt(std::max(0.0, 1.0 - est.conditional * est.conditional) / static_cast<double>(accepted));
  return est;
}

EchoEstimate loschmidt_hadamard(const Circuit& base, std::span<const double> theta,
                                const ClockSpec& clock, std::size_t level_i, std::size_t level_j,
                                EchoPart part, std::uint64_t shots, std::uint64_t seed) {
  return loschmidt_hadamard(apply(base, theta, StateVector(base.width())), clock, level_i, level_j, part,
                            shots, seed);
}

double rate_function(double loschmidt, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("rate function needs positive degrees of freedom");
  if (!(loschmidt > 0.0)) {
    std::clog << "warning: Loschmidt echo " << loschmidt << " <= 0, rate function is +inf\n";
    return std::numeric_limits<double>::infinity();
  }
  return 0.0 - std::log(loschmidt) / dof;
}

}  // namespace fkclock
