#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "fkclock/ansatz.hpp"
#include "fkclock/clock.hpp"
#include "fkclock/fk_hamiltonian.hpp"

namespace fkclock {

struct OptimizerConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_iter = 500;        // ADAM updates per annealing stage
  double convergence_ratio = 1e-2;   // final-stage stop when E/E₁ drops below this
  double stage_grad_tol = 1e-4;      // intermediate-stage stop on gradient norm
  double jitter = 1e-3;              // uniform ±jitter on the initial θ
  bool reset_moments = true;         // fresh ADAM moments at each annealing stage

  void validate() const;
};

enum class AnnealMapping { Linear, Root };

std::string to_string(AnnealMapping m);
AnnealMapping anneal_mapping_from_string(std::string_view s);

/// Sequence of effective time steps ending exactly at the target dt.
struct AnnealSchedule {
  std::size_t stages = 10;  // k₀
  AnnealMapping mapping = AnnealMapping::Linear;

  /// Stage s ∈ [0, stages): Linear gives dt·(s+1)/k₀, Root gives dt/(k₀ − s).
  double stage_dt(double target_dt, std::size_t stage) const;
  void validate() const;
};

/// Everything needed to reproduce a run.
struct ExperimentConfig {
  std::size_t n_spins = 2;
  std::size_t n_aux = 2;
  double coupling = 0.25;
  double field = 1.0;
  double total_time = 3.0;
  Encoding encoding = Encoding::Gray;
  SplitForm form = SplitForm::Alternating;
  std::size_t depth = 1;
  std::string initial;  // physical bit-string; empty means all zeros

  OptimizerConfig optimizer;
  AnnealSchedule anneal;

  double p1 = 2e-4;
  std::optional<double> p2;
  std::string device;

  std::uint64_t seed = 0;
  std::size_t threads = 1;

  /// T_e / 2^{n_a − 1}; never set directly.
  double dt() const { return default_dt(total_time, n_aux); }
  std::uint64_t initial_state() const;
  TfimParams tfim() const { return {n_spins, coupling, field}; }
  ClockSpec clock() const { return {n_aux, encoding}; }
  FkConfig fk_config() const;
  AnsatzSpec ansatz() const { return {n_spins, n_aux, depth}; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Parses a physical bit-string ("0110", qubit 0 first) into a basis index.
std::uint64_t parse_bitstring(const std::string& bits, std::size_t width);

}  // namespace fkclock
