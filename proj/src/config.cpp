#include "fkclock/config.hpp"

#include <cmath>
#include <stdexcept>

namespace fkclock {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw std::invalid_argument("invalid config field '" + field + "': " + why);
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) bad_field("lr", "learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) bad_field("beta1", "must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) bad_field("beta2", "must lie in [0, 1)");
  if (!(epsilon > 0.0)) bad_field("adam-eps", "must be positive");
  if (!(convergence_ratio > 0.0 && convergence_ratio < 1.0)) bad_field("ratio", "must lie in (0, 1)");
  if (!(stage_grad_tol >= 0.0)) bad_field("stage-grad-tol", "must be non-negative");
  if (!(jitter >= 0.0)) bad_field("jitter", "must be non-negative");
}

std::string to_string(AnnealMapping m) { return m == AnnealMapping::Linear ? "linear" : "root"; }

AnnealMapping anneal_mapping_from_string(std::string_view s) {
  if (s == "linear") return AnnealMapping::Linear;
  if (s == "root") return AnnealMapping::Root;
  throw std::invalid_argument("unknown anneal mapping '" + std::string(s) + "'");
}

double AnnealSchedule::stage_dt(double target_dt, std::size_t stage) const {
  if (stage >= stages) throw std::out_of_range("annealing stage out of range");
  if (stage + 1 == stages) return target_dt;
  const auto k0 = static_cast<double>(stages);
  const auto s = static_cast<double>(stage);
  return mapping == AnnealMapping::Linear ? target_dt * (s + 1.0) / k0 : target_dt / (k0 - s);
}

void AnnealSchedule::validate() const {
  if (stages < 1) bad_field("stages", "need at least one annealing stage");
}

std::uint64_t parse_bitstring(const std::string& bits, std::size_t width) {
  if (bits.empty()) return 0;
  if (bits.size() != width) bad_field("initial", "bit-string length must equal n_s");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') bad_field("initial", "bit-string may contain only 0 and 1");
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

std::uint64_t ExperimentConfig::initial_state() const { return parse_bitstring(initial, n_spins); }

FkConfig ExperimentConfig::fk_config() const {
  FkConfig c;
  c.tfim = tfim();
  c.clock = clock();
  c.dt = dt();
  c.form = form;
  c.initial_state = initial_state();
  return c;
}

void ExperimentConfig::validate() const {
  if (n_spins < 2) bad_field("ns", "need at least 2 spins");
  if (n_spins > 20) bad_field("ns", "at most 20 spins are supported");
  if (n_aux < 1) bad_field("na", "need at least 1 clock qubit");
  if (n_spins + n_aux > 26) bad_field("na", "register wider than 26 qubits");
  if (!std::isfinite(coupling)) bad_field("j", "must be finite");
  if (!std::isfinite(field)) bad_field("h", "must be finite");
  if (!(total_time >= 0.0) || !std::isfinite(total_time)) bad_field("te", "must be finite and non-negative");
  if (depth < 1) bad_field("depth", "must be at least 1");
  if (!(p1 >= 0.0 && p1 < 1.0)) bad_field("p1", "must lie in [0, 1)");
  if (p2 && !(*p2 >= 0.0 && *p2 < 1.0)) bad_field("p2", "must lie in [0, 1)");
  if (threads < 1) bad_field("threads", "must be at least 1");
  (void)initial_state();
  optimizer.validate();
  anneal.validate();
}

}  // namespace fkclock
