#include "fkclock/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>
#include <string>

namespace fkclock {

namespace {

void check_level(std::size_t level, const FkConfig& cfg) {
  if (level >= cfg.levels()) {
    throw std::out_of_range("level " + std::to_string(level) + " beyond the top clock level " +
                            std::to_string(cfg.levels() - 1));
  }
}

}  // namespace

TrotterCircuit trotter_circuit(std::size_t level, const FkConfig& cfg) {
  cfg.validate();
  check_level(level, cfg);
  const std::size_t ns = cfg.n_spins();
  TrotterCircuit tc{Circuit(ns), level, cfg.dt, cfg.form};
  for (std::size_t q = 0; q < ns; ++q) {
    if (cfg.initial_state & (std::uint64_t{1} << (ns - 1 - q))) tc.circuit.add(Gate::fixed(GateKind::X, q));
  }
  for (std::size_t i = 0; i < level; ++i) tc.circuit.append(PhysicalStep(cfg.hop_kind(i), cfg.tfim, cfg.dt).gates());
  return tc;
}

StateVector reference_state(std::size_t level, const FkConfig& cfg) {
  cfg.validate();
  check_level(level, cfg);
  StateVector psi = StateVector::basis(cfg.n_spins(), cfg.initial_state);
  for (std::size_t i = 0; i < level; ++i) PhysicalStep(cfg.hop_kind(i), cfg.tfim, cfg.dt).apply(psi);
  return psi;
}

std::vector<StateVector> reference_states(const FkConfig& cfg) {
  cfg.validate();
  std::vector<StateVector> out;
  out.push_back(StateVector::basis(cfg.n_spins(), cfg.initial_state));
  for (std::size_t i = 0; i + 1 < cfg.levels(); ++i) {
    StateVector next = out.back();
    PhysicalStep(cfg.hop_kind(i), cfg.tfim, cfg.dt).apply(next);
    out.push_back(std::move(next));
  }
  return out;
}

std::size_t zz_layers(const FkConfig& cfg) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < cfg.clock.hops(); ++i) n += cfg.hop_kind(i) != StepKind::X;
  return n;
}

std::size_t cx_count(CxKind kind, const FkConfig& cfg, std::size_t depth) {
  if (kind == CxKind::Trotter) return 2 * (cfg.n_spins() - 1) * zz_layers(cfg);
  return AnsatzSpec{cfg.n_spins(), cfg.n_aux(), depth}.num_cnots();
}

std::size_t tally_cnots(const Circuit& c) { return decompose_fundamental(c).count(GateKind::CNOT); }

std::vector<std::optional<double>> infidelity_profile(const StateVector& psi, const FkConfig& cfg) {
  if (psi.width() != cfg.width()) throw std::invalid_argument("state width does not match the configuration");
  const auto refs = reference_states(cfg);
  std::vector<std::optional<double>> out;
  for (std::size_t i = 0; i < cfg.levels(); ++i) {
    StateVector b = clock_branch(psi, i, cfg.clock);
    if (b.amplitudes().squaredNorm() < kMinBranchProbability) {
      out.emplace_back();
      continue;
    }
    b.normalize();
    out.emplace_back(1.0 - std::norm(overlap(refs[i], b)));
  }
  return out;
}

std::vector<std::optional<double>> infidelity_profile(const AnsatzSpec& ansatz,
                                                      std::span<const double> theta,
                                                      const FkConfig& cfg) {
  const Circuit c = build_vfk_circuit(ansatz, cfg.initial_state);
  return infidelity_profile(apply(c, theta, StateVector(c.width())), cfg);
}

double mean_integrated_infidelity(std::span<const double> profile, double total_time) {
  if (profile.size() < 2) throw std::invalid_argument("mean integrated infidelity needs at least 2 levels");
  if (!(total_time > 0.0)) throw std::invalid_argument("total time must be positive");
  const double h = total_time / static_cast<double>(profile.size() - 1);
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < profile.size(); ++k) area += 0.5 * h * (profile[k] + profile[k + 1]);
  return area / total_time;
}

double mean_integrated_infidelity(std::span<const std::optional<double>> profile, double total_time) {
  std::vector<double> values;
  for (const auto& v : profile) {
    if (!v) throw std::domain_error("infidelity profile has an undefined level");
    values.push_back(*v);
  }
  return mean_integrated_infidelity(values, total_time);
}

ExactEvolver::ExactEvolver(const TfimParams& params) : n_spins_(params.n_spins) {
  params.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense(tfim_hamiltonian(params)));
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

StateVector ExactEvolver::evolve(const StateVector& psi0, double t) const {
  if (psi0.width() != n_spins_) throw std::invalid_argument("state width does not match the chain");
  Eigen::VectorXcd c = evecs_.adjoint() * psi0.amplitudes();
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -evals_[k] * t);
  return StateVector(n_spins_, evecs_ * c);
}

std::vector<EchoPoint> exact_echo_series(const TfimParams& params, std::uint64_t initial_state,
                                         double total_time, std::size_t points) {
  if (points < 2) throw std::invalid_argument("echo series needs at least 2 points");
  const ExactEvolver ev(params);
  const StateVector psi0 = StateVector::basis(params.n_spins, initial_state);
  std::vector<EchoPoint> out;
  for (std::size_t k = 0; k < points; ++k) {
    const double t = total_time * static_cast<double>(k) / static_cast<double>(points - 1);
    const double l = std::norm(overlap(psi0, ev.evolve(psi0, t)));
    out.push_back({t, l, rate_function(l, static_cast<double>(params.n_spins))});
  }
  return out;
}

}  // namespace fkclock
