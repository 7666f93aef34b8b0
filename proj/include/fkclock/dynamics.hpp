#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fkclock/ansatz.hpp"
#include "fkclock/fk_hamiltonian.hpp"
#include "fkclock/observables.hpp"
#include "fkclock/sim.hpp"

namespace fkclock {

/// Physical-register circuit reproducing the first `steps` hops of the clock construction.
struct TrotterCircuit {
  Circuit circuit;
  std::size_t steps = 0;
  double dt = 0.0;
  SplitForm form = SplitForm::Alternating;
};

/// Initial-state preparation followed by the hop unitaries 0 … level−1.
TrotterCircuit trotter_circuit(std::size_t level, const FkConfig& cfg);

/// |ψ_i⟩ on the physical register; throws std::out_of_range past the top level.
StateVector reference_state(std::size_t level, const FkConfig& cfg);
/// All levels at once (shares the propagation).
std::vector<StateVector> reference_states(const FkConfig& cfg);

enum class CxKind { Trotter, Ansatz };

/// Closed-form CX totals: 2(n_s−1) per ZZ layer up to the top level, or d·n_a·(n_s²+n_s)/2.
std::size_t cx_count(CxKind kind, const FkConfig& cfg, std::size_t depth = 1);
/// Number of hops up to the top level that carry a ZZ layer.
std::size_t zz_layers(const FkConfig& cfg);
/// CNOTs after decomposing every gate of `c` to the fundamental set.
std::size_t tally_cnots(const Circuit& c);

/// Per-level 1 − |⟨ψ_i|φ_i⟩|² against the normalized clock branch φ_i of Ψ; nullopt
/// where the branch has (near) zero weight.
std::vector<std::optional<double>> infidelity_profile(const StateVector& psi, const FkConfig& cfg);
std::vector<std::optional<double>> infidelity_profile(const AnsatzSpec& ansatz,
                                                      std::span<const double> theta,
                                                      const FkConfig& cfg);

/// Trapezoidal time average of an infidelity series on a uniform grid over [0, total_time].
double mean_integrated_infidelity(std::span<const double> profile, double total_time);
double mean_integrated_infidelity(std::span<const std::optional<double>> profile, double total_time);

/// Exact e^{−iHt} on the physical register via a cached eigendecomposition of the TFIM.
class ExactEvolver {
 public:
  explicit ExactEvolver(const TfimParams& params);
  StateVector evolve(const StateVector& psi0, double t) const;

 private:
  std::size_t n_spins_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
};

struct EchoPoint {
  double time = 0.0;
  double loschmidt = 0.0;  // |⟨ψ(0)|e^{−iHt}|ψ(0)⟩|²
  double rate = 0.0;       // −log(L)/n_s
};

/// Exact quench echo on `points` uniformly spaced times covering [0, total_time].
std::vector<EchoPoint> exact_echo_series(const TfimParams& params, std::uint64_t initial_state,
                                         double total_time, std::size_t points);

}  // namespace fkclock
