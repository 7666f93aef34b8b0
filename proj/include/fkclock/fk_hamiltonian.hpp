#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fkclock/clock.hpp"
#include "fkclock/pauli.hpp"
#include "fkclock/sim.hpp"

namespace fkclock {

/// Open transverse-field Ising chain H = J Σ Z_i Z_{i+1} + h Σ X_i.
struct TfimParams {
  std::size_t n_spins = 2;
  double coupling = 0.25;  // J
  double field = 1.0;      // h

  void validate() const;
};

PauliSum tfim_x_part(const TfimParams& p);   // Σ X_i
PauliSum tfim_zz_part(const TfimParams& p);  // Σ Z_i Z_{i+1}
PauliSum tfim_hamiltonian(const TfimParams& p);

enum class SplitForm { SingleStep, Alternating };

std::string to_string(SplitForm f);
SplitForm split_form_from_string(std::string_view s);

/// Physical unitary attached to a hop: U_X(dt), U_ZZ(dt) or the first-order step U_ZZ·U_X.
enum class StepKind { X, ZZ, Full };

/**
 * Matrix-free physical propagator for one hop. U_X is a product of
 * RX(2h·dt) rotations, U_ZZ a diagonal phase exp(−iJ·dt Σ z_i z_{i+1}).
 */
class PhysicalStep {
 public:
  PhysicalStep(StepKind kind, const TfimParams& params, double dt);

  StepKind kind() const { return kind_; }
  void apply(StateVector& phys, bool adjoint = false) const;
  /// Gate-level realisation with RX and RZZ (U_X layer first).
  std::vector<Gate> gates() const;
  /// Pauli expansion of the unitary (2^n_s terms per commuting layer).
  PauliSum expansion() const;

 private:
  void apply_x(StateVector& phys, bool adjoint) const;
  void apply_zz(StateVector& phys, bool adjoint) const;

  StepKind kind_;
  TfimParams params_;
  double dt_;
  Eigen::Matrix2cd rx_;
  std::vector<cplx> zz_phase_;
};

struct FkConfig {
  TfimParams tfim;
  ClockSpec clock;
  double dt = 0.0;
  SplitForm form = SplitForm::Alternating;
  std::uint64_t initial_state = 0;  // computational-basis index of |ψ(0)⟩ over the spins

  std::size_t n_spins() const { return tfim.n_spins; }
  std::size_t n_aux() const { return clock.n_aux; }
  std::size_t width() const { return tfim.n_spins + clock.n_aux; }
  std::size_t levels() const { return clock.levels(); }

  /// Physical unitary carried by the hop leaving `level`.
  StepKind hop_kind(std::size_t level) const;
  /// Physical time represented by a clock level.
  double level_time(std::size_t level) const;
  void validate() const;
};

/// dt = T_e / 2^{n_a − 1}
double default_dt(double total_time, std::size_t n_aux);

enum class EnergyBackend { MatrixFree, PauliExpansion };

/**
 * Feynman-Kitaev clock Hamiltonian C = C₀ + ½(C₁ − C₂).
 *
 * The matrix-free path masks clock branches for C₀ and C₁ and applies the hop
 * propagators branch by branch for C₂. The Pauli expansion is built lazily and
 * only used as a small-width oracle and for string counting.
 */
class FkHamiltonian {
 public:
  explicit FkHamiltonian(FkConfig config);

  const FkConfig& config() const { return cfg_; }
  std::size_t width() const { return cfg_.width(); }

  StateVector apply(const StateVector& psi) const;
  StateVector apply_c0(const StateVector& psi) const;
  StateVector apply_c1(const StateVector& psi) const;
  StateVector apply_c2(const StateVector& psi) const;

  double energy(const StateVector& psi, EnergyBackend backend = EnergyBackend::MatrixFree) const;

  /// Full Pauli expansion of C; throws std::length_error above the dense width cap.
  const PauliSum& expanded() const;
  /// Dense matrix assembled column by column from the matrix-free path.
  Eigen::MatrixXcd dense() const;

 private:
  enum class Part { C0, C1, C2 };
  void accumulate(Part part, double weight, const StateVector& psi, Eigen::VectorXcd& out) const;
  StateVector branch(const StateVector& psi, std::uint64_t code) const;

  FkConfig cfg_;
  std::vector<PhysicalStep> steps_;  // one per hop
  struct ExpansionCache {
    std::once_flag once;
    std::optional<PauliSum> value;
  };
  std::shared_ptr<ExpansionCache> cache_ = std::make_shared<ExpansionCache>();
};

/// [I − |ψ(0)⟩⟨ψ(0)|] ⊗ |0⟩⟨0|_clock
PauliSum build_c0(std::uint64_t initial_state, std::size_t n_spins, const ClockSpec& clock);
/// Σ_i I ⊗ (|i⟩⟨i| + |i+1⟩⟨i+1|)
PauliSum build_c1(std::size_t n_spins, const ClockSpec& clock);
/// Σ_i U_i ⊗ |i+1⟩⟨i| + h.c.
PauliSum build_c2(const FkConfig& cfg);

/// (1/√L) Σ_i |ψ_i⟩|i⟩ with |ψ_{i+1}⟩ = U_{hop i}|ψ_i⟩.
StateVector history_state(const FkConfig& cfg);

/// E₁ = 1 − cos(π / 2^{n_a})
double gap_formula(std::size_t n_aux);

struct StringCountReport {
  std::size_t clock_strings_c2 = 0;         // union over hop and hop† expansions
  std::size_t clock_strings_c2_merged = 0;  // clock parts surviving in the merged C₂
  std::size_t c2_terms = 0;
  std::size_t c2_groups = 0;
  std::size_t c01_terms = 0;
  std::size_t c01_groups = 0;
  std::size_t total_terms = 0;
  std::size_t total_groups = 0;
};

StringCountReport count_strings(const FkHamiltonian& h);

}  // namespace fkclock
