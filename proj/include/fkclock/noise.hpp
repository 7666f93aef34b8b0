#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fkclock/ansatz.hpp"
#include "fkclock/fk_hamiltonian.hpp"
#include "fkclock/sim.hpp"

namespace fkclock {

/// Per-gate-class damping (a) and dephasing (d) probabilities.
struct NoiseParams {
  double p1a = 0.0;
  double p1d = 0.0;
  double p2a = 0.0;
  double p2d = 0.0;

  /// p^a = p^d within each gate class.
  static NoiseParams symmetric(double p1, double p2) { return {p1, p1, p2, p2}; }
  void validate() const;
};

/// Coherence times and gate durations, all in µs.
struct DeviceProfile {
  std::string name;
  double t1 = 0.0;
  double t2 = 0.0;
  double tau1 = 0.0;  // single-qubit gate time
  double tau2 = 0.0;  // two-qubit gate time

  void validate() const;
};

/// "peekskill", "hanoi" or "ionq11"; throws std::invalid_argument otherwise.
DeviceProfile device_preset(std::string_view name);
std::vector<std::string> device_preset_names();

/// T_φ = 2T₁T₂/(2T₁ − T₂); throws std::domain_error when T₂ ≥ 2T₁.
double pure_dephasing_time(double t1, double t2);
/// p^a = 1 − e^{−τ/T₁}, p^d = 1 − e^{−2τ/T_φ} for each gate class.
NoiseParams rates_from_device(const DeviceProfile& d);

std::array<Eigen::Matrix2cd, 2> amplitude_damping_kraus(double p);
std::array<Eigen::Matrix2cd, 2> dephasing_kraus(double p);

/// Amplitude damping with p^a, then dephasing with p^d, on one qubit. Validates ρ first.
DensityMatrix apply_channel(DensityMatrix rho, std::size_t qubit, double pa, double pd);

/**
 * Decomposes every gate to {CNOT, RX, RY, RZ} and, after each, applies the
 * channel pair with the single-qubit rates to its qubit or with the two-qubit
 * rates to both CNOT qubits. Throws std::length_error above the density cap.
 */
DensityMatrix run_noisy(const Circuit& circuit, std::span<const double> theta, const NoiseParams& noise,
                        DensityMatrix initial);
DensityMatrix run_noisy(const Circuit& circuit, std::span<const double> theta, const NoiseParams& noise);

struct DensityBranch {
  DensityMatrix state;  // normalized conditional physical state
  double probability = 0.0;
};

/// P_t ρ P_t / Tr restricted to the physical register; throws std::domain_error on an empty branch.
DensityBranch project_clock(const DensityMatrix& rho, std::size_t level, const ClockSpec& clock);

/// `n` logarithmically spaced values covering [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

struct SweepRow {
  double p2 = 0.0;
  double f_vfk_mean = 0.0;
  double f_vfk_std = 0.0;
  double f_ts_mean = 0.0;
  double f_ts_std = 0.0;
  double ratio = 0.0;
};

/// Per-level fidelities of one noise point.
struct NoisePoint {
  std::vector<double> vfk;
  std::vector<double> trotter;
};

/// Uhlmann fidelity of the noisy VFK branch and the noisy Trotter state against the ideal reference, per level.
NoisePoint noisy_fidelities(const FkConfig& cfg, const AnsatzSpec& ansatz, std::span<const double> theta,
                            const NoiseParams& noise);

/// One row per p₂ with p₁ fixed; mean and population standard deviation over levels.
std::vector<SweepRow> noise_sweep(const FkConfig& cfg, const AnsatzSpec& ansatz, std::span<const double> theta,
                                  double p1, std::span<const double> p2_grid);

}  // namespace fkclock
