#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fkclock/pauli.hpp"

namespace fkclock {

inline constexpr std::size_t kDensityWidthCap = 10;

class StateVector {
 public:
  StateVector() = default;
  /// |0…0⟩ on `width` qubits.
  explicit StateVector(std::size_t width);
  StateVector(std::size_t width, Eigen::VectorXcd amplitudes);

  static StateVector basis(std::size_t width, std::uint64_t index);

  std::size_t width() const { return width_; }
  std::uint64_t dim() const { return std::uint64_t{1} << width_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  cplx operator[](std::uint64_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double norm() const { return amps_.norm(); }
  void normalize();

  /// Bit of basis index owned by `qubit` (qubit 0 is the most significant).
  std::uint64_t bit(std::size_t qubit) const { return std::uint64_t{1} << (width_ - 1 - qubit); }

  void apply_1q(std::size_t qubit, const Eigen::Matrix2cd& u);
  void apply_cnot(std::size_t control, std::size_t target);
  /// exp(−iθ/2 Z⊗Z) on the given pair.
  void apply_rzz(std::size_t a, std::size_t b, double theta);

 private:
  std::size_t width_ = 0;
  Eigen::VectorXcd amps_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(std::size_t width);  // |0…0⟩⟨0…0|
  DensityMatrix(std::size_t width, Eigen::MatrixXcd entries);

  static DensityMatrix from_pure(const StateVector& psi);

  std::size_t width() const { return width_; }
  std::uint64_t dim() const { return std::uint64_t{1} << width_; }
  const Eigen::MatrixXcd& entries() const { return rho_; }

  /// Throws std::domain_error unless Hermitian, unit trace and PSD within tolerances.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-10, double eig_tol = 1e-9) const;

  std::uint64_t bit(std::size_t qubit) const { return std::uint64_t{1} << (width_ - 1 - qubit); }

  /// ρ → UρU†
  void apply_1q(std::size_t qubit, const Eigen::Matrix2cd& u);
  void apply_cnot(std::size_t control, std::size_t target);
  void apply_rzz(std::size_t a, std::size_t b, double theta);
  /// ρ → Σ_k E_k ρ E_k† for single-qubit Kraus operators.
  void apply_kraus(std::size_t qubit, std::span<const Eigen::Matrix2cd> kraus);

 private:
  void left_1q(Eigen::MatrixXcd& m, std::size_t qubit, const Eigen::Matrix2cd& u) const;
  void right_1q_adjoint(Eigen::MatrixXcd& m, std::size_t qubit, const Eigen::Matrix2cd& u) const;

  std::size_t width_ = 0;
  Eigen::MatrixXcd rho_;
};

enum class GateKind { RX, RY, RZ, CNOT, H, X, Sdg, RZZ };

const char* gate_name(GateKind kind);
bool is_two_qubit(GateKind kind);
bool is_rotation(GateKind kind);

/**
 * One circuit element. Rotations use R_P(θ) = exp(−iθP/2); the angle comes
 * from the parameter vector when `param` is set and from `angle` otherwise.
 * For CNOT, qubits = {control, target}.
 */
struct Gate {
  GateKind kind;
  std::array<std::size_t, 2> qubits{0, 0};
  std::optional<std::size_t> param;
  double angle = 0.0;

  static Gate rx(std::size_t q, std::size_t param) { return {GateKind::RX, {q, 0}, param}; }
  static Gate ry(std::size_t q, std::size_t param) { return {GateKind::RY, {q, 0}, param}; }
  static Gate rz(std::size_t q, std::size_t param) { return {GateKind::RZ, {q, 0}, param}; }
  static Gate fixed(GateKind kind, std::size_t q, double angle = 0.0) {
    return {kind, {q, 0}, std::nullopt, angle};
  }
  static Gate cnot(std::size_t control, std::size_t target) {
    return {GateKind::CNOT, {control, target}, std::nullopt};
  }
  static Gate rzz(std::size_t a, std::size_t b, double angle) {
    return {GateKind::RZZ, {a, b}, std::nullopt, angle};
  }

  double resolved_angle(std::span<const double> theta) const;
};

/// 2×2 unitary of a single-qubit gate kind at the given angle.
Eigen::Matrix2cd single_qubit_matrix(GateKind kind, double angle);
/// Dense unitary of one gate embedded in a width-w register.
Eigen::MatrixXcd gate_unitary(const Gate& g, std::size_t width, std::span<const double> theta = {});

/// Ordered gate list over a parameter vector θ (radians).
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t num_parameters() const { return num_params_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  void add(const Gate& g);
  void append(std::span<const Gate> gates);
  void append(const Circuit& other);

  std::size_t count(GateKind kind) const;

  /// Dense unitary; intended for widths small enough to hold 4^w entries.
  Eigen::MatrixXcd unitary(std::span<const double> theta) const;

 private:
  std::size_t width_ = 0;
  std::size_t num_params_ = 0;
  std::vector<Gate> gates_;
};

/**
 * Rewrites a gate over the fundamental set {CNOT, RX, RY, RZ}, equal up to a
 * global phase: RZZ(θ) → CNOT·RZ(θ)·CNOT, H → RZ(π/2)·RX(π/2)·RZ(π/2),
 * X → RX(π), S† → RZ(−π/2). Fundamental gates pass through unchanged.
 */
std::vector<Gate> decompose_fundamental(const Gate& g);
Circuit decompose_fundamental(const Circuit& c);

void apply_gate(const Gate& g, std::span<const double> theta, StateVector& psi);
void apply_gate(const Gate& g, std::span<const double> theta, DensityMatrix& rho);

StateVector apply(const Circuit& c, std::span<const double> theta, StateVector psi);
DensityMatrix apply(const Circuit& c, std::span<const double> theta, DensityMatrix rho);

/// H|ψ⟩ for an arbitrary PauliSum.
StateVector apply(const PauliSum& s, const StateVector& psi);

/// ⟨ψ|s|ψ⟩ for a Hermitian sum; throws std::invalid_argument otherwise.
double expectation(const StateVector& psi, const PauliSum& s);

/// ⟨ψ|φ⟩
cplx overlap(const StateVector& psi, const StateVector& phi);

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Histogram of outcomes on `qubits` (first listed qubit is the most significant
/// outcome bit), drawn from the Born marginal with a seeded mt19937_64 stream.
std::map<std::uint64_t, std::uint64_t> sample(const StateVector& psi,
                                              std::span<const std::size_t> qubits,
                                              std::uint64_t shots, std::uint64_t seed);

/// Marginal probabilities over `qubits`, same outcome ordering as sample().
std::vector<double> marginal_probabilities(const StateVector& psi,
                                           std::span<const std::size_t> qubits);

void write_csv(const StateVector& psi, const std::filesystem::path& path);

}  // namespace fkclock
