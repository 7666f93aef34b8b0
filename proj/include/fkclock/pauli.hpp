#pragma once

#include <Eigen/Dense>

#include <bit>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fkclock {

using cplx = std::complex<double>;

inline constexpr double kDefaultPrune = 1e-14;
inline constexpr std::size_t kDenseWidthCap = 14;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/**
 * Tensor product of single-qubit Pauli labels, one per qubit.
 *
 * Qubit 0 is the leftmost label and the most significant bit of a basis
 * index, so the dense rendering is kron(P_0, P_1, ..., P_{w-1}). Registers
 * are laid out as [physical | clock].
 */
class PauliString {
 public:
  PauliString() = default;
  /// Identity string of the given width.
  explicit PauliString(std::size_t width);
  /// Parses a label string such as "IZX".
  explicit PauliString(std::string_view labels);
  explicit PauliString(std::vector<Pauli> labels);

  std::size_t width() const { return labels_.size(); }
  Pauli operator[](std::size_t qubit) const { return labels_[qubit]; }
  const std::vector<Pauli>& labels() const { return labels_; }

  /// Copy with one label replaced.
  PauliString with(std::size_t qubit, Pauli p) const;

  std::string str() const;
  bool is_identity() const;
  bool is_diagonal() const;
  std::size_t y_count() const;
  std::size_t weight() const;

  /// Bit masks over basis-index bits: X/Y positions flip, Y/Z positions phase.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  bool commutes_with(const PauliString& other) const;

  auto operator<=>(const PauliString&) const = default;
  bool operator==(const PauliString&) const = default;

 private:
  std::vector<Pauli> labels_;
};

/// Kronecker product a ⊗ b (a occupies the leading qubits).
PauliString tensor(const PauliString& a, const PauliString& b);

struct PauliProduct {
  cplx phase;
  PauliString string;
};

/// Operator product a·b = phase·string with phase in {±1, ±i}.
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// Weighted sum of Pauli strings over a fixed register width.
class PauliSum {
 public:
  using TermMap = std::map<PauliString, cplx>;

  explicit PauliSum(std::size_t width, double prune = kDefaultPrune);
  PauliSum(std::size_t width, std::initializer_list<std::pair<std::string_view, cplx>> terms,
           double prune = kDefaultPrune);

  static PauliSum identity(std::size_t width, cplx coeff = 1.0);

  std::size_t width() const { return width_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  double prune_threshold() const { return prune_; }
  const TermMap& terms() const { return terms_; }
  cplx coefficient(const PauliString& s) const;

  /// Accumulates coeff onto s, dropping the term if it falls under the prune threshold.
  void add_term(const PauliString& s, cplx coeff);
  void add_term(std::string_view labels, cplx coeff) { add_term(PauliString(labels), coeff); }

  PauliSum adjoint() const;
  PauliSum scaled(cplx factor) const;

  /// All coefficients real within tol (each labelled string is Hermitian).
  bool is_hermitian(double tol = 1e-12) const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);

  /// `<re> <im> <labels>` per line, full precision.
  std::string to_text() const;
  static PauliSum from_text(std::string_view text, double prune = kDefaultPrune);

 private:
  void check_width(const PauliSum& other) const;

  std::size_t width_;
  double prune_;
  TermMap terms_;
};

PauliSum add(const PauliSum& a, const PauliSum& b);
PauliSum operator+(const PauliSum& a, const PauliSum& b);
PauliSum operator-(const PauliSum& a, const PauliSum& b);
PauliSum operator*(cplx factor, const PauliSum& s);
/// Operator product of two sums.
PauliSum operator*(const PauliSum& a, const PauliSum& b);
PauliSum tensor(const PauliSum& a, const PauliSum& b);

Eigen::MatrixXcd to_dense(const PauliString& s);
Eigen::MatrixXcd to_dense(const PauliSum& s, std::size_t width_cap = kDenseWidthCap);

/// Greedy first-fit partition of the terms into mutually commuting groups.
std::vector<std::vector<PauliString>> group_commuting(const PauliSum& s);

/// Compact form of a string for repeated application to amplitude arrays.
struct CompiledPauli {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  cplx coeff;  // includes the i^{#Y} factor

  explicit CompiledPauli(const PauliString& s, cplx weight = 1.0);

  /// P|r⟩ = phase(r)·|r ^ x_mask⟩
  cplx phase(std::uint64_t r) const {
    return (std::popcount(r & z_mask) & 1U) ? -coeff : coeff;
  }
};

}  // namespace fkclock
