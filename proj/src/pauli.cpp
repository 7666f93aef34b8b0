#include "fkclock/pauli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace fkclock {

namespace {

constexpr cplx kI{0.0, 1.0};

// Single-qubit products a·b = phase·c, indexed [a][b].
struct SingleProduct {
  cplx phase;
  Pauli result;
};

constexpr std::array<std::array<SingleProduct, 4>, 4> kTable = {{
    {{{1.0, Pauli::I}, {1.0, Pauli::X}, {1.0, Pauli::Y}, {1.0, Pauli::Z}}},
    {{{1.0, Pauli::X}, {1.0, Pauli::I}, {kI, Pauli::Z}, {-kI, Pauli::Y}}},
    {{{1.0, Pauli::Y}, {-kI, Pauli::Z}, {1.0, Pauli::I}, {kI, Pauli::X}}},
    {{{1.0, Pauli::Z}, {kI, Pauli::Y}, {-kI, Pauli::X}, {1.0, Pauli::I}}},
}};

std::uint64_t bit_for(std::size_t qubit, std::size_t width) {
  return std::uint64_t{1} << (width - 1 - qubit);
}

}  // namespace

char to_char(Pauli p) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("invalid Pauli label '") + c + "'");
  }
}

PauliString::PauliString(std::size_t width) : labels_(width, Pauli::I) {}

PauliString::PauliString(std::string_view labels) {
  labels_.reserve(labels.size());
  for (char c : labels) labels_.push_back(pauli_from_char(c));
}

PauliString::PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {}

PauliString PauliString::with(std::size_t qubit, Pauli p) const {
  if (qubit >= width()) throw std::out_of_range("qubit index outside Pauli string");
  PauliString out = *this;
  out.labels_[qubit] = p;
  return out;
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(labels_.size());
  for (Pauli p : labels_) s.push_back(to_char(p));
  return s;
}

bool PauliString::is_identity() const {
  for (Pauli p : labels_) {
    if (p != Pauli::I) return false;
  }
  return true;
}

bool PauliString::is_diagonal() const {
  for (Pauli p : labels_) {
    if (p == Pauli::X || p == Pauli::Y) return false;
  }
  return true;
}

std::size_t PauliString::y_count() const {
  std::size_t n = 0;
  for (Pauli p : labels_) n += (p == Pauli::Y);
  return n;
}

std::size_t PauliString::weight() const {
  std::size_t n = 0;
  for (Pauli p : labels_) n += (p != Pauli::I);
  return n;
}

std::uint64_t PauliString::x_mask() const {
  if (width() > 63) throw std::length_error("Pauli string too wide for bit masks");
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < width(); ++q) {
    if (labels_[q] == Pauli::X || labels_[q] == Pauli::Y) m |= bit_for(q, width());
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  if (width() > 63) throw std::length_error("Pauli string too wide for bit masks");
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < width(); ++q) {
    if (labels_[q] == Pauli::Z || labels_[q] == Pauli::Y) m |= bit_for(q, width());
  }
  return m;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (width() != other.width()) throw std::invalid_argument("Pauli string width mismatch");
  std::size_t anti = 0;
  for (std::size_t q = 0; q < width(); ++q) {
    Pauli a = labels_[q], b = other.labels_[q];
    anti += (a != Pauli::I && b != Pauli::I && a != b);
  }
  return anti % 2 == 0;
}

PauliString tensor(const PauliString& a, const PauliString& b) {
  std::vector<Pauli> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return PauliString(std::move(labels));
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.width() != b.width()) throw std::invalid_argument("Pauli string width mismatch");
  std::vector<Pauli> labels(a.width());
  cplx phase = 1.0;
  for (std::size_t q = 0; q < a.width(); ++q) {
    const auto& e = kTable[static_cast<int>(a[q])][static_cast<int>(b[q])];
    phase *= e.phase;
    labels[q] = e.result;
  }
  return {phase, PauliString(std::move(labels))};
}

// --- PauliSum -------------------------------------------------------------

PauliSum::PauliSum(std::size_t width, double prune) : width_(width), prune_(prune) {}

PauliSum::PauliSum(std::size_t width,
                   std::initializer_list<std::pair<std::string_view, cplx>> terms, double prune)
    : width_(width), prune_(prune) {
  for (const auto& [labels, c] : terms) {
    PauliString s(labels);
    if (s.width() != width_) throw std::invalid_argument("term width does not match sum width");
    add_term(s, c);
  }
}

PauliSum PauliSum::identity(std::size_t width, cplx coeff) {
  PauliSum s(width);
  s.add_term(PauliString(width), coeff);
  return s;
}

cplx PauliSum::coefficient(const PauliString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? cplx{} : it->second;
}

void PauliSum::add_term(const PauliString& s, cplx coeff) {
  if (s.width() != width_) throw std::invalid_argument("term width does not match sum width");
  auto [it, inserted] = terms_.try_emplace(s, coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) < prune_) terms_.erase(it);
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(width_, prune_);
  for (const auto& [s, c] : terms_) out.terms_.emplace(s, std::conj(c));
  return out;
}

PauliSum PauliSum::scaled(cplx factor) const {
  PauliSum out(width_, prune_);
  for (const auto& [s, c] : terms_) out.add_term(s, c * factor);
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  // Every Pauli string is itself Hermitian, so the sum is Hermitian iff all
  // coefficients are real.
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

void PauliSum::check_width(const PauliSum& other) const {
  if (other.width_ != width_) throw std::invalid_argument("PauliSum width mismatch");
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  check_width(other);
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  check_width(other);
  for (const auto& [s, c] : other.terms_) add_term(s, -c);
  return *this;
}

std::string PauliSum::to_text() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& [s, c] : terms_) os << c.real() + 0.0 << ' ' << c.imag() + 0.0 << ' ' << s.str() << '\n';
  return os.str();
}

PauliSum PauliSum::from_text(std::string_view text, double prune) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::optional<PauliSum> out;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    std::string labels;
    if (!(ls >> re >> im >> labels)) {
      throw std::invalid_argument("malformed Pauli term on line " + std::to_string(line_no));
    }
    PauliString s(labels);
    if (!out) out.emplace(s.width(), prune);
    out->add_term(s, {re, im});
  }
  if (!out) throw std::invalid_argument("empty Pauli sum text");
  return *out;
}

PauliSum add(const PauliSum& a, const PauliSum& b) {
  PauliSum out = a;
  out += b;
  return out;
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) { return add(a, b); }

PauliSum operator-(const PauliSum& a, const PauliSum& b) {
  PauliSum out = a;
  out -= b;
  return out;
}

PauliSum operator*(cplx factor, const PauliSum& s) { return s.scaled(factor); }

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.width() != b.width()) throw std::invalid_argument("PauliSum width mismatch");
  PauliSum out(a.width(), a.prune_threshold());
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      auto [phase, sc] = multiply(sa, sb);
      out.add_term(sc, phase * ca * cb);
    }
  }
  return out;
}

PauliSum tensor(const PauliSum& a, const PauliSum& b) {
  PauliSum out(a.width() + b.width(), std::min(a.prune_threshold(), b.prune_threshold()));
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) out.add_term(tensor(sa, sb), ca * cb);
  }
  return out;
}

CompiledPauli::CompiledPauli(const PauliString& s, cplx weight)
    : x_mask(s.x_mask()), z_mask(s.z_mask()), coeff(weight) {
  static constexpr std::array<cplx, 4> kIPow = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
  coeff *= kIPow[s.y_count() % 4];
}

Eigen::MatrixXcd to_dense(const PauliString& s) {
  PauliSum sum(s.width());
  sum.add_term(s, 1.0);
  return to_dense(sum, s.width());
}

Eigen::MatrixXcd to_dense(const PauliSum& s, std::size_t width_cap) {
  if (s.width() > width_cap) {
    throw std::length_error("dense rendering width " + std::to_string(s.width()) +
                            " exceeds cap " + std::to_string(width_cap));
  }
  const std::uint64_t dim = std::uint64_t{1} << s.width();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [str, c] : s.terms()) {
    CompiledPauli p(str, c);
    for (std::uint64_t col = 0; col < dim; ++col) m(col ^ p.x_mask, col) += p.phase(col);
  }
  return m;
}

std::vector<std::vector<PauliString>> group_commuting(const PauliSum& s) {
  std::vector<std::vector<PauliString>> groups;
  for (const auto& [str, c] : s.terms()) {
    bool placed = false;
    for (auto& g : groups) {
      bool fits = true;
      for (const auto& member : g) {
        if (!member.commutes_with(str)) {
          fits = false;
          break;
        }
      }
      if (fits) {
        g.push_back(str);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({str});
  }
  return groups;
}

}  // namespace fkclock
