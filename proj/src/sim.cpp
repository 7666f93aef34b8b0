#include "fkclock/sim.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace fkclock {

namespace {

void check_qubit(std::size_t q, std::size_t width) {
  if (q >= width) {
    throw std::out_of_range("qubit " + std::to_string(q) + " outside register of width " +
                            std::to_string(width));
  }
}

void check_pair(std::size_t a, std::size_t b, std::size_t width) {
  check_qubit(a, width);
  check_qubit(b, width);
  if (a == b) throw std::invalid_argument("two-qubit gate on a single qubit");
}

// Parity of z_a z_b for basis index r: +1 when the two bits agree.
double zz_sign(std::uint64_t r, std::uint64_t ba, std::uint64_t bb) {
  return (((r & ba) != 0) == ((r & bb) != 0)) ? 1.0 : -1.0;
}

}  // namespace

// --- StateVector -----------------------------------------------------------

StateVector::StateVector(std::size_t width)
    : width_(width), amps_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim()))) {
  amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t width, Eigen::VectorXcd amplitudes)
    : width_(width), amps_(std::move(amplitudes)) {
  if (static_cast<std::uint64_t>(amps_.size()) != dim()) {
    throw std::invalid_argument("amplitude count does not match 2^width");
  }
}

StateVector StateVector::basis(std::size_t width, std::uint64_t index) {
  StateVector s(width);
  if (index >= s.dim()) throw std::out_of_range("basis index outside register");
  s.amps_[0] = 0.0;
  s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  amps_ /= n;
}

void StateVector::apply_1q(std::size_t qubit, const Eigen::Matrix2cd& u) {
  check_qubit(qubit, width_);
  const std::uint64_t b = bit(qubit);
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  cplx* a = amps_.data();
  for (std::uint64_t i = 0; i < dim(); ++i) {
    if (i & b) continue;
    const cplx a0 = a[i], a1 = a[i | b];
    a[i] = u00 * a0 + u01 * a1;
    a[i | b] = u10 * a0 + u11 * a1;
  }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
  check_pair(control, target, width_);
  const std::uint64_t bc = bit(control), bt = bit(target);
  cplx* a = amps_.data();
  for (std::uint64_t i = 0; i < dim(); ++i) {
    if ((i & bc) && !(i & bt)) std::swap(a[i], a[i | bt]);
  }
}

void StateVector::apply_rzz(std::size_t qa, std::size_t qb, double theta) {
  check_pair(qa, qb, width_);
  const std::uint64_t ba = bit(qa), bb = bit(qb);
  const cplx same = std::polar(1.0, -theta / 2), diff = std::polar(1.0, theta / 2);
  cplx* a = amps_.data();
  for (std::uint64_t i = 0; i < dim(); ++i) a[i] *= zz_sign(i, ba, bb) > 0 ? same : diff;
}

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(std::size_t width) : width_(width) {
  if (width > kDensityWidthCap) {
    throw std::length_error("density matrix width " + std::to_string(width) + " exceeds cap " +
                            std::to_string(kDensityWidthCap));
  }
  const auto d = static_cast<Eigen::Index>(dim());
  rho_ = Eigen::MatrixXcd::Zero(d, d);
  rho_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(std::size_t width, Eigen::MatrixXcd entries)
    : width_(width), rho_(std::move(entries)) {
  if (width > kDensityWidthCap) throw std::length_error("density matrix width exceeds cap");
  if (static_cast<std::uint64_t>(rho_.rows()) != dim() || rho_.rows() != rho_.cols()) {
    throw std::invalid_argument("density matrix shape does not match 2^width");
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return DensityMatrix(psi.width(), psi.amplitudes() * psi.amplitudes().adjoint());
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) {
    throw std::domain_error("density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace() - cplx{1.0}) > trace_tol) {
    throw std::domain_error("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -eig_tol) {
    throw std::domain_error("density matrix has a negative eigenvalue");
  }
}

void DensityMatrix::left_1q(Eigen::MatrixXcd& m, std::size_t qubit,
                            const Eigen::Matrix2cd& u) const {
  const std::uint64_t b = bit(qubit);
  const auto d = m.cols();
  for (std::uint64_t r = 0; r < dim(); ++r) {
    if (r & b) continue;
    const auto r0 = static_cast<Eigen::Index>(r), r1 = static_cast<Eigen::Index>(r | b);
    for (Eigen::Index c = 0; c < d; ++c) {
      const cplx a0 = m(r0, c), a1 = m(r1, c);
      m(r0, c) = u(0, 0) * a0 + u(0, 1) * a1;
      m(r1, c) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

void DensityMatrix::right_1q_adjoint(Eigen::MatrixXcd& m, std::size_t qubit,
                                     const Eigen::Matrix2cd& u) const {
  // (m U†)_{r,c} = Σ_k m_{r,k} conj(U_{c,k})
  const std::uint64_t b = bit(qubit);
  const auto d = m.rows();
  const cplx c00 = std::conj(u(0, 0)), c01 = std::conj(u(0, 1));
  const cplx c10 = std::conj(u(1, 0)), c11 = std::conj(u(1, 1));
  for (std::uint64_t c = 0; c < dim(); ++c) {
    if (c & b) continue;
    const auto k0 = static_cast<Eigen::Index>(c), k1 = static_cast<Eigen::Index>(c | b);
    for (Eigen::Index r = 0; r < d; ++r) {
      const cplx a0 = m(r, k0), a1 = m(r, k1);
      m(r, k0) = a0 * c00 + a1 * c01;
      m(r, k1) = a0 * c10 + a1 * c11;
    }
  }
}

void DensityMatrix::apply_1q(std::size_t qubit, const Eigen::Matrix2cd& u) {
  check_qubit(qubit, width_);
  left_1q(rho_, qubit, u);
  right_1q_adjoint(rho_, qubit, u);
}

void DensityMatrix::apply_cnot(std::size_t control, std::size_t target) {
  check_pair(control, target, width_);
  const std::uint64_t bc = bit(control), bt = bit(target);
  auto flip = [&](std::uint64_t i) { return (i & bc) ? (i ^ bt) : i; };
  Eigen::MatrixXcd out(rho_.rows(), rho_.cols());
  for (std::uint64_t r = 0; r < dim(); ++r) {
    for (std::uint64_t c = 0; c < dim(); ++c) {
      out(static_cast<Eigen::Index>(flip(r)), static_cast<Eigen::Index>(flip(c))) =
          rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  rho_ = std::move(out);
}

void DensityMatrix::apply_rzz(std::size_t qa, std::size_t qb, double theta) {
  check_pair(qa, qb, width_);
  const std::uint64_t ba = bit(qa), bb = bit(qb);
  std::vector<cplx> phase(dim());
  for (std::uint64_t i = 0; i < dim(); ++i) phase[i] = std::polar(1.0, -theta / 2 * zz_sign(i, ba, bb));
  for (std::uint64_t r = 0; r < dim(); ++r) {
    for (std::uint64_t c = 0; c < dim(); ++c) {
      rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *=
          phase[r] * std::conj(phase[c]);
    }
  }
}

void DensityMatrix::apply_kraus(std::size_t qubit, std::span<const Eigen::Matrix2cd> kraus) {
  check_qubit(qubit, width_);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho_.rows(), rho_.cols());
  for (const auto& e : kraus) {
    Eigen::MatrixXcd term = rho_;
    left_1q(term, qubit, e);
    right_1q_adjoint(term, qubit, e);
    acc += term;
  }
  rho_ = std::move(acc);
}

// --- Gates and circuits ----------------------------------------------------

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Sdg: return "SDG";
    case GateKind::RZZ: return "RZZ";
  }
  return "?";
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::CNOT || kind == GateKind::RZZ; }

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ ||
         kind == GateKind::RZZ;
}

double Gate::resolved_angle(std::span<const double> theta) const {
  if (!param) return angle;
  if (*param >= theta.size()) {
    throw std::out_of_range("gate references parameter " + std::to_string(*param) +
                            " beyond vector of size " + std::to_string(theta.size()));
  }
  return theta[*param];
}

Eigen::Matrix2cd single_qubit_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::RX: m << c, -i * s, -i * s, c; break;
    case GateKind::RY: m << c, -s, s, c; break;
    case GateKind::RZ: m << std::polar(1.0, -angle / 2), 0, 0, std::polar(1.0, angle / 2); break;
    case GateKind::H: m << 1, 1, 1, -1; m /= std::numbers::sqrt2; break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Sdg: m << 1, 0, 0, -i; break;
    default: throw std::invalid_argument(std::string(gate_name(kind)) + " is not a single-qubit gate");
  }
  return m;
}

Eigen::MatrixXcd gate_unitary(const Gate& g, std::size_t width, std::span<const double> theta) {
  const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << width);
  Eigen::MatrixXcd u(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    StateVector e = StateVector::basis(width, static_cast<std::uint64_t>(col));
    apply_gate(g, theta, e);
    u.col(col) = e.amplitudes();
  }
  return u;
}

void Circuit::add(const Gate& g) {
  check_qubit(g.qubits[0], width_);
  if (is_two_qubit(g.kind)) check_pair(g.qubits[0], g.qubits[1], width_);
  if (g.param) {
    if (!is_rotation(g.kind)) {
      throw std::invalid_argument(std::string("parameterized gate must be a rotation, got ") +
                                  gate_name(g.kind));
    }
    num_params_ = std::max(num_params_, *g.param + 1);
  }
  gates_.push_back(g);
}

void Circuit::append(std::span<const Gate> gates) {
  for (const auto& g : gates) add(g);
}

void Circuit::append(const Circuit& other) {
  if (other.width() != width_) throw std::invalid_argument("circuit width mismatch");
  append(other.gates());
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

Eigen::MatrixXcd Circuit::unitary(std::span<const double> theta) const {
  const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << width_);
  Eigen::MatrixXcd u(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    u.col(col) = apply(*this, theta, StateVector::basis(width_, static_cast<std::uint64_t>(col)))
                     .amplitudes();
  }
  return u;
}

std::vector<Gate> decompose_fundamental(const Gate& g) {
  const double half_pi = 0.5 * std::numbers::pi;
  const std::size_t q = g.qubits[0];
  switch (g.kind) {
    case GateKind::RZZ:
      return {Gate::cnot(g.qubits[0], g.qubits[1]), Gate::fixed(GateKind::RZ, g.qubits[1], g.angle),
              Gate::cnot(g.qubits[0], g.qubits[1])};
    case GateKind::H:
      return {Gate::fixed(GateKind::RZ, q, half_pi), Gate::fixed(GateKind::RX, q, half_pi),
              Gate::fixed(GateKind::RZ, q, half_pi)};
    case GateKind::X: return {Gate::fixed(GateKind::RX, q, std::numbers::pi)};
    case GateKind::Sdg: return {Gate::fixed(GateKind::RZ, q, -half_pi)};
    default: return {g};
  }
}

Circuit decompose_fundamental(const Circuit& c) {
  Circuit out(c.width());
  for (const auto& g : c.gates()) out.append(decompose_fundamental(g));
  return out;
}

void apply_gate(const Gate& g, std::span<const double> theta, StateVector& psi) {
  switch (g.kind) {
    case GateKind::CNOT: psi.apply_cnot(g.qubits[0], g.qubits[1]); return;
    case GateKind::RZZ: psi.apply_rzz(g.qubits[0], g.qubits[1], g.resolved_angle(theta)); return;
    default: psi.apply_1q(g.qubits[0], single_qubit_matrix(g.kind, g.resolved_angle(theta)));
  }
}

void apply_gate(const Gate& g, std::span<const double> theta, DensityMatrix& rho) {
  switch (g.kind) {
    case GateKind::CNOT: rho.apply_cnot(g.qubits[0], g.qubits[1]); return;
    case GateKind::RZZ: rho.apply_rzz(g.qubits[0], g.qubits[1], g.resolved_angle(theta)); return;
    default: rho.apply_1q(g.qubits[0], single_qubit_matrix(g.kind, g.resolved_angle(theta)));
  }
}

StateVector apply(const Circuit& c, std::span<const double> theta, StateVector psi) {
  if (psi.width() != c.width()) throw std::invalid_argument("circuit and state width mismatch");
  for (const auto& g : c.gates()) apply_gate(g, theta, psi);
  return psi;
}

DensityMatrix apply(const Circuit& c, std::span<const double> theta, DensityMatrix rho) {
  if (rho.width() != c.width()) throw std::invalid_argument("circuit and state width mismatch");
  for (const auto& g : c.gates()) apply_gate(g, theta, rho);
  return rho;
}

StateVector apply(const PauliSum& s, const StateVector& psi) {
  if (s.width() != psi.width()) throw std::invalid_argument("operator and state width mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes().size());
  for (const auto& [str, c] : s.terms()) {
    CompiledPauli p(str, c);
    for (std::uint64_t r = 0; r < psi.dim(); ++r) {
      out[static_cast<Eigen::Index>(r ^ p.x_mask)] += p.phase(r) * psi[r];
    }
  }
  return StateVector(psi.width(), std::move(out));
}

double expectation(const StateVector& psi, const PauliSum& s) {
  if (!s.is_hermitian()) throw std::invalid_argument("expectation of a non-Hermitian PauliSum");
  if (s.width() != psi.width()) throw std::invalid_argument("operator and state width mismatch");
  cplx total = 0.0;
  for (const auto& [str, c] : s.terms()) {
    CompiledPauli p(str, c);
    cplx acc = 0.0;
    for (std::uint64_t r = 0; r < psi.dim(); ++r) acc += std::conj(psi[r ^ p.x_mask]) * p.phase(r) * psi[r];
    total += acc;
  }
  if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total))) {
    throw std::logic_error("expectation of a Hermitian sum has an imaginary residue");
  }
  return total.real();
}

cplx overlap(const StateVector& psi, const StateVector& phi) {
  if (psi.width() != phi.width()) throw std::invalid_argument("overlap of states with different widths");
  return psi.amplitudes().dot(phi.amplitudes());  // Eigen's dot conjugates the left operand
}

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.width() != sigma.width()) throw std::invalid_argument("fidelity of states with different widths");
  rho.validate();
  sigma.validate();
  const Eigen::MatrixXcd sr = psd_sqrt(rho.entries());
  Eigen::MatrixXcd inner = sr * sigma.entries() * sr;
  inner = (inner + inner.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  const double root_trace = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.width() != sigma.width()) throw std::invalid_argument("trace distance width mismatch");
  Eigen::MatrixXcd diff = rho.entries() - sigma.entries();
  diff = (diff + diff.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::vector<double> marginal_probabilities(const StateVector& psi,
                                           std::span<const std::size_t> qubits) {
  if (qubits.empty()) throw std::invalid_argument("sampling requires at least one qubit");
  for (auto q : qubits) check_qubit(q, psi.width());
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  for (std::uint64_t r = 0; r < psi.dim(); ++r) {
    std::uint64_t outcome = 0;
    for (auto q : qubits) outcome = (outcome << 1) | ((r & psi.bit(q)) ? 1U : 0U);
    probs[outcome] += std::norm(psi[r]);
  }
  return probs;
}

std::map<std::uint64_t, std::uint64_t> sample(const StateVector& psi,
                                              std::span<const std::size_t> qubits,
                                              std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be at least 1");
  const auto probs = marginal_probabilities(psi, qubits);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::uint64_t> dist(probs.begin(), probs.end());
  std::map<std::uint64_t, std::uint64_t> hist;
  for (std::uint64_t s = 0; s < shots; ++s) ++hist[dist(rng)];
  return hist;
}

void write_csv(const StateVector& psi, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << std::setprecision(17) << "index,re,im\n";
  for (std::uint64_t r = 0; r < psi.dim(); ++r) os << r << ',' << psi[r].real() << ',' << psi[r].imag() << '\n';
}

}  // namespace fkclock
