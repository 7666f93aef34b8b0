#include "fkclock/fk_hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace fkclock {

void TfimParams::validate() const {
  if (n_spins < 2) throw std::invalid_argument("n_s must be at least 2");
  if (n_spins > 30) throw std::invalid_argument("n_s too large for a state-vector register");
  if (!std::isfinite(coupling) || !std::isfinite(field)) {
    throw std::invalid_argument("J and h must be finite");
  }
}

PauliSum tfim_x_part(const TfimParams& p) {
  PauliSum s(p.n_spins);
  for (std::size_t i = 0; i < p.n_spins; ++i) s.add_term(PauliString(p.n_spins).with(i, Pauli::X), 1.0);
  return s;
}

PauliSum tfim_zz_part(const TfimParams& p) {
  PauliSum s(p.n_spins);
  for (std::size_t i = 0; i + 1 < p.n_spins; ++i) {
    s.add_term(PauliString(p.n_spins).with(i, Pauli::Z).with(i + 1, Pauli::Z), 1.0);
  }
  return s;
}

PauliSum tfim_hamiltonian(const TfimParams& p) {
  return tfim_zz_part(p).scaled(p.coupling) + tfim_x_part(p).scaled(p.field);
}

std::string to_string(SplitForm f) { return f == SplitForm::Alternating ? "alternating" : "single"; }

SplitForm split_form_from_string(std::string_view s) {
  if (s == "alternating") return SplitForm::Alternating;
  if (s == "single") return SplitForm::SingleStep;
  throw std::invalid_argument("unknown C2 form '" + std::string(s) + "'");
}

// --- PhysicalStep ----------------------------------------------------------

PhysicalStep::PhysicalStep(StepKind kind, const TfimParams& params, double dt)
    : kind_(kind), params_(params), dt_(dt) {
  rx_ = single_qubit_matrix(GateKind::RX, 2.0 * params.field * dt);
  const std::size_t n = params.n_spins;
  const std::uint64_t dim = std::uint64_t{1} << n;
  zz_phase_.resize(dim);
  for (std::uint64_t r = 0; r < dim; ++r) {
    double zsum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const bool a = r & (std::uint64_t{1} << (n - 1 - i));
      const bool b = r & (std::uint64_t{1} << (n - 2 - i));
      zsum += (a == b) ? 1.0 : -1.0;
    }
    zz_phase_[r] = std::polar(1.0, -params.coupling * dt * zsum);
  }
}

void PhysicalStep::apply_x(StateVector& phys, bool adjoint) const {
  const Eigen::Matrix2cd u = adjoint ? Eigen::Matrix2cd(rx_.adjoint()) : rx_;
  for (std::size_t q = 0; q < params_.n_spins; ++q) phys.apply_1q(q, u);
}

void PhysicalStep::apply_zz(StateVector& phys, bool adjoint) const {
  auto& a = phys.amplitudes();
  for (Eigen::Index r = 0; r < a.size(); ++r) {
    a[r] *= adjoint ? std::conj(zz_phase_[static_cast<std::size_t>(r)]) : zz_phase_[static_cast<std::size_t>(r)];
  }
}

void PhysicalStep::apply(StateVector& phys, bool adjoint) const {
  if (phys.width() != params_.n_spins) throw std::invalid_argument("physical state width mismatch");
  switch (kind_) {
    case StepKind::X: apply_x(phys, adjoint); break;
    case StepKind::ZZ: apply_zz(phys, adjoint); break;
    case StepKind::Full:
      // U = U_ZZ·U_X, so U† = U_X†·U_ZZ†
      if (adjoint) {
        apply_zz(phys, true);
        apply_x(phys, true);
      } else {
        apply_x(phys, false);
        apply_zz(phys, false);
      }
      break;
  }
}

std::vector<Gate> PhysicalStep::gates() const {
  std::vector<Gate> out;
  const std::size_t n = params_.n_spins;
  if (kind_ != StepKind::ZZ) {
    for (std::size_t q = 0; q < n; ++q) out.push_back(Gate::fixed(GateKind::RX, q, 2.0 * params_.field * dt_));
  }
  if (kind_ != StepKind::X) {
    for (std::size_t q = 0; q + 1 < n; ++q) out.push_back(Gate::rzz(q, q + 1, 2.0 * params_.coupling * dt_));
  }
  return out;
}

PauliSum PhysicalStep::expansion() const {
  const std::size_t n = params_.n_spins;
  const cplx i{0.0, 1.0};
  PauliSum ux = PauliSum::identity(n);
  PauliSum uzz = PauliSum::identity(n);
  if (kind_ != StepKind::ZZ) {
    const double a = params_.field * dt_;
    for (std::size_t q = 0; q < n; ++q) {
      PauliSum f(n);
      f.add_term(PauliString(n), std::cos(a));
      f.add_term(PauliString(n).with(q, Pauli::X), -i * std::sin(a));
      ux = ux * f;
    }
  }
  if (kind_ != StepKind::X) {
    const double a = params_.coupling * dt_;
    for (std::size_t q = 0; q + 1 < n; ++q) {
      PauliSum f(n);
      f.add_term(PauliString(n), std::cos(a));
      f.add_term(PauliString(n).with(q, Pauli::Z).with(q + 1, Pauli::Z), -i * std::sin(a));
      uzz = uzz * f;
    }
  }
  return uzz * ux;
}

// --- FkConfig ----------------------------------------------------------------

StepKind FkConfig::hop_kind(std::size_t level) const {
  if (form == SplitForm::SingleStep) return StepKind::Full;
  return level % 2 == 0 ? StepKind::X : StepKind::ZZ;
}

double FkConfig::level_time(std::size_t level) const {
  return form == SplitForm::Alternating ? 0.5 * dt * static_cast<double>(level)
                                        : dt * static_cast<double>(level);
}

void FkConfig::validate() const {
  tfim.validate();
  clock.validate();
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be finite and non-negative");
  if (initial_state >= (std::uint64_t{1} << tfim.n_spins)) {
    throw std::invalid_argument("initial state index outside the physical register");
  }
}

double default_dt(double total_time, std::size_t n_aux) {
  if (n_aux < 1) throw std::invalid_argument("n_aux must be at least 1");
  return total_time / static_cast<double>(std::uint64_t{1} << (n_aux - 1));
}

// --- FkHamiltonian -------------------------------------------------------------

FkHamiltonian::FkHamiltonian(FkConfig config) : cfg_(std::move(config)) {
  cfg_.validate();
  steps_.reserve(cfg_.clock.hops());
  for (std::size_t i = 0; i < cfg_.clock.hops(); ++i) {
    steps_.emplace_back(cfg_.hop_kind(i), cfg_.tfim, cfg_.dt);
  }
}

StateVector FkHamiltonian::branch(const StateVector& psi, std::uint64_t code) const {
  const std::uint64_t levels = cfg_.levels();
  const std::uint64_t pdim = std::uint64_t{1} << cfg_.n_spins();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(pdim));
  for (std::uint64_t p = 0; p < pdim; ++p) v[static_cast<Eigen::Index>(p)] = psi[p * levels + code];
  return StateVector(cfg_.n_spins(), std::move(v));
}

void FkHamiltonian::accumulate(Part part, double weight, const StateVector& psi,
                               Eigen::VectorXcd& out) const {
  const std::uint64_t levels = cfg_.levels();
  const std::uint64_t pdim = std::uint64_t{1} << cfg_.n_spins();
  auto add_branch = [&](const StateVector& b, std::uint64_t code) {
    for (std::uint64_t p = 0; p < pdim; ++p) {
      out[static_cast<Eigen::Index>(p * levels + code)] += weight * b[p];
    }
  };
  switch (part) {
    case Part::C0: {
      const std::uint64_t c0 = encode(0, cfg_.clock);
      for (std::uint64_t p = 0; p < pdim; ++p) {
        if (p == cfg_.initial_state) continue;
        const std::uint64_t idx = p * levels + c0;
        out[static_cast<Eigen::Index>(idx)] += weight * psi[idx];
      }
      break;
    }
    case Part::C1: {
      for (std::size_t i = 0; i < levels; ++i) {
        const double w = (i == 0 || i + 1 == levels) ? 1.0 : 2.0;
        const std::uint64_t code = encode(i, cfg_.clock);
        for (std::uint64_t p = 0; p < pdim; ++p) {
          const std::uint64_t idx = p * levels + code;
          out[static_cast<Eigen::Index>(idx)] += weight * w * psi[idx];
        }
      }
      break;
    }
    case Part::C2: {
      for (std::size_t i = 0; i + 1 < levels; ++i) {
        const std::uint64_t from = encode(i, cfg_.clock), to = encode(i + 1, cfg_.clock);
        StateVector fwd = branch(psi, from);
        steps_[i].apply(fwd, false);
        add_branch(fwd, to);
        StateVector bwd = branch(psi, to);
        steps_[i].apply(bwd, true);
        add_branch(bwd, from);
      }
      break;
    }
  }
}

StateVector FkHamiltonian::apply(const StateVector& psi) const {
  if (psi.width() != width()) throw std::invalid_argument("state width does not match Hamiltonian");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes().size());
  accumulate(Part::C0, 1.0, psi, out);
  accumulate(Part::C1, 0.5, psi, out);
  accumulate(Part::C2, -0.5, psi, out);
  return StateVector(width(), std::move(out));
}

StateVector FkHamiltonian::apply_c0(const StateVector& psi) const {
  if (psi.width() != width()) throw std::invalid_argument("state width does not match Hamiltonian");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes().size());
  accumulate(Part::C0, 1.0, psi, out);
  return StateVector(width(), std::move(out));
}

StateVector FkHamiltonian::apply_c1(const StateVector& psi) const {
  if (psi.width() != width()) throw std::invalid_argument("state width does not match Hamiltonian");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes().size());
  accumulate(Part::C1, 1.0, psi, out);
  return StateVector(width(), std::move(out));
}

StateVector FkHamiltonian::apply_c2(const StateVector& psi) const {
  if (psi.width() != width()) throw std::invalid_argument("state width does not match Hamiltonian");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes().size());
  accumulate(Part::C2, 1.0, psi, out);
  return StateVector(width(), std::move(out));
}

double FkHamiltonian::energy(const StateVector& psi, EnergyBackend backend) const {
  if (psi.width() != width()) throw std::invalid_argument("state width does not match Hamiltonian");
  if (backend == EnergyBackend::PauliExpansion) return expectation(psi, expanded());
  return overlap(psi, apply(psi)).real();
}

const PauliSum& FkHamiltonian::expanded() const {
  if (width() > kDenseWidthCap) {
    throw std::length_error("Pauli expansion limited to widths <= " + std::to_string(kDenseWidthCap));
  }
  std::call_once(cache_->once, [this] {
    PauliSum c = build_c0(cfg_.initial_state, cfg_.n_spins(), cfg_.clock);
    c += build_c1(cfg_.n_spins(), cfg_.clock).scaled(0.5);
    c -= build_c2(cfg_).scaled(0.5);
    cache_->value.emplace(std::move(c));
  });
  return *cache_->value;
}

Eigen::MatrixXcd FkHamiltonian::dense() const {
  const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << width());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    m.col(col) = apply(StateVector::basis(width(), static_cast<std::uint64_t>(col))).amplitudes();
  }
  return m;
}

PauliSum build_c0(std::uint64_t initial_state, std::size_t n_spins, const ClockSpec& clock) {
  PauliSum phys = PauliSum::identity(n_spins) - basis_projector(initial_state, n_spins);
  return tensor(phys, projector(0, clock));
}

PauliSum build_c1(std::size_t n_spins, const ClockSpec& clock) {
  PauliSum clock_part(clock.n_aux);
  for (std::size_t i = 0; i + 1 < clock.levels(); ++i) {
    clock_part += projector(i, clock);
    clock_part += projector(i + 1, clock);
  }
  return tensor(PauliSum::identity(n_spins), clock_part);
}

PauliSum build_c2(const FkConfig& cfg) {
  cfg.validate();
  PauliSum out(cfg.width());
  for (std::size_t i = 0; i < cfg.clock.hops(); ++i) {
    const PauliSum u = PhysicalStep(cfg.hop_kind(i), cfg.tfim, cfg.dt).expansion();
    const PauliSum fwd = hop(i, cfg.clock);
    out += tensor(u, fwd);
    out += tensor(u.adjoint(), fwd.adjoint());
  }
  return out;
}

StateVector history_state(const FkConfig& cfg) {
  cfg.validate();
  const std::uint64_t levels = cfg.levels();
  const std::uint64_t pdim = std::uint64_t{1} << cfg.n_spins();
  const double w = 1.0 / std::sqrt(static_cast<double>(levels));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pdim * levels));
  StateVector phys = StateVector::basis(cfg.n_spins(), cfg.initial_state);
  for (std::size_t i = 0; i < levels; ++i) {
    if (i > 0) PhysicalStep(cfg.hop_kind(i - 1), cfg.tfim, cfg.dt).apply(phys);
    const std::uint64_t code = encode(i, cfg.clock);
    for (std::uint64_t p = 0; p < pdim; ++p) amps[static_cast<Eigen::Index>(p * levels + code)] = w * phys[p];
  }
  return StateVector(cfg.width(), std::move(amps));
}

double gap_formula(std::size_t n_aux) {
  if (n_aux < 1) throw std::invalid_argument("n_aux must be at least 1");
  return 1.0 - std::cos(std::numbers::pi / static_cast<double>(std::uint64_t{1} << n_aux));
}

StringCountReport count_strings(const FkHamiltonian& h) {
  const FkConfig& cfg = h.config();
  const std::size_t ns = cfg.n_spins();
  StringCountReport r;

  std::set<PauliString> per_hop;
  for (std::size_t i = 0; i < cfg.clock.hops(); ++i) {
    const PauliSum fwd = hop(i, cfg.clock);
    for (const auto& [s, c] : fwd.terms()) per_hop.insert(s);
    const PauliSum back = fwd.adjoint();
    for (const auto& [s, c] : back.terms()) per_hop.insert(s);
  }
  r.clock_strings_c2 = per_hop.size();

  const PauliSum c2 = build_c2(cfg);
  std::set<PauliString> merged;
  for (const auto& [s, c] : c2.terms()) {
    merged.insert(PauliString(std::vector<Pauli>(s.labels().begin() + static_cast<std::ptrdiff_t>(ns),
                                                 s.labels().end())));
  }
  r.clock_strings_c2_merged = merged.size();
  r.c2_terms = c2.size();
  r.c2_groups = group_commuting(c2).size();

  const PauliSum c01 = build_c0(cfg.initial_state, ns, cfg.clock) + build_c1(ns, cfg.clock);
  r.c01_terms = c01.size();
  r.c01_groups = group_commuting(c01).size();

  r.total_terms = h.expanded().size();
  r.total_groups = group_commuting(h.expanded()).size();
  return r;
}

}  // namespace fkclock
