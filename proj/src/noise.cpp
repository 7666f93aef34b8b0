#include "fkclock/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fkclock/dynamics.hpp"

namespace fkclock {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void channel_in_place(DensityMatrix& rho, std::size_t qubit, double pa, double pd) {
  if (pa > 0.0) {
    const auto ka = amplitude_damping_kraus(pa);
    rho.apply_kraus(qubit, ka);
  }
  if (pd > 0.0) {
    const auto kd = dephasing_kraus(pd);
    rho.apply_kraus(qubit, kd);
  }
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

void NoiseParams::validate() const {
  check_probability(p1a, "p1a");
  check_probability(p1d, "p1d");
  check_probability(p2a, "p2a");
  check_probability(p2d, "p2d");
}

void DeviceProfile::validate() const {
  if (!(t1 > 0.0 && t2 > 0.0)) throw std::invalid_argument("device coherence times must be positive");
  if (!(tau1 >= 0.0 && tau2 >= 0.0)) throw std::invalid_argument("device gate times must be non-negative");
  if (t2 >= 2.0 * t1) throw std::domain_error("T2 >= 2*T1 leaves the pure dephasing time undefined");
}

DeviceProfile device_preset(std::string_view name) {
  if (name == "peekskill") return {"peekskill", 250.12, 242.82, 0.0035, 0.420571};
  if (name == "hanoi") return {"hanoi", 160.64, 144.7, 0.0035, 0.318603};
  // T1 is only bounded from below (> 1e7 µs); the bound itself is used.
  if (name == "ionq11") return {"ionq11", 1e7, 2e5, 10.0, 210.0};
  throw std::invalid_argument("unknown device preset '" + std::string(name) + "'");
}

std::vector<std::string> device_preset_names() { return {"peekskill", "hanoi", "ionq11"}; }

double pure_dephasing_time(double t1, double t2) {
  if (t2 >= 2.0 * t1) throw std::domain_error("T2 >= 2*T1 leaves the pure dephasing time undefined");
  return 2.0 * t1 * t2 / (2.0 * t1 - t2);
}

NoiseParams rates_from_device(const DeviceProfile& d) {
  d.validate();
  const double tphi = pure_dephasing_time(d.t1, d.t2);
  auto pa = [&](double tau) { return 1.0 - std::exp(-tau / d.t1); };
  auto pd = [&](double tau) { return 1.0 - std::exp(-2.0 * tau / tphi); };
  return {pa(d.tau1), pd(d.tau1), pa(d.tau2), pd(d.tau2)};
}

std::array<Eigen::Matrix2cd, 2> amplitude_damping_kraus(double p) {
  check_probability(p, "damping probability");
  Eigen::Matrix2cd e0, e1;
  e0 << 1, 0, 0, std::sqrt(1.0 - p);
  e1 << 0, std::sqrt(p), 0, 0;
  return {e0, e1};
}

std::array<Eigen::Matrix2cd, 2> dephasing_kraus(double p) {
  check_probability(p, "dephasing probability");
  Eigen::Matrix2cd e0, e1;
  e0 << 1, 0, 0, std::sqrt(1.0 - p);
  e1 << 0, 0, 0, std::sqrt(p);
  return {e0, e1};
}

DensityMatrix apply_channel(DensityMatrix rho, std::size_t qubit, double pa, double pd) {
  rho.validate();
  check_probability(pa, "damping probability");
  check_probability(pd, "dephasing probability");
  channel_in_place(rho, qubit, pa, pd);
  return rho;
}

DensityMatrix run_noisy(const Circuit& circuit, std::span<const double> theta, const NoiseParams& noise,
                        DensityMatrix initial) {
  noise.validate();
  if (circuit.width() > kDensityWidthCap) {
    throw std::length_error("noisy simulation limited to " + std::to_string(kDensityWidthCap) + " qubits");
  }
  if (initial.width() != circuit.width()) throw std::invalid_argument("initial state width differs from the circuit");
  DensityMatrix rho = std::move(initial);
  const Circuit fundamental = decompose_fundamental(circuit);
  for (const auto& g : fundamental.gates()) {
    apply_gate(g, theta, rho);
    if (g.kind == GateKind::CNOT) {
      channel_in_place(rho, g.qubits[0], noise.p2a, noise.p2d);
      channel_in_place(rho, g.qubits[1], noise.p2a, noise.p2d);
    } else {
      channel_in_place(rho, g.qubits[0], noise.p1a, noise.p1d);
    }
  }
  return rho;
}

DensityMatrix run_noisy(const Circuit& circuit, std::span<const double> theta, const NoiseParams& noise) {
  if (circuit.width() > kDensityWidthCap) {
    throw std::length_error("noisy simulation limited to " + std::to_string(kDensityWidthCap) + " qubits");
  }
  return run_noisy(circuit, theta, noise, DensityMatrix(circuit.width()));
}

DensityBranch project_clock(const DensityMatrix& rho, std::size_t level, const ClockSpec& clock) {
  if (rho.width() <= clock.n_aux) throw std::invalid_argument("density matrix has no physical register");
  const std::size_t ns = rho.width() - clock.n_aux;
  const std::uint64_t code = encode(level, clock);
  const auto pdim = static_cast<Eigen::Index>(std::uint64_t{1} << ns);
  Eigen::MatrixXcd sub(pdim, pdim);
  for (Eigen::Index p = 0; p < pdim; ++p) {
    for (Eigen::Index q = 0; q < pdim; ++q) {
      sub(p, q) = rho.entries()(static_cast<Eigen::Index>((static_cast<std::uint64_t>(p) << clock.n_aux) | code),
                                static_cast<Eigen::Index>((static_cast<std::uint64_t>(q) << clock.n_aux) | code));
    }
  }
  const double prob = sub.trace().real();
  if (prob < 1e-12) throw std::domain_error("clock level " + std::to_string(level) + " has zero probability");
  return {DensityMatrix(ns, sub / prob), prob};
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi >= lo)) throw std::invalid_argument("log grid needs 0 < lo <= hi");
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k) out.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1)));
  out.front() = lo;
  out.back() = hi;
  return out;
}

NoisePoint noisy_fidelities(const FkConfig& cfg, const AnsatzSpec& ansatz, std::span<const double> theta,
                            const NoiseParams& noise) {
  if (theta.size() < ansatz.num_parameters()) throw std::invalid_argument("missing VFK parameters");
  const auto refs = reference_states(cfg);
  const Circuit vfk = build_vfk_circuit(ansatz, cfg.initial_state);
  const DensityMatrix rho = run_noisy(vfk, theta, noise);
  NoisePoint out;
  for (std::size_t i = 0; i < cfg.levels(); ++i) {
    const DensityMatrix ideal = DensityMatrix::from_pure(refs[i]);
    out.vfk.push_back(uhlmann_fidelity(project_clock(rho, i, cfg.clock).state, ideal));
    const DensityMatrix ts = run_noisy(trotter_circuit(i, cfg).circuit, {}, noise);
    out.trotter.push_back(uhlmann_fidelity(ts, ideal));
  }
  return out;
}

std::vector<SweepRow> noise_sweep(const FkConfig& cfg, const AnsatzSpec& ansatz, std::span<const double> theta,
                                  double p1, std::span<const double> p2_grid) {
  std::vector<SweepRow> rows;
  for (double p2 : p2_grid) {
    const NoisePoint pt = noisy_fidelities(cfg, ansatz, theta, NoiseParams::symmetric(p1, p2));
    SweepRow r;
    r.p2 = p2;
    r.f_vfk_mean = mean(pt.vfk);
    r.f_vfk_std = population_std(pt.vfk);
    r.f_ts_mean = mean(pt.trotter);
    r.f_ts_std = population_std(pt.trotter);
    r.ratio = r.f_vfk_mean / r.f_ts_mean;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fkclock
