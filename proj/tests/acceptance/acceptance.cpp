// Acceptance gate: one PASS/FAIL line per criterion.
//   fkclock_acceptance                 run all criteria
//   fkclock_acceptance --criterion 4   run one (repeatable)

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fkclock/ansatz.hpp"
#include "fkclock/config.hpp"
#include "fkclock/dynamics.hpp"
#include "fkclock/fk_hamiltonian.hpp"
#include "fkclock/noise.hpp"
#include "fkclock/observables.hpp"
#include "fkclock/vqe.hpp"

namespace {

using namespace fkclock;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

FkConfig make(std::size_t ns, std::size_t na) {
  FkConfig c;
  c.tfim = {ns, 0.25, 1.0};
  c.clock = {na, Encoding::Gray};
  c.dt = default_dt(3.0, na);
  c.form = SplitForm::Alternating;
  return c;
}

const std::vector<std::pair<std::size_t, std::size_t>> kSpectrumGrid{{2, 1}, {2, 2}, {2, 3}, {3, 2}};

StateVector random_state(std::size_t width, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(Eigen::Index{1} << width);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  v.normalize();
  return StateVector(width, v);
}

// Default-config VQE at n_s = 2 with depth escalation up to 4, shared by 4, 6 and 9.
struct Sweep {
  VqeRecord record;  // last attempt
  bool converged = false;
  double seconds = 0.0;
};

const Sweep& vqe_sweep(std::size_t na) {
  static std::map<std::size_t, Sweep> cache;
  if (auto it = cache.find(na); it != cache.end()) return it->second;
  ExperimentConfig cfg;
  cfg.n_spins = 2;
  cfg.n_aux = na;
  const auto t0 = Clock::now();
  const auto attempts = run_vqe_escalating(make_problem(cfg), 4);
  Sweep s;
  s.record = attempts.back();
  s.converged = s.record.converged;
  s.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return cache.emplace(na, std::move(s)).first->second;
}

Outcome ground_state_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  for (auto [ns, na] : kSpectrumGrid) {
    const FkConfig c = make(ns, na);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(FkHamiltonian(c).dense());
    const double lmin = es.eigenvalues()[0];
    const double f = std::norm(es.eigenvectors().col(0).dot(history_state(c).amplitudes()));
    const bool ok = std::abs(lmin) <= 1e-9 && f >= 1 - 1e-9;
    o.pass &= ok;
    o.detail << "(" << ns << "," << na << ") lmin=" << fmt(lmin) << " 1-F=" << fmt(1 - f) << "; ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  o.pass &= secs < 60;
  o.detail << fmt(secs) << " s";
  return o;
}

double smallest_positive(const FkConfig& c) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(FkHamiltonian(c).dense());
  for (double v : es.eigenvalues())
    if (v > 1e-9) return v;
  return 0.0;
}

Outcome gap_matches_formula() {
  Outcome o;
  for (auto [ns, na] : kSpectrumGrid) {
    const double e = smallest_positive(make(ns, na)), f = gap_formula(na);
    o.pass &= std::abs(e - f) <= 1e-6;
    o.detail << "(" << ns << "," << na << ") eig=" << fmt(e) << " formula=" << fmt(f) << "; ";
  }
  return o;
}

Outcome infidelity_bound() {
  // ψ = normalize(Ψ + ε·δ), δ a unit complex Gaussian direction, ε log-spaced over [1e-3, 1].
  Outcome o;
  std::mt19937_64 rng(20240501);
  for (auto [ns, na] : kSpectrumGrid) {
    const FkConfig c = make(ns, na);
    const FkHamiltonian h(c);
    const StateVector hist = history_state(c);
    const double e1 = gap_formula(na);
    int violations = 0;
    for (int k = 0; k < 100; ++k) {
      const double eps = std::pow(10.0, -3.0 + 3.0 * k / 99.0);
      const StateVector d = random_state(hist.width(), rng);
      StateVector psi(hist.width(), hist.amplitudes() + eps * d.amplitudes());
      psi.normalize();
      const double infid = 1 - std::norm(overlap(hist, psi));
      if (infid > h.energy(psi) / e1 + 1e-8) ++violations;
    }
    o.pass &= violations == 0;
    o.detail << "(" << ns << "," << na << ") violations=" << violations << "; ";
  }
  return o;
}

Outcome vqe_convergence() {
  Outcome o;
  double total = 0;
  for (std::size_t na : {2, 3}) {
    const Sweep& s = vqe_sweep(na);
    total += s.seconds;
    const VqeRecord& r = s.record;
    double worst = 0;
    for (const auto& v : infidelity_profile({2, na, r.depth}, r.theta, make(2, na))) worst = std::max(worst, v.value_or(1.0));
    o.pass &= s.converged && worst <= r.ratio();
    o.detail << "na=" << na << " d=" << r.depth << " E/E1=" << fmt(r.ratio()) << (s.converged ? "" : " (not converged)")
             << " max level infidelity=" << fmt(worst) << "; ";
  }
  o.pass &= total < 600;
  o.detail << fmt(total) << " s";
  return o;
}

Outcome counting_identities() {
  Outcome o;
  int bad = 0;
  for (std::size_t d = 2; d <= 6; ++d)
    for (std::size_t ns = 2; ns <= 6; ++ns)
      for (std::size_t na = 2; na <= 6; ++na) {
        const AnsatzSpec a{ns, na, d};
        const Circuit c = build_ansatz(a);
        const std::size_t pairs = ns * ns + ns;
        if (a.num_parameters() != 2 * d * na * pairs || c.num_parameters() != a.num_parameters()) ++bad;
        if (tally_cnots(c) != d * na * pairs / 2 || a.num_cnots() != tally_cnots(c)) ++bad;
      }
  o.pass &= bad == 0;
  o.detail << "grid mismatches=" << bad << "; clock strings";
  for (std::size_t na : {2, 3, 4}) {
    const std::size_t n = count_strings(FkHamiltonian(make(2, na))).clock_strings_c2;
    o.pass &= n == na * (std::size_t{1} << na);
    o.detail << " na=" << na << ":" << n;
  }
  return o;
}

Outcome cx_ratio_trend() {
  Outcome o;
  double last = -1;
  for (std::size_t na : {2, 3, 4}) {
    const Sweep& s = vqe_sweep(na);
    const FkConfig c = make(2, na);
    const std::size_t ts = cx_count(CxKind::Trotter, c), an = cx_count(CxKind::Ansatz, c, s.record.depth);
    const double ratio = double(ts) / double(an);
    o.pass &= s.converged && ratio >= last;
    last = ratio;
    o.detail << "na=" << na << " d=" << s.record.depth << (s.converged ? "" : "(not converged)") << " " << ts << "/" << an
             << "=" << fmt(ratio) << "; ";
  }
  return o;
}

Outcome dqpt() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::size_t points = 33;
  double last_peak = 0;
  std::optional<std::size_t> last_at;
  for (std::size_t ns : {2, 4, 6}) {
    const auto series = exact_echo_series({ns, 0.25, 1.0}, 0, 3.0, points);
    std::size_t at = 0;
    for (std::size_t k = 1; k < series.size(); ++k)
      if (series[k].rate > series[at].rate) at = k;
    const double peak = series[at].rate;
    // n_s = 6 is reported but only 2 and 4 gate the result.
    if (ns <= 4) {
      o.pass &= peak > last_peak;
      if (last_at) o.pass &= (at > *last_at ? at - *last_at : *last_at - at) <= 1;
    }
    last_peak = peak;
    last_at = at;
    o.detail << "ns=" << ns << " max=" << fmt(peak) << " at t=" << fmt(series[at].time) << "; ";
  }

  // Hadamard test on the exact history state against direct overlaps.
  const FkConfig c = make(2, 3);
  const StateVector hist = history_state(c);
  int outside = 0;
  for (std::size_t j = 0; j < c.levels(); ++j) {
    const cplx direct = loschmidt_direct(hist, 0, j, c.clock);
    const auto re = loschmidt_hadamard(hist, c.clock, 0, j, EchoPart::Real, 100000, 100 + j);
    const auto im = loschmidt_hadamard(hist, c.clock, 0, j, EchoPart::Imaginary, 100000, 200 + j);
    if (std::abs(re.weighted - direct.real()) > 3 * re.weighted_stderr) ++outside;
    if (std::abs(im.weighted - direct.imag()) > 3 * im.weighted_stderr) ++outside;
  }
  o.pass &= outside == 0;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  o.pass &= secs < 300;
  o.detail << "hadamard outside 3 sigma=" << outside << "/" << 2 * c.levels() << "; " << fmt(secs) << " s";
  return o;
}

Outcome hadamard_unbiased() {
  Outcome o;
  const FkConfig c = make(2, 2);
  const StateVector hist = history_state(c);
  const int reps = 200;
  for (std::size_t j = 1; j < c.levels(); ++j) {
    for (auto part : {EchoPart::Real, EchoPart::Imaginary}) {
      const cplx direct = loschmidt_direct(hist, 0, j, c.clock);
      const double target = part == EchoPart::Real ? direct.real() : direct.imag();
      double sum = 0, sq = 0;
      for (int r = 0; r < reps; ++r) {
        const double v = loschmidt_hadamard(hist, c.clock, 0, j, part, 10000, 1000 * j + r + (part == EchoPart::Real ? 0 : 500)).weighted;
        sum += v;
        sq += v * v;
      }
      const double mean = sum / reps, se = std::sqrt((sq / reps - mean * mean) / (reps - 1));
      const double z = (mean - target) / se;
      o.pass &= std::abs(z) <= 4;
      o.detail << "j=" << j << (part == EchoPart::Real ? " re" : " im") << " z=" << fmt(z) << "; ";
    }
  }
  return o;
}

Outcome noise_model() {
  Outcome o;
  const auto t0 = Clock::now();
  double completeness = 0;
  for (double p : {0.0, 1e-4, 1e-2, 0.3, 1.0})
    for (const auto& ks : {amplitude_damping_kraus(p), dephasing_kraus(p)})
      completeness = std::max(completeness, (ks[0].adjoint() * ks[0] + ks[1].adjoint() * ks[1] -
                                             Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
  o.pass &= completeness <= 1e-14;

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  const Circuit circ = build_vfk_circuit({2, 2, 1}, 0);
  std::vector<double> theta(circ.num_parameters());
  for (auto& t : theta) t = u(rng);
  const double td = trace_distance(run_noisy(circ, theta, NoiseParams{}),
                                   DensityMatrix::from_pure(circuit_state(circ, theta)));
  o.pass &= td <= 1e-10;

  const double p2a = rates_from_device(device_preset("peekskill")).p2a;
  o.pass &= std::abs(p2a - 1.68e-3) <= 5e-6;
  o.detail << "kraus=" << fmt(completeness) << " p=0 trace distance=" << fmt(td) << " peekskill p2a=" << fmt(p2a) << "; ";

  const auto grid = log_grid(1e-4, 1e-1, 12);
  for (std::size_t na : {2, 3}) {
    const Sweep& s = vqe_sweep(na);
    const auto rows = noise_sweep(make(2, na), {2, na, s.record.depth}, s.record.theta, 2e-4, grid);
    bool monotone = true, finite = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      finite &= std::isfinite(rows[k].ratio);
      if (k) monotone &= rows[k].f_vfk_mean <= rows[k - 1].f_vfk_mean + 1e-12 && rows[k].f_ts_mean <= rows[k - 1].f_ts_mean + 1e-12;
    }
    o.pass &= monotone && finite;
    o.detail << "na=" << na << " monotone=" << monotone << " finite=" << finite << " ratio@1e-1=" << fmt(rows.back().ratio) << "; ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  o.pass &= secs < 1800;
  o.detail << fmt(secs) << " s";
  return o;
}

Outcome gradient_correctness() {
  Outcome o;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  double worst = 0;
  for (std::size_t na : {1, 2}) {
    const FkHamiltonian h(make(2, na));
    const Circuit circ = build_vfk_circuit({2, na, 1}, 0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> theta(circ.num_parameters());
      for (auto& t : theta) t = u(rng);
      const auto grad = parameter_shift_gradient(circ, h, theta);
      for (std::size_t k = 0; k < theta.size(); ++k) {
        auto plus = theta, minus = theta;
        plus[k] += 1e-5;
        minus[k] -= 1e-5;
        const double fd = (circuit_energy(circ, h, plus) - circuit_energy(circ, h, minus)) / 2e-5;
        worst = std::max(worst, std::abs(fd - grad[k]));
      }
    }
  }
  o.pass = worst <= 1e-6;
  o.detail << "max |shift - fd|=" << fmt(worst);
  return o;
}

Outcome backend_equivalence() {
  Outcome o;
  std::mt19937_64 rng(11);
  double worst = 0;
  int configs = 0;
  for (std::size_t ns = 2; ns <= 7; ++ns)
    for (std::size_t na = 1; ns + na <= 8; ++na)
      for (auto form : {SplitForm::Alternating, SplitForm::SingleStep}) {
        FkConfig c = make(ns, na);
        c.form = form;
        const FkHamiltonian h(c);
        for (int k = 0; k < 50; ++k) {
          const StateVector psi = random_state(c.width(), rng);
          worst = std::max(worst, std::abs(h.energy(psi, EnergyBackend::MatrixFree) -
                                           h.energy(psi, EnergyBackend::PauliExpansion)));
        }
        ++configs;
      }
  o.pass = worst <= 1e-10;
  o.detail << configs << " configurations, max |dE|=" << fmt(worst);
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"ground state is the history state", ground_state_identity},
    {"smallest positive eigenvalue equals gap formula", gap_matches_formula},
    {"infidelity bounded by E/E1", infidelity_bound},
    {"vqe convergence and per-level bound", vqe_convergence},
    {"parameter, CX and clock-string counts", counting_identities},
    {"trotter/ansatz CX ratio non-decreasing", cx_ratio_trend},
    {"DQPT peak growth and Hadamard agreement", dqpt},
    {"weighted Hadamard estimator unbiased", hadamard_unbiased},
    {"noise model", noise_model},
    {"parameter-shift gradient", gradient_correctness},
    {"energy backends agree", backend_equivalence},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fkclock acceptance checks"};
  std::vector<int> chosen;
  app.add_option("--criterion", chosen, "criterion number (repeatable)")->check(CLI::Range(1, int(kCriteria.size())));
  CLI11_PARSE(app, argc, argv);
  if (chosen.empty())
    for (int k = 1; k <= int(kCriteria.size()); ++k) chosen.push_back(k);

  int failed = 0;
  for (int k : chosen) {
    const auto& [name, check] = kCriteria[std::size_t(k - 1)];
    bool pass = false;
    std::string detail;
    try {
      const Outcome o = check();
      pass = o.pass;
      detail = o.detail.str();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    failed += !pass;
    std::cout << "criterion " << k << ": " << (pass ? "PASS" : "FAIL") << "  " << name << "  [" << detail << "]"
              << std::endl;
  }
  return failed ? 1 : 0;
}
