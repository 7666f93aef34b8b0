#include "commands.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fkclock/dynamics.hpp"
#include "fkclock/fk_hamiltonian.hpp"
#include "fkclock/noise.hpp"
#include "fkclock/observables.hpp"
#include "io.hpp"

namespace fkclock::cli {

namespace {

constexpr std::size_t kSpectrumWidthCap = 12;

struct ThetaSource {
  std::vector<double> theta;
  bool converged = true;
  std::string origin;
};

/// θ from a file, or a fresh VQE run whose artifacts land in `dir`.
ThetaSource obtain_theta(ExperimentConfig& cfg, const std::string& path, std::size_t max_depth,
                         const std::filesystem::path& dir, std::ostream& log) {
  if (!path.empty()) {
    ThetaSource s{load_theta(path, cfg), true, path};
    const json j = read_json(path);
    if (j.contains("converged")) s.converged = j["converged"].get<bool>();
    return s;
  }
  const auto attempts = optimise(cfg, max_depth);
  const VqeRecord& rec = attempts.back();
  cfg.depth = rec.depth;
  write_trace(dir / "trace.csv", rec);
  write_json(dir / "theta.json", theta_to_json(cfg, rec));
  log << "vqe: depth " << rec.depth << " E/E1 = " << rec.ratio() << (rec.converged ? " (converged)\n" : " (not converged)\n");
  return {rec.theta, rec.converged, "vqe"};
}

json string_counts(const FkHamiltonian& h) {
  const StringCountReport r = count_strings(h);
  return {
      {"clock_strings_c2", r.clock_strings_c2},
      {"clock_strings_c2_merged", r.clock_strings_c2_merged},
      {"c2_terms", r.c2_terms},
      {"c2_groups", r.c2_groups},
      {"c01_terms", r.c01_terms},
      {"c01_groups", r.c01_groups},
      {"total_terms", r.total_terms},
      {"total_groups", r.total_groups},
  };
}

json ansatz_counts(const ExperimentConfig& cfg) {
  const AnsatzSpec a = cfg.ansatz();
  const Circuit c = build_ansatz(a);
  return {
      {"depth", a.depth},
      {"parameters", a.num_parameters()},
      {"cx_ansatz", a.num_cnots()},
      {"cx_ansatz_tally", tally_cnots(c)},
  };
}

json trotter_counts(const ExperimentConfig& cfg) {
  const FkConfig fk = cfg.fk_config();
  const TrotterCircuit top = trotter_circuit(fk.levels() - 1, fk);
  return {
      {"zz_layers", zz_layers(fk)},
      {"cx_trotter", cx_count(CxKind::Trotter, fk)},
      {"cx_trotter_tally", tally_cnots(top.circuit)},
  };
}

}  // namespace

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<VqeRecord> optimise(const ExperimentConfig& cfg, std::size_t max_depth) {
  const VqeProblem p = make_problem(cfg);
  return run_vqe_escalating(p, std::max(max_depth, cfg.depth));
}

int cmd_build(const Context& ctx, const BuildOptions& o) {
  const ExperimentConfig& cfg = ctx.cfg;
  cfg.validate();
  const auto dir = fresh_run_dir(ctx.out_root, "build");
  const FkHamiltonian h(cfg.fk_config());

  json counts = string_counts(h);
  counts.update(ansatz_counts(cfg));
  counts.update(trotter_counts(cfg));
  write_json(dir / "counts.json", counts);

  json gap{{"gap_formula", gap_formula(cfg.n_aux)}};
  if (h.width() <= kSpectrumWidthCap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    std::vector<double> low(ev.data(), ev.data() + std::min<Eigen::Index>(ev.size(), 8));
    gap["lowest_eigenvalues"] = low;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (ev[k] > 1e-9) {
        gap["smallest_positive_eigenvalue"] = ev[k];
        break;
      }
    }
    const StateVector hist = history_state(cfg.fk_config());
    gap["history_energy"] = h.energy(hist);
  }
  write_json(dir / "gap.json", gap);

  if (o.dump_pauli) {
    std::ofstream out(dir / "hamiltonian.txt");
    out << h.expanded().to_text();
  }
  if (o.dump_clock) {
    const FkConfig fk = cfg.fk_config();
    CsvWriter csv(dir / "clock.csv", {"level", "code", "bits", "time"});
    for (std::size_t i = 0; i < fk.levels(); ++i) {
      csv.cell(i).cell(static_cast<unsigned long long>(encode(i, fk.clock))).cell(encode_bits(i, fk.clock)).cell(fk.level_time(i));
      csv.end_row();
    }
  }
  write_json(dir / "meta.json", make_meta(cfg, "build", ctx.argv));
  ctx.out() << "build: " << counts["total_terms"] << " Pauli terms in " << counts["total_groups"]
            << " commuting groups, E1 = " << gap["gap_formula"] << "\n"
            << "wrote " << dir.string() << "\n";
  return kExitOk;
}

int cmd_vqe(const Context& ctx, const VqeOptions& o) {
  ExperimentConfig cfg = ctx.cfg;
  cfg.validate();
  const auto dir = fresh_run_dir(ctx.out_root, "vqe");
  const auto attempts = optimise(cfg, o.max_depth);
  for (const auto& rec : attempts) {
    if (attempts.size() > 1) write_trace(dir / ("trace_d" + std::to_string(rec.depth) + ".csv"), rec);
    ctx.out() << "depth " << rec.depth << ": " << rec.trace.size() << " iterations, E = " << fmt(rec.final_energy)
              << ", E/E1 = " << fmt(rec.ratio()) << (rec.converged ? " (converged)" : "") << "\n";
  }
  const VqeRecord& rec = attempts.back();
  cfg.depth = rec.depth;
  write_trace(dir / "trace.csv", rec);
  write_json(dir / "theta.json", theta_to_json(cfg, rec));
  json meta = make_meta(cfg, "vqe", ctx.argv);
  meta["result"] = {{"depth", rec.depth},
                    {"iterations", rec.trace.size()},
                    {"energy", rec.final_energy},
                    {"e1", rec.e1},
                    {"ratio", rec.ratio()},
                    {"converged", rec.converged},
                    {"wall_seconds", rec.trace.empty() ? 0.0 : rec.trace.back().wall_seconds}};
  write_json(dir / "meta.json", meta);
  ctx.out() << "wrote " << dir.string() << "\n";
  return rec.converged ? kExitOk : kExitNotConverged;
}

int cmd_trotter(const Context& ctx, const TrotterOptions& o) {
  ExperimentConfig cfg = ctx.cfg;
  cfg.validate();
  const auto dir = fresh_run_dir(ctx.out_root, "trotter");
  const ThetaSource src = obtain_theta(cfg, o.theta, o.max_depth, dir, ctx.out());
  const FkConfig fk = cfg.fk_config();
  const auto profile = infidelity_profile(cfg.ansatz(), src.theta, fk);

  CsvWriter csv(dir / "trotter.csv", {"level", "time", "infidelity"});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    csv.cell(i).cell(fk.level_time(i)).cell(profile[i] ? fmt(*profile[i]) : std::string("nan"));
    csv.end_row();
  }
  json summary = trotter_counts(cfg);
  summary.update(ansatz_counts(cfg));
  const bool defined = std::all_of(profile.begin(), profile.end(), [](const auto& v) { return v.has_value(); });
  summary["mean_integrated_infidelity"] =
      defined ? json(mean_integrated_infidelity(std::span<const std::optional<double>>(profile), cfg.total_time))
              : json(nullptr);
  write_json(dir / "summary.json", summary);
  json meta = make_meta(cfg, "trotter", ctx.argv);
  meta["theta_source"] = src.origin;
  write_json(dir / "meta.json", meta);
  ctx.out() << "trotter: mean integrated infidelity " << summary["mean_integrated_infidelity"] << "\nwrote "
            << dir.string() << "\n";
  return src.converged ? kExitOk : kExitNotConverged;
}

int cmd_observe(const Context& ctx, const ObserveOptions& o) {
  ExperimentConfig cfg = ctx.cfg;
  std::vector<double> theta;
  if (!o.theta.empty()) theta = load_theta(o.theta, cfg);
  cfg.validate();
  const auto dir = fresh_run_dir(ctx.out_root, "observe");
  const FkConfig fk = cfg.fk_config();
  const StateVector psi = o.theta.empty()
                              ? history_state(fk)
                              : circuit_state(build_vfk_circuit(cfg.ansatz(), fk.initial_state), theta);

  const auto probs = clock_probabilities(psi, fk.clock);
  CsvWriter csv(dir / "observe.csv", {"level", "time", "magnetization", "clock_prob"});
  for (std::size_t i = 0; i < fk.levels(); ++i) {
    const std::string m = probs[i] < kMinBranchProbability ? "nan" : fmt(magnetization(psi, i, fk.clock));
    csv.cell(i).cell(fk.level_time(i)).cell(m).cell(probs[i]);
    csv.end_row();
  }

  const auto refs = reference_states(fk);
  const ExactEvolver exact(fk.tfim);
  const StateVector psi0 = StateVector::basis(fk.n_spins(), fk.initial_state);
  const PauliSum mz = average_z(fk.n_spins());
  CsvWriter ref(dir / "reference.csv", {"level", "time", "magnetization_trotter", "magnetization_exact"});
  for (std::size_t i = 0; i < fk.levels(); ++i) {
    ref.cell(i).cell(fk.level_time(i)).cell(expectation(refs[i], mz)).cell(expectation(exact.evolve(psi0, fk.level_time(i)), mz));
    ref.end_row();
  }
  json meta = make_meta(cfg, "observe", ctx.argv);
  meta["state"] = o.theta.empty() ? "exact history state" : o.theta;
  write_json(dir / "meta.json", meta);
  ctx.out() << "wrote " << dir.string() << "\n";
  return kExitOk;
}

int cmd_echo(const Context& ctx, const EchoOptions& o) {
  ExperimentConfig cfg = ctx.cfg;
  std::vector<double> theta;
  if (!o.theta.empty()) theta = load_theta(o.theta, cfg);
  cfg.validate();
  if (o.shots == 0) throw std::invalid_argument("invalid config field 'shots': must be at least 1");
  bool weighted_form = o.theta.empty();
  if (o.estimator == "weighted") weighted_form = true;
  else if (o.estimator == "conditional") weighted_form = false;
  else if (o.estimator != "auto") throw std::invalid_argument("invalid config field 'estimator': use auto, weighted or conditional");

  const auto dir = fresh_run_dir(ctx.out_root, "echo");
  const FkConfig fk = cfg.fk_config();
  const StateVector psi = o.theta.empty()
                              ? history_state(fk)
                              : circuit_state(build_vfk_circuit(cfg.ansatz(), fk.initial_state), theta);
  const double dof = static_cast<double>(fk.n_spins());

  CsvWriter csv(dir / "echo.csv", {"time", "L", "lambda", "estimator", "stderr"});
  for (std::size_t j = 0; j < fk.levels(); ++j) {
    const double l = std::norm(loschmidt_direct(psi, 0, j, fk.clock));
    const auto re = loschmidt_hadamard(psi, fk.clock, 0, j, EchoPart::Real, o.shots, task_seed(cfg.seed, 2 * j));
    const auto im = loschmidt_hadamard(psi, fk.clock, 0, j, EchoPart::Imaginary, o.shots, task_seed(cfg.seed, 2 * j + 1));
    const double x = weighted_form ? re.weighted : re.conditional;
    const double y = weighted_form ? im.weighted : im.conditional;
    const double sx = weighted_form ? re.weighted_stderr : re.conditional_stderr;
    const double sy = weighted_form ? im.weighted_stderr : im.conditional_stderr;
    const double est = x * x + y * y;
    const double se = std::sqrt(4.0 * x * x * sx * sx + 4.0 * y * y * sy * sy + 2.0 * (sx * sx * sx * sx + sy * sy * sy * sy));
    csv.cell(fk.level_time(j)).cell(l).cell(rate_function(l, dof)).cell(est).cell(se);
    csv.end_row();
  }
  json meta = make_meta(cfg, "echo", ctx.argv);
  meta["state"] = o.theta.empty() ? "exact history state" : o.theta;
  meta["shots"] = o.shots;
  meta["estimator"] = weighted_form ? "weighted (2^na (N0-N1)/N)" : "conditional ((N0-N1)/(N0+N1))";
  write_json(dir / "meta.json", meta);
  ctx.out() << "wrote " << dir.string() << "\n";
  return kExitOk;
}

int cmd_noise_sweep(const Context& ctx, const SweepOptions& o) {
  ExperimentConfig cfg = ctx.cfg;
  cfg.validate();
  const auto dir = fresh_run_dir(ctx.out_root, "noise-sweep");
  json device;
  double p1 = cfg.p1;
  if (!cfg.device.empty()) {
    const DeviceProfile d = device_preset(cfg.device);
    const NoiseParams r = rates_from_device(d);
    p1 = r.p1a;
    device = {{"name", d.name}, {"t1_us", d.t1}, {"t2_us", d.t2}, {"tau1_us", d.tau1}, {"tau2_us", d.tau2},
              {"p1a", r.p1a}, {"p1d", r.p1d}, {"p2a", r.p2a}, {"p2d", r.p2d}};
  }
  const std::vector<double> grid = cfg.p2 ? std::vector<double>{*cfg.p2} : log_grid(o.p2_min, o.p2_max, o.points);
  const ThetaSource src = obtain_theta(cfg, o.theta, o.max_depth, dir, ctx.out());
  const auto rows = noise_sweep(cfg.fk_config(), cfg.ansatz(), src.theta, p1, grid);

  CsvWriter csv(dir / "noise_sweep.csv", {"p2", "f_vfk_mean", "f_vfk_std", "f_ts_mean", "f_ts_std", "ratio"});
  for (const auto& r : rows) {
    csv.cell(r.p2).cell(r.f_vfk_mean).cell(r.f_vfk_std).cell(r.f_ts_mean).cell(r.f_ts_std).cell(r.ratio);
    csv.end_row();
  }
  json meta = make_meta(cfg, "noise-sweep", ctx.argv);
  meta["theta_source"] = src.origin;
  meta["theta_training"] = "noiseless";
  meta["p1_used"] = p1;
  if (!device.is_null()) meta["device"] = device;
  write_json(dir / "meta.json", meta);
  ctx.out() << "wrote " << dir.string() << "\n";
  return src.converged ? kExitOk : kExitNotConverged;
}

int cmd_count(const Context& ctx, const CountOptions& o) {
  const ExperimentConfig& cfg = ctx.cfg;
  cfg.validate();
  const bool all = !o.ansatz && !o.trotter && !o.strings;
  const auto dir = fresh_run_dir(ctx.out_root, "count");
  json counts = json::object();
  if (all || o.ansatz) counts.update(ansatz_counts(cfg));
  if (all || o.trotter) counts.update(trotter_counts(cfg));
  if (all || o.strings) counts.update(string_counts(FkHamiltonian(cfg.fk_config())));
  write_json(dir / "counts.json", counts);
  write_json(dir / "meta.json", make_meta(cfg, "count", ctx.argv));
  ctx.out() << counts.dump(2) << "\nwrote " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace fkclock::cli
