#include <cmath>
#include <stdexcept>

#include "commands.hpp"
#include "fkclock/dynamics.hpp"
#include "fkclock/noise.hpp"
#include "fkclock/observables.hpp"
#include "io.hpp"

namespace fkclock::cli {

namespace {

struct Scale {
  bool full = false;
  std::size_t max_depth = 4;
};

ExperimentConfig sized(const ExperimentConfig& base, std::size_t ns, std::size_t na) {
  ExperimentConfig c = base;
  c.n_spins = ns;
  c.n_aux = na;
  c.initial.clear();
  c.depth = 1;
  return c;
}

std::string tag(std::size_t ns, std::size_t na) {
  return "ns" + std::to_string(ns) + "_na" + std::to_string(na);
}

void warn_full(std::ostream& log, const std::string& fig) {
  log << "warning: " << fig << " at full scale runs the largest registers and can take hours\n";
}

VqeRecord converge(const ExperimentConfig& cfg, const Scale& s, std::ostream& log) {
  const auto attempts = optimise(cfg, s.max_depth);
  const VqeRecord& rec = attempts.back();
  log << "  ns=" << cfg.n_spins << " na=" << cfg.n_aux << ": depth " << rec.depth << ", E/E1 = " << fmt(rec.ratio())
      << (rec.converged ? "" : " (not converged)") << "\n";
  return rec;
}

void fig2(const ExperimentConfig& base, const Scale& s, const std::filesystem::path& dir, std::ostream& log) {
  const std::size_t ns = s.full ? 6 : 2;
  const std::vector<std::size_t> nas = s.full ? std::vector<std::size_t>{2, 3, 4, 5, 6} : std::vector<std::size_t>{2, 3};
  for (std::size_t na : nas) {
    ExperimentConfig cfg = sized(base, ns, na);
    const VqeRecord rec = converge(cfg, s, log);
    cfg.depth = rec.depth;
    const FkConfig fk = cfg.fk_config();
    const StateVector psi = circuit_state(build_vfk_circuit(cfg.ansatz(), fk.initial_state), rec.theta);
    const auto refs = reference_states(fk);
    const ExactEvolver exact(fk.tfim);
    const PauliSum mz = average_z(ns);
    const auto probs = clock_probabilities(psi, fk.clock);
    const auto infid = infidelity_profile(psi, fk);
    CsvWriter csv(dir / ("fig2_" + tag(ns, na) + ".csv"),
                  {"level", "time", "magnetization_vfk", "magnetization_trotter", "magnetization_exact", "clock_prob",
                   "infidelity"});
    for (std::size_t i = 0; i < fk.levels(); ++i) {
      const bool ok = probs[i] >= kMinBranchProbability;
      csv.cell(i).cell(fk.level_time(i)).cell(ok ? fmt(magnetization(psi, i, fk.clock)) : "nan");
      csv.cell(expectation(refs[i], mz));
      csv.cell(expectation(exact.evolve(refs[0], fk.level_time(i)), mz));
      csv.cell(probs[i]).cell(infid[i] ? fmt(*infid[i]) : "nan");
      csv.end_row();
    }
  }
}

void fig3(const ExperimentConfig& base, const Scale& s, const std::filesystem::path& dir, std::ostream& log) {
  const std::vector<std::size_t> nss = s.full ? std::vector<std::size_t>{2, 4, 6} : std::vector<std::size_t>{2};
  const std::vector<std::size_t> nas = s.full ? std::vector<std::size_t>{2, 3, 4, 5, 6} : std::vector<std::size_t>{2, 3, 4};
  std::filesystem::create_directories(dir / "traces");
  CsvWriter csv(dir / "fig3.csv", {"ns", "na", "depth", "iterations", "energy", "e1", "ratio", "converged",
                                   "infidelity_exact"});
  for (std::size_t ns : nss) {
    for (std::size_t na : nas) {
      for (std::size_t d = 1; d <= s.max_depth; ++d) {
        ExperimentConfig cfg = sized(base, ns, na);
        cfg.depth = d;
        const VqeRecord rec = run_vqe(make_problem(cfg));
        const FkConfig fk = cfg.fk_config();
        const StateVector psi = circuit_state(build_vfk_circuit(cfg.ansatz(), fk.initial_state), rec.theta);
        const double inf = 1.0 - std::norm(overlap(history_state(fk), psi));
        write_trace(dir / "traces" / ("trace_" + tag(ns, na) + "_d" + std::to_string(d) + ".csv"), rec);
        csv.cell(ns).cell(na).cell(d).cell(rec.trace.size()).cell(rec.final_energy).cell(rec.e1).cell(rec.ratio());
        csv.cell(rec.converged ? "true" : "false").cell(inf);
        csv.end_row();
        log << "  ns=" << ns << " na=" << na << " d=" << d << ": E/E1 = " << fmt(rec.ratio()) << "\n";
      }
    }
  }
}

void fig4(const ExperimentConfig& base, const Scale& s, const std::filesystem::path& dir, std::ostream& log) {
  const std::vector<std::size_t> nss = s.full ? std::vector<std::size_t>{2, 3, 4, 5, 6} : std::vector<std::size_t>{2};
  const std::vector<std::size_t> nas = s.full ? std::vector<std::size_t>{2, 3, 4, 5, 6} : std::vector<std::size_t>{2, 3, 4};
  CsvWriter csv(dir / "fig4.csv", {"ns", "na", "levels", "depth", "converged", "cx_trotter", "cx_ansatz", "ratio"});
  for (std::size_t ns : nss) {
    for (std::size_t na : nas) {
      const ExperimentConfig cfg = sized(base, ns, na);
      const VqeRecord rec = converge(cfg, s, log);
      const FkConfig fk = cfg.fk_config();
      const std::size_t ts = cx_count(CxKind::Trotter, fk);
      const std::size_t va = cx_count(CxKind::Ansatz, fk, rec.depth);
      csv.cell(ns).cell(na).cell(fk.levels()).cell(rec.depth).cell(rec.converged ? "true" : "false");
      csv.cell(ts).cell(va).cell(static_cast<double>(ts) / static_cast<double>(va));
      csv.end_row();
    }
  }
}

void fig5(const ExperimentConfig& base, const Scale& s, const std::filesystem::path& dir, std::ostream& log) {
  struct Size {
    std::size_t ns, na;
  };
  const std::vector<Size> sizes = s.full ? std::vector<Size>{{2, 6}, {4, 6}, {6, 7}} : std::vector<Size>{{2, 6}, {4, 6}};
  for (const auto& [ns, na] : sizes) {
    const FkConfig fk = sized(base, ns, na).fk_config();
    const auto refs = reference_states(fk);
    const ExactEvolver exact(fk.tfim);
    const double dof = static_cast<double>(ns);
    CsvWriter csv(dir / ("fig5_exact_" + tag(ns, na) + ".csv"),
                  {"time", "L_exact", "lambda_exact", "L_trotter", "lambda_trotter"});
    for (std::size_t i = 0; i < fk.levels(); ++i) {
      const double t = fk.level_time(i);
      const double le = std::norm(overlap(refs[0], exact.evolve(refs[0], t)));
      const double lt = std::norm(overlap(refs[0], refs[i]));
      csv.cell(t).cell(le).cell(rate_function(le, dof)).cell(lt).cell(rate_function(lt, dof));
      csv.end_row();
    }
    log << "  exact echo ns=" << ns << " over " << fk.levels() << " levels\n";
  }

  // Variational history state read out with the sampled Hadamard test.
  ExperimentConfig cfg = sized(base, 2, s.full ? 6 : 3);
  const VqeRecord rec = converge(cfg, s, log);
  cfg.depth = rec.depth;
  const FkConfig fk = cfg.fk_config();
  const StateVector psi = circuit_state(build_vfk_circuit(cfg.ansatz(), fk.initial_state), rec.theta);
  const std::uint64_t shots = 100000;
  CsvWriter csv(dir / ("fig5_vfk_" + tag(2, fk.n_aux()) + ".csv"),
                {"time", "L_direct", "lambda_direct", "L_hadamard", "lambda_hadamard", "stderr"});
  for (std::size_t j = 0; j < fk.levels(); ++j) {
    const double l = std::norm(loschmidt_direct(psi, 0, j, fk.clock));
    const auto re = loschmidt_hadamard(psi, fk.clock, 0, j, EchoPart::Real, shots, task_seed(cfg.seed, 2 * j));
    const auto im = loschmidt_hadamard(psi, fk.clock, 0, j, EchoPart::Imaginary, shots, task_seed(cfg.seed, 2 * j + 1));
    const double x = re.conditional, y = im.conditional;
    const double sx = re.conditional_stderr, sy = im.conditional_stderr;
    const double lh = x * x + y * y;
    const double se = std::sqrt(4.0 * x * x * sx * sx + 4.0 * y * y * sy * sy);
    csv.cell(fk.level_time(j)).cell(l).cell(rate_function(l, 2.0)).cell(lh).cell(rate_function(lh, 2.0)).cell(se);
    csv.end_row();
  }
}

void fig6(const ExperimentConfig& base, const Scale& s, const std::filesystem::path& dir, std::ostream& log) {
  const std::vector<std::size_t> nas = s.full ? std::vector<std::size_t>{2, 3, 4} : std::vector<std::size_t>{2, 3};
  const auto grid = log_grid(1e-4, 1e-1, 12);
  for (std::size_t na : nas) {
    ExperimentConfig cfg = sized(base, 2, na);
    const VqeRecord rec = converge(cfg, s, log);
    cfg.depth = rec.depth;
    const auto rows = noise_sweep(cfg.fk_config(), cfg.ansatz(), rec.theta, base.p1, grid);
    CsvWriter csv(dir / ("fig6_" + tag(2, na) + ".csv"), {"p2", "f_vfk_mean", "f_vfk_std", "f_ts_mean", "f_ts_std", "ratio"});
    for (const auto& r : rows) {
      csv.cell(r.p2).cell(r.f_vfk_mean).cell(r.f_vfk_std).cell(r.f_ts_mean).cell(r.f_ts_std).cell(r.ratio);
      csv.end_row();
    }
  }
  CsvWriter dev(dir / "fig6_devices.csv", {"device", "p1a", "p1d", "p2a", "p2d"});
  for (const auto& name : device_preset_names()) {
    const NoiseParams r = rates_from_device(device_preset(name));
    dev.cell(name).cell(r.p1a).cell(r.p1d).cell(r.p2a).cell(r.p2d);
    dev.end_row();
  }
}

}  // namespace

int cmd_reproduce(const Context& ctx, const ReproduceOptions& o) {
  if (o.scale != "desk" && o.scale != "full") {
    throw std::invalid_argument("invalid config field 'scale': use desk or full");
  }
  const Scale s{o.scale == "full", o.scale == "full" ? 8u : 4u};
  using Fn = void (*)(const ExperimentConfig&, const Scale&, const std::filesystem::path&, std::ostream&);
  Fn fn = nullptr;
  if (o.figure == "fig2") fn = fig2;
  else if (o.figure == "fig3") fn = fig3;
  else if (o.figure == "fig4") fn = fig4;
  else if (o.figure == "fig5") fn = fig5;
  else if (o.figure == "fig6") fn = fig6;
  else throw std::invalid_argument("invalid config field 'figure': use fig2, fig3, fig4, fig5 or fig6");

  ctx.cfg.validate();
  const auto dir = fresh_run_dir(ctx.out_root, "reproduce-" + o.figure + "-" + o.scale);
  if (s.full) warn_full(ctx.out(), o.figure);
  ctx.out() << "reproduce " << o.figure << " (" << o.scale << ")\n";
  fn(ctx.cfg, s, dir, ctx.out());
  json meta = make_meta(ctx.cfg, "reproduce", ctx.argv);
  meta["figure"] = o.figure;
  meta["scale"] = o.scale;
  meta["max_depth"] = s.max_depth;
  write_json(dir / "meta.json", meta);
  ctx.out() << "wrote " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace fkclock::cli
