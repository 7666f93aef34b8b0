#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "fkclock/cli.hpp"
#include "fkclock/version.hpp"

namespace fkclock::cli {

namespace {

/// FKCLOCK_<FLAG>, e.g. --max-iter → FKCLOCK_MAX_ITER.
std::string env_name(const std::string& flag) {
  std::string s = "FKCLOCK_";
  for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

template <typename T>
CLI::Option* opt(CLI::App& app, const std::string& flag, T& target, const std::string& help) {
  return app.add_option("--" + flag, target, help)->envname(env_name(flag))->capture_default_str();
}

CLI::Option* flag(CLI::App& app, const std::string& name, bool& target, const std::string& help) {
  return app.add_flag("--" + name, target, help)->envname(env_name(name));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational Feynman-Kitaev clock simulations of the transverse-field Ising chain", "fkclock"};
  // -h is taken by the transverse field, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Flat TOML file whose keys mirror the flags");
  app.require_subcommand(1);

  Context ctx;
  ctx.argv = args;
  ctx.log = &out;
  ExperimentConfig& c = ctx.cfg;
  std::string encoding = "gray", form = "alternating", mapping = "linear", out_root = "runs";
  std::optional<double> p2;
  bool carry = false;

  opt(app, "ns", c.n_spins, "Number of spins")->check(CLI::Range(2, 20));
  opt(app, "na", c.n_aux, "Number of clock qubits")->check(CLI::Range(1, 24));
  opt(app, "j", c.coupling, "ZZ coupling J");
  opt(app, "h", c.field, "Transverse field h");
  opt(app, "te", c.total_time, "Total simulated time T_e")->check(CLI::NonNegativeNumber);
  opt(app, "encoding", encoding, "Clock encoding")->check(CLI::IsMember({"gray", "binary"}));
  opt(app, "form", form, "Hop unitaries")->check(CLI::IsMember({"single", "alternating"}));
  opt(app, "depth", c.depth, "Ansatz depth")->check(CLI::PositiveNumber);
  opt(app, "initial", c.initial, "Initial physical bit-string (default all zeros)");
  opt(app, "stages", c.anneal.stages, "Annealing stages k0")->check(CLI::PositiveNumber);
  opt(app, "mapping", mapping, "Annealing dt mapping")->check(CLI::IsMember({"linear", "root"}));
  opt(app, "lr", c.optimizer.learning_rate, "ADAM learning rate")->check(CLI::PositiveNumber);
  opt(app, "beta1", c.optimizer.beta1, "ADAM beta1");
  opt(app, "beta2", c.optimizer.beta2, "ADAM beta2");
  opt(app, "adam-eps", c.optimizer.epsilon, "ADAM epsilon");
  opt(app, "max-iter", c.optimizer.max_iter, "Iteration cap per annealing stage");
  opt(app, "ratio", c.optimizer.convergence_ratio, "Convergence threshold on E/E1");
  opt(app, "stage-grad-tol", c.optimizer.stage_grad_tol, "Gradient-norm stop for intermediate stages");
  opt(app, "jitter", c.optimizer.jitter, "Uniform jitter of the initial parameters");
  flag(app, "carry-moments", carry, "Keep ADAM moments across annealing stages");
  opt(app, "p1", c.p1, "Single-qubit error probability");
  opt(app, "p2", p2, "Two-qubit error probability (noise-sweep: single point)");
  opt(app, "device", c.device, "Device preset for error rates")->check(CLI::IsMember({"", "peekskill", "hanoi", "ionq11"}));
  opt(app, "seed", c.seed, "Random seed");
  opt(app, "out", out_root, "Root directory for run outputs");
  opt(app, "threads", c.threads, "Worker threads for gradients")->check(CLI::PositiveNumber);

  BuildOptions build_o;
  auto* build = app.add_subcommand("build", "Assemble C, write counts, gap values and optional dumps")->fallthrough();
  build->add_flag("--dump-clock", build_o.dump_clock, "Write the level/code table");
  build->add_flag("--dump-pauli", build_o.dump_pauli, "Write the Pauli expansion of C");

  VqeOptions vqe_o;
  auto* vqe = app.add_subcommand("vqe", "Optimise the ansatz against C")->fallthrough();
  vqe->add_option("--max-depth", vqe_o.max_depth, "Escalate depth up to this value on non-convergence");

  TrotterOptions trotter_o;
  auto* trotter = app.add_subcommand("trotter", "Per-level infidelity against Trotter reference states")->fallthrough();
  trotter->add_option("--theta", trotter_o.theta, "theta.json from a vqe run (default: optimise now)");
  trotter->add_option("--max-depth", trotter_o.max_depth, "Depth cap when optimising");

  ObserveOptions observe_o;
  auto* observe = app.add_subcommand("observe", "Magnetization and clock probabilities per level")->fallthrough();
  observe->add_option("--theta", observe_o.theta, "theta.json (default: exact history state)");

  EchoOptions echo_o;
  auto* echo = app.add_subcommand("echo", "Loschmidt echo and rate function, direct and Hadamard test")->fallthrough();
  echo->add_option("--theta", echo_o.theta, "theta.json (default: exact history state)");
  echo->add_option("--shots", echo_o.shots, "Shots per Hadamard test")->capture_default_str();
  echo->add_option("--estimator", echo_o.estimator, "auto, weighted or conditional")
      ->check(CLI::IsMember({"auto", "weighted", "conditional"}));

  SweepOptions sweep_o;
  auto* sweep = app.add_subcommand("noise-sweep", "Noisy VFK vs Trotter fidelities over p2")->fallthrough();
  sweep->add_option("--theta", sweep_o.theta, "theta.json (default: optimise now)");
  sweep->add_option("--p2-min", sweep_o.p2_min, "Smallest p2")->capture_default_str();
  sweep->add_option("--p2-max", sweep_o.p2_max, "Largest p2")->capture_default_str();
  sweep->add_option("--points", sweep_o.points, "Log-spaced grid points")->capture_default_str();
  sweep->add_option("--max-depth", sweep_o.max_depth, "Depth cap when optimising");

  CountOptions count_o;
  auto* count = app.add_subcommand("count", "Parameter, CX and Pauli-string counts")->fallthrough();
  count->add_flag("--ansatz", count_o.ansatz, "Ansatz parameters and CX only");
  count->add_flag("--trotter", count_o.trotter, "Trotter CX only");
  count->add_flag("--strings", count_o.strings, "Pauli-string counts only");

  ReproduceOptions repro_o;
  auto* repro = app.add_subcommand("reproduce", "Regenerate the datasets behind one figure")->fallthrough();
  repro->add_option("figure", repro_o.figure, "fig2, fig3, fig4, fig5 or fig6")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6"}));
  repro->add_option("--scale", repro_o.scale, "desk or full")->check(CLI::IsMember({"desk", "full"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    c.encoding = encoding_from_string(encoding);
    c.form = split_form_from_string(form);
    c.anneal.mapping = anneal_mapping_from_string(mapping);
    c.optimizer.reset_moments = !carry;
    c.p2 = p2;
    ctx.out_root = out_root;

    if (build->parsed()) return cmd_build(ctx, build_o);
    if (vqe->parsed()) return cmd_vqe(ctx, vqe_o);
    if (trotter->parsed()) return cmd_trotter(ctx, trotter_o);
    if (observe->parsed()) return cmd_observe(ctx, observe_o);
    if (echo->parsed()) return cmd_echo(ctx, echo_o);
    if (sweep->parsed()) return cmd_noise_sweep(ctx, sweep_o);
    if (count->parsed()) return cmd_count(ctx, count_o);
    if (repro->parsed()) return cmd_reproduce(ctx, repro_o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace fkclock::cli
