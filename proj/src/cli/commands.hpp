#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fkclock/cli.hpp"
#include "fkclock/config.hpp"
#include "fkclock/vqe.hpp"

namespace fkclock::cli {

struct Context {
  ExperimentConfig cfg;
  std::filesystem::path out_root = "runs";
  std::vector<std::string> argv;
  std::ostream* log = nullptr;

  std::ostream& out() const { return *log; }
};

struct BuildOptions {
  bool dump_clock = false;
  bool dump_pauli = false;
};

struct VqeOptions {
  std::size_t max_depth = 0;  // 0: no escalation
};

struct TrotterOptions {
  std::string theta;
  std::size_t max_depth = 0;
};

struct ObserveOptions {
  std::string theta;
};

struct EchoOptions {
  std::string theta;
  std::uint64_t shots = 100000;
  std::string estimator = "auto";  // auto, weighted, conditional
};

struct SweepOptions {
  std::string theta;
  double p2_min = 1e-4;
  double p2_max = 1e-1;
  std::size_t points = 12;
  std::size_t max_depth = 0;
};

struct CountOptions {
  bool ansatz = false;
  bool trotter = false;
  bool strings = false;
};

struct ReproduceOptions {
  std::string figure;
  std::string scale = "desk";
};

int cmd_build(const Context& ctx, const BuildOptions& o);
int cmd_vqe(const Context& ctx, const VqeOptions& o);
int cmd_trotter(const Context& ctx, const TrotterOptions& o);
int cmd_observe(const Context& ctx, const ObserveOptions& o);
int cmd_echo(const Context& ctx, const EchoOptions& o);
int cmd_noise_sweep(const Context& ctx, const SweepOptions& o);
int cmd_count(const Context& ctx, const CountOptions& o);
int cmd_reproduce(const Context& ctx, const ReproduceOptions& o);

/// Runs the VQE at cfg.depth, escalating to max_depth when it is larger.
std::vector<VqeRecord> optimise(const ExperimentConfig& cfg, std::size_t max_depth);

/// Seed for independent task `task` of a run seeded with `seed`.
std::uint64_t task_seed(std::uint64_t seed, std::uint64_t task);

}  // namespace fkclock::cli
