#include "io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#include "fkclock/version.hpp"

namespace fkclock::cli {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : CsvWriter(path, std::vector<std::string>(header)) {}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (filled_ == columns_) throw std::logic_error("CSV row has too many cells");
  out_ << (filled_++ ? "," : "") << v;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(fmt(v)); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }
CsvWriter& CsvWriter::cell(unsigned long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CSV row has too few cells");
  out_ << '\n';
  filled_ = 0;
}

std::string utc_timestamp(bool compact) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, compact ? "%Y%m%dT%H%M%SZ" : "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path fresh_run_dir(const std::filesystem::path& root, const std::string& stem) {
  std::filesystem::create_directories(root);
  const std::string base = stem + "-" + utc_timestamp(true);
  for (int k = 0;; ++k) {
    const auto dir = root / (k == 0 ? base : base + "-" + std::to_string(k));
    // create_directory reports false when the directory already exists.
    if (std::filesystem::create_directory(dir)) return dir;
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["ns"] = cfg.n_spins;
  j["na"] = cfg.n_aux;
  j["j"] = cfg.coupling;
  j["h"] = cfg.field;
  j["te"] = cfg.total_time;
  j["dt"] = cfg.dt();
  j["encoding"] = to_string(cfg.encoding);
  j["form"] = to_string(cfg.form);
  j["depth"] = cfg.depth;
  j["initial"] = cfg.initial.empty() ? std::string(cfg.n_spins, '0') : cfg.initial;
  j["stages"] = cfg.anneal.stages;
  j["mapping"] = to_string(cfg.anneal.mapping);
  j["lr"] = cfg.optimizer.learning_rate;
  j["beta1"] = cfg.optimizer.beta1;
  j["beta2"] = cfg.optimizer.beta2;
  j["adam-eps"] = cfg.optimizer.epsilon;
  j["max-iter"] = cfg.optimizer.max_iter;
  j["ratio"] = cfg.optimizer.convergence_ratio;
  j["stage-grad-tol"] = cfg.optimizer.stage_grad_tol;
  j["jitter"] = cfg.optimizer.jitter;
  j["carry-moments"] = !cfg.optimizer.reset_moments;
  j["p1"] = cfg.p1;
  j["p2"] = cfg.p2 ? json(*cfg.p2) : json(nullptr);
  j["device"] = cfg.device;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

json make_meta(const ExperimentConfig& cfg, const std::string& subcommand,
               const std::vector<std::string>& argv) {
  json j;
  j["tool"] = "fkclock";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["argv"] = argv;
  j["created_utc"] = utc_timestamp(false);
  j["seed"] = cfg.seed;
  j["config"] = config_to_json(cfg);
  j["gate_decompositions"] = {
      {"H", "RZ(pi/2) RX(pi/2) RZ(pi/2), global phase dropped"},
      {"SDG", "RZ(-pi/2), global phase dropped"},
      {"X", "RX(pi), global phase dropped"},
      {"RZZ", "CNOT RZ CNOT"},
  };
  return j;
}

json theta_to_json(const ExperimentConfig& cfg, const VqeRecord& rec) {
  json j;
  j["ns"] = cfg.n_spins;
  j["na"] = cfg.n_aux;
  j["depth"] = rec.depth;
  j["initial"] = cfg.initial.empty() ? std::string(cfg.n_spins, '0') : cfg.initial;
  j["encoding"] = to_string(cfg.encoding);
  j["form"] = to_string(cfg.form);
  j["te"] = cfg.total_time;
  j["j"] = cfg.coupling;
  j["h"] = cfg.field;
  j["energy"] = rec.final_energy;
  j["e1"] = rec.e1;
  j["ratio"] = rec.ratio();
  j["converged"] = rec.converged;
  j["theta"] = rec.theta;
  return j;
}

std::vector<double> load_theta(const std::filesystem::path& path, ExperimentConfig& cfg) {
  const json j = read_json(path);
  if (!j.contains("theta") || !j["theta"].is_array()) throw std::invalid_argument("theta file lacks a 'theta' array");
  cfg.n_spins = j.at("ns").get<std::size_t>();
  cfg.n_aux = j.at("na").get<std::size_t>();
  cfg.depth = j.at("depth").get<std::size_t>();
  if (j.contains("initial")) cfg.initial = j["initial"].get<std::string>();
  if (j.contains("encoding")) cfg.encoding = encoding_from_string(j["encoding"].get<std::string>());
  if (j.contains("form")) cfg.form = split_form_from_string(j["form"].get<std::string>());
  auto theta = j["theta"].get<std::vector<double>>();
  if (theta.size() != cfg.ansatz().num_parameters()) {
    throw std::invalid_argument("theta file has " + std::to_string(theta.size()) + " parameters, ansatz needs " +
                                std::to_string(cfg.ansatz().num_parameters()));
  }
  return theta;
}

void write_trace(const std::filesystem::path& path, const VqeRecord& rec) {
  CsvWriter csv(path, {"iter", "stage", "energy", "grad_norm"});
  for (const auto& r : rec.trace) {
    csv.cell(r.iter).cell(r.stage).cell(r.energy).cell(r.grad_norm);
    csv.end_row();
  }
}

}  // namespace fkclock::cli
