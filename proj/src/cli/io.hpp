#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "fkclock/config.hpp"
#include "fkclock/vqe.hpp"

namespace fkclock::cli {

using nlohmann::json;

/// %.17g rendering used for every CSV cell.
std::string fmt(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(unsigned long long v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<unsigned long long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t filled_ = 0;
};

/// Creates `<root>/<stem>-<UTC timestamp>[-k]`, never reusing an existing directory.
std::filesystem::path fresh_run_dir(const std::filesystem::path& root, const std::string& stem);

json config_to_json(const ExperimentConfig& cfg);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Full resolved config, tool version, subcommand and argv.
json make_meta(const ExperimentConfig& cfg, const std::string& subcommand,
               const std::vector<std::string>& argv);

json theta_to_json(const ExperimentConfig& cfg, const VqeRecord& rec);
/// Loads θ and copies the register shape and depth it was trained for into `cfg`.
std::vector<double> load_theta(const std::filesystem::path& path, ExperimentConfig& cfg);

void write_trace(const std::filesystem::path& path, const VqeRecord& rec);

std::string utc_timestamp(bool compact);

}  // namespace fkclock::cli
