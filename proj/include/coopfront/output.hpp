#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace coop {

// Fixed 17 significant digits so identical runs give byte-identical CSV.
std::string format_double(double x);

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::string str() const;
  std::size_t rows() const { return rows_; }

private:
  std::vector<std::string> header_;
  std::string body_;
  std::size_t rows_ = 0;
};

std::string sha256_hex(std::string_view data);

struct FileRecord {
  std::string path;  // relative to the run directory
  std::string sha256;
  std::size_t bytes = 0;
};

// Writes data to dir/name and records its checksum.
FileRecord write_artifact(const std::string& dir, const std::string& name, const std::string& data);

struct RunManifest {
  std::string command;
  std::string config_hash;
  nlohmann::json effective_config;
  nlohmann::json versions;
  double dt = 0.0;
  nlohmann::json neglected_tail_mass = nlohmann::json::object();
  double wall_time_s = 0.0;
  nlohmann::json verdicts = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  bool seedless = true;
  bool test_mode = false;
  std::vector<FileRecord> files;

  nlohmann::json to_json() const;
};

nlohmann::json build_versions();

}  // namespace coop
