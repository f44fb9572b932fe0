#include "coopfront/output.hpp"

#include <fftw3.h>
#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "coopfront/errors.hpp"

namespace coop {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  require(row.size() == header_.size(), "CSV row width does not match the header");
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(row[i]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  return out + body_;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::InvalidArgument, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

FileRecord write_artifact(const std::string& dir, const std::string& name, const std::string& data) {
  namespace fs = std::filesystem;
  fs::path path = fs::path(dir) / name;
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path.string());
  return {name, sha256_hex(data), data.size()};
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json files_json = nlohmann::json::array();
  for (const FileRecord& f : files)
    files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return {{"command", command},
          {"config_hash", config_hash},
          {"effective_config", effective_config},
          {"versions", versions},
          {"dt", dt},
          {"neglected_tail_mass", neglected_tail_mass},
          {"wall_time_s", wall_time_s},
          {"verdicts", verdicts},
          {"results", results},
          {"seedless", seedless},
          {"test_mode", test_mode},
          {"files", files_json}};
}

nlohmann::json build_versions() {
  return {{"coopfront", "0.1.0"},
          {"compiler", std::string(__VERSION__)},
          {"cxx_standard", static_cast<long>(__cplusplus)},
          {"fftw", std::string(fftw_version)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace coop
