#include "qhqr/report.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <stdexcept>
#include <unistd.h>

namespace qhqr {

bool AssertionLog::check(bool ok, std::string id, std::string detail) {
  ++total_;
  if (!ok)
    failures_.push_back({std::move(id), std::move(detail)});
  return ok;
}

void AssertionLog::merge(const AssertionLog &other) {
  total_ += other.total_;
  failures_.insert(failures_.end(), other.failures_.begin(), other.failures_.end());
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
      throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string matrix_csv(const OperatorMatrix &m) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "row_index,col_index,re,im,std_err\n");
  const auto dim = m.entries.rows();
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto v = m.entries(r, c);
      const double se = m.entry_errors ? (*m.entry_errors)(r, c) : 0.0;
      fmt::format_to(std::back_inserter(buf), "{},{},{:.17g},{:.17g},{:.17g}\n", r, c,
                     v.real(), v.imag(), se);
    }
  return fmt::to_string(buf);
}

std::string report_numerics(const std::string &report_yaml) {
  YAML::Node doc = YAML::Load(report_yaml);
  if (doc.IsMap())
    doc.remove("timing");
  YAML::Emitter out;
  out << doc;
  return out.c_str();
}

} // namespace qhqr
