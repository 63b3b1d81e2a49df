#pragma once

#include "qhqr/toeplitz.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qhqr {

struct AssertionFailure {
  std::string check;
  std::string detail;
};

/// Running tally of the checks a command makes.
class AssertionLog {
public:
  /// Records one check; returns ok.
  bool check(bool ok, std::string id, std::string detail = {});
  void merge(const AssertionLog &other);

  int total() const { return total_; }
  int failed() const { return static_cast<int>(failures_.size()); }
  bool passed() const { return failures_.empty(); }
  const std::vector<AssertionFailure> &failures() const { return failures_; }

private:
  int total_ = 0;
  std::vector<AssertionFailure> failures_;
};

/// Writes to a sibling temp file, then renames over `path`. Creates the
/// parent directory. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// Every entry, columns row_index,col_index,re,im,std_err; 17 digits.
/// std_err is zero for closed-form matrices.
std::string matrix_csv(const OperatorMatrix &m);

/// Report text with the timing section removed, re-emitted canonically;
/// two runs of one config must agree on this exactly.
std::string report_numerics(const std::string &report_yaml);

/// "%.17g"
std::string format_double(double x);

} // namespace qhqr
