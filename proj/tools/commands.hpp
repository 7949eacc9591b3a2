#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace stiefel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitUsage = 64;

inline constexpr int kMaxN = 64;
inline constexpr long kMaxSamples = 1000000;
inline constexpr int kWarnN = 20;

struct ExperimentConfig {
  int n = 4;
  int p = 2;
  double beta = 1.0;
  std::optional<double> beta2;
  long samples = 100;
  std::uint64_t seed = 0;
  int grid = 101;
  std::string out;
  std::string format = "csv";
  std::string mode = "random";  // sample: random | roundtrip | antipodal
  std::string init = "shell";   // sample: shell | branches
  int threads = 0;              // 0: hardware concurrency
  int max_iter = 200;
  double tol = 1e-10;
};

/// Throws InvalidInput on a bad config; prints a warning to `warn` for n > 20.
void validate(const ExperimentConfig &cfg, std::ostream &warn, bool allow_square = false);

struct Table {
  std::string command;
  std::string comment;  // config summary for the header line
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Columns plotted by the SVG writer; y columns share one axis.
  std::string x;
  std::vector<std::string> ys;
  std::string group;  // optional column splitting rows into series
};

std::string format_number(double v);

void write_csv(const Table &t, std::ostream &os);

/// Writes `t` as CSV or SVG depending on cfg.format, to cfg.out or `fallback`.
void emit(const Table &t, const ExperimentConfig &cfg, std::ostream &fallback);

Table cmd_bounds(const ExperimentConfig &cfg);
Table cmd_sample(const ExperimentConfig &cfg);
Table cmd_families(const ExperimentConfig &cfg);
Table cmd_slope(const ExperimentConfig &cfg, double delta_small = 1e-6);

struct BranchReport {
  double beta;
  double length_first;
  double length_second;
  double closed_first;
  double closed_second;
  double endpoint_error_first;
  double endpoint_error_second;
};

BranchReport cmd_branch_demo(double beta);
void print_branch_report(const BranchReport &r, std::ostream &os);

}  // namespace stiefel::cli
