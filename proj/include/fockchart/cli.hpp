#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fockchart::cli {

inline constexpr const char *k_version = "0.1.0";

inline constexpr int exit_ok = 0;
inline constexpr int exit_unphysical = 1;
inline constexpr int exit_malformed = 2;
inline constexpr int exit_numerical = 3;

enum class Command { check, boundary, density, marginal, sample };
enum class Format { csv, jsonl };

/// Everything a run needs, validated before any computation starts.
struct RunConfig {
  Command command = Command::check;
  int n = 2;
  bool n_infinite = false;
  uint64_t seed = 1;
  uint64_t count = 100000;
  int threads = 1;
  std::string var;
  std::string plane;
  std::vector<int> bins;
  std::optional<std::pair<double, double>> range;
  std::optional<std::pair<double, double>> range2;
  bool log_axes = false;
  int k = 2;
  std::optional<double> n0_fixed;
  std::optional<double> g2_fixed;
  std::optional<double> g3_fixed;
  std::vector<double> point;
  std::string hist;
  std::string points_path;
  std::string out_path;
  Format format = Format::csv;
  double quad_tol = 1e-6;
  int precision = 12;
};

struct CheckReport {
  bool physical = false;
  std::vector<double> p; // reconstructed occupation weights (finite N only)
  std::string violation; // first violated constraint, empty when physical
  std::vector<std::string> flags;
};

/// Physicality check of a correlator tuple (n0, g2, ..., gN). In the
/// untruncated mode only the coin-state floor constrains each correlator.
CheckReport run_check(const std::vector<double> &tuple, int n,
                      bool n_infinite);

/// Tabular artifact: '# key=value' header lines, one column-title line,
/// numeric rows. Cells are kept as text so a parse/re-emit cycle is
/// byte-stable.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream &in);
void write_csv(std::ostream &out, const CsvTable &t);
void write_jsonl(std::ostream &out, const CsvTable &t);
std::string format_double(double v, int precision);
void write_file_atomic(const std::string &path, const std::string &content);

/// Build the artifact for a validated config (no file output involved).
CsvTable make_table(const RunConfig &cfg);

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);
int run(int argc, char **argv);

} // namespace fockchart::cli
