#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/json_out.hpp"

namespace edgelap::cli {

// Bad flags, bad values, unwritable paths: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};


struct RunConfig {
  std::string subcommand;

  // bands and grids
  int n = 1;
  std::optional<double> k_min, k_max, k_step;
  double x_max = 18.0;
  std::size_t points = 3601;

  // test functions
  std::vector<std::string> modes;
  std::vector<std::string> gmodes;  // second argument of bilinear forms; defaults to modes
  double mode_step = 0.02;

  // spectral point
  std::optional<std::string> z;
  std::optional<double> lambda;
  std::string side = "plus";
  std::vector<double> eps;
  int cutoff = 6;

  // absorption-space parameters
  double alpha = 0.4;
  double s = 1.0;
  double threshold_window = 1.0;
  bool negative_control = false;

  // certificate
  std::string window;  // "a:b"
  double eta_max = 0.1;
  std::size_t samples = 9;
  bool refine = false;

  // synthesis
  std::size_t x_stride = 4;
  double y_max = 20.0;
  double y_step = 0.05;

  // decay
  double l_min = 3.0, l_max = 6.0, l_step = 0.25;
  double beta_split = 0.75;

  // continuation
  std::string y = "0-0.5i";
  double radius = 1e-3;

  std::string out;      // CSV path; empty means <subcommand>.csv
  std::string summary;  // JSON path; empty means stdout
  std::map<std::string, double> tolerances;
  unsigned threads = 0;

  std::string csv_path() const { return out.empty() ? subcommand + ".csv" : out; }
  double tol(const std::string& name, double fallback) const;
  ojson echo() const;
};

// argv-style tokens without the program name. A JSON config file given by --config
// contributes every key that is not already present on the command line.
RunConfig parse_config(const std::vector<std::string>& args);

// Thrown by parse_config for -h/--help; what() is the help text (exit code 0).
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edgelap::cli
