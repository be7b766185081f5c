#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sljump::cli {

// Exit codes: 0 success, 1 a check failed, 2 invalid input or a solver error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

struct SpectrumConfig {
  std::string potential_file;
  int n = 64;
  std::string out_dir = ".";
};

struct ExpansionErrorConfig {
  std::string potential_file;
  double omega_min = 20.0;
  double omega_max = 200.0;
  int omega_steps = 1800;
  std::string out_dir = ".";
};

struct CountConfig {
  std::string potential_file;
  double window = 60.0;
  double alpha = 0.0;       // <= 0: smallest stable alpha
  double half_width = 0.0;  // <= 0: automatic placement
  double epsilon = 0.1;
  int truncation = 4;
  bool locate = false;      // also locate, label and space the zeros
  std::string out_dir = ".";
};

struct RecoverConfig {
  std::string potential_file;
  int n = 512;
  std::vector<double> expect;  // locations that must be recovered within one bin
  std::string out_dir = ".";
};

struct CompareOracleConfig {
  std::string potential_file;
  int n = 64;
  double omega_min = 1.0;
  double omega_max = 100.0;
  int omega_steps = 100;
  double tolerance = 1e-9;
  std::string out_dir = ".";
};

// Each command writes its tables into out_dir and a short summary to `log`.
int run_spectrum(const SpectrumConfig& config, std::ostream& log);
int run_expansion_error(const ExpansionErrorConfig& config, std::ostream& log);
int run_count(const CountConfig& config, std::ostream& log);
int run_recover(const RecoverConfig& config, std::ostream& log);
int run_compare_oracle(const CompareOracleConfig& config, std::ostream& log);

}  // namespace sljump::cli
