#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sljump/eigensolver.hpp"
#include "sljump/expansion.hpp"
#include "sljump/expsum_zeros.hpp"
#include "sljump/potential.hpp"
#include "sljump/recovery.hpp"

namespace sljump {

inline constexpr const char* kVersion = "0.1.0";

// %.17g
std::string format_number(double value);

// { "M": int, "terms": [{"m": int, "x": float, "c": float}], "tail": [float, ...] }
// ValidationError names the offending field or invariant.
SingularPotential parse_potential(const std::string& text);
SingularPotential load_potential(const std::string& path);
std::string potential_to_json(const SingularPotential& potential);

// '#'-prefixed metadata lines: tool version and potential hash.
void write_metadata(std::ostream& out, const std::string& potential_hash);

// n, z_n, residual, z_n - n
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
// Reads the table written above (extra columns and '#' lines are ignored).
Spectrum read_spectrum_csv(std::istream& in);

// re_A, im_A, degree, frequency
void write_exp_sum_csv(std::ostream& out, const ExpSum& sum, const std::string& potential_hash);

// label, alpha, s, h, center, count, predicted, budget, slack, pass
void write_count_csv(std::ostream& out, const CountingReport& report,
                     const std::string& potential_hash);
std::string count_report_json(const CountingReport& report, const std::string& potential_hash);

// location, magnitude
void write_recovery_csv(std::ostream& out, const RecoveryReport& report,
                        const std::string& potential_hash);
std::string recovery_report_json(const RecoveryReport& report, const std::string& potential_hash);
// frequency, location, magnitude
void write_dft_csv(std::ostream& out, const std::vector<DftSample>& samples,
                   const std::string& potential_hash);

}  // namespace sljump
