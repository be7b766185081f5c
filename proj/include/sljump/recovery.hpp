#pragma once

#include <string>
#include <vector>

#include "sljump/eigensolver.hpp"
#include "sljump/expsum_zeros.hpp"

namespace sljump {

struct LocationEstimate {
  double location = 0.0;   // x_hat = f / 2
  double magnitude = 0.0;  // tapered DFT magnitude at the peak
};

struct RecoveryReport {
  std::vector<LocationEstimate> estimated_locations;  // ascending in location
  double resolution = 0.0;       // pi / N, one frequency bin in location units
  double detrended_mean = 0.0;   // mean of d_n, about int p / pi
  double threshold = 0.0;        // peak magnitude cut actually used
  int n_used = 0;
};

struct RecoveryOptions {
  double threshold_factor = 5.0;  // times the median DFT magnitude
  double noise_floor = 1e-7;      // absolute magnitude cut
  int padding = 16;               // zero-padding factor of the DFT
  // Frequencies below min_bins * 2 pi / N are dropped (residual smooth trend).
  double min_bins = 4.0;
};

// One sample of |DFT| of the tapered residual sequence.
struct DftSample {
  double frequency = 0.0;  // radians per index step, in [0, pi]
  double location = 0.0;   // frequency / 2
  double magnitude = 0.0;
};

// d_n = 2 n (z_n - n) for the eigenvalues in the spectrum, in index order.
std::vector<double> residual_sequence(const Spectrum& spectrum);

// |DFT| of the mean-removed, Hann-tapered residual sequence on a grid of
// padding * N points over [0, pi]. Magnitudes are normalised by the taper sum.
std::vector<DftSample> residual_spectrum(const Spectrum& spectrum,
                                         const RecoveryOptions& options = {});

// InsufficientDataError for fewer than 64 eigenvalues. An empty location list
// is a valid result.
RecoveryReport recover_singularities(const Spectrum& spectrum,
                                     const RecoveryOptions& options = {});

struct LabelStatistics {
  RectangleLabel label;
  int count = 0;
  double mean_spacing = 0.0;       // (Im z_last - Im z_first) / (count - 1); 0 if count < 2
  double predicted_spacing = 0.0;  // 2 pi / gap
};

struct SubsequenceLabeling {
  std::vector<int> assignments;  // rectangle index for each zero, same order as the input
  std::vector<LabelStatistics> families;
};

// Assigns each zero to the rectangle containing it (nearest centre when several
// do). DomainError if a zero lies in none of them.
SubsequenceLabeling classify_model_zeros(const ExpSum& sum,
                                         const std::vector<CountingRectangle>& rectangles,
                                         const std::vector<Complex>& zeros);

struct DensityRow {
  std::string label;
  int count = 0;
  double predicted = 0.0;  // s * gap / (2 pi)
  double slack = 0.0;
  double budget = 0.0;     // 1 + epsilon
  bool pass = false;
};

struct DensityReport {
  std::vector<DensityRow> rows;
  int total_count = 0;
  double total_predicted = 0.0;
};

DensityReport density_report(const SubsequenceLabeling& labeling, double window_height,
                             double epsilon = 0.1);

}  // namespace sljump
