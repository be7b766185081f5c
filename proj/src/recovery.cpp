#include "sljump/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sljump/errors.hpp"

namespace sljump {

std::vector<double> residual_sequence(const Spectrum& spectrum) {
  std::vector<double> d;
  d.reserve(spectrum.eigenvalues.size());
  for (const auto& e : spectrum.eigenvalues) d.push_back(2.0 * e.index * (e.value - e.index));
  return d;
}

std::vector<DftSample> residual_spectrum(const Spectrum& spectrum,
                                         const RecoveryOptions& options) {
  const auto d = residual_sequence(spectrum);
  const std::size_t n = d.size();
  if (n < 2) throw InsufficientDataError("residual_spectrum: need at least two eigenvalues");
  if (options.padding < 1) throw ValidationError("residual_spectrum: padding must be >= 1");
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);

  std::vector<double> tapered(n);
  double weight = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * (k + 0.5) / static_cast<double>(n));
    tapered[k] = w * (d[k] - mean);
    weight += w;
  }

  const std::size_t grid = options.padding * n;
  std::vector<DftSample> out(grid + 1);
  for (std::size_t j = 0; j <= grid; ++j) {
    const double f = kPi * static_cast<double>(j) / static_cast<double>(grid);
    // Direct sum; the rotating phasor is reset every 64 steps.
    const Complex step = std::polar(1.0, -f);
    Complex phase(1.0, 0.0);
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (k % 64 == 0) phase = std::polar(1.0, -f * static_cast<double>(k));
      acc += tapered[k] * phase;
      phase *= step;
    }
    out[j].frequency = f;
    out[j].location = 0.5 * f;
    out[j].magnitude = 2.0 * std::abs(acc) / weight;
  }
  return out;
}

RecoveryReport recover_singularities(const Spectrum& spectrum, const RecoveryOptions& options) {
  const int n = static_cast<int>(spectrum.eigenvalues.size());
  if (n < 64) {
    throw InsufficientDataError("recover_singularities: need N >= 64 eigenvalues, got " +
                                std::to_string(n));
  }
  const auto d = residual_sequence(spectrum);
  const auto samples = residual_spectrum(spectrum, options);

  RecoveryReport report;
  report.n_used = n;
  report.resolution = kPi / n;
  report.detrended_mean = std::accumulate(d.begin(), d.end(), 0.0) / n;

  std::vector<double> mags;
  for (const auto& s : samples) mags.push_back(s.magnitude);
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  report.threshold = std::max(options.threshold_factor * median, options.noise_floor);

  const double f_min = options.min_bins * 2.0 * kPi / n;
  // Hann main lobe spans two bins either side; a peak must dominate that span.
  const int lobe = 2 * options.padding;
  const int last = static_cast<int>(samples.size()) - 1;
  for (int j = 1; j < last; ++j) {
    const double m = mags[j];
    if (samples[j].frequency < f_min || m < report.threshold) continue;
    bool is_peak = true;
    for (int k = std::max(0, j - lobe); k <= std::min(last, j + lobe) && is_peak; ++k) {
      if (k != j && (mags[k] > m || (mags[k] == m && k < j))) is_peak = false;
    }
    if (!is_peak) continue;
    const double a = mags[j - 1];
    const double c = mags[j + 1];
    const double denom = a - 2.0 * m + c;
    const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    const double df = samples[1].frequency - samples[0].frequency;
    const double f = samples[j].frequency + shift * df;
    const double x = 0.5 * f;
    if (x > 0.0 && x < kHalfPi) report.estimated_locations.push_back({x, m});
  }
  std::sort(report.estimated_locations.begin(), report.estimated_locations.end(),
            [](const LocationEstimate& a, const LocationEstimate& b) {
              return a.location < b.location;
            });
  return report;
}

SubsequenceLabeling classify_model_zeros(const ExpSum& sum,
                                         const std::vector<CountingRectangle>& rectangles,
                                         const std::vector<Complex>& zeros) {
  (void)sum;
  if (rectangles.empty()) throw DomainError("classify_model_zeros: no rectangles");
  SubsequenceLabeling out;
  std::vector<std::vector<double>> heights(rectangles.size());
  for (const auto& z : zeros) {
    int best = -1;
    double best_distance = 0.0;
    for (std::size_t r = 0; r < rectangles.size(); ++r) {
      if (!rectangles[r].contains(z, 1e-9)) continue;
      const double distance = std::abs(z.real() - rectangles[r].center);
      if (best < 0 || distance < best_distance) {
        best = static_cast<int>(r);
        best_distance = distance;
      }
    }
    if (best < 0) {
      throw DomainError("classify_model_zeros: unassigned zero at (" + std::to_string(z.real()) +
                        ", " + std::to_string(z.imag()) + "); rectangle geometry misconfigured");
    }
    out.assignments.push_back(best);
    heights[best].push_back(z.imag());
  }
  for (std::size_t r = 0; r < rectangles.size(); ++r) {
    LabelStatistics stats;
    stats.label = rectangles[r].label;
    stats.count = static_cast<int>(heights[r].size());
    stats.predicted_spacing = 2.0 * kPi / rectangles[r].label.gap();
    if (stats.count >= 2) {
      const auto [lo, hi] = std::minmax_element(heights[r].begin(), heights[r].end());
      stats.mean_spacing = (*hi - *lo) / (stats.count - 1);
    }
    out.families.push_back(stats);
  }
  return out;
}

DensityReport density_report(const SubsequenceLabeling& labeling, double window_height,
                             double epsilon) {
  DensityReport report;
  for (const auto& family : labeling.families) {
    DensityRow row;
    row.label = family.label.name();
    row.count = family.count;
    row.predicted = window_height * family.label.gap() / (2.0 * kPi);
    row.slack = std::abs(row.count - row.predicted);
    row.budget = family.label.segment_terms - 1 + epsilon;
    row.pass = row.slack < row.budget;
    report.total_count += row.count;
    report.total_predicted += row.predicted;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace sljump
