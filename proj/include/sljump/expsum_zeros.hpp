#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sljump/expansion.hpp"

namespace sljump {

// Which interval(s) L_l of the frequency partition a rectangle serves.
// Intervals are numbered 1..2J+2 from the left of [-pi, pi]; the two middle
// intervals L_{J+1}, L_{J+2} share one zero family and one rectangle.
struct RectangleLabel {
  int first_interval = 1;
  int last_interval = 1;
  double left_frequency = -kPi;
  double right_frequency = kPi;
  // Budget n - 1 + epsilon uses n = number of exponentials on the segment.
  int segment_terms = 2;

  bool merged() const { return last_interval != first_interval; }
  double gap() const { return right_frequency - left_frequency; }
  std::string name() const;
};

// R = {z : |Re z - center| <= half_width, Im z in [alpha, alpha + height]}.
// center = 0 is the textbook rectangle; per-gap rectangles are centred on the
// balance line of their two exponentials.
struct CountingRectangle {
  double alpha = 0.0;
  double height = 1.0;
  double half_width = 1.0;
  double center = 0.0;
  RectangleLabel label;

  bool contains(Complex z, double slack = 0.0) const;
  // height * gap / (2 pi)
  double predicted() const;
};

struct CountResult {
  int count = 0;
  double predicted = 0.0;
  double budget = 0.0;
  double boundary_min_modulus = 0.0;  // min |f| / (sum of term moduli) on the boundary
  double winding = 0.0;               // boundary phase increment / 2 pi, before rounding
};

struct CountOptions {
  double epsilon = 0.1;
  // Relative modulus below which a boundary point counts as a zero.
  double boundary_threshold = 1e-10;
  double integrality_tol = 1e-6;
  double initial_step = 0.05;
};

// Winding number of the sum along the rectangle boundary (argument principle).
CountResult count_zeros(const ExpSum& sum, const CountingRectangle& rect,
                        const CountOptions& opts = {});

struct NudgedCount {
  CountingRectangle rect;  // rectangle actually counted
  CountResult result;
  int nudges = 0;
};

// count_zeros, shifting the window by alpha += 1e-6 * (-1, 2, -3, 4, ...) when
// a zero lies on the boundary; a zero on the top edge thus falls outside first. BoundaryCollisionError once retries run out.
NudgedCount count_zeros_nudged(const ExpSum& sum, const CountingRectangle& rect,
                               const CountOptions& opts = {}, int retries = 8);

// One rectangle per gap between consecutive frequencies of
// {-pi, -(pi - 2 w_1), ..., -(pi - 2 w_J), pi - 2 w_J, ..., pi}; the middle gap
// is the merged L_{J+1} u L_{J+2} family. All rectangles get center 0.
std::vector<CountingRectangle> build_rectangles(std::span<const double> locations, double alpha,
                                                double height, double half_width);

// Single rectangle over the whole frequency range, for Dickson's first bound
// |N - s (theta_max - theta_min) / (2 pi)| <= n - 1.
CountingRectangle whole_rectangle(const ExpSum& sum, double alpha, double height);

// Half-width K at which the extreme-frequency exponentials dominate all others
// by `factor` on the vertical edges, for Im z in [alpha, alpha + height].
double dominance_half_width(const ExpSum& sum, double alpha, double height,
                            double factor = 1e3);

// Centres each rectangle on the line where its two bounding exponentials
// (leading degree only) have equal modulus at mid-height. When
// half_width <= 0 the rectangles get half the smallest centre spacing
// (at least 1); a lone rectangle gets the dominance half-width.
void place_rectangles(const ExpSum& sum, std::vector<CountingRectangle>& rects);

// Newton iteration from the lattice Im z = alpha + k * (2 pi / gap), with
// subdivision by count_zeros as a fallback. Result size always equals the
// winding count; CountMismatchError otherwise.
std::vector<Complex> locate_zeros(const ExpSum& sum, const CountingRectangle& rect,
                                  const CountOptions& opts = {});

struct RectangleCheck {
  CountingRectangle rect;
  CountResult result;
  double slack = 0.0;  // |count - predicted|
  bool pass = false;   // slack < budget
};

struct CountingReport {
  std::vector<RectangleCheck> rows;
  int total_count = 0;          // sum over rectangles
  double total_predicted = 0.0; // sum of predictions (= window height)
  int strip_count = 0;          // count in one rectangle holding every zero
  bool total_pass = false;      // total_count within height +- (2J + 2)
  bool all_pass = false;
};

// Checks |count - s gap / (2 pi)| < 1 + epsilon per rectangle and the total
// density against the window height.
CountingReport verify_counting_estimate(const ExpSum& sum,
                                        const std::vector<CountingRectangle>& rects,
                                        double epsilon = 0.1);

// Smallest alpha in {start, 2 start, 4 start, ...} at which per-rectangle
// counts agree with those at twice the height offset. Rectangles are rebuilt
// and re-placed at each trial alpha.
double stable_alpha(const ExpSum& sum, std::span<const double> locations, double height,
                    double start = 1.0, double limit = 4096.0);

}  // namespace sljump
