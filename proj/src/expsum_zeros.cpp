#include "sljump/expsum_zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sljump/errors.hpp"

namespace sljump {

std::string RectangleLabel::name() const {
  std::string out = "L" + std::to_string(first_interval);
  for (int l = first_interval + 1; l <= last_interval; ++l) out += "+L" + std::to_string(l);
  return out;
}

bool CountingRectangle::contains(Complex z, double slack) const {
  return std::abs(z.real() - center) <= half_width + slack && z.imag() >= alpha - slack &&
         z.imag() <= alpha + height + slack;
}

double CountingRectangle::predicted() const { return height * label.gap() / (2.0 * kPi); }

namespace {

constexpr int kMaxDepth = 30;

struct Walk {
  double total = 0.0;
  double min_rel = std::numeric_limits<double>::infinity();
  bool unresolved = false;
};

// f(z) and its term-modulus sum, both multiplied by exp(-max_j theta_j Re z)
// so that wide rectangles do not overflow. Arguments and ratios are unchanged.
struct Scaled {
  Complex value;
  Complex slope;
  double scale = 0.0;
};

Scaled evaluate(const ExpSum& f, Complex z, bool with_slope = false) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& t : f.terms()) shift = std::max(shift, t.frequency * z.real());
  Scaled out;
  const double r = std::abs(z);
  for (const auto& t : f.terms()) {
    const Complex zd = std::pow(z, t.degree);
    const Complex e = std::exp(t.frequency * z - shift);
    out.value += t.amplitude * zd * e;
    out.scale += std::abs(t.amplitude) * std::pow(r, t.degree) *
                 std::exp(t.frequency * z.real() - shift);
    if (with_slope) {
      const Complex power_rule =
          t.degree == 0 ? Complex(0.0) : static_cast<double>(t.degree) * zd / z;
      out.slope += t.amplitude * e * (t.frequency * zd + power_rule);
    }
  }
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()) ||
      !std::isfinite(out.scale)) {
    throw OverflowError("exponential sum is not finite at a boundary point");
  }
  return out;
}

double relative_modulus(const Scaled& v) { return v.scale > 0 ? std::abs(v.value) / v.scale : 0.0; }

void walk_segment(const ExpSum& f, Complex a, Complex b, Complex fa, Complex fb, int depth,
                  Walk& walk) {
  const Complex m = 0.5 * (a + b);
  const Scaled vm = evaluate(f, m);
  walk.min_rel = std::min(walk.min_rel, relative_modulus(vm));
  const double whole = std::arg(fb / fa);
  const double first = std::arg(vm.value / fa);
  const double second = std::arg(fb / vm.value);
  if (std::abs(whole) < kPi / 2 && std::abs(first + second - whole) < 1e-9) {
    walk.total += first + second;
    return;
  }
  if (depth >= kMaxDepth) {
    walk.unresolved = true;
    walk.total += first + second;
    return;
  }
  walk_segment(f, a, m, fa, vm.value, depth + 1, walk);
  walk_segment(f, m, b, vm.value, fb, depth + 1, walk);
}

Walk walk_boundary(const ExpSum& f, const CountingRectangle& r, double step) {
  const double x0 = r.center - r.half_width;
  const double x1 = r.center + r.half_width;
  const double y0 = r.alpha;
  const double y1 = r.alpha + r.height;
  const Complex corners[5] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
  Walk walk;
  for (int e = 0; e < 4; ++e) {
    const Complex a = corners[e];
    const Complex b = corners[e + 1];
    const int pieces = std::max(4, static_cast<int>(std::ceil(std::abs(b - a) / step)));
    Complex za = a;
    Scaled va = evaluate(f, za);
    walk.min_rel = std::min(walk.min_rel, relative_modulus(va));
    for (int k = 1; k <= pieces; ++k) {
      const Complex zb = (k == pieces) ? b : a + (b - a) * (static_cast<double>(k) / pieces);
      const Scaled vb = evaluate(f, zb);
      walk.min_rel = std::min(walk.min_rel, relative_modulus(vb));
      if (walk.min_rel == 0.0) return walk;
      walk_segment(f, za, zb, va.value, vb.value, 0, walk);
      za = zb;
      va = vb;
    }
  }
  return walk;
}

std::vector<double> partition_frequencies(std::span<const double> locations) {
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (!(locations[i] > 0.0 && locations[i] < kHalfPi)) {
      throw DomainError("build_rectangles: locations must lie in (0, pi/2)");
    }
    if (i > 0 && !(locations[i] > locations[i - 1])) {
      throw DomainError("build_rectangles: degenerate gap, locations must be strictly increasing");
    }
  }
  std::vector<double> freq{-kPi};
  for (double w : locations) freq.push_back(-(kPi - 2.0 * w));
  for (auto it = locations.rbegin(); it != locations.rend(); ++it) freq.push_back(kPi - 2.0 * *it);
  freq.push_back(kPi);
  return freq;
}

// |sum of A z^d e^{theta z}| per frequency, all scaled by the same factor.
std::map<double, double> group_moduli(const ExpSum& sum, Complex z) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& t : sum.terms()) shift = std::max(shift, t.frequency * z.real());
  std::map<double, Complex> poly;
  for (const auto& t : sum.terms()) poly[t.frequency] += t.amplitude * std::pow(z, t.degree);
  std::map<double, double> out;
  for (const auto& [freq, value] : poly) {
    out[freq] = std::abs(value) * std::exp(freq * z.real() - shift);
  }
  return out;
}

const ExpTerm& leading_near(const ExpSum& sum, double frequency) {
  for (double f : sum.frequencies()) {
    if (std::abs(f - frequency) < 1e-12) return sum.leading(f);
  }
  throw DomainError("place_rectangles: frequency absent from the exponential sum");
}

bool newton(const ExpSum& f, Complex& z, double center, double half_width) {
  for (int it = 0; it < 60; ++it) {
    Scaled v;
    try {
      v = evaluate(f, z, true);
    } catch (const OverflowError&) {
      return false;
    }
    if (v.slope == Complex(0.0)) return false;
    const Complex step = v.value / v.slope;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (std::abs(z.real() - center) > 10.0 * half_width + 10.0) return false;
    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
      return relative_modulus(evaluate(f, z)) < 1e-8;
    }
  }
  return false;
}

void add_unique(std::vector<Complex>& zeros, Complex z) {
  for (const auto& w : zeros) {
    if (std::abs(w - z) < 1e-7 * std::max(1.0, std::abs(z))) return;
  }
  zeros.push_back(z);
}

CountingRectangle box(double x0, double x1, double y0, double y1, const RectangleLabel& label) {
  CountingRectangle r;
  r.center = 0.5 * (x0 + x1);
  r.half_width = 0.5 * (x1 - x0);
  r.alpha = y0;
  r.height = y1 - y0;
  r.label = label;
  return r;
}

// Counting a box whose edge may pass through a zero: shift the offending
// split point slightly and retry.
void subdivide(const ExpSum& f, double x0, double x1, double y0, double y1, int count,
               const RectangleLabel& label, const CountOptions& opts, int depth,
               std::vector<Complex>& out) {
  if (count == 0) return;
  if (count == 1 || depth > 40) {
    Complex z(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    const auto r = box(x0, x1, y0, y1, label);
    if (count == 1 && newton(f, z, r.center, r.half_width) && r.contains(z, 1e-9)) {
      add_unique(out, z);
      return;
    }
    if (depth > 40) return;
  }
  const bool split_vertical = (y1 - y0) >= (x1 - x0);
  double t = 0.5;
  for (int attempt = 0; attempt < 8; ++attempt, t += 0.0371) {
    try {
      if (split_vertical) {
        const double ym = y0 + t * (y1 - y0);
        const int lower = count_zeros(f, box(x0, x1, y0, ym, label), opts).count;
        subdivide(f, x0, x1, y0, ym, lower, label, opts, depth + 1, out);
        subdivide(f, x0, x1, ym, y1, count - lower, label, opts, depth + 1, out);
      } else {
        const double xm = x0 + t * (x1 - x0);
        const int left = count_zeros(f, box(x0, xm, y0, y1, label), opts).count;
        subdivide(f, x0, xm, y0, y1, left, label, opts, depth + 1, out);
        subdivide(f, xm, x1, y0, y1, count - left, label, opts, depth + 1, out);
      }
      return;
    } catch (const BoundaryCollisionError&) {
    }
  }
  throw BoundaryCollisionError("locate_zeros: could not split a box away from zeros");
}

}  // namespace

CountResult count_zeros(const ExpSum& sum, const CountingRectangle& rect, const CountOptions& opts) {
  if (!(rect.height > 0.0 && rect.half_width > 0.0)) {
    throw DomainError("count_zeros: rectangle needs positive height and half-width");
  }
  if (sum.has_negative_degree() && rect.contains(Complex(0.0))) {
    throw DomainError("count_zeros: rectangle contains the pole at z = 0");
  }
  double step = opts.initial_step;
  for (int attempt = 0; attempt < 6; ++attempt, step *= 0.25) {
    const Walk walk = walk_boundary(sum, rect, step);
    if (walk.min_rel < opts.boundary_threshold) {
      throw BoundaryCollisionError("count_zeros: |f| vanishes on the boundary; nudge alpha or h");
    }
    const double winding = walk.total / (2.0 * kPi);
    const double rounded = std::round(winding);
    if (walk.unresolved || std::abs(winding - rounded) > opts.integrality_tol) continue;
    if (rounded < 0) throw ToleranceError("count_zeros: negative winding number");
    CountResult out;
    out.count = static_cast<int>(rounded);
    out.predicted = rect.predicted();
    out.budget = rect.label.segment_terms - 1 + opts.epsilon;
    out.boundary_min_modulus = walk.min_rel;
    out.winding = winding;
    return out;
  }
  throw ToleranceError("count_zeros: winding number did not settle to an integer");
}

NudgedCount count_zeros_nudged(const ExpSum& sum, const CountingRectangle& rect,
                               const CountOptions& opts, int retries) {
  NudgedCount out;
  out.rect = rect;
  for (int k = 0;; ++k) {
    try {
      out.result = count_zeros(sum, out.rect, opts);
      out.nudges = k;
      return out;
    } catch (const BoundaryCollisionError&) {
      if (k >= retries) {
        throw BoundaryCollisionError("count_zeros: boundary zero persists after " +
                                     std::to_string(retries) + " nudges; try another alpha");
      }
      const double shift = 1e-6 * (k + 1) * (k % 2 == 0 ? -1.0 : 1.0);
      out.rect.alpha = rect.alpha + shift;
    }
  }
}

std::vector<CountingRectangle> build_rectangles(std::span<const double> locations, double alpha,
                                                double height, double half_width) {
  if (!(height > 0.0)) throw DomainError("build_rectangles: height must be positive");
  const auto freq = partition_frequencies(locations);
  const int j = static_cast<int>(locations.size());
  std::vector<CountingRectangle> out;
  for (int g = 0; g + 1 < static_cast<int>(freq.size()); ++g) {
    CountingRectangle r;
    r.alpha = alpha;
    r.height = height;
    r.half_width = half_width;
    r.label.left_frequency = freq[g];
    r.label.right_frequency = freq[g + 1];
    r.label.segment_terms = 2;
    if (g < j) {
      r.label.first_interval = r.label.last_interval = g + 1;
    } else if (g == j) {
      r.label.first_interval = j + 1;
      r.label.last_interval = j + 2;
    } else {
      r.label.first_interval = r.label.last_interval = g + 2;
    }
    out.push_back(r);
  }
  return out;
}

double dominance_half_width(const ExpSum& sum, double alpha, double height, double factor) {
  const auto freq = sum.frequencies();
  if (freq.size() < 2) return 1.0;
  const double lo = freq.front();
  const double hi = freq.back();
  for (double k = 0.5; k < 1e4; k *= 2.0) {
    bool ok = true;
    for (int s = 0; s <= 16 && ok; ++s) {
      const double y = alpha + height * s / 16.0;
      for (const double x : {k, -k}) {
        const auto g = group_moduli(sum, Complex(x, y));
        const double extreme = g.at(x > 0 ? hi : lo);
        double rest = 0.0;
        for (const auto& [f, m] : g) {
          if (f != (x > 0 ? hi : lo)) rest += m;
        }
        if (extreme < factor * rest) ok = false;
      }
    }
    if (ok) return k;
  }
  throw ToleranceError("dominance_half_width: no half-width up to 1e4 isolates the extremes");
}

CountingRectangle whole_rectangle(const ExpSum& sum, double alpha, double height) {
  const auto freq = sum.frequencies();
  if (freq.size() < 2) throw DomainError("whole_rectangle: need at least two frequencies");
  CountingRectangle r;
  r.alpha = alpha;
  r.height = height;
  r.center = 0.0;
  r.half_width = dominance_half_width(sum, alpha, height);
  r.label.first_interval = 1;
  r.label.last_interval = static_cast<int>(freq.size());
  r.label.left_frequency = freq.front();
  r.label.right_frequency = freq.back();
  r.label.segment_terms = static_cast<int>(freq.size());
  return r;
}

void place_rectangles(const ExpSum& sum, std::vector<CountingRectangle>& rects) {
  if (rects.empty()) return;
  for (auto& r : rects) {
    const auto& a = leading_near(sum, r.label.left_frequency);
    const auto& b = leading_near(sum, r.label.right_frequency);
    const double y_mid = r.alpha + 0.5 * r.height;
    r.center = (std::log(std::abs(a.amplitude)) - std::log(std::abs(b.amplitude)) +
                (a.degree - b.degree) * std::log(y_mid)) /
               (r.label.gap());
  }
  if (rects.size() == 1) {
    if (rects[0].half_width <= 0.0) {
      rects[0].half_width =
          dominance_half_width(sum, rects[0].alpha, rects[0].height) + std::abs(rects[0].center);
    }
    return;
  }
  std::vector<double> centers;
  for (const auto& r : rects) centers.push_back(r.center);
  std::sort(centers.begin(), centers.end());
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < centers.size(); ++i) {
    spacing = std::min(spacing, centers[i] - centers[i - 1]);
  }
  const double auto_width = std::max(1.0, 0.5 * spacing);
  for (auto& r : rects) {
    if (r.half_width <= 0.0) r.half_width = auto_width;
  }
}

std::vector<Complex> locate_zeros(const ExpSum& sum, const CountingRectangle& rect,
                                  const CountOptions& opts) {
  const int count = count_zeros(sum, rect, opts).count;
  std::vector<Complex> zeros;
  if (count == 0) return zeros;

  const double spacing = 2.0 * kPi / rect.label.gap();
  for (double y = rect.alpha + 0.25 * spacing; y < rect.alpha + rect.height; y += 0.5 * spacing) {
    for (const double dx : {-0.5, 0.0, 0.5}) {
      Complex z(rect.center + dx * rect.half_width, y);
      if (newton(sum, z, rect.center, rect.half_width) && rect.contains(z)) add_unique(zeros, z);
    }
  }
  if (static_cast<int>(zeros.size()) != count) {
    zeros.clear();
    subdivide(sum, rect.center - rect.half_width, rect.center + rect.half_width, rect.alpha,
              rect.alpha + rect.height, count, rect.label, opts, 0, zeros);
  }
  if (static_cast<int>(zeros.size()) != count) {
    throw CountMismatchError("locate_zeros: located " + std::to_string(zeros.size()) +
                             " zeros but the winding number is " + std::to_string(count));
  }
  std::sort(zeros.begin(), zeros.end(),
            [](Complex a, Complex b) { return a.imag() < b.imag(); });
  return zeros;
}

CountingReport verify_counting_estimate(const ExpSum& sum,
                                        const std::vector<CountingRectangle>& rects,
                                        double epsilon) {
  if (rects.empty()) throw DomainError("verify_counting_estimate: no rectangles");
  CountOptions opts;
  opts.epsilon = epsilon;
  CountingReport report;
  for (const auto& r : rects) {
    RectangleCheck row;
    row.rect = r;
    const auto counted = count_zeros_nudged(sum, r, opts);
    row.rect = counted.rect;
    row.result = counted.result;
    row.slack = std::abs(row.result.count - row.result.predicted);
    row.pass = row.slack < row.result.budget;
    report.total_count += row.result.count;
    report.total_predicted += row.result.predicted;
    report.rows.push_back(row);
  }
  const double height = rects.front().height;
  const double alpha = rects.front().alpha;
  report.strip_count =
      count_zeros_nudged(sum, whole_rectangle(sum, alpha, height), opts).result.count;
  const int j = (static_cast<int>(rects.size()) - 1) / 2;
  report.total_pass = std::abs(report.total_count - height) <= 2 * j + 2;
  report.all_pass = report.total_pass &&
                    std::all_of(report.rows.begin(), report.rows.end(),
                                [](const RectangleCheck& r) { return r.pass; });
  return report;
}

double stable_alpha(const ExpSum& sum, std::span<const double> locations, double height,
                    double start, double limit) {
  auto counts_at = [&](double alpha) {
    for (int attempt = 0; attempt < 8; ++attempt, alpha *= 1.0137) {
      try {
        auto rects = build_rectangles(locations, alpha, height, 0.0);
        place_rectangles(sum, rects);
        std::vector<int> out;
        for (const auto& r : rects) out.push_back(count_zeros(sum, r).count);
        return std::make_pair(alpha, out);
      } catch (const BoundaryCollisionError&) {
      }
    }
    throw BoundaryCollisionError("stable_alpha: every nudged window touches a zero");
  };
  double alpha = start;
  auto current = counts_at(alpha);
  while (alpha < limit) {
    auto next = counts_at(2.0 * current.first);
    if (next.second == current.second) return current.first;
    current = next;
    alpha = current.first;
  }
  return current.first;
}

}  // namespace sljump
