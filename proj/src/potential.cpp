#include "sljump/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sljump/errors.hpp"

namespace sljump {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// c (x - loc)^m / m! for x >= loc.
double ramp(const JumpTerm& t, double x, int shift = 0) {
  const int power = t.order - shift;
  if (power < 0) return 0.0;
  return t.coefficient * std::pow(x - t.location, power) / factorial(power);
}

void check_interval(double a, double b) {
  if (!(a >= 0.0 && b <= kPi && a <= b)) {
    throw DomainError("integral: need 0 <= a <= b <= pi");
  }
}

}  // namespace

// --- SmoothTail -------------------------------------------------------------

SmoothTail::SmoothTail(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ValidationError("tail: coefficients must be finite");
  }
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double SmoothTail::operator()(double x) const { return derivative(0, x); }

double SmoothTail::derivative(int k, double x) const {
  double acc = 0.0;
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= k; --i) {
    // d^k/dx^k x^i = i!/(i-k)! x^{i-k}
    double falling = 1.0;
    for (int j = 0; j < k; ++j) falling *= (i - j);
    acc = acc * x + coeffs_[i] * falling;
  }
  return acc;
}

double SmoothTail::integral(double a, double b) const {
  double fa = 0.0;
  double fb = 0.0;
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) {
    fa = fa * a + coeffs_[i] / (i + 1);
    fb = fb * b + coeffs_[i] / (i + 1);
  }
  return fb * b - fa * a;
}

bool SmoothTail::is_constant() const { return coeffs_.size() <= 1; }

double SmoothTail::constant_value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

// --- PotentialPiece ---------------------------------------------------------

PotentialPiece::PotentialPiece(double left, double right, const SmoothTail& tail,
                               const std::vector<JumpTerm>& active)
    : left_(left), right_(right) {
  // Taylor coefficients about `left`: d_k = f^{(k)}(left) / k!.
  int degree = static_cast<int>(tail.coefficients().size()) - 1;
  for (const auto& t : active) degree = std::max(degree, t.order);
  shifted_.assign(static_cast<std::size_t>(std::max(degree, 0)) + 1, 0.0);
  for (int k = 0; k <= degree; ++k) {
    double v = tail.derivative(k, left);
    for (const auto& t : active) v += ramp(t, left, k);
    shifted_[k] = v / factorial(k);
  }
  while (shifted_.size() > 1 && shifted_.back() == 0.0) shifted_.pop_back();
}

double PotentialPiece::operator()(double x) const {
  const double u = x - left_;
  double acc = 0.0;
  for (auto it = shifted_.rbegin(); it != shifted_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

// --- SingularPotential ------------------------------------------------------

SingularPotential::SingularPotential(std::vector<JumpTerm> terms, SmoothTail tail,
                                     int smoothness_order)
    : terms_(std::move(terms)), tail_(std::move(tail)), order_(smoothness_order) {
  if (order_ < 1) throw ValidationError("smoothness order M must be >= 1");
  if (order_ % 2 == 0) {
    throw ValidationError("smoothness order M must be odd (even M unsupported)");
  }
  for (const auto& t : terms_) {
    if (t.order < 0 || t.order > order_ - 1) {
      throw ValidationError("term order must satisfy 0 <= m <= M - 1");
    }
    if (!(t.location > 0.0 && t.location < kHalfPi)) {
      throw ValidationError("term location must lie strictly inside (0, pi/2)");
    }
    if (!std::isfinite(t.coefficient) || t.coefficient == 0.0) {
      throw ValidationError("term coefficient must be finite and nonzero");
    }
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const JumpTerm& a, const JumpTerm& b) { return a.location < b.location; });
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (terms_[i].location == terms_[i - 1].location) {
      throw ValidationError("term locations must be pairwise distinct");
    }
  }
}

SingularPotential SingularPotential::zero(int smoothness_order) {
  return SingularPotential({}, SmoothTail{}, smoothness_order);
}

SingularPotential SingularPotential::constant(double value, int smoothness_order) {
  return SingularPotential({}, SmoothTail({value}), smoothness_order);
}

double SingularPotential::operator()(double x) const {
  if (!(x >= 0.0 && x <= kPi)) throw DomainError("eval: x must lie in [0, pi]");
  double v = tail_(x);
  for (const auto& t : terms_) {
    if (x >= t.location) v += ramp(t, x);
  }
  return v;
}

double SingularPotential::integral(double a, double b) const {
  check_interval(a, b);
  double v = tail_.integral(a, b);
  for (const auto& t : terms_) {
    if (b <= t.location) continue;
    const double lo = std::max(a, t.location);
    const double n = t.order + 1;
    v += t.coefficient *
         (std::pow(b - t.location, n) - std::pow(lo - t.location, n)) / factorial(t.order + 1);
  }
  return v;
}

double SingularPotential::q_derivative(int m, double x) const {
  if (m < 0 || m > order_) throw DomainError("q_derivative: need 0 <= m <= M");
  if (!(x >= 0.0 && x <= kPi)) throw DomainError("q_derivative: x must lie in [0, pi]");
  double v = tail_.derivative(m, x);
  for (const auto& t : terms_) {
    if (t.order >= m && x >= t.location) v += ramp(t, x, m);
  }
  return v;
}

std::vector<double> SingularPotential::locations() const {
  std::vector<double> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.location);
  return out;
}

std::vector<double> SingularPotential::breakpoints() const {
  std::vector<double> out{0.0};
  for (const auto& t : terms_) out.push_back(t.location);
  out.push_back(kPi);
  return out;
}

std::vector<PotentialPiece> SingularPotential::pieces() const {
  const auto bp = breakpoints();
  std::vector<PotentialPiece> out;
  out.reserve(bp.size() - 1);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const std::vector<JumpTerm> active(terms_.begin(), terms_.begin() + static_cast<long>(i));
    out.emplace_back(bp[i], bp[i + 1], tail_, active);
  }
  return out;
}

bool SingularPotential::is_piecewise_constant() const {
  return tail_.is_constant() &&
         std::all_of(terms_.begin(), terms_.end(),
                     [](const JumpTerm& t) { return t.order == 0; });
}

std::string SingularPotential::hash() const {
  std::ostringstream canon;
  char buf[64];
  canon << "M=" << order_ << ";terms=";
  for (const auto& t : terms_) {
    std::snprintf(buf, sizeof buf, "(%d,%.17g,%.17g)", t.order, t.location, t.coefficient);
    canon << buf;
  }
  canon << ";tail=";
  for (double c : tail_.coefficients()) {
    std::snprintf(buf, sizeof buf, "%.17g,", c);
    canon << buf;
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SpectralCoefficients spectral_coefficients(const SingularPotential& potential) {
  const int half = (potential.smoothness_order() - 1) / 2;
  SpectralCoefficients out;
  out.p.push_back(potential.integral(0.0, kPi));
  for (int m = 1; m <= half; ++m) {
    out.p.push_back(potential.q_derivative(2 * m - 1, kPi) -
                    potential.q_derivative(2 * m - 1, 0.0));
  }
  for (int m = 0; m < half; ++m) {
    out.q.push_back(potential.q_derivative(2 * m, kPi) + potential.q_derivative(2 * m, 0.0));
  }
  return out;
}

}  // namespace sljump
