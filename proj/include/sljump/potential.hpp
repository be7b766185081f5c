#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sljump {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

// One derivative-jump singularity: contributes
//   coefficient * 1_{[location, inf)}(x) * (x - location)^order / order!
// to the potential.
struct JumpTerm {
  int order = 0;
  double location = 0.0;
  double coefficient = 0.0;

  bool operator==(const JumpTerm&) const = default;
};

// Polynomial remainder r_M(x) = sum_k coeffs[k] x^k. Empty means r_M == 0.
class SmoothTail {
 public:
  SmoothTail() = default;
  explicit SmoothTail(std::vector<double> coeffs);

  double operator()(double x) const;
  // k-th derivative at x (k >= 0).
  double derivative(int k, double x) const;
  double integral(double a, double b) const;
  bool is_constant() const;
  double constant_value() const;

  const std::vector<double>& coefficients() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

// The smooth polynomial that represents p on one piece [left, right] between
// consecutive breakpoints, stored as coefficients in powers of (x - left).
// Evaluation ignores the indicator, so it is also valid at the right end of
// the piece (the left-limit of p there).
class PotentialPiece {
 public:
  PotentialPiece(double left, double right, const SmoothTail& tail,
                 const std::vector<JumpTerm>& active);

  double operator()(double x) const;
  double left() const { return left_; }
  double right() const { return right_; }
  bool is_constant() const { return shifted_.size() <= 1; }

 private:
  double left_;
  double right_;
  std::vector<double> shifted_;
};

// p(x) = sum of jump terms + polynomial tail on [0, pi].
//
// Invariants (checked at construction, ValidationError otherwise):
//   - smoothness order M >= 1 and odd
//   - 0 <= term order <= M - 1
//   - 0 < location < pi/2, locations pairwise distinct
//   - coefficients finite and nonzero
// Terms are stored sorted by location. Immutable after construction.
class SingularPotential {
 public:
  SingularPotential(std::vector<JumpTerm> terms, SmoothTail tail,
                    int smoothness_order);

  static SingularPotential zero(int smoothness_order = 1);
  static SingularPotential constant(double value, int smoothness_order = 1);

  // p(x); indicator closed on the left. DomainError outside [0, pi].
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  // Exact integral over [a, b], 0 <= a <= b <= pi.
  double integral(double a, double b) const;

  // q_m(p; x) = [sum_{k >= m} p_k + r_M]^{(m)}(x), right limits at the
  // singular locations.
  double q_derivative(int m, double x) const;

  const std::vector<JumpTerm>& terms() const { return terms_; }
  const SmoothTail& tail() const { return tail_; }
  int smoothness_order() const { return order_; }
  std::size_t singularity_count() const { return terms_.size(); }

  // Sorted singular locations (the omega_j of the counting construction).
  std::vector<double> locations() const;

  // 0, every singular location, pi.
  std::vector<double> breakpoints() const;
  std::vector<PotentialPiece> pieces() const;

  // True when every term has order 0 and the tail is constant.
  bool is_piecewise_constant() const;

  // Stable 64-bit FNV-1a digest of the canonical description, hex encoded.
  std::string hash() const;

 private:
  std::vector<JumpTerm> terms_;
  SmoothTail tail_;
  int order_;
};

// P_m(pi), m = 0..(M-1)/2 with P_0 = integral of p over [0, pi], and
// Q_m(pi), m = 0..(M-1)/2 - 1.
struct SpectralCoefficients {
  std::vector<double> p;
  std::vector<double> q;
};

SpectralCoefficients spectral_coefficients(const SingularPotential& potential);

}  // namespace sljump
