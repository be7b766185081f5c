#pragma once

#include <complex>
#include <vector>

#include "sljump/potential.hpp"

namespace sljump {

using Complex = std::complex<double>;

enum class Trig { Sine, Cosine };

// coefficient * omega^{-power} * trig(frequency * omega)
struct TrigTerm {
  double coefficient = 0.0;
  int power = 0;
  double frequency = 0.0;
  Trig kind = Trig::Sine;
};

// The blocks of the large-|omega| expansion of y(pi; omega), truncated at an
// odd order M' <= M:
//   leading:   sin(omega pi)/omega - (1/2) cos(omega pi)/omega^2 * int p
//   pq_blocks: 2 (-1)^m (2 omega)^{-2m} cos(omega pi) P_{m-1}(pi),     m = 2..(M'-1)/2
//              2 (-1)^{m+1} (2 omega)^{-2m-1} sin(omega pi) Q_{m-1}(pi), m = 1..(M'-1)/2
//   singular:  order 2m jumps:   2 (-1)^m (2 omega)^{-2m-3} c sin(omega (pi - 2x))
//              order 2m+1 jumps: 2 (-1)^{m+1} (2 omega)^{-2m-4} c cos(omega (pi - 2x))
//              for m = 0..(M'-1)/2 - 1.
// The P-block with m = 1 is the (1/2) cos / omega^2 leading correction itself
// (P_0(pi) = int p) and is kept only once.
struct ExpansionTerms {
  int order = 1;
  std::vector<TrigTerm> leading;
  std::vector<TrigTerm> pq_blocks;
  std::vector<TrigTerm> singular_blocks;

  std::vector<TrigTerm> all() const;
};

ExpansionTerms expansion_terms(const SingularPotential& potential, int order);

// Finite truncated expansion (no remainder). Requires |omega| >= 1 and an odd
// order with 1 <= order <= M; UnsupportedError / DomainError otherwise.
Complex eval_expansion(const SingularPotential& potential, Complex omega, int order);

struct DecayFit {
  double slope = 0.0;
  bool exact = false;  // every error below exact_floor; slope is then meaningless
};

// Log-log least-squares slope of the error envelope: the omega range is cut
// into `bins` log-spaced windows and the maximum error of each window is fitted
// against the window's geometric centre.
DecayFit fit_decay_slope(const std::vector<double>& omega, const std::vector<double>& error,
                         int bins = 20, double exact_floor = 1e-12);

// A * z^degree * exp(frequency * z)
struct ExpTerm {
  Complex amplitude;
  int degree = 0;
  double frequency = 0.0;
};

// Finite exponential sum sum_j A_j z^{d_j} e^{theta_j z}. Terms are kept sorted
// by (frequency, descending degree); each (frequency, degree) pair appears at
// most once and no amplitude is zero. Several degrees per frequency form the
// 1/z polynomial attached to that exponential.
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(std::vector<ExpTerm> terms);

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  // sum_j |A_j z^{d_j} e^{theta_j z}|: the scale against which |f(z)| is small.
  double magnitude_scale(Complex z) const;

  const std::vector<ExpTerm>& terms() const { return terms_; }
  // Distinct frequencies, ascending.
  std::vector<double> frequencies() const;
  // Highest-degree term for the given frequency.
  const ExpTerm& leading(double frequency) const;
  bool has_negative_degree() const;

 private:
  std::vector<ExpTerm> terms_;
};

Complex eval_exp_sum(const ExpSum& sum, Complex z);

// Rotated model Y(z) = z y(pi; z / i) built from the full order-M expansion:
// every sin/cos is split by Euler's identity, omega = -i z, and the amplitudes
// are collected per real frequency in {+-pi, +-(pi - 2 x_j)}. Degrees below
// -truncation_degree are dropped.
ExpSum to_exp_sum(const SingularPotential& potential, int truncation_degree);

}  // namespace sljump
