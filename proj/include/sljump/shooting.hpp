#pragma once

#include <complex>
#include <optional>

#include "sljump/potential.hpp"

namespace sljump {

using Complex = std::complex<double>;

struct SolverConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = 0.5;
  // Largest admissible |Im omega| * pi (natural-log scale of the double range).
  double exponent_budget = 700.0;
  long max_steps = 10'000'000;
};

// Boundary data of the initial-value problem y(0) = 0, y'(0) = 1 at x = pi.
struct ShotResult {
  Complex omega;
  Complex y_end;
  Complex dy_end;
  std::optional<Complex> y_omega_derivative;  // d y(pi; omega) / d omega
};

// Integrates -y'' + p y = omega^2 y on [0, pi] with a sixth-order Magnus
// integrator (step doubling for error control). Every singular location is a
// mandatory step boundary, so each step sees a polynomial potential.
// With `with_omega_derivative` the variational system in omega is propagated
// alongside, giving d y(pi)/d omega.
ShotResult shoot(const SingularPotential& potential, Complex omega,
                 const SolverConfig& cfg = {}, bool with_omega_derivative = false);

// Exact propagation for piecewise-constant potentials using the 2x2
// fundamental matrices [cos kh, sin(kh)/k; -k sin kh, cos kh], k^2 = omega^2 - c.
// Throws DomainError when a term has order >= 1 or the tail is not constant.
ShotResult transfer_matrix_shoot(const SingularPotential& potential, Complex omega);

// Continuous Prufer phase theta(pi; omega), y = r sin(theta), y' = r cos(theta),
// theta(0) = 0. Integrated as a scaled phase ODE so that it stays smooth for
// large omega; multiples of pi are preserved exactly by the rescaling.
// omega = 0 is accepted (used to detect nonpositive eigenvalues).
double pruefer_angle(const SingularPotential& potential, double omega,
                     const SolverConfig& cfg = {});

}  // namespace sljump
