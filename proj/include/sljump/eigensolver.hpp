#pragma once

#include <string>
#include <vector>

#include "sljump/potential.hpp"
#include "sljump/shooting.hpp"

namespace sljump {

struct Eigenvalue {
  int index = 0;           // n >= 1
  double value = 0.0;      // z_n > 0
  double residual = 0.0;   // |y(pi; z_n)|
  double slope = 0.0;      // d y(pi; omega) / d omega at z_n
};

// The positive Dirichlet eigenvalues z_1 < z_2 < ... (as frequencies omega,
// lambda = omega^2). Indices n whose eigenvalue is nonpositive (lambda <= 0)
// are listed in `unsupported` and skipped; the remaining indices are gap free.
struct Spectrum {
  std::string potential_hash;
  std::vector<Eigenvalue> eigenvalues;
  std::vector<int> unsupported;
};

struct EigenConfig {
  SolverConfig solver;
  // Prufer phase this close to a multiple of pi is treated as a collision.
  double collision_tol = 1e-9;
  int newton_cap = 25;
  // Acceptance: |y(pi; z)| <= residual_tol * max(1, |dy/domega|).
  double residual_tol = 1e-10;
};

// Number of eigenvalues lambda_n < Omega^2, i.e. floor(theta(pi; Omega) / pi).
// This includes nonpositive eigenvalues when the potential has any.
int count_below(const SingularPotential& potential, double omega_max,
                const EigenConfig& cfg = {});

// Number of indices with lambda_n <= 0 (0 for every nonnegative potential).
int nonpositive_count(const SingularPotential& potential, const EigenConfig& cfg = {});

// z_n: bracketing on the Prufer phase, then safeguarded Newton on y(pi; omega).
// `lower_bound` (if > 0) must be below z_n and is used as the left bracket.
Eigenvalue nth_eigenvalue(const SingularPotential& potential, int n, const EigenConfig& cfg = {},
                          double lower_bound = 0.0);

// The first N indices. Verifies count_below(z_N + gap/2) == N.
Spectrum spectrum(const SingularPotential& potential, int count, const EigenConfig& cfg = {});

}  // namespace sljump
