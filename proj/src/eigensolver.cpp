#include "sljump/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sljump/errors.hpp"

namespace sljump {

namespace {

double characteristic(const SingularPotential& p, double omega, const SolverConfig& cfg) {
  return shoot(p, omega, cfg).y_end.real();
}

}  // namespace

int count_below(const SingularPotential& potential, double omega_max, const EigenConfig& cfg) {
  if (!(omega_max > 0.0)) throw DomainError("count_below: Omega must be positive");
  const double theta = pruefer_angle(potential, omega_max, cfg.solver);
  const double ratio = theta / kPi;
  if (std::abs(ratio - std::round(ratio)) * kPi < cfg.collision_tol * std::max(1.0, theta)) {
    throw BoundaryCollisionError("count_below: Omega is (numerically) an eigenvalue");
  }
  return static_cast<int>(std::floor(ratio));
}

int nonpositive_count(const SingularPotential& potential, const EigenConfig& cfg) {
  const double theta0 = pruefer_angle(potential, 0.0, cfg.solver);
  const double k = std::round(theta0 / kPi);
  // theta(pi; 0) on a multiple of pi means lambda = 0 is itself an eigenvalue.
  if (std::abs(theta0 - k * kPi) < 1e-8 * std::max(1.0, theta0)) return static_cast<int>(k);
  return static_cast<int>(std::floor(theta0 / kPi));
}

Eigenvalue nth_eigenvalue(const SingularPotential& potential, int n, const EigenConfig& cfg,
                          double lower_bound) {
  if (n < 1) throw DomainError("nth_eigenvalue: n must be >= 1");
  const int k0 = nonpositive_count(potential, cfg);
  if (n <= k0) {
    throw UnsupportedError("nth_eigenvalue: eigenvalue " + std::to_string(n) +
                           " is nonpositive (lambda <= 0), outside the supported regime");
  }
  const double target = n * kPi;
  // The phase only brackets the root, so it runs at a relaxed tolerance.
  SolverConfig phase_cfg = cfg.solver;
  phase_cfg.rel_tol = std::max(phase_cfg.rel_tol, 1e-10);
  auto phase = [&](double w) { return pruefer_angle(potential, w, phase_cfg) - target; };

  // Bracket theta(pi; omega) - n pi. theta is increasing in omega.
  double lo = std::max(0.0, lower_bound);
  double f_lo = phase(lo);
  if (f_lo >= 0.0) {
    lo = 0.0;
    f_lo = phase(0.0);
  }
  const double mean_p = potential.integral(0.0, kPi) / kPi;
  double hi = std::max(lo + 0.5, std::sqrt(std::max(0.0, double(n) * n + mean_p)) + 0.5);
  double f_hi = phase(hi);
  double step = 1.0;
  while (f_hi <= 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi += step;
    step *= 2.0;
    f_hi = phase(hi);
  }

  // Illinois iteration on the phase until the bracket holds z_n alone and the
  // estimate is close. Inside such a bracket sign y(lo) = (-1)^{n-1} and
  // sign y(hi) = (-1)^n, since y = r sin(theta) with r > 0.
  double estimate = 0.5 * (lo + hi);
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    const bool single = f_lo > -kPi && f_hi < kPi;
    double mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(mid > lo && mid < hi) || !single) mid = 0.5 * (lo + hi);
    const double f_mid = phase(mid);
    estimate = mid;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      f_hi = f_mid;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (single && std::abs(f_mid) < 1e-3) break;
  }
  const double sign_lo = (n % 2 == 1) ? 1.0 : -1.0;

  // Safeguarded Newton on y(pi; omega) using the variational derivative.
  double a = lo, b = hi;
  double z = estimate;
  ShotResult shot = shoot(potential, z, cfg.solver, true);
  bool converged = false;
  for (int it = 0; it < cfg.newton_cap; ++it) {
    const double y = shot.y_end.real();
    const double dy = shot.y_omega_derivative->real();
    if (y == 0.0) {
      converged = true;
      break;
    }
    if (y * sign_lo > 0.0) {
      a = std::max(a, z);
    } else {
      b = std::min(b, z);
    }
    double next = z - y / dy;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double change = std::abs(next - z);
    z = next;
    shot = shoot(potential, z, cfg.solver, true);
    if (change <= 4e-16 * z) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    // Bisection fallback; terminates by bracket width.
    while (b - a > 4e-16 * b) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      if (characteristic(potential, m, cfg.solver) * sign_lo > 0.0) {
        a = m;
      } else {
        b = m;
      }
    }
    z = 0.5 * (a + b);
    shot = shoot(potential, z, cfg.solver, true);
  }
  const double residual = std::abs(shot.y_end.real());
  const double slope = shot.y_omega_derivative->real();
  if (residual > cfg.residual_tol * std::max(1.0, std::abs(slope))) {
    throw ConvergenceError("nth_eigenvalue: residual above tolerance for n = " +
                           std::to_string(n));
  }
  return Eigenvalue{n, z, residual, slope};
}

Spectrum spectrum(const SingularPotential& potential, int count, const EigenConfig& cfg) {
  if (count < 1) throw DomainError("spectrum: N must be >= 1");
  Spectrum out;
  out.potential_hash = potential.hash();
  const int k0 = nonpositive_count(potential, cfg);
  double previous = 0.0;
  for (int n = 1; n <= count; ++n) {
    if (n <= k0) {
      out.unsupported.push_back(n);
      continue;
    }
    auto ev = nth_eigenvalue(potential, n, cfg, previous);
    if (!out.eigenvalues.empty() && !(ev.value > out.eigenvalues.back().value)) {
      throw ConvergenceError("spectrum: eigenvalues not strictly increasing");
    }
    previous = ev.value;
    out.eigenvalues.push_back(ev);
  }
  if (!out.eigenvalues.empty()) {
    const auto& ev = out.eigenvalues;
    const double last = ev.back().value;
    const double gap = ev.size() >= 2 ? last - ev[ev.size() - 2].value : std::min(last, 1.0);
    const int counted = count_below(potential, last + 0.5 * gap, cfg);
    if (counted != count) {
      throw ConvergenceError("spectrum: Prufer count " + std::to_string(counted) +
                             " disagrees with N = " + std::to_string(count));
    }
  }
  return out;
}

}  // namespace sljump
