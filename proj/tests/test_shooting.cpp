#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "sljump/errors.hpp"
#include "sljump/shooting.hpp"

using namespace sljump;

namespace {

SingularPotential jump() { return SingularPotential({{0, 0.8, 2.0}}, SmoothTail{}, 5); }
SingularPotential ramp() {
  return SingularPotential({{1, 0.5, 3.0}}, SmoothTail({1.0, 0.5, -0.2}), 5);
}

// Classical RK4 on each smooth piece with a fixed fine step.
std::pair<double, double> rk4_reference(const SingularPotential& p, double omega, int steps) {
  double y = 0.0, dy = 1.0;
  const auto pieces = p.pieces();
  for (const auto& piece : pieces) {
    const double h = (piece.right() - piece.left()) / steps;
    auto acc = [&](double x, double yv) { return (piece(x) - omega * omega) * yv; };
    for (int k = 0; k < steps; ++k) {
      const double x = piece.left() + k * h;
      const double k1y = dy, k1d = acc(x, y);
      const double k2y = dy + 0.5 * h * k1d, k2d = acc(x + 0.5 * h, y + 0.5 * h * k1y);
      const double k3y = dy + 0.5 * h * k2d, k3d = acc(x + 0.5 * h, y + 0.5 * h * k2y);
      const double k4y = dy + h * k3d, k4d = acc(x + h, y + h * k3y);
      y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
      dy += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    }
  }
  return {y, dy};
}

double scaled_error(Complex omega, const ShotResult& a, Complex y, Complex dy) {
  const double w = std::max(1.0, std::abs(omega));
  return std::hypot(w * std::abs(a.y_end - y), std::abs(a.dy_end - dy)) /
         std::hypot(w * std::abs(y), std::abs(dy));
}

}  // namespace

TEST_CASE("zero potential reproduces sin(omega x) / omega") {
  const auto p = SingularPotential::zero(5);
  const auto r = shoot(p, 2.0);
  CHECK(std::abs(r.y_end) < 1e-14);
  CHECK(std::abs(r.dy_end - 1.0) < 1e-13);
  for (double w : {0.3, 1.7, 12.25, 80.5}) {
    const auto s = shoot(p, w);
    CHECK(std::abs(s.y_end - std::sin(w * kPi) / w) < 1e-12 / w);
    CHECK(std::abs(s.dy_end - std::cos(w * kPi)) < 1e-11);
  }
}

TEST_CASE("constant potential reproduces the shifted closed form") {
  for (double c : {-1.0, 1.0, 4.0}) {
    const auto p = SingularPotential::constant(c, 5);
    for (double w : {0.5, 3.0, 17.0}) {
      const Complex k = std::sqrt(Complex(w * w - c));
      const Complex exact = std::sin(k * kPi) / k;
      CHECK(std::abs(shoot(p, w).y_end - exact) < 1e-12 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("transfer matrix limits and preconditions") {
  const auto z = SingularPotential::zero(5);
  CHECK(std::abs(transfer_matrix_shoot(z, 1.0).y_end) < 1e-15);
  CHECK(std::abs(transfer_matrix_shoot(z, 0.0).y_end - kPi) < 1e-15);
  CHECK(std::abs(transfer_matrix_shoot(z, 1e-9).y_end - kPi) < 1e-12);
  CHECK_THROWS_AS(transfer_matrix_shoot(ramp(), 2.0), DomainError);
}

TEST_CASE("transfer matrix agrees with the independent propagator") {
  const auto steps = oracle::steps_of(jump());
  for (double w : {0.0, 0.7, 1.41421356, 5.0, 33.0}) {
    const auto [y, dy] = oracle::propagate(steps, w);
    const auto r = transfer_matrix_shoot(jump(), w);
    CHECK(std::abs(r.y_end - y) < 1e-13);
    CHECK(std::abs(r.dy_end - dy) < 1e-12 * std::max(1.0, w));
  }
}

TEST_CASE("jump at omega = 5 matches the oracle to 1e-9") {
  const auto [y, dy] = oracle::propagate(oracle::steps_of(jump()), 5.0);
  const auto r = shoot(jump(), 5.0);
  CHECK(std::abs(r.y_end - y) <= 1e-9 * std::abs(y));
  // Frozen value of the two-piece matrix product.
  CHECK(r.y_end.real() == doctest::Approx(y.real()).epsilon(1e-12));
}

TEST_CASE("property: shoot equals the transfer-matrix oracle on random steps") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> wd(0.5, 60.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = oracle::random_steps(rng);
    const auto steps = oracle::steps_of(p);
    for (int k = 0; k < 5; ++k) {
      const double w = wd(rng);
      const auto [y, dy] = oracle::propagate(steps, w);
      CHECK(scaled_error(w, shoot(p, w), y, dy) < 1e-10);
    }
  }
}

TEST_CASE("complex omega follows the oracle") {
  const auto p = jump();
  const auto steps = oracle::steps_of(p);
  for (Complex w : {Complex(5.0, 1.0), Complex(12.0, -3.5), Complex(0.5, 20.0)}) {
    const auto [y, dy] = oracle::propagate(steps, w);
    CHECK(scaled_error(w, shoot(p, w), y, dy) < 1e-10);
  }
}

TEST_CASE("overflow guard on large imaginary part") {
  SolverConfig cfg;
  CHECK_THROWS_AS(shoot(jump(), Complex(1.0, 300.0), cfg), OverflowError);
  cfg.exponent_budget = 10.0;
  CHECK_THROWS_AS(shoot(jump(), Complex(1.0, 4.0), cfg), OverflowError);
}

TEST_CASE("smooth pieces agree with a fine RK4 reference") {
  for (double w : {0.5, 3.0, 7.5}) {
    const auto [y, dy] = rk4_reference(ramp(), w, 4000);
    const auto r = shoot(ramp(), w);
    CHECK(std::abs(r.y_end.real() - y) < 1e-10);
    CHECK(std::abs(r.dy_end.real() - dy) < 1e-9);
  }
}

TEST_CASE("error shrinks with the tolerance") {
  SolverConfig tight;
  tight.rel_tol = 1e-14;
  tight.abs_tol = 1e-16;
  const double w = 20.0;
  const Complex ref = shoot(ramp(), w, tight).y_end;
  double previous = 1.0;
  for (double tol : {1e-4, 1e-6, 1e-8, 1e-10}) {
    SolverConfig cfg;
    cfg.rel_tol = tol;
    cfg.abs_tol = tol * 1e-2;
    const double err = std::abs(shoot(ramp(), w, cfg).y_end - ref);
    CHECK(err < 50.0 * tol);
    CHECK(err <= previous);
    previous = err;
  }
}

TEST_CASE("property: shoot is even in omega") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> wd(0.5, 40.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = wd(rng);
    const auto a = shoot(ramp(), w);
    const auto b = shoot(ramp(), -w);
    CHECK(std::abs(a.y_end - b.y_end) < 1e-12 * std::max(1.0, std::abs(a.y_end)) + 1e-15);
  }
}

TEST_CASE("property: omega derivative matches centred differences") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> wd(1.0, 30.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = wd(rng);
    const auto r = shoot(ramp(), w, {}, true);
    REQUIRE(r.y_omega_derivative.has_value());
    const double h = 1e-4;
    const double fd = (shoot(ramp(), w + h).y_end.real() - shoot(ramp(), w - h).y_end.real()) / (2 * h);
    CHECK(std::abs(r.y_omega_derivative->real() - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("Prufer phase examples") {
  const auto z = SingularPotential::zero(5);
  CHECK(pruefer_angle(z, 3.0) == doctest::Approx(3.0 * kPi).epsilon(1e-10));
  CHECK(pruefer_angle(z, 2.5) == doctest::Approx(2.5 * kPi).epsilon(1e-10));
  const double z1 = oracle::roots(oracle::steps_of(jump()), 1).front();
  CHECK(pruefer_angle(jump(), z1) == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("property: Prufer phase is increasing in omega") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> wd(0.0, 50.0);
  for (int trial = 0; trial < 40; ++trial) {
    double a = wd(rng), b = wd(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) continue;
    CHECK(pruefer_angle(ramp(), a) < pruefer_angle(ramp(), b));
  }
}

TEST_CASE("real omega gives real boundary data") {
  const auto r = shoot(ramp(), 9.3);
  CHECK(r.y_end.imag() == 0.0);
  CHECK(r.dy_end.imag() == 0.0);
}
