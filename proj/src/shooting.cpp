#include "sljump/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sljump/errors.hpp"

namespace sljump {

namespace {

struct Mat2 {
  Complex a, b, c, d;  // [[a, b], [c, d]]

  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  friend Mat2 operator*(Complex s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
  friend Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }

struct Vec2 {
  Complex y, dy;
};

Vec2 apply(const Mat2& m, const Vec2& v) { return {m.a * v.y + m.b * v.dy, m.c * v.y + m.d * v.dy}; }
Vec2 operator+(const Vec2& u, const Vec2& v) { return {u.y + v.y, u.dy + v.dy}; }

// cosh(sqrt(u)) and sinh(sqrt(u))/sqrt(u), both entire in u, together with
// their u-derivatives.
struct ExpCoefficients {
  Complex c, s, dc, ds;
};

ExpCoefficients exp_coefficients(Complex u) {
  ExpCoefficients out;
  if (std::abs(u) < 0.5) {
    // Power series; 16 terms reach double precision for |u| < 0.5.
    Complex term_c = 1.0;  // u^k / (2k)!
    Complex term_s = 1.0;  // u^k / (2k+1)!
    Complex term_ds = 1.0 / 6.0;  // (k+1) u^k / (2k+3)!
    out.c = out.s = out.ds = 0.0;
    for (int k = 0; k < 16; ++k) {
      out.c += term_c;
      out.s += term_s;
      out.ds += term_ds;
      term_c *= u / static_cast<double>((2 * k + 1) * (2 * k + 2));
      term_s *= u / static_cast<double>((2 * k + 2) * (2 * k + 3));
      term_ds *= u * static_cast<double>(k + 2) /
                 (static_cast<double>(k + 1) * (2 * k + 4) * (2 * k + 5));
    }
    out.dc = out.s / 2.0;
    return out;
  }
  const Complex r = std::sqrt(u);
  out.c = std::cosh(r);
  out.s = std::sinh(r) / r;
  out.dc = out.s / 2.0;
  out.ds = (out.c - out.s) / (2.0 * u);
  return out;
}

// exp of a traceless 2x2 matrix, and optionally its Frechet derivative in
// direction `dm` (also traceless).
struct ExpResult {
  Mat2 e;
  Mat2 de;
};

ExpResult traceless_exp(const Mat2& m, const Mat2* dm) {
  const Complex a = 0.5 * (m.a - m.d);
  const Mat2 mt{a, m.b, m.c, -a};
  const Complex u = a * a + m.b * m.c;
  const auto k = exp_coefficients(u);
  ExpResult out;
  out.e = k.c * Mat2::identity() + k.s * mt;
  if (dm != nullptr) {
    const Complex da = 0.5 * (dm->a - dm->d);
    const Mat2 dmt{da, dm->b, dm->c, -da};
    const Complex du = 2.0 * a * da + m.b * dm->c + m.c * dm->b;
    out.de = (k.dc * du) * Mat2::identity() + (k.ds * du) * mt + k.s * dmt;
  }
  return out;
}

// One sixth-order Magnus step (three Gauss-Legendre nodes) for
// Y' = A(x) Y with A = [[0, 1], [p(x) - omega^2, 0]].
ExpResult magnus_step(const PotentialPiece& piece, double x, double h, Complex omega,
                      bool derivative) {
  static const double r15 = std::sqrt(15.0);
  const double t1 = 0.5 - r15 / 10.0;
  const double t3 = 0.5 + r15 / 10.0;
  const Complex w2 = omega * omega;
  auto a_at = [&](double t) { return Mat2{0.0, 1.0, piece(x + t * h) - w2, 0.0}; };
  const Mat2 a1 = a_at(t1);
  const Mat2 a2 = a_at(0.5);
  const Mat2 a3 = a_at(t3);

  const Mat2 al1 = h * a2;
  const Mat2 al2 = (r15 * h / 3.0) * (a3 - a1);
  const Mat2 al3 = (10.0 * h / 3.0) * (a3 - 2.0 * a2 + a1);
  const Mat2 c1 = commutator(al1, al2);
  const Mat2 c2 = (-1.0 / 60.0) * commutator(al1, 2.0 * al3 + c1);
  const Mat2 left = (-20.0) * al1 - al3 + c1;
  const Mat2 right = al2 + c2;
  const Mat2 omega_mat = al1 + (1.0 / 12.0) * al3 + (1.0 / 240.0) * commutator(left, right);

  if (!derivative) return traceless_exp(omega_mat, nullptr);

  // d/d omega: only alpha1 depends on omega (the differences cancel it).
  const Mat2 dal1{0.0, 0.0, -2.0 * h * omega, 0.0};
  const Mat2 dc1 = commutator(dal1, al2);
  const Mat2 dc2 = (-1.0 / 60.0) * (commutator(dal1, 2.0 * al3 + c1) + commutator(al1, dc1));
  const Mat2 dleft = (-20.0) * dal1 + dc1;
  const Mat2 domega =
      dal1 + (1.0 / 240.0) * (commutator(dleft, right) + commutator(left, dc2));
  return traceless_exp(omega_mat, &domega);
}

double scaled_norm(const Vec2& v, double scale) {
  return std::hypot(scale * std::abs(v.y), std::abs(v.dy));
}

void check_budget(Complex omega, const SolverConfig& cfg) {
  if (!std::isfinite(omega.real()) || !std::isfinite(omega.imag())) {
    throw DomainError("shoot: omega must be finite");
  }
  if (std::abs(omega.imag()) * kPi > cfg.exponent_budget) {
    throw OverflowError("shoot: |Im omega| * pi exceeds the exponent budget");
  }
}

}  // namespace

ShotResult shoot(const SingularPotential& potential, Complex omega, const SolverConfig& cfg,
                 bool with_omega_derivative) {
  check_budget(omega, cfg);
  if (!(cfg.rel_tol > 0 && cfg.abs_tol > 0 && cfg.max_step > 0)) {
    throw DomainError("shoot: solver tolerances and max_step must be positive");
  }
  const double scale = std::max(1.0, std::abs(omega));
  Vec2 v{0.0, 1.0};
  Vec2 w{0.0, 0.0};
  long steps = 0;
  double h = cfg.max_step;

  for (const auto& piece : potential.pieces()) {
    double x = piece.left();
    const double end = piece.right();
    const double min_step = 1e-13 * std::max(1.0, end - piece.left());
    while (end - x > 1e-15) {
      h = std::min({h, cfg.max_step, end - x});
      const auto full = magnus_step(piece, x, h, omega, false);
      const auto first = magnus_step(piece, x, 0.5 * h, omega, with_omega_derivative);
      const auto second = magnus_step(piece, x + 0.5 * h, 0.5 * h, omega, with_omega_derivative);
      const Vec2 mid = apply(first.e, v);
      const Vec2 fine = apply(second.e, mid);
      const Vec2 coarse = apply(full.e, v);
      const Vec2 diff{fine.y - coarse.y, fine.dy - coarse.dy};
      const double err = scaled_norm(diff, scale);
      const double tol = cfg.abs_tol + cfg.rel_tol * scaled_norm(fine, scale);
      if (err <= tol) {
        if (with_omega_derivative) {
          const Vec2 w_mid = apply(first.e, w) + apply(first.de, v);
          w = apply(second.e, w_mid) + apply(second.de, mid);
        }
        v = fine;
        x += h;
        if (end - x < 1e-15 * end) x = end;
      }
      const double ratio = err > 0 ? 0.9 * std::pow(tol / err, 1.0 / 7.0) : 4.0;
      const double next = h * std::clamp(ratio, 0.2, 4.0);
      if (err > tol && next < min_step) {
        throw ToleranceError("shoot: step size underflow, tolerance cannot be met");
      }
      h = next;
      if (++steps > cfg.max_steps) throw ToleranceError("shoot: step limit exceeded");
    }
  }
  ShotResult out{omega, v.y, v.dy, std::nullopt};
  if (with_omega_derivative) out.y_omega_derivative = w.y;
  return out;
}

ShotResult transfer_matrix_shoot(const SingularPotential& potential, Complex omega) {
  if (!potential.is_piecewise_constant()) {
    throw DomainError("transfer_matrix_shoot: needs order-0 terms and a constant tail");
  }
  const Complex w2 = omega * omega;
  Complex y = 0.0;
  Complex dy = 1.0;
  for (const auto& piece : potential.pieces()) {
    const double len = piece.right() - piece.left();
    const Complex k2 = w2 - piece(piece.left());
    Complex cs, sn_over_k, k_sn;
    if (k2 == Complex(0.0)) {
      cs = 1.0;
      sn_over_k = len;
      k_sn = 0.0;
    } else {
      const Complex k = std::sqrt(k2);
      const Complex kh = k * len;
      cs = std::cos(kh);
      if (std::abs(kh) < 1e-4) {
        const Complex z2 = kh * kh;
        sn_over_k = len * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
      } else {
        sn_over_k = std::sin(kh) / k;
      }
      k_sn = k * std::sin(kh);
    }
    const Complex ny = cs * y + sn_over_k * dy;
    const Complex ndy = -k_sn * y + cs * dy;
    y = ny;
    dy = ndy;
  }
  return ShotResult{omega, y, dy, std::nullopt};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

double pruefer_angle(const SingularPotential& potential, double omega, const SolverConfig& cfg) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw DomainError("pruefer_angle: omega must be real and >= 0");
  }
  // Scaled phase: S y = rho sin(phi), y' = rho cos(phi).
  const double scale = std::max(1.0, omega);
  const double w2 = omega * omega;
  double phi = 0.0;
  long steps = 0;
  double h = std::min(cfg.max_step, 0.1 / scale);

  for (const auto& piece : potential.pieces()) {
    auto rhs = [&](double x, double ph) {
      const double s = std::sin(ph);
      const double c = std::cos(ph);
      return scale * c * c + (w2 - piece(x)) / scale * s * s;
    };
    double x = piece.left();
    const double end = piece.right();
    const double h_cap = std::min(cfg.max_step, 1.0 / scale);
    while (end - x > 1e-15) {
      h = std::min({h, h_cap, end - x});
      const double k1 = rhs(x, phi);
      const double k2 = rhs(x + c2 * h, phi + h * a21 * k1);
      const double k3 = rhs(x + c3 * h, phi + h * (a31 * k1 + a32 * k2));
      const double k4 = rhs(x + c4 * h, phi + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const double k5 = rhs(x + c5 * h, phi + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const double k6 =
          rhs(x + h, phi + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const double next_phi = phi + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double k7 = rhs(x + h, next_phi);
      const double err =
          std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
      const double tol = cfg.abs_tol + cfg.rel_tol * std::max(1.0, std::abs(next_phi));
      if (err <= tol) {
        phi = next_phi;
        x += h;
        if (end - x < 1e-15 * end) x = end;
      }
      const double ratio = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
      const double next = h * std::clamp(ratio, 0.2, 4.0);
      if (err > tol && next < 1e-14) {
        throw ToleranceError("pruefer_angle: step size underflow");
      }
      h = next;
      if (++steps > cfg.max_steps) throw ToleranceError("pruefer_angle: step limit exceeded");
    }
  }
  // Undo the scaling inside the current pi-branch: tan(theta) = tan(phi) / S.
  const double branch = std::floor(phi / kPi);
  const double beta = phi - branch * kPi;
  return branch * kPi + std::atan2(std::sin(beta), scale * std::cos(beta));
}

}  // namespace sljump
