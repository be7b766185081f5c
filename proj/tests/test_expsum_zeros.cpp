#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "sljump/errors.hpp"
#include "sljump/expsum_zeros.hpp"

using namespace sljump;

namespace {

// -i sinh(pi z): zeros at z = i n.
ExpSum sine_model() { return ExpSum({{Complex(0, -0.5), 0, kPi}, {Complex(0, 0.5), 0, -kPi}}); }

// Constant-amplitude four-term sum whose middle exponentials dominate a wide
// band: every gap carries its own zero family.
ExpSum separated_model(double theta) {
  const double big = std::exp(4.0);
  return ExpSum({{1.0, 0, -kPi}, {big, 0, -theta}, {big, 0, theta}, {1.0, 0, kPi}});
}

CountingRectangle rect(double alpha, double s, double h, double center = 0.0) {
  CountingRectangle r;
  r.alpha = alpha;
  r.height = s;
  r.half_width = h;
  r.center = center;
  return r;
}

}  // namespace

TEST_CASE("sine model: R(0.5, 10.5, 1) holds ten zeros") {
  const auto s = sine_model();
  auto r = rect(0.5, 10.5, 1.0);
  const auto c = count_zeros_nudged(s, r);
  CHECK(c.result.count == 10);
  CHECK(c.result.predicted == doctest::Approx(10.5).epsilon(1e-6));
  CHECK(std::abs(c.result.count - c.result.predicted) <= 1.0);
  CHECK(c.nudges == 1);
  // The textbook window has the zero i*11 on its top edge.
  CHECK_THROWS_AS(count_zeros(s, r), BoundaryCollisionError);
}

TEST_CASE("sine model: located zeros are i*1..i*10") {
  const auto zeros = locate_zeros(sine_model(), rect(0.5, 10.4, 1.0));
  REQUIRE(zeros.size() == 10);
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::abs(zeros[n - 1] - Complex(0.0, n)) < 1e-12);
  }
}

TEST_CASE("single exponential has no zeros") {
  const ExpSum one({{Complex(2.0, -1.0), 3, 1.7}});
  CHECK(count_zeros(one, rect(1.0, 30.0, 5.0)).count == 0);
  const ExpSum negative({{Complex(1.0, 1.0), -2, -0.4}});
  CHECK(count_zeros(negative, rect(0.5, 30.0, 5.0)).count == 0);
}

TEST_CASE("rectangle containing the pole is rejected") {
  const ExpSum negative({{1.0, -2, 1.0}, {1.0, 0, -1.0}});
  CHECK_THROWS_AS(count_zeros(negative, rect(-1.0, 2.0, 1.0)), DomainError);
}

TEST_CASE("two-term sum: zeros on the balance line with spacing 2 pi / gap") {
  const Complex a1(3.0, 0.5), a2(-0.7, 1.1);
  const double t1 = -0.9, t2 = 1.6;
  const ExpSum s({{a1, 0, t1}, {a2, 0, t2}});
  const double x = std::log(std::abs(a1 / a2)) / (t2 - t1);
  const auto zeros = locate_zeros(s, rect(0.37, 30.0, 1.0, x));
  const double spacing = 2 * kPi / (t2 - t1);
  REQUIRE(zeros.size() >= 2);
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    CHECK(zeros[k].real() == doctest::Approx(x).epsilon(1e-12).scale(1.0));
    if (k > 0) CHECK(zeros[k].imag() - zeros[k - 1].imag() == doctest::Approx(spacing).epsilon(1e-12));
  }
  CHECK(std::abs(static_cast<double>(zeros.size()) - 30.0 / spacing) <= 1.0);
}

TEST_CASE("build_rectangles geometry") {
  SUBCASE("J = 0") {
    const auto r = build_rectangles(std::vector<double>{}, 1.0, 20.0, 2.0);
    REQUIRE(r.size() == 1);
    CHECK(r[0].label.gap() == doctest::Approx(2 * kPi));
    CHECK(r[0].predicted() == doctest::Approx(20.0));
    CHECK(r[0].label.name() == "L1+L2");
  }
  SUBCASE("J = 1") {
    const std::vector<double> w{0.8};
    const auto r = build_rectangles(w, 1.0, 20.0, 2.0);
    REQUIRE(r.size() == 3);
    CHECK(r[0].label.gap() == doctest::Approx(1.6));
    CHECK(r[1].label.gap() == doctest::Approx(2 * (kPi - 1.6)));
    CHECK(r[2].label.gap() == doctest::Approx(1.6));
    CHECK(r[0].label.name() == "L1");
    CHECK(r[1].label.name() == "L2+L3");
    CHECK(r[1].label.merged());
    CHECK(r[2].label.name() == "L4");
  }
  SUBCASE("J = 2") {
    const std::vector<double> w{0.5, 1.2};
    const auto r = build_rectangles(w, 1.0, 20.0, 2.0);
    REQUIRE(r.size() == 5);
    const double gaps[5] = {1.0, 1.4, 2 * (kPi - 2.4), 1.4, 1.0};
    double total = 0.0;
    for (int k = 0; k < 5; ++k) {
      CHECK(r[k].label.gap() == doctest::Approx(gaps[k]));
      total += r[k].predicted();
    }
    CHECK(total == doctest::Approx(20.0));
    CHECK(r[2].label.name() == "L3+L4");
    CHECK(r[4].label.name() == "L6");
  }
  SUBCASE("degenerate gaps") {
    CHECK_THROWS_AS(build_rectangles(std::vector<double>{0.5, 0.5}, 1, 2, 1), DomainError);
    CHECK_THROWS_AS(build_rectangles(std::vector<double>{1.2, 0.5}, 1, 2, 1), DomainError);
    CHECK_THROWS_AS(build_rectangles(std::vector<double>{1.6}, 1, 2, 1), DomainError);
  }
}

TEST_CASE("verify_counting_estimate: J = 0, s = 20.5") {
  const auto s = sine_model();
  auto rects = build_rectangles(std::vector<double>{}, 0.5, 20.5, 2.0);
  const auto report = verify_counting_estimate(s, rects, 0.1);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].result.count == 20);
  CHECK(report.rows[0].slack == doctest::Approx(0.5));
  CHECK(report.rows[0].pass);
  CHECK(report.all_pass);
}

TEST_CASE("hull-separated model: every gap keeps its own density") {
  const double theta = 1.0;
  const auto s = separated_model(theta);
  const std::vector<double> w{(kPi - theta) / 2};
  auto rects = build_rectangles(w, 3.0, 60.0, 0.0);
  place_rectangles(s, rects);
  const auto report = verify_counting_estimate(s, rects, 0.1);
  for (const auto& row : report.rows) {
    INFO(row.rect.label.name());
    CHECK(row.pass);
    CHECK(std::abs(row.result.winding - std::round(row.result.winding)) < 1e-6);
  }
  CHECK(report.total_pass);
  CHECK(report.strip_count == report.total_count);

  for (const auto& r : report.rows) {
    const auto zeros = locate_zeros(s, r.rect);
    const auto ref = oracle::newton_grid_zeros(
        [&](Complex z) { return s(z); }, [&](Complex z) { return s.derivative(z); },
        r.rect.center - r.rect.half_width, r.rect.center + r.rect.half_width, r.rect.alpha,
        r.rect.alpha + r.rect.height, 0.25);
    CHECK(zeros.size() == ref.size());
  }
}

TEST_CASE("jump model: middle rectangle count equals an independent enumeration") {
  // c = 2 jump at 0.8; amplitudes from the rotated expansion (degrees 0, -1, -2).
  const double th = kPi - 1.6;
  const double ip = 2.0 * (kPi - 0.8);
  const ExpSum s({{-0.5, 0, -kPi}, {ip / 4, -1, -kPi}, {0.25, -2, -kPi},
                  {Complex(-0.25), -2, -th}, {Complex(0.25), -2, th},
                  {0.5, 0, kPi}, {ip / 4, -1, kPi}, {-0.25, -2, kPi}});
  auto r = rect(10.0, 20.0, 3.0);
  const auto counted = count_zeros_nudged(s, r);
  const auto ref = oracle::newton_grid_zeros(
      [&](Complex z) { return s(z); }, [&](Complex z) { return s.derivative(z); }, -3.0, 3.0,
      counted.rect.alpha, counted.rect.alpha + 20.0, 0.2);
  CHECK(counted.result.count == static_cast<int>(ref.size()));
  CHECK(locate_zeros(s, counted.rect).size() == ref.size());
}

TEST_CASE("dominance half-width isolates the extreme exponentials") {
  const auto s = sine_model();
  const double k = dominance_half_width(s, 1.0, 10.0);
  CHECK(std::exp(2 * kPi * k) >= 1e3);
  CHECK(whole_rectangle(s, 1.0, 10.0).half_width == k);
}

TEST_CASE("stable alpha is found for the separated model") {
  const auto s = separated_model(1.0);
  const std::vector<double> w{(kPi - 1.0) / 2};
  const double alpha = stable_alpha(s, w, 40.0);
  CHECK(alpha >= 1.0);
  CHECK(alpha <= 4096.0);
}

TEST_CASE("property: Dickson bound in the whole strip for random sums") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::uniform_real_distribution<double> fr(-3.0, 3.0);
  std::uniform_real_distribution<double> al(0.1, 40.0);
  std::uniform_real_distribution<double> hs(5.0, 60.0);
  std::uniform_int_distribution<int> nterms(2, 4);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<ExpTerm> terms;
    const int n = nterms(rng);
    for (int k = 0; k < n; ++k) terms.push_back({Complex(amp(rng), amp(rng)), 0, fr(rng)});
    const ExpSum s(terms);
    const auto f = s.frequencies();
    if (f.size() < 2) continue;
    auto r = whole_rectangle(s, al(rng), hs(rng));
    const auto c = count_zeros_nudged(s, r);
    const double predicted = c.rect.height * (f.back() - f.front()) / (2 * kPi);
    CHECK(std::abs(c.result.count - predicted) <= static_cast<double>(f.size()) - 1.0);
    CHECK(std::abs(c.result.winding - c.result.count) < 1e-6);
  }
}

TEST_CASE("property: counts are additive over stacked rectangles") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::uniform_real_distribution<double> fr(-3.0, 3.0);
  std::uniform_real_distribution<double> cut(0.2, 0.8);
  for (int trial = 0; trial < 30; ++trial) {
    const ExpSum s({{Complex(amp(rng), amp(rng)), 0, fr(rng)},
                    {Complex(amp(rng), amp(rng)), 0, fr(rng)},
                    {Complex(amp(rng), amp(rng)), 0, fr(rng)}});
    if (s.frequencies().size() < 2) continue;
    auto whole = whole_rectangle(s, 2.0, 30.0);
    const double s1 = 30.0 * cut(rng);
    auto lower = whole;
    lower.height = s1;
    auto upper = whole;
    upper.alpha = whole.alpha + s1;
    upper.height = whole.height - s1;
    try {
      const int total = count_zeros(s, whole).count;
      const int split = count_zeros(s, lower).count + count_zeros(s, upper).count;
      CHECK(total == split);
    } catch (const BoundaryCollisionError&) {
      // A zero on the shared edge; additivity is only claimed without one.
    }
  }
}

TEST_CASE("locate_zeros and count_zeros agree on random sums") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> amp(0.5, 2.0);
  std::uniform_real_distribution<double> fr(0.3, 3.0);
  for (int trial = 0; trial < 15; ++trial) {
    const double t = fr(rng);
    const ExpSum s({{Complex(amp(rng), 0.3), 0, -t}, {Complex(-amp(rng), 0.1), -1, 0.2}, {amp(rng), 0, t}});
    auto r = whole_rectangle(s, 3.0, 25.0);
    const auto c = count_zeros_nudged(s, r);
    CHECK(locate_zeros(s, c.rect).size() == static_cast<std::size_t>(c.result.count));
  }
}
