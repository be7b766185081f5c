#include "sljump/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sljump/errors.hpp"

namespace sljump {

std::vector<TrigTerm> ExpansionTerms::all() const {
  std::vector<TrigTerm> out = leading;
  out.insert(out.end(), pq_blocks.begin(), pq_blocks.end());
  out.insert(out.end(), singular_blocks.begin(), singular_blocks.end());
  return out;
}

ExpansionTerms expansion_terms(const SingularPotential& potential, int order) {
  if (order < 1 || order % 2 == 0) throw DomainError("expansion: order must be odd and >= 1");
  if (order > potential.smoothness_order()) {
    throw DomainError("expansion: order must not exceed the smoothness order M");
  }
  const int half = (order - 1) / 2;
  const auto coeffs = spectral_coefficients(potential);

  ExpansionTerms out;
  out.order = order;
  out.leading.push_back({1.0, 1, kPi, Trig::Sine});
  out.leading.push_back({-0.5 * coeffs.p[0], 2, kPi, Trig::Cosine});

  // 2 * (2 omega)^{-k} = 2^{1-k} omega^{-k}
  auto weight = [](int k) { return std::ldexp(1.0, 1 - k); };
  auto sign = [](int e) { return e % 2 == 0 ? 1.0 : -1.0; };

  for (int m = 2; m <= half; ++m) {
    out.pq_blocks.push_back(
        {sign(m) * weight(2 * m) * coeffs.p[m - 1], 2 * m, kPi, Trig::Cosine});
  }
  for (int m = 1; m <= half; ++m) {
    out.pq_blocks.push_back(
        {sign(m + 1) * weight(2 * m + 1) * coeffs.q[m - 1], 2 * m + 1, kPi, Trig::Sine});
  }
  for (int m = 0; m <= half - 1; ++m) {
    for (const auto& t : potential.terms()) {
      const double phase = kPi - 2.0 * t.location;
      if (t.order == 2 * m) {
        out.singular_blocks.push_back(
            {sign(m) * weight(2 * m + 3) * t.coefficient, 2 * m + 3, phase, Trig::Sine});
      } else if (t.order == 2 * m + 1) {
        out.singular_blocks.push_back(
            {sign(m + 1) * weight(2 * m + 4) * t.coefficient, 2 * m + 4, phase, Trig::Cosine});
      }
    }
  }
  return out;
}

Complex eval_expansion(const SingularPotential& potential, Complex omega, int order) {
  if (std::abs(omega) < 1.0) {
    throw UnsupportedError("eval_expansion: |omega| < 1 is outside the asymptotic regime");
  }
  const auto terms = expansion_terms(potential, order);
  Complex acc = 0.0;
  for (const auto& t : terms.all()) {
    const Complex arg = t.frequency * omega;
    const Complex trig = t.kind == Trig::Sine ? std::sin(arg) : std::cos(arg);
    acc += t.coefficient * std::pow(omega, -t.power) * trig;
  }
  return acc;
}

// --- ExpSum -----------------------------------------------------------------

ExpSum::ExpSum(std::vector<ExpTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const ExpTerm& a, const ExpTerm& b) {
    if (a.frequency != b.frequency) return a.frequency < b.frequency;
    return a.degree > b.degree;
  });
  for (const auto& t : terms) {
    if (!std::isfinite(t.frequency)) throw ValidationError("ExpSum: frequency must be finite");
    if (!terms_.empty() && terms_.back().frequency == t.frequency &&
        terms_.back().degree == t.degree) {
      terms_.back().amplitude += t.amplitude;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const ExpTerm& t) { return t.amplitude == Complex(0.0); });
}

Complex ExpSum::operator()(Complex z) const {
  if (z == Complex(0.0) && has_negative_degree()) {
    throw DomainError("ExpSum: z = 0 with negative degrees");
  }
  Complex acc = 0.0;
  for (const auto& t : terms_) {
    acc += t.amplitude * std::pow(z, t.degree) * std::exp(t.frequency * z);
  }
  return acc;
}

Complex ExpSum::derivative(Complex z) const {
  if (z == Complex(0.0) && has_negative_degree()) {
    throw DomainError("ExpSum: z = 0 with negative degrees");
  }
  Complex acc = 0.0;
  for (const auto& t : terms_) {
    const Complex zd = std::pow(z, t.degree);
    const Complex e = std::exp(t.frequency * z);
    const Complex power_rule = t.degree == 0 ? Complex(0.0) : static_cast<double>(t.degree) * zd / z;
    acc += t.amplitude * e * (t.frequency * zd + power_rule);
  }
  return acc;
}

double ExpSum::magnitude_scale(Complex z) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    acc += std::abs(t.amplitude) * std::pow(std::abs(z), t.degree) *
           std::exp(t.frequency * z.real());
  }
  return acc;
}

std::vector<double> ExpSum::frequencies() const {
  std::vector<double> out;
  for (const auto& t : terms_) {
    if (out.empty() || out.back() != t.frequency) out.push_back(t.frequency);
  }
  return out;
}

const ExpTerm& ExpSum::leading(double frequency) const {
  for (const auto& t : terms_) {
    if (t.frequency == frequency) return t;  // sorted by descending degree
  }
  throw DomainError("ExpSum: no term with the requested frequency");
}

bool ExpSum::has_negative_degree() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const ExpTerm& t) { return t.degree < 0; });
}

Complex eval_exp_sum(const ExpSum& sum, Complex z) { return sum(z); }

namespace {

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

ExpSum to_exp_sum(const SingularPotential& potential, int truncation_degree) {
  const auto terms = expansion_terms(potential, potential.smoothness_order());
  const Complex i(0.0, 1.0);
  std::vector<ExpTerm> out;
  for (const auto& t : terms.all()) {
    // z * K omega^{-k} trig(theta omega) with omega = -i z, omega^{-k} = i^k z^{-k}:
    //   sin -> K i^k (-i)/2 z^{1-k} (e^{theta z} - e^{-theta z})
    //   cos -> K i^k / 2    z^{1-k} (e^{theta z} + e^{-theta z})
    const int degree = 1 - t.power;
    if (degree < -truncation_degree) continue;
    const Complex ik = i_power(t.power);
    if (t.kind == Trig::Sine) {
      const Complex a = t.coefficient * ik * (-i) / 2.0;
      out.push_back({a, degree, t.frequency});
      out.push_back({-a, degree, -t.frequency});
    } else {
      const Complex a = t.coefficient * ik / 2.0;
      out.push_back({a, degree, t.frequency});
      out.push_back({a, degree, -t.frequency});
    }
  }
  return ExpSum(std::move(out));
}

DecayFit fit_decay_slope(const std::vector<double>& omega, const std::vector<double>& error,
                         int bins, double exact_floor) {
  if (omega.size() != error.size() || omega.size() < 2) {
    throw ValidationError("fit_decay_slope: need matching omega/error samples");
  }
  if (bins < 2) throw ValidationError("fit_decay_slope: need at least two bins");
  DecayFit fit;
  fit.exact = std::all_of(error.begin(), error.end(),
                          [&](double e) { return std::abs(e) <= exact_floor; });
  if (fit.exact) return fit;

  const auto [lo_it, hi_it] = std::minmax_element(omega.begin(), omega.end());
  const double lo = std::log(*lo_it);
  const double hi = std::log(*hi_it);
  if (!(*lo_it > 0.0) || !(hi > lo)) throw ValidationError("fit_decay_slope: bad omega range");
  std::vector<double> peak(bins, 0.0);
  std::vector<bool> filled(bins, false);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    int b = static_cast<int>((std::log(omega[i]) - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    peak[b] = std::max(peak[b], std::abs(error[i]));
    filled[b] = true;
  }
  std::vector<double> xs, ys;
  for (int b = 0; b < bins; ++b) {
    if (!filled[b]) continue;
    xs.push_back(lo + (b + 0.5) * (hi - lo) / bins);
    ys.push_back(std::log(std::max(peak[b], 1e-300)));
  }
  if (xs.size() < 2) throw ValidationError("fit_decay_slope: fewer than two populated bins");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.slope = sxy / sxx;
  return fit;
}

}  // namespace sljump
