#include "sljump/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "sljump/eigensolver.hpp"
#include "sljump/errors.hpp"
#include "sljump/expansion.hpp"
#include "sljump/expsum_zeros.hpp"
#include "sljump/io.hpp"
#include "sljump/recovery.hpp"
#include "sljump/shooting.hpp"

namespace sljump::cli {

namespace {

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

void require_positive(double value, const char* flag) {
  if (!(value > 0.0)) throw ValidationError(std::string(flag) + " must be positive");
}

std::vector<double> omega_grid(double lo, double hi, int steps) {
  require_positive(lo, "--omega-min");
  if (!(hi > lo)) throw ValidationError("--omega-max must exceed --omega-min");
  if (steps < 2) throw ValidationError("--omega-steps must be at least 2");
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i) grid[i] = lo + (hi - lo) * i / (steps - 1);
  return grid;
}

// Locations whose frequency pi - 2x survives in the truncated sum.
std::vector<double> visible_locations(const SingularPotential& p, const ExpSum& sum) {
  const auto freq = sum.frequencies();
  std::vector<double> out;
  for (double x : p.locations()) {
    const double f = kPi - 2.0 * x;
    const bool present = std::any_of(freq.begin(), freq.end(),
                                     [&](double g) { return std::abs(g - f) < 1e-12; });
    if (present && (out.empty() || out.back() != x)) out.push_back(x);
  }
  return out;
}

// Sign-change bisection on the transfer-matrix oracle around a computed root.
double oracle_root(const SingularPotential& p, double guess) {
  auto f = [&](double w) { return transfer_matrix_shoot(p, w).y_end.real(); };
  for (double d = 1e-8; d < 0.5; d *= 4.0) {
    double a = guess - d;
    double b = guess + d;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0) == (fb < 0)) continue;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (fm == 0.0) return m;
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }
  throw ConvergenceError("compare-oracle: no oracle sign change near " + format_number(guess));
}

}  // namespace

int run_spectrum(const SpectrumConfig& config, std::ostream& log) {
  if (config.n < 1) throw ValidationError("--n must be at least 1");
  const auto p = load_potential(config.potential_file);
  const auto spec = spectrum(p, config.n);
  auto out = open_output(config.out_dir, "spectrum.csv");
  write_spectrum_csv(out, spec);

  double max_residual = 0.0;
  double max_offset = 0.0;
  for (const auto& e : spec.eigenvalues) {
    max_residual = std::max(max_residual, e.residual);
    max_offset = std::max(max_offset, std::abs(e.value - e.index));
  }
  log << "potential " << spec.potential_hash << "\n";
  log << "N " << spec.eigenvalues.size() << " unsupported " << spec.unsupported.size() << "\n";
  log << "max_residual " << format_number(max_residual) << "\n";
  log << "max_abs_z_minus_n " << format_number(max_offset) << "\n";
  return kExitOk;
}

int run_expansion_error(const ExpansionErrorConfig& config, std::ostream& log) {
  const auto p = load_potential(config.potential_file);
  const auto grid = omega_grid(config.omega_min, config.omega_max, config.omega_steps);
  if (config.omega_min < 1.0) throw ValidationError("--omega-min must be at least 1");

  std::vector<int> orders;
  for (int k = 1; k <= p.smoothness_order(); k += 2) orders.push_back(k);
  std::vector<std::vector<double>> errors(orders.size());
  for (double w : grid) {
    const Complex y = shoot(p, w).y_end;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      errors[i].push_back(std::abs(y - eval_expansion(p, w, orders[i])));
    }
  }

  auto out = open_output(config.out_dir, "expansion_error.csv");
  write_metadata(out, p.hash());
  out << "omega";
  for (int k : orders) out << ",error_order" << k;
  out << '\n';
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out << format_number(grid[j]);
    for (const auto& e : errors) out << ',' << format_number(e[j]);
    out << '\n';
  }

  auto slopes = open_output(config.out_dir, "expansion_slopes.csv");
  write_metadata(slopes, p.hash());
  slopes << "order,slope,exact\n";
  log << "potential " << p.hash() << "\n";
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto fit = fit_decay_slope(grid, errors[i]);
    slopes << orders[i] << ',' << (fit.exact ? "nan" : format_number(fit.slope)) << ','
           << (fit.exact ? "true" : "false") << '\n';
    log << "order " << orders[i] << " slope "
        << (fit.exact ? std::string("exact") : format_number(fit.slope)) << "\n";
  }
  return kExitOk;
}

int run_count(const CountConfig& config, std::ostream& log) {
  require_positive(config.window, "--window");
  require_positive(config.epsilon, "--epsilon");
  if (config.truncation < 0) throw ValidationError("--truncation must be nonnegative");
  const auto p = load_potential(config.potential_file);
  const auto sum = to_exp_sum(p, config.truncation);
  const auto locations = visible_locations(p, sum);

  double alpha = config.alpha;
  if (!(alpha > 0.0)) alpha = stable_alpha(sum, locations, config.window);
  auto rects = build_rectangles(locations, alpha, config.window, config.half_width);
  place_rectangles(sum, rects);
  const auto report = verify_counting_estimate(sum, rects, config.epsilon);

  {
    auto out = open_output(config.out_dir, "count.csv");
    write_count_csv(out, report, p.hash());
    auto json = open_output(config.out_dir, "count.json");
    json << count_report_json(report, p.hash()) << '\n';
    auto terms = open_output(config.out_dir, "expsum.csv");
    write_exp_sum_csv(terms, sum, p.hash());
  }

  log << "potential " << p.hash() << "\n";
  log << "alpha " << format_number(alpha) << " s " << format_number(config.window) << " J "
      << locations.size() << "\n";
  for (const auto& row : report.rows) {
    log << row.rect.label.name() << " count " << row.result.count << " predicted "
        << format_number(row.result.predicted) << " budget " << format_number(row.result.budget)
        << (row.pass ? " pass" : " FAIL") << "\n";
  }
  log << "total " << report.total_count << " strip " << report.strip_count
      << (report.total_pass ? " pass" : " FAIL") << "\n";

  if (config.locate) {
    std::vector<Complex> zeros;
    std::vector<CountingRectangle> counted;
    for (const auto& row : report.rows) {
      const auto found = locate_zeros(sum, row.rect);
      zeros.insert(zeros.end(), found.begin(), found.end());
      counted.push_back(row.rect);
    }
    const auto labeling = classify_model_zeros(sum, counted, zeros);
    auto out = open_output(config.out_dir, "zeros.csv");
    write_metadata(out, p.hash());
    out << "label,re,im\n";
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      out << counted[labeling.assignments[i]].label.name() << ',' << format_number(zeros[i].real())
          << ',' << format_number(zeros[i].imag()) << '\n';
    }
    for (const auto& f : labeling.families) {
      log << f.label.name() << " mean_spacing " << format_number(f.mean_spacing)
          << " predicted_spacing " << format_number(f.predicted_spacing) << "\n";
    }
  }
  return report.all_pass ? kExitOk : kExitCheckFailed;
}

int run_recover(const RecoverConfig& config, std::ostream& log) {
  if (config.n < 64) throw InsufficientDataError("--n must be at least 64 for recovery");
  const auto p = load_potential(config.potential_file);
  const auto spec = spectrum(p, config.n);
  const auto report = recover_singularities(spec);
  {
    auto s = open_output(config.out_dir, "spectrum.csv");
    write_spectrum_csv(s, spec);
    auto csv = open_output(config.out_dir, "recovery.csv");
    write_recovery_csv(csv, report, p.hash());
    auto json = open_output(config.out_dir, "recovery.json");
    json << recovery_report_json(report, p.hash()) << '\n';
    auto dft = open_output(config.out_dir, "dft.csv");
    write_dft_csv(dft, residual_spectrum(spec), p.hash());
  }

  log << "potential " << p.hash() << "\n";
  log << "N " << report.n_used << " resolution " << format_number(report.resolution)
      << " detrended_mean " << format_number(report.detrended_mean) << "\n";
  for (const auto& e : report.estimated_locations) {
    log << "peak x " << format_number(e.location) << " magnitude " << format_number(e.magnitude)
        << "\n";
  }
  bool ok = true;
  for (double x : config.expect) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : report.estimated_locations) best = std::min(best, std::abs(e.location - x));
    const bool hit = best <= report.resolution;
    ok = ok && hit;
    log << "expect " << format_number(x) << (hit ? " recovered" : " MISSED") << "\n";
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int run_compare_oracle(const CompareOracleConfig& config, std::ostream& log) {
  if (config.n < 1) throw ValidationError("--n must be at least 1");
  require_positive(config.tolerance, "--tolerance");
  const auto p = load_potential(config.potential_file);
  if (!p.is_piecewise_constant()) {
    throw DomainError("compare-oracle: the transfer-matrix oracle needs a piecewise-constant potential");
  }
  const auto grid = omega_grid(config.omega_min, config.omega_max, config.omega_steps);

  auto out = open_output(config.out_dir, "compare_shoot.csv");
  write_metadata(out, p.hash());
  out << "omega,y_shoot,y_oracle,scaled_error\n";
  double worst_shoot = 0.0;
  for (double w : grid) {
    const auto a = shoot(p, w);
    const auto b = transfer_matrix_shoot(p, w);
    const double scale = std::hypot(std::max(1.0, w) * std::abs(b.y_end), std::abs(b.dy_end));
    const double err = std::hypot(std::max(1.0, w) * std::abs(a.y_end - b.y_end),
                                  std::abs(a.dy_end - b.dy_end)) / scale;
    worst_shoot = std::max(worst_shoot, err);
    out << format_number(w) << ',' << format_number(a.y_end.real()) << ','
        << format_number(b.y_end.real()) << ',' << format_number(err) << '\n';
  }

  const auto spec = spectrum(p, config.n);
  auto eig = open_output(config.out_dir, "compare_eigenvalues.csv");
  write_metadata(eig, p.hash());
  eig << "n,z_n,oracle,abs_error\n";
  double worst_eig = 0.0;
  for (const auto& e : spec.eigenvalues) {
    const double root = oracle_root(p, e.value);
    const double err = std::abs(root - e.value);
    worst_eig = std::max(worst_eig, err);
    eig << e.index << ',' << format_number(e.value) << ',' << format_number(root) << ','
        << format_number(err) << '\n';
  }

  const bool ok = worst_shoot <= config.tolerance && worst_eig <= config.tolerance;
  log << "potential " << p.hash() << "\n";
  log << "max_shoot_error " << format_number(worst_shoot) << "\n";
  log << "max_eigenvalue_error " << format_number(worst_eig) << "\n";
  log << (ok ? "agree" : "DISAGREE") << " at tolerance " << format_number(config.tolerance) << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace sljump::cli
