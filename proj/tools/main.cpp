#include <iostream>

#include <CLI11.hpp>

#include "sljump/cli.hpp"
#include "sljump/errors.hpp"
#include "sljump/io.hpp"

namespace cli = sljump::cli;

int main(int argc, char** argv) {
  CLI::App app{"Sturm-Liouville spectra of potentials with jump singularities"};
  app.set_version_flag("--version", sljump::kVersion);
  app.require_subcommand(1);

  cli::SpectrumConfig spectrum;
  auto* sp = app.add_subcommand("spectrum", "first N Dirichlet eigenvalues z_n");
  sp->add_option("--potential", spectrum.potential_file, "potential JSON file")->required();
  sp->add_option("--n", spectrum.n, "number of eigenvalues");
  sp->add_option("--out", spectrum.out_dir, "output directory");

  cli::ExpansionErrorConfig expansion;
  auto* ex = app.add_subcommand("expansion-error", "truncated expansion error and decay slopes");
  ex->add_option("--potential", expansion.potential_file, "potential JSON file")->required();
  ex->add_option("--omega-min", expansion.omega_min);
  ex->add_option("--omega-max", expansion.omega_max);
  ex->add_option("--omega-steps", expansion.omega_steps);
  ex->add_option("--out", expansion.out_dir, "output directory");

  cli::CountConfig count;
  auto* co = app.add_subcommand("count", "zero counts of the model sum per rectangle");
  co->add_option("--potential", count.potential_file, "potential JSON file")->required();
  co->add_option("--window", count.window, "rectangle height s");
  co->add_option("--alpha", count.alpha, "rectangle base Im z (default: smallest stable)");
  co->add_option("--half-width", count.half_width, "rectangle half-width (default: automatic)");
  co->add_option("--epsilon", count.epsilon, "budget slack");
  co->add_option("--truncation", count.truncation, "keep degrees >= -truncation");
  co->add_flag("--locate", count.locate, "locate and label the zeros");
  co->add_option("--out", count.out_dir, "output directory");

  cli::RecoverConfig recover;
  auto* re = app.add_subcommand("recover", "estimate singular locations from the spectrum");
  re->add_option("--potential", recover.potential_file, "potential JSON file")->required();
  re->add_option("--n", recover.n, "number of eigenvalues (>= 64)");
  re->add_option("--expect", recover.expect, "locations that must be recovered");
  re->add_option("--out", recover.out_dir, "output directory");

  cli::CompareOracleConfig compare;
  auto* cmp = app.add_subcommand("compare-oracle", "shooting vs transfer-matrix oracle");
  cmp->add_option("--potential", compare.potential_file, "potential JSON file")->required();
  cmp->add_option("--n", compare.n, "number of eigenvalues");
  cmp->add_option("--omega-min", compare.omega_min);
  cmp->add_option("--omega-max", compare.omega_max);
  cmp->add_option("--omega-steps", compare.omega_steps);
  cmp->add_option("--tolerance", compare.tolerance);
  cmp->add_option("--out", compare.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sp->parsed()) return cli::run_spectrum(spectrum, std::cout);
    if (ex->parsed()) return cli::run_expansion_error(expansion, std::cout);
    if (co->parsed()) return cli::run_count(count, std::cout);
    if (re->parsed()) return cli::run_recover(recover, std::cout);
    if (cmp->parsed()) return cli::run_compare_oracle(compare, std::cout);
  } catch (const sljump::BoundaryCollisionError& e) {
    std::cerr << "error: " << e.what() << " (retry with a different --alpha)\n";
    return cli::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitError;
  }
  return cli::kExitError;
}
