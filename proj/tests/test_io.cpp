#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sljump/cli.hpp"
#include "sljump/errors.hpp"
#include "sljump/io.hpp"

using namespace sljump;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_potential(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sljump_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_potential(const std::filesystem::path& dir, const std::string& text) {
  const auto path = dir / "potential.json";
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("potential JSON round trip") {
  const SingularPotential p({{0, 0.8, 2.0}, {1, 0.3, -1.25}}, SmoothTail({1.0, 0.1}), 5);
  const auto back = parse_potential(potential_to_json(p));
  CHECK(back.terms() == p.terms());
  CHECK(back.tail().coefficients() == p.tail().coefficients());
  CHECK(back.smoothness_order() == 5);
  CHECK(back.hash() == p.hash());
}

TEST_CASE("potential file errors name the problem") {
  CHECK(error_of("{").find("malformed") != std::string::npos);
  CHECK(error_of("[]").find("object") != std::string::npos);
  CHECK(error_of(R"({"terms": []})").find("\"M\"") != std::string::npos);
  CHECK(error_of(R"({"M": 4})").find("odd") != std::string::npos);
  CHECK(error_of(R"({"M": 5, "terms": [{"m": 0, "x": 2.0, "c": 1}]})").find("(0, pi/2)") !=
        std::string::npos);
  CHECK(error_of(R"({"M": 5, "terms": [{"m": 0, "c": 1}]})").find("terms[0]") !=
        std::string::npos);
  CHECK(error_of(R"({"M": 5, "terms": [{"m": 0.5, "x": 1, "c": 1}]})").find("integer") !=
        std::string::npos);
  CHECK(error_of(R"({"M": 5, "tail": ["a"]})").find("tail[0]") != std::string::npos);
  CHECK(error_of(R"({"M": 5, "terms": [{"m": 0, "x": 0.5, "c": 1}, {"m": 0, "x": 0.5, "c": 2}]})")
            .find("distinct") != std::string::npos);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 3.141592653589793}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("spectrum CSV round trip") {
  Spectrum s;
  s.potential_hash = "abc";
  s.unsupported = {1};
  s.eigenvalues = {{2, 1.7320508075688772, 1e-16, 0.5}, {3, 2.8284271247461903, 2e-16, -0.1}};
  std::stringstream buf;
  write_spectrum_csv(buf, s);
  const auto text = buf.str();
  CHECK(text.find("# sljump 0.1.0") == 0);
  CHECK(text.find("n,z_n,residual,z_n_minus_n") != std::string::npos);
  const auto back = read_spectrum_csv(buf);
  CHECK(back.potential_hash == "abc");
  REQUIRE(back.eigenvalues.size() == 2);
  CHECK(back.eigenvalues[1].value == s.eigenvalues[1].value);
  std::stringstream gap("n,z_n\n1,1.0\n3,3.0\n");
  CHECK_THROWS_AS(read_spectrum_csv(gap), ValidationError);
}

TEST_CASE("ExpSum CSV columns") {
  std::stringstream buf;
  write_exp_sum_csv(buf, ExpSum({{Complex(1, -2), -1, 0.5}}), "h");
  CHECK(buf.str().find("re_A,im_A,degree,frequency\n1,-2,-1,0.5\n") != std::string::npos);
}

TEST_CASE("cli spectrum: zero potential, N = 10") {
  const auto dir = scratch("spectrum");
  cli::SpectrumConfig cfg;
  cfg.potential_file = write_potential(dir, R"({"M": 5, "terms": [], "tail": []})");
  cfg.n = 10;
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  CHECK(cli::run_spectrum(cfg, log) == cli::kExitOk);
  std::ifstream in(dir / "out" / "spectrum.csv");
  const auto spec = read_spectrum_csv(in);
  REQUIRE(spec.eigenvalues.size() == 10);
  for (const auto& e : spec.eigenvalues) {
    CHECK(std::abs(e.value - e.index) < 1e-10);
    CHECK(e.residual < 1e-10);
  }
  const auto first = slurp(dir / "out" / "spectrum.csv");
  CHECK(cli::run_spectrum(cfg, log) == cli::kExitOk);
  CHECK(slurp(dir / "out" / "spectrum.csv") == first);
}

TEST_CASE("cli spectrum: constant 1, N = 5") {
  const auto dir = scratch("const");
  cli::SpectrumConfig cfg;
  cfg.potential_file = write_potential(dir, R"({"M": 5, "terms": [], "tail": [1.0]})");
  cfg.n = 5;
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  REQUIRE(cli::run_spectrum(cfg, log) == cli::kExitOk);
  std::ifstream in(dir / "out" / "spectrum.csv");
  const auto spec = read_spectrum_csv(in);
  for (const auto& e : spec.eigenvalues) {
    CHECK(e.value == doctest::Approx(std::sqrt(e.index * e.index + 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("cli expansion-error: zero potential is exact") {
  const auto dir = scratch("expansion");
  cli::ExpansionErrorConfig cfg;
  cfg.potential_file = write_potential(dir, R"({"M": 3, "terms": [], "tail": []})");
  cfg.omega_steps = 100;
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  CHECK(cli::run_expansion_error(cfg, log) == cli::kExitOk);
  const auto slopes = slurp(dir / "out" / "expansion_slopes.csv");
  CHECK(slopes.find("1,nan,true") != std::string::npos);
  CHECK(slopes.find("3,nan,true") != std::string::npos);
}

TEST_CASE("cli expansion-error: constant potential order 1 decays like omega^-2 or faster") {
  const auto dir = scratch("expansion_const");
  cli::ExpansionErrorConfig cfg;
  cfg.potential_file = write_potential(dir, R"({"M": 3, "terms": [], "tail": [1.0]})");
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  CHECK(cli::run_expansion_error(cfg, log) == cli::kExitOk);
  std::istringstream lines(log.str());
  std::string line;
  bool seen = false;
  while (std::getline(lines, line)) {
    if (line.rfind("order 1 slope ", 0) == 0) {
      CHECK(std::stod(line.substr(14)) <= -2.0 + 0.3);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("cli count: sine-only potential passes; failures exit 1") {
  const auto dir = scratch("count");
  cli::CountConfig cfg;
  cfg.potential_file = write_potential(dir, R"({"M": 5, "terms": [], "tail": []})");
  cfg.window = 20.5;
  cfg.alpha = 0.25;
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  CHECK(cli::run_count(cfg, log) == cli::kExitOk);
  CHECK(slurp(dir / "out" / "count.csv").find("L1+L2,0.25,20.5") != std::string::npos);
  CHECK(slurp(dir / "out" / "count.json").find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("cli recover: expected location check") {
  const auto dir = scratch("recover");
  cli::RecoverConfig cfg;
  cfg.potential_file = write_potential(dir, R"({"M": 5, "terms": [{"m": 0, "x": 0.8, "c": 2.0}]})");
  cfg.n = 128;
  cfg.out_dir = (dir / "out").string();
  cfg.expect = {0.8};
  std::ostringstream log;
  CHECK(cli::run_recover(cfg, log) == cli::kExitOk);
  cfg.expect = {1.0};
  CHECK(cli::run_recover(cfg, log) == cli::kExitCheckFailed);
  cfg.n = 32;
  CHECK_THROWS_AS(cli::run_recover(cfg, log), InsufficientDataError);
  CHECK(std::filesystem::exists(dir / "out" / "dft.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "recovery.json"));
}

TEST_CASE("cli compare-oracle") {
  const auto dir = scratch("compare");
  cli::CompareOracleConfig cfg;
  cfg.potential_file =
      write_potential(dir, R"({"M": 5, "terms": [{"m": 0, "x": 0.5, "c": 1.0}, {"m": 0, "x": 1.2, "c": 1.0}]})");
  cfg.n = 32;
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  CHECK(cli::run_compare_oracle(cfg, log) == cli::kExitOk);
  cfg.potential_file = write_potential(dir, R"({"M": 5, "terms": [{"m": 1, "x": 0.5, "c": 1.0}]})");
  CHECK_THROWS_AS(cli::run_compare_oracle(cfg, log), DomainError);
}
