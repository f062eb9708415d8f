#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <random>
#include <stdexcept>

#include "vclab/config.hpp"
#include "vclab/csv.hpp"
#include "vclab/errors.hpp"
#include "vclab/ratefit.hpp"

using namespace vclab;

TEST_CASE("fit recovers an exact line") {
  std::vector<SweepRow> rows;
  for (double e : {0.2, 0.1, 0.05, 0.02}) {
    SweepRow r;
    r.epsilon = e;
    r.eps_pow = std::pow(e, -1.0 / 3.0);
    r.log_cost = 3.0 - 2.0 * r.eps_pow;
    rows.push_back(r);
  }
  RateFit f = fit_rate(rows);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit of a seeded noisy line lands near the truth") {
  std::mt19937_64 rng(777);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    const double xi = 1.0 + 0.1 * i;
    x.push_back(xi);
    y.push_back(1.5 - 0.8 * xi + noise(rng));
  }
  RateFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.8).epsilon(0.05));
  CHECK(f.r_squared > 0.95);
}

TEST_CASE("constant rows give slope zero with perfect fit") {
  std::vector<double> x{1, 2, 3, 4}, y{5, 5, 5, 5};
  RateFit f = fit_line(x, y);
  CHECK(f.slope == 0.0);
  CHECK(f.r_squared == 1.0);
}

TEST_CASE("coincident abscissae are rejected") {
  std::vector<double> x{1, 1, 1, 1}, y{1, 2, 3, 4};
  CHECK_THROWS_AS(fit_line(x, y), DegenerateFitError);
  std::vector<SweepRow> three(3);
  CHECK_THROWS_AS(fit_rate(three), std::domain_error);
}

TEST_CASE("config parsing, overrides, validation") {
  const char* path = "test_config_tmp.cfg";
  {
    std::ofstream out(path);
    out << "# sample\n";
    out << "epsilon = 0.05, 0.2, 0.1\n";
    out << "mach = -1.5\n";
    out << "horizon = 2.0\n";
    out << "precision-bits = 320\n";
    out << "grid = 128\n";
  }
  ExperimentConfig cfg = load_config_file(path);
  std::remove(path);
  cfg.normalize_and_validate();
  CHECK(cfg.epsilons == std::vector<double>{0.2, 0.1, 0.05});  // sorted descending
  CHECK(cfg.mach == -1.5);
  CHECK(cfg.precision_bits == 320);
  CHECK(cfg.grid_n == 128);
  CHECK(cfg.effective_dt() == doctest::Approx(2.0 / 2048));

  CHECK_THROWS_AS(apply_config_entry(cfg, "bogus", "1"), std::domain_error);
  cfg.modes = 0;
  CHECK_THROWS_AS(cfg.normalize_and_validate(), std::domain_error);
}

TEST_CASE("environment variable supplies precision when no flag was given") {
  ExperimentConfig cfg;
  setenv("VC_PRECISION_BITS", "1024", 1);
  apply_env_precision(cfg, /*flag_was_set=*/false);
  CHECK(cfg.precision_bits == 1024);
  cfg.precision_bits = 256;
  apply_env_precision(cfg, /*flag_was_set=*/true);
  CHECK(cfg.precision_bits == 256);
  unsetenv("VC_PRECISION_BITS");
}

TEST_CASE("csv serialization is full precision and the plot script exists") {
  const std::filesystem::path path = "test_csv_tmp.csv";
  {
    CsvWriter w(path, {"a", "b"});
    w.row({1.0 / 3.0, 1e-300});
    w.row({17.000000000000001, 2.5});
    w.flush();
    write_gnuplot_script(path, 1, 2, "a", "b", "demo");
  }
  std::ifstream in(path);
  std::string header, line1;
  std::getline(in, header);
  std::getline(in, line1);
  CHECK(header == "a,b");
  CHECK(line1.substr(0, 19) == "0.33333333333333331");
  CHECK(line1.find("1e-300") != std::string::npos);
  CHECK(std::filesystem::exists("test_csv_tmp.gp"));
  std::filesystem::remove(path);
  std::filesystem::remove("test_csv_tmp.gp");
}
