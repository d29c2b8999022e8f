#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "specflow/harness.hpp"

using namespace specflow;

namespace {

const char* kCircleConfig =
    "model = s1\n"
    "k = 1\n"
    "N = 32\n"
    "N_list = 16 32\n"
    "r_list = 10\n"
    "s_points = 33\n"
    "lambda_window = 16\n"
    "gauge_coeff = 1 0 0 0 0 0.3\n";

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config parsing: happy path") {
  const ExperimentConfig cfg = parse_config(kCircleConfig, "test");
  CHECK(cfg.model.kind == ModelKind::Circle);
  CHECK(cfg.k == 1);
  CHECK(cfg.cutoff == 32);
  CHECK(cfg.cutoff_list == std::vector<int>{16, 32});
  CHECK(cfg.r_list == std::vector<double>{10.0});
  CHECK(cfg.lambda_window == 16.0);
  CHECK(cfg.gauge.coeffs().size() == 1);
}

TEST_CASE("config parsing: rejections") {
  CHECK_THROWS_AS(parse_config("model = s1\nwhat = 3\n", "t"), ConfigError);       // unknown key
  CHECK_THROWS_AS(parse_config("k = 1\n", "t"), ConfigError);                      // no model
  CHECK_THROWS_AS(parse_config("model = s1\nk = 1\nr_list = 0.5\n", "t"), ConfigError);  // r < 1
  CHECK_THROWS_AS(parse_config("model = s1\nk = one\n", "t"), ConfigError);        // bad number
  CHECK_THROWS_AS(
      parse_config("model = s1\nk = 1\ngauge_coeff = 1 0 0 0 1 0\n", "t"),
      ConfigError);  // non-skew constant coefficient
  // gauge_file and gauge_coeff are mutually exclusive
  CHECK_THROWS_AS(parse_config("model = s1\nk = 1\ngauge_file = x\ngauge_coeff = 1 0 0 0 0 0.3\n",
                               "t"),
                  ConfigError);
}

TEST_CASE("flow-eta identity on the circle instance") {
  const ExperimentConfig cfg = parse_config(kCircleConfig, "test");
  const IdentityReport rep = verify_flow_eta_identity(cfg);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.convention == "plus");
  for (const auto& row : rep.rows) {
    CHECK(row.sf == 3);
    CHECK(row.predictor_integral == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(row.eta_bar_0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row.eta_bar_1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(row.residual_plus) < 1e-10);
  }
  CHECK(rep.pass);
  CHECK(rep.residual_nonincreasing);
}

TEST_CASE("loglog fit recovers a synthetic exponent and refuses short data") {
  std::vector<double> x{2.0, 4.0, 8.0, 16.0, 32.0}, y;
  for (double xi : x) y.push_back(3.0 * std::pow(xi, 1.6));
  double slope = 0.0, res = 0.0;
  REQUIRE(loglog_fit(x, y, &slope, &res));
  CHECK(slope == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(res < 1e-12);
  std::vector<double> xs{1.0, 2.0, 4.0}, ys{1.0, 2.0, 4.0};
  CHECK(!loglog_fit(xs, ys, &slope, &res));
  // zero values are excluded from the fit
  std::vector<double> xz{1.0, 2.0, 4.0, 8.0, 16.0}, yz{0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(!loglog_fit(xz, yz, &slope, &res));
}

TEST_CASE("flat circle sweep: vacuous bound handled per row") {
  std::ostringstream cfgtext;
  cfgtext << "model = s1\nk = 1\nN = 24\nlambda_window = 12\ns_points = 17\n"
          << "r_list = 5 10 20 40 80\n"
          << "gauge_coeff = 1 0 0 0 0 0.05\n";
  const ExperimentConfig cfg = parse_config(cfgtext.str(), "test");
  const ScalingReport rep = sweep(cfg);
  REQUIRE(rep.rows.size() == 5);
  for (const auto& row : rep.rows) {
    CHECK(row.flat);
    CHECK(row.R == 0.0);
    CHECK(row.error <= 1.0);
    CHECK(row.note.find("flat family") != std::string::npos);
  }
  CHECK(rep.pass_flow_bound);
  CHECK(rep.pass_eta_bound);
}

TEST_CASE("sweep CSV is byte-identical across runs") {
  std::ostringstream cfgtext;
  cfgtext << "model = s1\nk = 1\nN = 16\nlambda_window = 8\ns_points = 9\n"
          << "r_list = 2 3 5 7 11\n"
          << "gauge_coeff = 1 0 0 0 0 0.3\n";
  const ExperimentConfig cfg = parse_config(cfgtext.str(), "test");
  std::ostringstream a, b;
  write_report_csv(a, sweep(cfg));
  write_report_csv(b, sweep(cfg));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("r,R,sf,predictor,error,eta_bar_D1,note\n", 0) == 0);
}

TEST_CASE("monotone refinement: N-increase leaves sf and predictor fixed") {
  // truncation-converged coupling (r = 1) on the torus
  std::ostringstream cfgtext;
  cfgtext << "model = t3\nk = 1\nN = 4\nr_list = 1\ns_points = 9\nlambda_window = 1.2\n"
          << "gauge_coeff = 2 1 0 0 0.5 0\ngauge_coeff = 2 -1 0 0 -0.5 0\n";
  ExperimentConfig cfg = parse_config(cfgtext.str(), "test");
  const long long sf4 = spectral_flow(run_tracking(cfg, 4, 1.0)).sf;
  const long long sf6 = spectral_flow(run_tracking(cfg, 6, 1.0)).sf;
  CHECK(sf4 == sf6);
  // the predictor is pure form algebra: independent of the truncation
  const double p1 = predict_flow(cfg.gauge, 1.0, 4).predictor;
  const double p2 = predict_flow(cfg.gauge, 1.0, 8).predictor;
  CHECK(std::abs(p1 - p2) < 1e-9);
}

TEST_CASE("gauge file round trip through the config loader") {
  // write a gauge field, reference it from a config, and get the same field
  const GaugeField a = t3_sin_field();
  std::ostringstream gf;
  write_gauge_field(gf, a);
  const std::string path = "test_gauge_roundtrip.txt";
  {
    std::ofstream out(path);
    out << gf.str();
  }
  std::ostringstream cfgtext;
  cfgtext << "model = t3\nk = 1\nN = 3\nr_list = 8\ngauge_file = " << path << "\n";
  const ExperimentConfig cfg = parse_config(cfgtext.str(), "test");
  CHECK(cfg.gauge.coeffs().size() == a.coeffs().size());
  std::remove(path.c_str());
}

TEST_SUITE_END();
