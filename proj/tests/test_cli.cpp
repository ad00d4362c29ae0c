#include "taillab/suites.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace taillab;

TEST_CASE("model grammar round trips") {
  auto iid = parse_model("iid:alpha=1.5");
  CHECK(iid.kind() == SpectralModel::Kind::Iid);
  CHECK(iid.alpha() == 1.5);

  auto geo = parse_model("geometric:rho=0.5,alpha=1");
  CHECK(geo.kind() == SpectralModel::Kind::Geometric);
  CHECK(geo.rho() == 0.5);

  auto ma = parse_model("ma:alpha=1.5,coeffs=1;0.5,p=1");
  CHECK(ma.kind() == SpectralModel::Kind::MovingAverage);
  CHECK(ma.coeffs() == FiniteSeq(0, {1.0, 0.5}));

  auto det = parse_model("deterministic:alpha=2,path=1");
  CHECK(det.kind() == SpectralModel::Kind::Deterministic);
}

TEST_CASE("model grammar rejects malformed specs") {
  CHECK_THROWS_AS(parse_model("nonsense:alpha=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("iid"), std::invalid_argument);  // missing alpha
  CHECK_THROWS_AS(parse_model("iid:alpha=zero"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("iid:alpha=1,extra=2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("geometric:alpha=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("@/no/such/file.json"), std::invalid_argument);
}

TEST_CASE("model config file form") {
  const char* path = "cli_test_model.json";
  {
    std::ofstream out(path);
    out << R"({"name":"empirical","alpha":1.5,"paths":[
      {"start":0,"values":[1.0,0.5],"weight":0.7387961250362586},
      {"start":-1,"values":[2.0,1.0],"weight":0.2612038749637415}]})";
  }
  auto m = parse_model(std::string("@") + path);
  CHECK(m.kind() == SpectralModel::Kind::Empirical);
  CHECK(m.alpha() == 1.5);
  std::remove(path);
}

TEST_CASE("validated loading rejects laws failing the change-of-time check") {
  CHECK_THROWS_AS(load_model("deterministic:alpha=1,path=1;0.5", 2, 1),
                  std::runtime_error);
  CHECK_NOTHROW(load_model("deterministic:alpha=1,path=1", 2, 1));
}

TEST_CASE("suite catalog is stable") {
  const auto& names = suite_names();
  REQUIRE(names.size() == 7);
  CHECK(names[0] == "time-change");
  CHECK(names[1] == "extremal-index");
  CHECK(names[2] == "q-identities");
  CHECK(names[3] == "cluster-index");
  CHECK(names[4] == "log-alpha1");
  CHECK(names[5] == "maxstable");
  CHECK(names[6] == "clusterlab");
}

TEST_CASE("csv schema and determinism") {
  ExperimentConfig cfg;
  cfg.model_spec = "geometric:rho=0.5,alpha=1";
  cfg.suite = "extremal-index";
  cfg.n = 20'000;
  cfg.seed = 7;
  cfg.lanes = 4;
  auto model = parse_model(cfg.model_spec);

  ExperimentConfig cfg_a = cfg, cfg_b = cfg;
  auto rows_a = run_suite(cfg.suite, model, cfg_a);
  auto rows_b = run_suite(cfg.suite, model, cfg_b);
  std::string csv_a = render_csv(rows_a);
  std::string csv_b = render_csv(rows_b);
  CHECK(csv_a == csv_b);
  CHECK(csv_a.rfind("suite,check,side_a,side_b,stderr_a,stderr_b,sigmas,pass\n",
                    0) == 0);
  for (const auto& r : rows_a) CHECK(r.pass);

  // A different lane count is a different stream layout.
  ExperimentConfig cfg_c = cfg;
  cfg_c.lanes = 2;
  auto rows_c = run_suite(cfg.suite, model, cfg_c);
  CHECK(render_csv(rows_c) != csv_a);
}

TEST_CASE("json report carries config and verdict") {
  ExperimentConfig cfg;
  cfg.model_spec = "iid:alpha=1.5";
  cfg.suite = "extremal-index";
  cfg.n = 5'000;
  cfg.seed = 3;
  auto model = parse_model(cfg.model_spec);
  auto rows = run_suite(cfg.suite, model, cfg);
  std::string json = render_json(cfg, rows);
  CHECK(json.find("\"model\": \"iid:alpha=1.5\"") != std::string::npos);
  CHECK(json.find("\"seed\": 3") != std::string::npos);
  CHECK(json.find("\"all_pass\": true") != std::string::npos);
  CHECK(json.find(kVersion) != std::string::npos);
}

TEST_CASE("unknown suite is a config error") {
  ExperimentConfig cfg;
  auto model = parse_model("iid:alpha=1.5");
  CHECK_THROWS_AS(run_suite("nope", model, cfg), std::invalid_argument);
}

TEST_CASE("suites that need a series or a unit index skip gracefully") {
  ExperimentConfig cfg;
  cfg.n = 2'000;
  auto geo = parse_model("geometric:rho=0.5,alpha=1.5");
  auto rows = run_suite("clusterlab", geo, cfg);
  CHECK(rows.empty());
  REQUIRE(!cfg.notes.empty());
  CHECK(cfg.notes[0].find("no canonical series") != std::string::npos);

  ExperimentConfig cfg2;
  cfg2.n = 2'000;
  auto rows2 = run_suite("log-alpha1", geo, cfg2);
  CHECK(rows2.empty());
  CHECK(!cfg2.notes.empty());
}
