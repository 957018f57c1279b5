#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfswap/config.hpp"
#include "tfswap/errors.hpp"
#include "tfswap/io.hpp"

using namespace tfswap;

TEST_CASE("key-value parsing") {
  const auto kv = parse_key_values("# header\nQ = 3\n  eta=0.2   # trailing\n\nQ = 4\n", "inline");
  CHECK(kv.at("Q") == "4");
  CHECK(kv.at("eta") == "0.2");
  CHECK_THROWS_AS(parse_key_values("no equals sign\n", "inline"), ConfigError);
}

TEST_CASE("number parsing is strict") {
  CHECK(parse_double("1.5e-3", "k") == 1.5e-3);
  CHECK_THROWS_AS(parse_double("1.5x", "k"), ConfigError);
  CHECK_THROWS_AS(parse_double("", "k"), ConfigError);
  CHECK(parse_long("12", "k") == 12);
  CHECK_THROWS_AS(parse_long("1.5", "k"), ConfigError);
  const auto v = parse_double_list("0.25, 0.5,1", "k");
  REQUIRE(v.size() == 3);
  CHECK(v[2] == 1.0);
}

TEST_CASE("file values apply and later overrides win") {
  const std::string path = "test_config_tmp.cfg";
  {
    std::ofstream f(path);
    f << "L_SFG_sweep_mm = 1, 2\nN_bins = 4\nQ = 6\neta = 0.3\n";
  }
  auto c = load_config(path);
  CHECK(c.N_bins == 4);
  CHECK(c.Q == 6);
  CHECK(c.L_SFG_sweep_mm == std::vector<double>{1.0, 2.0});
  c.set("eta", "0.5");
  CHECK(c.eta == 0.5);
  CHECK_THROWS_AS(c.set("no_such_key", "1"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("every key round-trips through values()") {
  SimConfig a;
  const auto vals = a.values();
  CHECK(vals.size() == SimConfig::keys().size());
  SimConfig b;
  b.apply(vals);
  CHECK(a.canonical() == b.canonical());
}

TEST_CASE("config hash tracks physics, not runtime settings") {
  SimConfig a, b;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.threads = 3;
  b.output_dir = "elsewhere";
  b.memory_budget_GB = 1;
  CHECK(a.hash() == b.hash());
  b.Q = 2;
  CHECK(a.hash() != b.hash());
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("validation catches out-of-range values") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.eta = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.integrationPoints = 10;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.toy_N = {1.5};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("CSV carries the metadata header") {
  const std::string path = "test_io_tmp.csv";
  OutputMeta m{"probe", "0123456789abcdef", {{"b1", FrequencyGrid::centered(1.5, 0.01, 2)}}, {{"note", "x"}}};
  {
    CsvWriter w(path, m, {"a", "b"});
    w.row({1.0, 2.0});
    CHECK_THROWS_AS(w.row({1.0}), DomainError);
    w.close();
  }
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string s = ss.str();
  CHECK(s.find("# schema_version: tfswap-output/1") == 0);
  CHECK(s.find("# config_hash: 0123456789abcdef") != std::string::npos);
  CHECK(s.find("# units: ") != std::string::npos);
  CHECK(s.find("count 5") != std::string::npos);
  CHECK(s.find("a,b\n1.000000000000000e+00,2.000000000000000e+00\n") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("JSON output nests the metadata") {
  const std::string path = "test_io_tmp.json";
  OutputMeta m{"probe", "abc", {{"sfg", FrequencyGrid::symmetric(4.651, 1e-3, 4)}}, {}};
  write_json(path, m, {{"value", 1.25}});
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  CHECK(j["value"].get<double>() == 1.25);
  CHECK(j["meta"]["schema_version"] == "tfswap-output/1");
  CHECK(j["meta"]["config_hash"] == "abc");
  CHECK(j["meta"]["grids"]["sfg"]["count"].get<int>() == 4);
  std::remove(path.c_str());
}

TEST_CASE("frequency grids") {
  const auto g = FrequencyGrid::symmetric(4.651, 1e-3, 24);
  CHECK(g.center() == doctest::Approx(4.651).epsilon(1e-15));
  CHECK(g.count == 24);
  const auto h = FrequencyGrid::centered(1.0, 0.1, 3);
  CHECK(h.count == 7);
  CHECK(h[3] == doctest::Approx(1.0));
  const auto w = trapezoid_weights(4);
  CHECK(w == std::vector<double>{0.5, 1.0, 1.0, 0.5});
}
