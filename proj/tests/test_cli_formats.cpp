#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "dp/config.hpp"
#include "dp/manifest.hpp"
#include "dp/rho.hpp"

using namespace dp;

TEST_CASE("flat key=value config") {
    std::istringstream in(
        "# small-data run\n"
        "c = 1\n"
        "grid = 128\n"
        "dt = 0.001\n"
        "t_end = 2.0\n"
        "amplitude = 0.01\n"
        "seed = 42\n"
        "dealias = true\n"
        "gammas = 1,3,5\n"
        "sobolev = 2,3\n"
        "init = 1:0.005+0.0i, 2:0.002+0.001i\n");
    SimConfig cfg = parse_sim_config(in);
    CHECK(cfg.grid == 128);
    CHECK(cfg.seed == 42);
    CHECK(cfg.gammas == std::vector<unsigned>{1, 3, 5});
    CHECK(cfg.sobolev == std::vector<double>{2.0, 3.0});
    REQUIRE(cfg.init_modes.count(1) == 1);
    CHECK(cfg.init_modes.at(2) == cplx(0.002, 0.001));
}

TEST_CASE("config rejections") {
    std::istringstream bad1("c = 0\n");
    CHECK_THROWS_AS(parse_sim_config(bad1), ZeroParameter);
    std::istringstream bad2("grid = 100\n");
    CHECK_THROWS_AS(parse_sim_config(bad2), ConfigError);
    std::istringstream bad3("weird = 1\n");
    CHECK_THROWS_AS(parse_sim_config(bad3), ConfigError);
    std::istringstream bad4("dt = -1\n");
    CHECK_THROWS_AS(parse_sim_config(bad4), ConfigError);
}

TEST_CASE("init mode literals") {
    auto m = parse_init_modes("1:0.005+0.0i, 2:0.002-0.001i, 3:-0.004");
    CHECK(m.at(1) == cplx(0.005, 0.0));
    CHECK(m.at(2) == cplx(0.002, -0.001));
    CHECK(m.at(3) == cplx(-0.004, 0.0));
    CHECK_THROWS_AS(parse_init_modes("nonsense"), ConfigError);
}

TEST_CASE("config hash is a pure function of the bytes") {
    std::string cfg = "c = 1\ngrid = 64\n";
    CHECK(fnv1a_hex(cfg) == fnv1a_hex(cfg));
    CHECK(fnv1a_hex(cfg) != fnv1a_hex(cfg + " "));
    CHECK(fnv1a_hex("").size() == 16);
}

TEST_CASE("manifest lists outputs and carries the hash") {
    RunManifest m;
    m.command_line = "dp-hierarchy derive --n 1";
    m.config_hash = fnv1a_hex("derive:1:6");
    m.outputs = {"funcs.json", "summary.txt"};
    auto j = m.to_json();
    CHECK(j["command_line"] == "dp-hierarchy derive --n 1");
    CHECK(j["outputs"].size() == 2);
    CHECK(j["versions"]["dp_hierarchy"] == DP_VERSION);
}

TEST_CASE("symbolic outputs are deterministic") {
    // the same derivation dumped twice must be byte identical
    RhoHierarchy h1(3, 3), h2(3, 3);
    CHECK(h1.rho(3).to_json().dump() == h2.rho(3).to_json().dump());
}
