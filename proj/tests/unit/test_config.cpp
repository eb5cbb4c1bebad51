#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>

#include "sparq/config.hpp"

using namespace sparq;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal() {
    return json::parse(R"({
        "name": "unit",
        "horizon": 10,
        "seeds": 2,
        "environment": {"type": "synthetic", "domain": [-5, 5], "n_centers": 4, "sigma_sq": 0.2},
        "policy_defaults": {"alpha": 1.5, "budget_c": 2.0},
        "policies": ["SPARQ", {"variant": "SW_GP_UCB", "name": "sw", "window": 7}]
    })");
}

}  // namespace

TEST_CASE("config parsing and defaults") {
    const auto cfg = parse_config(minimal());
    CHECK(cfg.name == "unit");
    CHECK(cfg.horizon == 10);
    CHECK(cfg.seeds == 2);
    CHECK(cfg.grid_size == 500);
    CHECK(cfg.kernel.dim == 1);
    CHECK(cfg.environment.lo == -5.0);
    CHECK(cfg.environment.n_centers == 4);
    REQUIRE(cfg.policies.size() == 2);
    CHECK(cfg.policies[0].name == "sparq");
    CHECK(cfg.policies[0].config.variant == Variant::Sparq);
    CHECK(cfg.policies[0].config.alpha == 1.5);
    CHECK(cfg.policies[0].config.budget_c == 2.0);
    // Policy noise and norm bound default to the environment's.
    CHECK(cfg.policies[0].config.sigma_sq == 0.2);
    CHECK(cfg.policies[1].name == "sw");
    CHECK(cfg.policies[1].config.window == 7);
    CHECK(cfg.policies[1].config.alpha == 1.5);
    CHECK(cfg.source == minimal());
}

TEST_CASE("config rejects bad documents") {
    auto expect_error = [](const std::function<void(json&)>& edit) {
        json doc = minimal();
        edit(doc);
        CHECK_THROWS_AS(parse_config(doc), ConfigError);
    };
    expect_error([](json& d) { d["horizn"] = 5; });
    expect_error([](json& d) { d["horizon"] = 0; });
    expect_error([](json& d) { d["horizon"] = 2.5; });
    expect_error([](json& d) { d["seeds"] = "two"; });
    expect_error([](json& d) { d["environment"]["type"] = "lunar"; });
    expect_error([](json& d) { d["environment"]["domain"] = json::array({5, -5}); });
    expect_error([](json& d) { d["environment"]["domain"] = json::array({1}); });
    expect_error([](json& d) { d["environment"]["sigma_sq"] = 0.0; });
    expect_error([](json& d) { d["environment"]["extra"] = 1; });
    expect_error([](json& d) { d["kernel"] = {{"lengthscale", -1.0}}; });
    expect_error([](json& d) { d["policies"] = json::array(); });
    expect_error([](json& d) { d["policies"].push_back("SPARQ"); });
    expect_error([](json& d) { d["policies"].push_back("NOPE"); });
    expect_error([](json& d) { d["policies"].push_back({{"name", "x"}}); });
    expect_error([](json& d) { d["policies"].push_back({{"variant", "SPARQ"}, {"name", "a b"}}); });
    expect_error([](json& d) { d["policies"][1]["mcmc_steps"] = 0; });
    expect_error([](json& d) { d["policy_defaults"]["name"] = "x"; });
    expect_error([](json& d) { d["policies"].push_back({{"variant", "W_SPARQ"}, {"alpha_tilde", 2.0}}); });
    expect_error([](json& d) { d["environment"] = {{"type", "grid_series"}}; });
    expect_error([](json& d) { d["environment"]["initial"] = "rkhs"; d["environment"]["type"] = "brownian"; d["environment"]["initial"] = "flat"; });
}

TEST_CASE("config files") {
    const fs::path dir = fs::temp_directory_path() / "sparq_config_test";
    fs::create_directories(dir);
    json doc = minimal();
    doc["environment"] = {{"type", "grid_series"}, {"path", "grid.csv"}};
    std::ofstream(dir / "c.json") << "// comment\n" << doc.dump();
    const auto cfg = load_config(dir / "c.json");
    CHECK(fs::path(cfg.environment.path) == (dir / "grid.csv").lexically_normal());

    std::ofstream(dir / "broken.json") << "{ nope";
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("output root override") {
    auto cfg = parse_config(minimal());
    cfg.output_dir = "results/unit";
    unsetenv(kOutputRootEnv);
    CHECK(resolve_output_dir(cfg) == fs::path("results/unit"));
    setenv(kOutputRootEnv, "/tmp/elsewhere", 1);
    CHECK(resolve_output_dir(cfg) == fs::path("/tmp/elsewhere/results/unit"));
    cfg.output_dir = "/abs/out";
    CHECK(resolve_output_dir(cfg) == fs::path("/tmp/elsewhere/abs/out"));
    setenv(kOutputRootEnv, "", 1);
    CHECK(resolve_output_dir(cfg) == fs::path("/abs/out"));
    unsetenv(kOutputRootEnv);
}

TEST_CASE("dotted overrides") {
    json doc = minimal();
    set_dotted(doc, "policy_defaults.budget_c", 4.0);
    set_dotted(doc, "policies.1.window", 3);
    set_dotted(doc, "kernel.lengthscale", 2.0);
    CHECK(doc["policy_defaults"]["budget_c"] == 4.0);
    CHECK(doc["policies"][1]["window"] == 3);
    CHECK(doc["kernel"]["lengthscale"] == 2.0);
    CHECK(parse_config(doc).policies[1].config.window == 3);

    CHECK_THROWS_AS(set_dotted(doc, "", 1), ConfigError);
    CHECK_THROWS_AS(set_dotted(doc, "policies.x.window", 1), ConfigError);
    CHECK_THROWS_AS(set_dotted(doc, "policies.9.window", 1), ConfigError);
    CHECK_THROWS_AS(set_dotted(doc, "horizon.deeper", 1), ConfigError);
    CHECK_THROWS_AS(set_dotted(doc, "a..b", 1), ConfigError);
}

TEST_CASE("sweep parameters") {
    const auto p = parse_sweep_param("policy_defaults.budget_c=0.5,1,2");
    CHECK(p.key == "policy_defaults.budget_c");
    REQUIRE(p.values.size() == 3);
    CHECK(p.values[0] == 0.5);
    CHECK(p.values[1] == 1);
    const auto s = parse_sweep_param("environment.type=synthetic,brownian");
    CHECK(s.values[1] == "brownian");
    for (const char* bad : {"novalue", "=1,2", "k=", "k=1,,2"}) CHECK_THROWS_AS(parse_sweep_param(bad), ConfigError);

    const auto grid = sweep_grid({p, s});
    REQUIRE(grid.size() == 6);
    CHECK(grid[0] == std::vector<json>{0.5, "synthetic"});
    CHECK(grid[1] == std::vector<json>{0.5, "brownian"});
    CHECK(grid[5] == std::vector<json>{2, "brownian"});
    CHECK(sweep_grid({}).size() == 1);
}
