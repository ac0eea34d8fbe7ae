#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "logdgla/run.hpp"

using namespace logdgla;

namespace {

std::string fixture_dir = LOGDGLA_FIXTURE_DIR;
std::string golden_dir = LOGDGLA_GOLDEN_DIR;
std::string cli_path = LOGDGLA_CLI_PATH;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing accepts the fixtures") {
    for (const char* name : {"e1_kappa0", "e1_half", "koszul_half", "dgla_gl2", "primitive_mixed",
                             "specseq_half", "specseq_kappa0", "ode_z", "validate_bad"}) {
        INFO(name);
        CHECK_NOTHROW(parse_config(slurp(fixture_dir + "/" + name + ".json")));
    }
}

TEST_CASE("config round-trip") {
    for (const char* name : {"e1_kappa0", "dgla_gl2", "ode_z", "primitive_mixed"}) {
        RunConfig cfg = parse_config(slurp(fixture_dir + "/" + name + ".json"));
        RunConfig again = parse_config(serialize_config(cfg).dump());
        INFO(name);
        CHECK(cfg == again);
    }
}

TEST_CASE("config rejections") {
    SECTION("kappa out of range") {
        CHECK_THROWS_AS(parse_config(slurp(fixture_dir + "/bad_kappa.json")), config_parse_error);
    }
    SECTION("missing command") {
        CHECK_THROWS_AS(parse_config(slurp(fixture_dir + "/missing_command.json")),
                        config_parse_error);
    }
    SECTION("zero denominator") {
        std::string text = R"({"command":"e1","model":{"d":1,"l":1,"values":{"basis":[{"name":"mu","kappa":["1/0"]}]}}})";
        CHECK_THROWS_AS(parse_config(text), config_parse_error);
    }
    SECTION("unknown field") {
        std::string text = R"({"command":"e1","bogus":1,"model":{"d":1,"l":1,"values":{"basis":[{"name":"mu","kappa":["1/2"]}]}}})";
        try {
            parse_config(text);
            FAIL("expected a parse error");
        } catch (const config_parse_error& e) {
            REQUIRE_FALSE(e.errors.empty());
            CHECK(e.errors.front().find("bogus") != std::string::npos);
        }
    }
    SECTION("syntax errors carry line positions") {
        try {
            parse_config("{\n  \"command\": \"e1\",\n  !\n}");
            FAIL("expected a parse error");
        } catch (const config_parse_error& e) {
            REQUIRE_FALSE(e.errors.empty());
            CHECK(e.errors.front().find("line 3") != std::string::npos);
        }
    }
}

TEST_CASE("run reports are deterministic") {
    for (const char* name : {"dgla_gl2", "e1_kappa0", "specseq_kappa0"}) {
        RunConfig cfg = parse_config(slurp(fixture_dir + "/" + name + ".json"));
        std::string once = run(cfg).report.dump(2);
        std::string twice = run(cfg).report.dump(2);
        INFO(name);
        CHECK(once == twice);
    }
}

TEST_CASE("cli binary reproduces the golden reports") {
    for (const char* name : {"e1_kappa0", "koszul_half", "specseq_half", "specseq_kappa0"}) {
        std::string out = "/tmp/logdgla_" + std::string(name) + ".json";
        INFO(name);
        REQUIRE(run_cli("--config " + fixture_dir + "/" + name + ".json --quiet --out " + out) == 0);
        CHECK(slurp(out) == slurp(golden_dir + "/" + name + ".json"));
    }
}

TEST_CASE("cli byte-stability across runs") {
    std::string cfg = fixture_dir + "/ode_z.json";
    REQUIRE(run_cli("--config " + cfg + " --quiet --out /tmp/logdgla_a.json") == 0);
    REQUIRE(run_cli("--config " + cfg + " --quiet --out /tmp/logdgla_b.json") == 0);
    CHECK(slurp("/tmp/logdgla_a.json") == slurp("/tmp/logdgla_b.json"));
}

TEST_CASE("timings are opt-in") {
    std::string cfg = fixture_dir + "/ode_z.json";
    REQUIRE(run_cli("--config " + cfg + " --quiet --timings --out /tmp/logdgla_t.json") == 0);
    CHECK(slurp("/tmp/logdgla_t.json").find("\"seconds\"") != std::string::npos);
    CHECK(slurp("/tmp/logdgla_a.json").find("\"seconds\"") == std::string::npos);
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("--config " + fixture_dir + "/e1_half.json --quiet") == 0);
    CHECK(run_cli("--config " + fixture_dir + "/validate_bad.json --quiet") == 1);
    CHECK(run_cli("--config " + fixture_dir + "/bad_kappa.json --quiet") == 2);
    CHECK(run_cli("--config " + fixture_dir + "/missing_command.json --quiet") == 2);
    CHECK(run_cli("--config /nonexistent.json --quiet") == 2);
    CHECK(run_cli("") == 2);
}

TEST_CASE("ode sample files round-trip through the solver") {
    using namespace logdgla::ode;
    PolarGrid g = make_grid(1.0, 64, 16);
    PolarSamples f = sample_function(g, [](double r, double phi) {
        return std::complex<double>(r * std::cos(phi), r * std::sin(phi));  // z
    });
    {
        std::ofstream out("/tmp/logdgla_f.json", std::ios::binary);
        out << samples_to_json(f).dump() << "\n";
    }
    PolarSamples back = samples_from_json(Json::parse(slurp("/tmp/logdgla_f.json")));
    REQUIRE(back.values.size() == f.values.size());
    for (size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);

    std::string cfg = R"({"command":"ode","tolerance":1e-9,
        "ode":{"kappa":"1/2","n_max":6,"f_file":"/tmp/logdgla_f.json","g_out":"/tmp/logdgla_g.json"}})";
    {
        std::ofstream out("/tmp/logdgla_ode_cfg.json", std::ios::binary);
        out << cfg;
    }
    REQUIRE(run_cli("--config /tmp/logdgla_ode_cfg.json --quiet") == 0);
    PolarSamples gsol = samples_from_json(Json::parse(slurp("/tmp/logdgla_g.json")));
    double worst = 0.0;
    for (size_t i = 0; i < gsol.values.size(); ++i)
        worst = std::max(worst, std::abs(gsol.values[i] - 2.0 / 3.0 * f.values[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("seed override changes randomized output") {
    RunConfig cfg = parse_config(slurp(fixture_dir + "/dgla_gl2.json"));
    RunConfig other = cfg;
    other.seed = 1;
    CHECK(run(cfg).report.dump() != run(other).report.dump());
    CHECK(run(cfg).checks_passed);
    CHECK(run(other).checks_passed);
}
