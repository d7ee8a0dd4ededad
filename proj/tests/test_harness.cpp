#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "varbesov/harness.hpp"
#include "varbesov/io.hpp"

using namespace varbesov;
using namespace testutil;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

HarnessConfig small_config() {
    auto cfg = parse_config(R"({"grid": {"dim": 1, "jmax": 2, "jfine": 5},
                                "corpus": {"seed": 11, "size": 3, "sequences": 3}, "refine": false})");
    return cfg;
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("varbesov_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(VARBESOV_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("configuration parsing") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"corpus": {"size": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"jfine": "x"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"jfine": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"exponents": [{"alpha": 0, "tau": 0, "p": 2}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"exponents": [{"alpha": 0, "tau": -1, "p": 2, "q": 2}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"exponents": [{"alpha": {"kind": "zigzag"}, "tau": 0, "p": 2, "q": 2}]})"),
                    ConfigError);

    const auto cfg = parse_config(R"({"grid": {"dim": 2}, "exponents": [{"name": "n", "alpha": 0.5, "tau": 0,
        "p": {"kind": "bump", "params": {"c0": 2, "c1": 3, "width": 0.5}}, "q": 2}]})");
    CHECK(cfg.dim == 2);
    CHECK(cfg.jmax == 2);
    CHECK(cfg.jfine == 5);
    REQUIRE(cfg.exponents.size() == 1);
    CHECK(cfg.exponents[0].p.c1 == 3.0);
    CHECK(cfg.exponents[0].p.width == 0.5);
    const auto back = exponent_spec_from_json(exponent_spec_to_json(cfg.exponents[0].p));
    CHECK(back.c0 == 2.0);
    CHECK(back.c1 == 3.0);
    CHECK(HarnessConfig{}.echo().is_object());
}

TEST_CASE("corpus is deterministic and band-limited") {
    const auto cfg = small_config();
    const auto a = make_corpus(cfg), b = make_corpus(cfg);
    REQUIRE(a.functions.size() == 3);
    REQUIRE(a.sequences.size() == 3);
    for (std::size_t k = 0; k < a.functions.size(); ++k)
        for (std::size_t i = 0; i < a.grid.size(); ++i) CHECK(a.functions[k][i] == b.functions[k][i]);
    auto other = cfg;
    other.seed = 12;
    const auto c = make_corpus(other);
    CHECK((c.functions[0] - a.functions[0]).l2_norm() > 0.0);
    const auto pair = build_pair(a.grid);
    for (const auto& f : a.functions)
        if (!f.is_zero()) CHECK(band_project(f, pair, pair.v_max).max_abs() <= 1e-10 * f.max_abs());
}

TEST_CASE("reports") {
    const auto cfg = small_config();
    const auto corpus = make_corpus(cfg);
    const auto dir = scratch("reports");
    emit_report({}, dir.string());
    auto doc = json::parse(read_text((dir / "report.json").string()));
    CHECK(doc["count"] == 0);
    CHECK(doc["all_pass"] == true);

    const auto r1 = run_check("luxemburg_closed_form", corpus, cfg);
    const auto r2 = run_check("luxemburg_closed_form", make_corpus(cfg), cfg);
    CHECK(reports_payload({r1}).dump() == reports_payload({r2}).dump());
    emit_report({r1}, dir.string());
    doc = json::parse(read_text((dir / "report.json").string()));
    CHECK(doc["count"] == 1);
    CHECK(doc.contains("generated_at"));
    std::ifstream csv(dir / "ratios.csv");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == r1.ratios.size() + 1);

    CheckReport bad;
    bad.bound = 1.0;
    bad.add("x", INFINITY);
    bad.finalize();
    CHECK_FALSE(bad.pass);
    CHECK(report_to_json(bad)["empirical_constant"] == "inf");
    CheckReport none;
    none.finalize();
    CHECK_FALSE(none.pass);
}

TEST_CASE("embedding hypotheses are validated") {
    const Grid g(1, 1, 4);
    auto c = [&](double v, ExponentRole r) { return constant(g, v, r); };
    auto sp = [&](double a, double t, double p, double q) {
        return SpaceParams{c(a, ExponentRole::smoothness), c(t, ExponentRole::tau), c(p, ExponentRole::integrability),
                           c(q, ExponentRole::summability), std::nullopt};
    };
    CHECK_NOTHROW(validate_elem_q({sp(0.5, 0.1, 2, 1), sp(0.5, 0.1, 2, 2)}));
    CHECK_THROWS_AS(validate_elem_q({sp(0.5, 0.1, 2, 2), sp(0.5, 0.1, 2, 1)}), DomainError);
    CHECK_NOTHROW(validate_elem_alpha({sp(1.5, 0.1, 2, 3), sp(0.5, 0.1, 2, 1)}));
    CHECK_THROWS_AS(validate_elem_alpha({sp(0.5, 0.1, 2, 3), sp(0.5, 0.1, 2, 1)}), DomainError);
    CHECK_NOTHROW(validate_sobolev({sp(1.0, 0.1, 1, 2), sp(0.5, 0.1, 2, 2)}));
    try {
        EmbeddingPair bad{sp(1.0, 0.1, 1, 2), sp(0.4, 0.1, 2, 2)};
        validate_sobolev(bad);
        FAIL("mismatched differential dimension accepted");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("sample") != std::string::npos);
    }
    CHECK_THROWS_AS(validate_further({sp(1.0, 0.1, 2, 2), sp(0.5, 0.1, 2, 2)}), DomainError);
}

TEST_CASE("individual checks on small corpora") {
    const auto cfg = small_config();
    const auto corpus = make_corpus(cfg);
    CHECK_THROWS_AS(run_check("no_such_check", corpus, cfg), DomainError);
    CHECK_THROWS_AS(run_embedding("no_such_embedding", corpus, cfg), DomainError);

    const auto dhr = run_check("DHR", corpus, cfg);
    CHECK(dhr.pass);
    CHECK(dhr.empirical_constant <= 1.0 + 1e-9);
    const auto equi = run_check("lamda_equi", corpus, cfg);
    CHECK(equi.pass);
    CHECK(equi.min_ratio >= 1.0 - 1e-9);
    const auto oracle = run_check("oracle_reduction", corpus, cfg);
    CHECK(oracle.pass);
    CHECK(run_embedding("elem_q", corpus, cfg).pass);
}

TEST_CASE("command line") {
    const auto dir = scratch("cli");
    const auto d = [&](const char* name) { return (dir / name).string(); };
    write_text(d("cfg.json"), small_config().echo().dump());
    write_text(d("bad.json"), R"({"grid": )");
    CHECK(cli("check --id luxemburg_closed_form --config " + d("cfg.json") + " --out " + d("out")) == 0);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "ratios.csv"));
    CHECK(cli("check --id luxemburg_closed_form --config " + d("bad.json")) == 2);
    CHECK(cli("check --id nonsense --config " + d("cfg.json")) == 2);
    CHECK(cli("embed --id nonsense") == 2);
    CHECK(cli("frobnicate") == 2);

    const Grid g(1, 1, 5);
    write_text(d("grid.json"), grid_to_json(g).dump());
    write_text(d("params.json"), json{{"grid", grid_to_json(g)}, {"alpha", 0.5}, {"tau", 0.1}, {"p", 2}, {"q", 2}}.dump());
    auto f = random_function(g, 1);
    write_function(d("f.csv"), f);
    write_function(d("f.bin"), f);
    const auto back = read_function(d("f.bin"), g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == f[i]);
    CHECK(cli("norm --kind lp --params " + d("params.json") + " --input " + d("f.csv")) == 0);
    CHECK(cli("norm --kind besov --variant peetre --params " + d("params.json") + " --input " + d("f.bin")) == 0);
    CHECK(cli("norm --kind lp --params " + d("params.json") + " --input " + d("missing.csv")) == 2);

    CHECK(cli("phitransform analyze --grid " + d("grid.json") + " --input " + d("f.bin") + " --out " + d("seq.json")) ==
          0);
    CHECK(cli("phitransform synthesize --grid " + d("grid.json") + " --input " + d("seq.json") + " --out " +
              d("g.bin")) == 0);
    CHECK(fs::file_size(d("g.bin")) == g.size() * 16);

    CHECK(cli("atoms decompose --params " + d("params.json") + " --input " + d("f.bin") + " --out " + d("atoms.json")) ==
          0);
    CHECK(cli("atoms validate --atoms " + d("atoms.json")) == 0);
    CHECK(cli("atoms synthesize --atoms " + d("atoms.json") + " --out " + d("h.bin")) == 0);
    const auto stored = atomization_from_json(json::parse(read_text(d("atoms.json"))));
    const auto h = read_function(d("h.bin"), g);
    const auto direct = synthesize_atoms(stored.lambda, stored.atoms);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(h[i] - direct[i]) <= 1e-12 * (1 + std::abs(direct[i])));
}
