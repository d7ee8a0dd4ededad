// Command-line front end: verification campaigns, norms, atoms and the phi-transform.
// Exit codes: 0 success / all checks pass, 1 a check or atom failed, 2 bad input.

#include <algorithm>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "varbesov/atoms.hpp"
#include "varbesov/besov.hpp"
#include "varbesov/harness.hpp"
#include "varbesov/io.hpp"
#include "varbesov/phi_transform.hpp"

using namespace varbesov;
using nlohmann::json;

namespace {

constexpr int kFail = 1;
constexpr int kBadInput = 2;

HarnessConfig load_config(const std::string& path) {
    if (path.empty()) return HarnessConfig{};
    return parse_config(read_text(path));
}

int run_campaign(const std::vector<std::string>& ids, const std::string& config, const std::string& out,
                 bool no_refine) {
    HarnessConfig cfg = load_config(config);
    if (no_refine) cfg.refine = false;
    const Corpus corpus = make_corpus(cfg);
    std::vector<CheckReport> reports;
    for (const auto& id : ids) {
        reports.push_back(run_check(id, corpus, cfg));
        const auto& r = reports.back();
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.check_id << "  constant=" << r.empirical_constant
                  << "  bound=" << r.bound << "  cases=" << r.ratios.size() << '\n';
        for (const auto& [name, ok] : r.conditions)
            if (!ok) std::cout << "     condition failed: " << name << '\n';
    }
    if (!out.empty()) emit_report(reports, out);
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; }) ? 0 : kFail;
}

std::vector<std::string> expand(const std::string& id, const std::vector<std::string>& family) {
    if (id == "all") return family;
    return {id};
}

// {"grid": {...}, "alpha": e, "tau": e, "p": e, "q": e}; each exponent as in the config file.
struct Params {
    Grid grid;
    SpaceParams sp;
};

Params load_params(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(path + ": expected a JSON object");
    const Grid grid = grid_from_json(j.value("grid", json::object()));
    auto field = [&](const char* name, double fallback, ExponentRole role) {
        const auto spec = j.contains(name) ? exponent_spec_from_json(j.at(name)) : ExponentSpec::constant(fallback);
        return spec.sample(grid, role);
    };
    SpaceParams sp{field("alpha", 0.0, ExponentRole::smoothness), field("tau", 0.0, ExponentRole::tau),
                   field("p", 2.0, ExponentRole::integrability), field("q", 2.0, ExponentRole::summability),
                   std::nullopt};
    return {grid, std::move(sp)};
}

json norm_json(const NormResult& r) {
    return {{"value", r.value}, {"tolerance", r.tolerance}, {"iterations", r.iterations},
            {"lo", r.lo},       {"hi", r.hi},               {"warnings", r.warnings}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-exponent Besov-type spaces: norms, phi-transform, atoms and verification campaigns"};
    app.require_subcommand(1);

    // check / embed
    std::string id, config, out;
    bool no_refine = false;
    auto* check = app.add_subcommand("check", "run lemma, property or oracle checks");
    check->add_option("--id", id, "check id or 'all'")->required();
    check->add_option("--config", config, "config JSON");
    check->add_option("--out", out, "directory for report.json and ratios.csv");
    check->add_flag("--no-refine", no_refine, "skip the jfine+1 repetition");
    auto* embed = app.add_subcommand("embed", "run embedding experiments");
    embed->add_option("--id", id, "embedding id or 'all'")->required();
    embed->add_option("--config", config, "config JSON");
    embed->add_option("--out", out, "directory for report.json and ratios.csv");
    embed->add_flag("--no-refine", no_refine, "skip the jfine+1 repetition");

    // norm
    std::string kind = "lp", variant = "base", params_path;
    std::vector<std::string> inputs;
    int gamma = 1;
    double peetre_a = 0.0, tol = kDefaultTolerance;
    auto* norm = app.add_subcommand("norm", "evaluate a norm and print NormResult JSON");
    norm->add_option("--kind", kind, "lp | mixed | tilde | besov")
        ->check(CLI::IsMember({"lp", "mixed", "tilde", "besov"}));
    norm->add_option("--variant", variant, "besov variant")->check(CLI::IsMember({"base", "sharp", "shifted", "peetre"}));
    norm->add_option("--params", params_path, "grid + exponent JSON")->required();
    norm->add_option("--input", inputs, "function file(s); mixed takes one per level")->required();
    norm->add_option("--gamma", gamma, "shift for the shifted variant");
    norm->add_option("--a", peetre_a, "Peetre exponent (default: twice the admissible threshold)");
    norm->add_option("--tol", tol, "relative tolerance");

    // atoms
    std::string atoms_path, input;
    int K = -1, L = -2;
    double window_gamma = 1.5;
    std::string window_kind = "compact";
    auto* atoms = app.add_subcommand("atoms", "atomic decomposition");
    atoms->require_subcommand(1);
    auto* decompose = atoms->add_subcommand("decompose", "f -> (lambda, atoms)");
    decompose->add_option("--params", params_path, "grid + exponent JSON (K, L default to the space's needs)")
        ->required();
    decompose->add_option("--input", input, "function file")->required();
    decompose->add_option("--out", atoms_path, "atom JSON")->required();
    decompose->add_option("--K", K, "smoothness order");
    decompose->add_option("--L", L, "moment order (-1: none)");
    decompose->add_option("--gamma", window_gamma, "support dilation");
    decompose->add_option("--window", window_kind, "compact | dual")->check(CLI::IsMember({"compact", "dual"}));
    auto* asynth = atoms->add_subcommand("synthesize", "(lambda, atoms) -> sum lambda rho");
    asynth->add_option("--atoms", atoms_path, "atom JSON")->required();
    asynth->add_option("--out", out, "function file")->required();
    auto* avalidate = atoms->add_subcommand("validate", "check support, derivative and moment conditions");
    avalidate->add_option("--atoms", atoms_path, "atom JSON")->required();

    // phitransform
    std::string grid_path;
    auto* phi = app.add_subcommand("phitransform", "analysis / synthesis");
    phi->require_subcommand(1);
    auto* analyze_cmd = phi->add_subcommand("analyze", "f -> sequence JSON");
    analyze_cmd->add_option("--grid", grid_path, "grid JSON")->required();
    analyze_cmd->add_option("--input", input, "function file")->required();
    analyze_cmd->add_option("--out", out, "sequence JSON")->required();
    auto* synth_cmd = phi->add_subcommand("synthesize", "sequence JSON -> f");
    synth_cmd->add_option("--grid", grid_path, "grid JSON")->required();
    synth_cmd->add_option("--input", input, "sequence JSON")->required();
    synth_cmd->add_option("--out", out, "function file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kBadInput;
    }

    try {
        if (*check) {
            std::vector<std::string> family = lemma_check_ids();
            for (const auto& s : property_check_ids()) family.push_back(s);
            family.push_back("oracle_reduction");
            return run_campaign(expand(id, family), config, out, no_refine);
        }
        if (*embed) {
            const auto ids = embedding_ids();
            if (id != "all" && std::find(ids.begin(), ids.end(), id) == ids.end())
                throw ConfigError("unknown embedding id '" + id + "'");
            return run_campaign(expand(id, ids), config, out, no_refine);
        }
        if (*norm) {
            const auto prm = load_params(params_path);
            std::vector<GridFunction> fs;
            for (const auto& path : inputs) fs.push_back(read_function(path, prm.grid));
            if (kind != "mixed" && fs.size() != 1) throw ConfigError("--kind " + kind + " takes exactly one --input");
            NormResult r;
            if (kind == "lp") {
                r = luxemburg_norm(fs.front(), prm.sp.p, tol);
            } else if (kind == "mixed") {
                r = mixed_norm(fs, prm.sp.p, prm.sp.q, tol);
            } else if (kind == "tilde") {
                r = tilde_norm(fs.front(), prm.sp.p, prm.sp.tau, tol);
            } else {
                const auto pair = build_pair(prm.grid);
                if (variant == "base") r = besov_norm(fs.front(), prm.sp, pair, tol);
                else if (variant == "sharp") r = besov_norm_sharp(fs.front(), prm.sp, pair, tol);
                else if (variant == "shifted") r = besov_norm_shifted(fs.front(), prm.sp, pair, gamma, tol);
                else r = besov_norm_peetre(fs.front(), prm.sp, pair,
                                           peetre_a > 0.0 ? std::optional<double>(peetre_a) : std::nullopt, tol);
            }
            std::cout << norm_json(r).dump(2) << '\n';
            return 0;
        }
        if (*decompose) {
            const auto prm = load_params(params_path);
            const auto kl = kl_requirements(prm.sp, prm.grid.dim());
            const int k = K >= 0 ? K : kl.K_min;
            const int l = L >= -1 ? L : kl.L_min;
            const AtomWindow w{window_kind == "dual" ? AtomWindow::Kind::dual : AtomWindow::Kind::compact, k, l,
                               window_gamma, 0};
            const auto at = atomize(read_function(input, prm.grid), build_pair(prm.grid), w, k, l);
            write_text(atoms_path, atomization_to_json(at).dump());
            std::cout << json{{"atoms", at.atoms.size()}, {"K", k}, {"L", l}, {"C_theta", at.C_theta}}.dump() << '\n';
            return 0;
        }
        if (*asynth) {
            const auto at = atomization_from_json(json::parse(read_text(atoms_path)));
            write_function(out, synthesize_atoms(at.lambda, at.atoms));
            return 0;
        }
        if (*avalidate) {
            const auto at = atomization_from_json(json::parse(read_text(atoms_path)));
            std::size_t failed = 0;
            double diff = 0, mom = 0, sup = 0;
            json bad = json::array();
            for (const auto& a : at.atoms) {
                const auto r = validate_atom(a);
                diff = std::max(diff, r.diff_margin);
                mom = std::max(mom, r.moment_margin);
                sup = std::max(sup, r.support_margin);
                if (!r.pass) {
                    ++failed;
                    bad.push_back({{"v", a.cube.v}, {"m", {a.cube.m[0], a.cube.m[1]}}, {"support", r.support_ok},
                                   {"derivatives", r.diff_ok}, {"moments", r.moment_ok}});
                }
            }
            std::cout << json{{"atoms", at.atoms.size()}, {"failed", failed}, {"worst_diff_margin", diff},
                              {"worst_moment_margin", mom}, {"worst_support_margin", sup}, {"failures", bad}}
                             .dump(2)
                      << '\n';
            return failed == 0 ? 0 : kFail;
        }
        if (*analyze_cmd) {
            const Grid grid = grid_from_json(json::parse(read_text(grid_path)));
            write_text(out, sequence_to_json(analyze(read_function(input, grid), build_pair(grid))));
            return 0;
        }
        if (*synth_cmd) {
            const Grid grid = grid_from_json(json::parse(read_text(grid_path)));
            const auto pair = build_pair(grid);
            write_function(out, synthesize(sequence_from_json(read_text(input), grid, pair.v_max), pair));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadInput;
    } catch (const json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << '\n';
        return kBadInput;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return 0;
}
