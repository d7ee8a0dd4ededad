#include <cmath>
#include <numbers>
#include <random>

#include "varbesov/fft.hpp"
#include "varbesov/harness.hpp"

namespace varbesov {

using nlohmann::json;

SpaceParams ExponentSet::sample(const Grid& grid) const {
    return SpaceParams{alpha.sample(grid, ExponentRole::smoothness), tau.sample(grid, ExponentRole::tau),
                       p.sample(grid, ExponentRole::integrability), q.sample(grid, ExponentRole::summability),
                       std::nullopt};
}

namespace {

ExponentSpec bump(double c0, double c1, Point center, double width) {
    return {ExponentSpec::Kind::bump, c0, c1, center, width, c0};
}

ExponentSpec ramp(double c0, double c1, Point center, double width) {
    return {ExponentSpec::Kind::ramp, c0, c1, center, width, c0 + c1};
}

const char* kind_name(ExponentSpec::Kind k) {
    switch (k) {
        case ExponentSpec::Kind::constant: return "constant";
        case ExponentSpec::Kind::bump: return "bump";
        case ExponentSpec::Kind::ramp: return "ramp";
        case ExponentSpec::Kind::step: return "step";
    }
    return "constant";
}

}  // namespace

json exponent_spec_to_json(const ExponentSpec& s) {
    if (s.kind == ExponentSpec::Kind::constant) return s.c0;
    json j{{"kind", kind_name(s.kind)}, {"c0", s.c0}, {"c1", s.c1},
           {"center", {s.center[0], s.center[1]}}, {"width", s.width}};
    if (s.decay_limit) j["decay_limit"] = *s.decay_limit;
    return j;
}

ExponentSpec exponent_spec_from_json(const json& j) {
    if (j.is_number()) return ExponentSpec::constant(j.get<double>());
    if (!j.is_object()) throw ConfigError("exponent must be a number or an object");
    ExponentSpec s;
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant") s.kind = ExponentSpec::Kind::constant;
    else if (kind == "bump") s.kind = ExponentSpec::Kind::bump;
    else if (kind == "ramp") s.kind = ExponentSpec::Kind::ramp;
    else if (kind == "step") s.kind = ExponentSpec::Kind::step;
    else throw ConfigError("unknown exponent kind '" + kind + "'");
    // Parameters may sit at the top level or under "params".
    const json& prm = j.contains("params") ? j.at("params") : j;
    if (!prm.is_object()) throw ConfigError("exponent params must be an object");
    s.c0 = prm.value("c0", 2.0);
    s.c1 = prm.value("c1", 0.0);
    s.width = prm.value("width", 1.0);
    if (!(s.width > 0.0)) throw ConfigError("exponent width must be positive");
    if (prm.contains("center")) {
        const auto& c = prm.at("center");
        if (c.is_number()) s.center = {c.get<double>(), 0.0};
        else if (c.is_array() && !c.empty() && c.size() <= 2)
            s.center = {c[0].get<double>(), c.size() == 2 ? c[1].get<double>() : 0.0};
        else throw ConfigError("exponent center must be a number or [x] / [x, y]");
    }
    if (j.contains("decay_limit")) s.decay_limit = j.at("decay_limit").get<double>();
    else if (s.kind == ExponentSpec::Kind::constant) s.decay_limit = s.c0;
    return s;
}

std::vector<ExponentSet> default_exponent_sets(int dim) {
    const double L = 8.0;  // 1D side; 2D side is 4
    const double side = dim == 1 ? L : 4.0;
    const Point mid = dim == 1 ? Point{side / 2, 0.0} : Point{side / 2, side / 2};
    const Point off = dim == 1 ? Point{side * 0.375, 0.0} : Point{side * 0.375, side * 0.6};
    return {
        {"constant", ExponentSpec::constant(0.5), ExponentSpec::constant(0.1), ExponentSpec::constant(2.0),
         ExponentSpec::constant(2.0)},
        {"bump", bump(0.5, 0.25, mid, side / 4), ExponentSpec::constant(0.15), bump(2.0, 1.0, off, side / 3),
         bump(1.5, 0.5, mid, side / 4)},
        {"ramp", ramp(0.3, 0.4, off, side / 8), bump(0.1, 0.05, mid, side / 4), ramp(2.0, 1.0, mid, side / 8),
         ExponentSpec::constant(2.0)},
    };
}

std::vector<ExponentSet> HarnessConfig::exponent_sets() const {
    return exponents.empty() ? default_exponent_sets(dim) : exponents;
}

json HarnessConfig::echo() const {
    json sets = json::array();
    for (const auto& s : exponent_sets())
        sets.push_back({{"name", s.name},
                        {"alpha", exponent_spec_to_json(s.alpha)},
                        {"tau", exponent_spec_to_json(s.tau)},
                        {"p", exponent_spec_to_json(s.p)},
                        {"q", exponent_spec_to_json(s.q)}});
    return {{"grid", {{"dim", dim}, {"jmax", jmax}, {"jfine", jfine}}},
            {"exponents", sets},
            {"corpus", {{"seed", seed}, {"size", functions}, {"sequences", sequences}}},
            {"tolerances",
             {{"exact", tol.exact},
              {"oracle", tol.oracle},
              {"refinement", tol.refinement},
              {"duality", tol.duality},
              {"band", tol.band},
              {"v_growth", tol.v_growth},
              {"norm", tol.norm}}},
            {"refine", refine}};
}

HarnessConfig parse_config(const std::string& text) {
    HarnessConfig cfg;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.dim = g.value("dim", cfg.dim);
            cfg.jmax = g.value("jmax", cfg.dim == 1 ? 3 : 2);
            cfg.jfine = g.value("jfine", cfg.dim == 1 ? 7 : 5);
        }
        if (j.contains("corpus")) {
            const auto& c = j.at("corpus");
            cfg.seed = c.value("seed", cfg.seed);
            cfg.functions = c.value("size", cfg.functions);
            cfg.sequences = c.value("sequences", cfg.sequences);
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            cfg.tol.exact = t.value("exact", cfg.tol.exact);
            cfg.tol.oracle = t.value("oracle", cfg.tol.oracle);
            cfg.tol.refinement = t.value("refinement", cfg.tol.refinement);
            cfg.tol.duality = t.value("duality", cfg.tol.duality);
            cfg.tol.band = t.value("band", cfg.tol.band);
            cfg.tol.v_growth = t.value("v_growth", cfg.tol.v_growth);
            cfg.tol.norm = t.value("norm", cfg.tol.norm);
        }
        cfg.refine = j.value("refine", cfg.refine);
        if (j.contains("exponents")) {
            const auto& arr = j.at("exponents");
            if (!arr.is_array()) throw ConfigError("exponents must be an array");
            int k = 0;
            for (const auto& e : arr) {
                ExponentSet s;
                s.name = e.value("name", "set" + std::to_string(k++));
                for (const char* key : {"alpha", "tau", "p", "q"})
                    if (!e.contains(key)) throw ConfigError(std::string("exponent set lacks '") + key + "'");
                s.alpha = exponent_spec_from_json(e.at("alpha"));
                s.tau = exponent_spec_from_json(e.at("tau"));
                s.p = exponent_spec_from_json(e.at("p"));
                s.q = exponent_spec_from_json(e.at("q"));
                cfg.exponents.push_back(s);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field has the wrong type: ") + e.what());
    }
    if (cfg.functions <= 0 || cfg.sequences <= 0) throw ConfigError("corpus sizes must be positive");
    if (!(cfg.tol.exact >= 0 && cfg.tol.oracle > 0 && cfg.tol.refinement > 0 && cfg.tol.duality > 0 &&
          cfg.tol.band > 0 && cfg.tol.norm > 0 && cfg.tol.v_growth >= 0))
        throw ConfigError("tolerances must be positive");
    try {
        const Grid grid = cfg.grid();
        if (grid.jfine() < 3) throw ConfigError("jfine must be at least 3");
        for (const auto& s : cfg.exponent_sets()) s.sample(grid).validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

// ---- corpus ----------------------------------------------------------------

namespace {

struct Mode {
    std::array<std::int64_t, 2> k;
    Point xi;
};

// Integer frequency vectors with |xi| below the limit, sorted for reproducibility.
std::vector<Mode> modes_below(const Grid& grid, double limit) {
    const double base = 2.0 * std::numbers::pi / grid.side();
    const auto K = static_cast<std::int64_t>(std::floor(limit / base));
    std::vector<Mode> out;
    for (std::int64_t a = -K; a <= K; ++a)
        for (std::int64_t b = (grid.dim() == 2 ? -K : 0); b <= (grid.dim() == 2 ? K : 0); ++b) {
            const Point xi{base * a, base * b};
            if (std::hypot(xi[0], xi[1]) < limit) out.push_back({{a, b}, xi});
        }
    return out;
}

// Real-valued function with the given complex amplitudes at +k (the -k partner is conjugated),
// normalized to unit L2 norm on the continuum.
GridFunction from_modes(const Grid& grid, const std::vector<Mode>& modes, const std::vector<Complex>& amp) {
    const auto N = static_cast<std::int64_t>(grid.points_per_axis());
    std::vector<Complex> spec(grid.size(), Complex{});
    auto bin = [&](std::int64_t a, std::int64_t b) {
        return grid.ravel(static_cast<std::size_t>(((a % N) + N) % N),
                          grid.dim() == 2 ? static_cast<std::size_t>(((b % N) + N) % N) : 0);
    };
    double energy = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& k = modes[i].k;
        spec[bin(k[0], k[1])] += amp[i];
        spec[bin(-k[0], -k[1])] += std::conj(amp[i]);
    }
    for (const auto& z : spec) energy += std::norm(z);
    if (energy == 0.0) return GridFunction(grid);
    // f = sum c_k e^{i xi x} with ||f||_2^2 = side^n sum |c_k|^2; the DFT bin holds N_total c_k.
    const double scale = static_cast<double>(grid.size()) / std::sqrt(grid.volume() * energy);
    for (auto& z : spec) z *= scale;
    auto vals = idft(grid, spec);
    for (auto& z : vals) z = {z.real(), 0.0};
    return GridFunction(grid, std::move(vals));
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index)};
    return std::mt19937_64(seq);
}

}  // namespace

Corpus make_corpus(const HarnessConfig& cfg, const Grid& grid) {
    Corpus c;
    c.seed = cfg.seed;
    c.grid = grid;
    c.band_jfine = cfg.jfine;
    require(grid.jfine() >= c.band_jfine, "corpus grid coarser than its band limit");
    const double limit = 0.55 * std::ldexp(1.0, c.band_jfine - 1);
    const auto modes = modes_below(grid, limit);
    const double two_pi = 2.0 * std::numbers::pi;

    for (int i = 0; i < cfg.functions; ++i) {
        auto rng = stream(cfg.seed, 1, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> unif;
        std::vector<Complex> amp(modes.size(), Complex{});
        std::string kind;
        switch (i % 3) {
            case 0: {  // random spectrum with power-law decay
                kind = "random";
                const double s = 0.5 + unif(rng);
                for (std::size_t k = 0; k < modes.size(); ++k) {
                    const double r = std::hypot(modes[k].xi[0], modes[k].xi[1]);
                    amp[k] = Complex{gauss(rng), gauss(rng)} * std::pow(1.0 + r, -s);
                }
                break;
            }
            case 1: {  // one to three Gaussian bumps, truncated to the band
                kind = "bumps";
                const int count = 1 + static_cast<int>(rng() % 3);
                for (int b = 0; b < count; ++b) {
                    const double sigma = 0.15 + 0.45 * unif(rng);
                    const Point ctr{grid.side() * unif(rng), grid.dim() == 2 ? grid.side() * unif(rng) : 0.0};
                    const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
                    for (std::size_t k = 0; k < modes.size(); ++k) {
                        const auto& xi = modes[k].xi;
                        const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
                        const double phase = -(xi[0] * ctr[0] + xi[1] * ctr[1]);
                        amp[k] += sign * std::exp(-0.5 * sigma * sigma * r2) * std::polar(1.0, phase);
                    }
                }
                break;
            }
            default: {  // spectrum inside one band plateau
                const int top = std::max(1, c.band_jfine - 3);
                const int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(top));
                kind = "band" + std::to_string(v);
                const double lo = 0.6 * std::ldexp(1.0, v), hi = (5.0 / 3.0) * std::ldexp(1.0, v);
                for (std::size_t k = 0; k < modes.size(); ++k) {
                    const double r = std::hypot(modes[k].xi[0], modes[k].xi[1]);
                    if (r >= lo && r <= hi) amp[k] = std::polar(1.0, two_pi * unif(rng)) * (0.5 + unif(rng));
                }
                break;
            }
        }
        // Modes come in +-k pairs: keep one representative so the result is real.
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const auto& kk = modes[k].k;
            if (kk[0] < 0 || (kk[0] == 0 && kk[1] < 0)) amp[k] = 0.0;
            if (kk[0] == 0 && kk[1] == 0) amp[k] = amp[k].real() * 0.5;
        }
        c.functions.push_back(from_modes(grid, modes, amp));
        c.function_kinds.push_back(kind);
    }

    const int v_max = c.band_jfine - 2;
    for (int i = 0; i < cfg.sequences; ++i) {
        auto rng = stream(cfg.seed, 2, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> unif;
        SequenceCoeffs s(grid, v_max);
        switch (i % 4) {
            case 0: {  // single spike
                const int v = static_cast<int>(rng() % static_cast<std::uint64_t>(v_max + 1));
                auto lv = s.level(v);
                lv[rng() % lv.size()] = Complex{1.0 + unif(rng), 0.0};
                break;
            }
            case 1: {  // dense on coarse levels
                for (int v = 0; v <= std::min(2, v_max); ++v)
                    for (auto& z : s.level(v)) z = Complex{gauss(rng), gauss(rng)};
                break;
            }
            default: {  // sparse over all levels with level decay
                const double decay = unif(rng);
                for (int v = 0; v <= v_max; ++v) {
                    auto lv = s.level(v);
                    const std::size_t count = 1 + rng() % (1 + lv.size() / 4);
                    for (std::size_t t = 0; t < count; ++t)
                        lv[rng() % lv.size()] = Complex{gauss(rng), gauss(rng)} * std::exp2(-decay * v);
                }
                break;
            }
        }
        c.sequences.push_back(std::move(s));
    }

    for (const auto& set : cfg.exponent_sets()) {
        c.exponent_sets.push_back(set.sample(grid));
        c.exponent_names.push_back(set.name);
    }
    return c;
}

Corpus make_corpus(const HarnessConfig& cfg) { return make_corpus(cfg, cfg.grid()); }

}  // namespace varbesov
