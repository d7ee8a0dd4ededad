#include <algorithm>
#include <cmath>
#include <functional>

#include "varbesov/fft.hpp"
#include "varbesov/harness.hpp"
#include "varbesov/modular.hpp"

namespace varbesov {

namespace {

std::string sample_where(const Grid& grid, std::size_t i) {
    const auto x = grid.point(i);
    std::string s = "sample " + std::to_string(i) + " (x = " + std::to_string(x[0]);
    if (grid.dim() == 2) s += ", " + std::to_string(x[1]);
    return s + ")";
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

void require_same(const ExponentField& a, const ExponentField& b, const std::string& name, const std::string& id) {
    require(a.grid() == b.grid(), id + ": source and target live on different grids");
    for (std::size_t i = 0; i < a.size(); ++i)
        require(close(a[i], b[i]), id + ": " + name + " differs between source and target at " +
                                       sample_where(a.grid(), i));
}

void require_common(const EmbeddingPair& e, const std::string& id) {
    e.source.validate();
    e.target.validate();
    require(e.source.grid() == e.target.grid(), id + ": source and target live on different grids");
}

}  // namespace

void validate_elem_q(const EmbeddingPair& e) {
    const std::string id = "elem_q";
    require_common(e, id);
    require_same(e.source.alpha, e.target.alpha, "alpha", id);
    require_same(e.source.tau, e.target.tau, "tau", id);
    require_same(e.source.p, e.target.p, "p", id);
    for (std::size_t i = 0; i < e.source.q.size(); ++i)
        require(e.source.q[i] <= e.target.q[i] + 1e-12,
                id + ": q0 > q1 at " + sample_where(e.source.grid(), i));
}

void validate_elem_alpha(const EmbeddingPair& e) {
    const std::string id = "elem_alpha";
    require_common(e, id);
    require_same(e.source.tau, e.target.tau, "tau", id);
    require_same(e.source.p, e.target.p, "p", id);
    double gap = INFINITY;
    std::size_t at = 0;
    for (std::size_t i = 0; i < e.source.alpha.size(); ++i) {
        const double d = e.source.alpha[i] - e.target.alpha[i];
        if (d < gap) gap = d, at = i;
    }
    require(gap > 0.0, id + ": (alpha0 - alpha1)^- = " + std::to_string(gap) + " is not positive, attained at " +
                           sample_where(e.source.grid(), at));
}

void validate_sobolev(const EmbeddingPair& e) {
    const std::string id = "sobolev";
    require_common(e, id);
    require_same(e.source.tau, e.target.tau, "tau", id);
    require_same(e.source.q, e.target.q, "q", id);
    const Grid& grid = e.source.grid();
    const double n = grid.dim();
    require(e.source.tau.inf_value() > 0.0, id + ": needs tau^- > 0");
    double ratio_sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a0 = e.source.alpha[i], a1 = e.target.alpha[i];
        const double p0 = e.source.p[i], p1 = e.target.p[i];
        require(a0 > a1, id + ": alpha0 <= alpha1 at " + sample_where(grid, i));
        const double l = a0 - n / p0, r = a1 - n / p1;
        require(close(l, r), id + ": alpha0 - n/p0 = " + std::to_string(l) + " but alpha1 - n/p1 = " +
                                 std::to_string(r) + " at " + sample_where(grid, i));
        ratio_sup = std::max(ratio_sup, p0 / p1);
    }
    require(ratio_sup < 1.0, id + ": (p0/p1)^+ = " + std::to_string(ratio_sup) + " is not below 1");
}

void validate_further(const EmbeddingPair& e) {
    const std::string id = "further";
    require_common(e, id);
    require_same(e.source.q, e.target.q, "q", id);
    const Grid& grid = e.source.grid();
    const double n = grid.dim();
    require(e.source.tau.sup_value() == 0.0, id + ": the source space must have tau = 0");
    require(e.target.tau.inf_value() > 0.0, id + ": needs tau^- > 0 on the target");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p2 = e.source.p[i], p1 = e.target.p[i];
        require(p2 <= p1 + 1e-12, id + ": p2 > p1 at " + sample_where(grid, i));
        const double want = e.target.alpha[i] + n * e.target.tau[i] + n / p2 - n / p1;
        require(close(e.source.alpha[i], want), id + ": source alpha = " + std::to_string(e.source.alpha[i]) +
                                                    " but alpha + n tau + n/p2 - n/p1 = " + std::to_string(want) +
                                                    " at " + sample_where(grid, i));
    }
}

std::vector<std::string> embedding_ids() { return {"elem_q", "elem_alpha", "sobolev", "further", "sandwich_emd"}; }

namespace {

struct NamedPair {
    std::string name;
    EmbeddingPair pair;
    bool exact;  // constant 1 is exact for this pair
};

ExponentField shift(const ExponentField& f, double by, ExponentRole role) {
    return f.map([by](double x) { return x + by; }, role);
}

SpaceParams with(const SpaceParams& sp, std::optional<ExponentField> alpha, std::optional<ExponentField> tau,
                 std::optional<ExponentField> p, std::optional<ExponentField> q) {
    return SpaceParams{alpha ? *alpha : sp.alpha, tau ? *tau : sp.tau, p ? *p : sp.p, q ? *q : sp.q, sp.window};
}

std::vector<NamedPair> build_pairs(const std::string& id, const Corpus& c) {
    const Grid& g = c.grid;
    const double n = g.dim();
    std::vector<NamedPair> out;
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& sp = c.exponent_sets[s];
        const std::string nm = c.exponent_names[s];
        if (id == "elem_q") {
            const auto q1 = ExponentField::constant(g, 1.0, ExponentRole::summability);
            const auto q2 = ExponentField::constant(g, 2.0, ExponentRole::summability);
            out.push_back({nm + "/q=1->2", {with(sp, {}, {}, {}, q1), with(sp, {}, {}, {}, q2)}, true});
            out.push_back({nm + "/q->q+0.5", {sp, with(sp, {}, {}, {}, shift(sp.q, 0.5, ExponentRole::summability))},
                           sp.q.is_constant()});
        } else if (id == "elem_alpha") {
            out.push_back({nm + "/alpha+1", {with(sp, shift(sp.alpha, 1.0, ExponentRole::smoothness), {}, {}, {}), sp},
                           true});
            out.push_back({nm + "/alpha+0.5,q+1",
                           {with(sp, shift(sp.alpha, 0.5, ExponentRole::smoothness), {}, {},
                                 shift(sp.q, 1.0, ExponentRole::summability)),
                            sp},
                           false});
        } else if (id == "sobolev") {
            if (!(sp.tau.inf_value() > 0.0)) continue;
            const auto p1 = shift(sp.p, 1.0, ExponentRole::integrability);
            std::vector<double> a0(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) a0[i] = sp.alpha[i] + n / sp.p[i] - n / p1[i];
            const ExponentField alpha0(g, a0, ExponentRole::smoothness);
            out.push_back({nm + "/p->p+1", {with(sp, alpha0, {}, {}, {}), with(sp, {}, {}, p1, {})}, false});
        } else if (id == "further") {
            if (!(sp.tau.inf_value() > 0.0)) continue;
            const auto p1 = shift(sp.p, 1.0, ExponentRole::integrability);
            std::vector<double> a0(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                a0[i] = sp.alpha[i] + n * sp.tau[i] + n / sp.p[i] - n / p1[i];
            const ExponentField alpha0(g, a0, ExponentRole::smoothness);
            const auto tau0 = ExponentField::constant(g, 0.0, ExponentRole::tau);
            out.push_back({nm + "/p2=p,p1=p+1", {with(sp, alpha0, tau0, {}, {}), with(sp, {}, {}, p1, {})}, false});
        } else if (id == "sandwich_emd") {
            out.push_back({nm, {sp, sp}, false});
        }
    }
    if (id == "sobolev") {
        // Constant example with explicit smoothness pair.
        const double a1 = 0.5, a0 = a1 + n / 1.0 - n / 2.0;
        auto cst = [&](double v, ExponentRole r) { return ExponentField::constant(g, v, r); };
        const auto tau = cst(0.1, ExponentRole::tau), q = cst(2.0, ExponentRole::summability);
        out.push_back({"const/p0=1,p1=2",
                       {SpaceParams{cst(a0, ExponentRole::smoothness), tau, cst(1.0, ExponentRole::integrability), q, {}},
                        SpaceParams{cst(a1, ExponentRole::smoothness), tau, cst(2.0, ExponentRole::integrability), q, {}}},
                       false});
    }
    return out;
}

void validate_for(const std::string& id, const EmbeddingPair& e) {
    if (id == "elem_q") validate_elem_q(e);
    else if (id == "elem_alpha") validate_elem_alpha(e);
    else if (id == "sobolev") validate_sobolev(e);
    else if (id == "further") validate_further(e);
}

struct EmbedOutcome {
    std::vector<std::string> labels;
    std::vector<double> ratios;
    bool exact_ok = true;
    double exact_worst = 0.0;
};

EmbedOutcome embed_core(const std::string& id, const Corpus& c, const HarnessConfig& cfg, bool with_sequences) {
    EmbedOutcome o;
    const auto pair = build_pair(c.grid);
    const bool sequences = with_sequences && (id == "elem_q" || id == "elem_alpha");
    for (const auto& np : build_pairs(id, c)) {
        validate_for(id, np.pair);
        auto note = [&](const std::string& label, double r) {
            o.labels.push_back(np.name + "/" + label);
            o.ratios.push_back(r);
            if (np.exact) {
                o.exact_worst = std::max(o.exact_worst, r);
                o.exact_ok = o.exact_ok && r <= 1.0 + cfg.tol.exact;
            }
        };
        for (std::size_t i = 0; i < c.functions.size(); ++i) {
            const auto& f = c.functions[i];
            if (id == "sandwich_emd") {
                note("f" + std::to_string(i), holder_growth_check(f, np.pair.source, pair));
                continue;
            }
            const double src = besov_norm(f, np.pair.source, pair, cfg.tol.norm).value;
            const double tgt = besov_norm(f, np.pair.target, pair, cfg.tol.norm).value;
            note("f" + std::to_string(i), tgt / src);
        }
        if (!sequences) continue;
        for (std::size_t i = 0; i < c.sequences.size(); ++i) {
            const auto& s = c.sequences[i];
            if (s.is_zero()) continue;
            const double src = b_norm(s, np.pair.source, cfg.tol.norm).value;
            const double tgt = b_norm(s, np.pair.target, cfg.tol.norm).value;
            note("seq" + std::to_string(i), tgt / src);
        }
    }
    return o;
}

const char* embedding_statement(const std::string& id) {
    if (id == "elem_q") return "||f||_{B^{alpha,tau}_{p,q1}} <= c ||f||_{B^{alpha,tau}_{p,q0}}, q0 <= q1";
    if (id == "elem_alpha") return "||f||_{B^{alpha1,tau}_{p,q1}} <= c ||f||_{B^{alpha0,tau}_{p,q0}}, (alpha0-alpha1)^- > 0";
    if (id == "sobolev") return "||f||_{B^{alpha1,tau}_{p1,q}} <= c ||f||_{B^{alpha0,tau}_{p0,q}}, alpha0 - n/p0 = alpha1 - n/p1";
    if (id == "further")
        return "||f||_{B^{alpha,tau}_{p1,q}} <= c ||f||_{B^{alpha+n tau+n/p2-n/p1,0}_{p2,q}}, p2 <= p1";
    return "2^{v(alpha + n(tau - 1/p))} |phi_v * f(x)| <= c ||f||_{B^{alpha,tau}_{p,q}}";
}

}  // namespace

CheckReport run_embedding(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg) {
    const auto ids = embedding_ids();
    require(std::find(ids.begin(), ids.end(), id) != ids.end(), "unknown embedding id '" + id + "'");
    CheckReport rep;
    rep.check_id = id;
    rep.inequality = embedding_statement(id);
    rep.exact_constant = false;
    rep.bound = cfg.tol.band;
    rep.config = cfg.echo();
    auto base = embed_core(id, corpus, cfg, true);
    for (std::size_t i = 0; i < base.ratios.size(); ++i) rep.add(base.labels[i], base.ratios[i]);
    rep.metrics["exact_pairs_max_ratio"] = base.exact_worst;
    if (id == "elem_q" || id == "elem_alpha") rep.conditions["exact_pairs_ratio<=1"] = base.exact_ok;
    rep.finalize();
    if (cfg.refine) {
        // Sequence norms are piecewise constant on cubes and do not see the sample
        // resolution; only functions are re-run.
        const auto ref = embed_core(id, make_corpus(cfg, corpus.grid.refined(1)), cfg, false);
        double c0f = 0.0;
        for (std::size_t i = 0; i < base.ratios.size(); ++i)
            if (base.labels[i].find("/seq") == std::string::npos)
                c0f = std::isfinite(base.ratios[i]) ? std::max(c0f, base.ratios[i]) : INFINITY;
        double c1 = 0.0;
        for (double r : ref.ratios) c1 = std::isfinite(r) ? std::max(c1, r) : INFINITY;
        const double change = c0f == c1 ? 0.0 : std::abs(c1 / c0f - 1.0);
        rep.metrics["function_constant"] = c0f;
        rep.metrics["refined_function_constant"] = c1;
        rep.metrics["refinement_change"] = change;
        rep.conditions["refinement_stable"] = change <= cfg.tol.refinement;
        if (id == "elem_q" || id == "elem_alpha") rep.conditions["refined:exact_pairs_ratio<=1"] = ref.exact_ok;
        rep.finalize();
    }
    return rep;
}

// ---- oracle reduction ---------------------------------------------------------

CheckReport run_oracle_reduction(const Corpus& corpus, const HarnessConfig& cfg) {
    CheckReport rep;
    rep.check_id = "oracle_reduction";
    rep.inequality = "|variable pipeline - scalar formula| / |scalar formula| on constant exponents";
    rep.exact_constant = true;
    rep.bound = cfg.tol.oracle;
    rep.config = cfg.echo();
    const Grid& g = corpus.grid;
    const auto pair = build_pair(g);
    struct Q4 {
        double a, t, p, q;
    };
    std::vector<Q4> sets{{0.5, 0.1, 2.0, 2.0}, {-0.3, 0.0, 1.0, 1.0}, {1.0, 0.25, 3.0, 1.5}, {0.2, 0.05, 1.5, 4.0}};
    for (const auto& sp : corpus.exponent_sets)
        if (sp.alpha.is_constant() && sp.tau.is_constant() && sp.p.is_constant() && sp.q.is_constant())
            sets.push_back({sp.alpha[0], sp.tau[0], sp.p[0], sp.q[0]});
    auto rel = [](double got, double want) {
        return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
    };
    double worst = 0.0;
    for (const auto& s : sets) {
        auto cst = [&](double v, ExponentRole r) { return ExponentField::constant(g, v, r); };
        const SpaceParams sp{cst(s.a, ExponentRole::smoothness), cst(s.t, ExponentRole::tau),
                             cst(s.p, ExponentRole::integrability), cst(s.q, ExponentRole::summability), {}};
        char tag[96];
        std::snprintf(tag, sizeof tag, "(%g,%g,%g,%g)", s.a, s.t, s.p, s.q);
        auto note = [&](const std::string& label, double got, double want) {
            const double r = rel(got, want);
            worst = std::max(worst, r);
            rep.add(std::string(tag) + "/" + label, r);
        };
        for (std::size_t i = 0; i < corpus.functions.size(); ++i) {
            const auto& f = corpus.functions[i];
            const std::string fi = "f" + std::to_string(i);
            note(fi + "/modular", modular(f, sp.p), scalar::modular(f, s.p));
            note(fi + "/luxemburg", luxemburg_norm(f, sp.p, cfg.tol.norm).value, scalar::lp_norm(f, s.p));
            const auto bands = band_projections(f, pair);
            note(fi + "/mixed", mixed_norm(bands, sp.p, sp.q, cfg.tol.norm).value, scalar::mixed_norm(bands, s.p, s.q));
            note(fi + "/besov", besov_norm(f, sp, pair, cfg.tol.norm).value,
                 scalar::besov_norm(f, s.a, s.t, s.p, s.q, pair));
        }
        for (std::size_t i = 0; i < corpus.sequences.size(); ++i) {
            const auto& lam = corpus.sequences[i];
            note("seq" + std::to_string(i) + "/b", b_norm(lam, sp, cfg.tol.norm).value,
                 scalar::b_norm(lam, s.a, s.t, s.p, s.q));
        }
    }
    rep.metrics["max_rel_deviation"] = worst;
    rep.metrics["constant_sets"] = static_cast<double>(sets.size());
    rep.finalize();
    return rep;
}

}  // namespace varbesov
