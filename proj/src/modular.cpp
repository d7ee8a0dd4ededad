#include "varbesov/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rootfind.hpp"

namespace varbesov {
namespace {

// Nonzero samples of one level in log form: the modular of f/lambda^{1/q} is
// sum_i exp(p_i la_i - b_i t) Delta with t = log lambda and b_i = p_i / q_i.
struct LogLevel {
    std::vector<double> la;
    std::vector<double> p;
    std::vector<double> q;
    double t = 0.0;  // warm start
};

double inner_tolerance(double tol) { return std::max(1e-15, 1e-3 * tol); }

LogLevel make_level(std::span<const double> log_abs, std::span<const std::size_t> idx,
                    const ExponentField& p, const ExponentField& q) {
    LogLevel lv;
    for (std::size_t i : idx) {
        if (log_abs[i] == -INFINITY) continue;
        lv.la.push_back(log_abs[i]);
        lv.p.push_back(p[i]);
        lv.q.push_back(q[i]);
    }
    return lv;
}

// Solves sum_i exp(p_i (la_i + shift_i - s) - (p_i / q_i) t) Delta = 1 for t.
// An empty level has lambda = 0, returned as -inf.
struct MixedProblem {
    std::vector<LogLevel> levels;
    double log_delta = 0.0;
    bool p_infinite = false;
    int evaluations = 0;

    double inner(LogLevel& lv, double s, double tol) {
        if (lv.la.empty()) return -INFINITY;
        if (p_infinite) {
            double t = -INFINITY;
            for (std::size_t i = 0; i < lv.la.size(); ++i) t = std::max(t, lv.q[i] * (lv.la[i] - s));
            return t;
        }
        auto F = [&](double t) {
            detail::LogSumExp acc;
            for (std::size_t i = 0; i < lv.la.size(); ++i)
                acc.add(lv.p[i] * (lv.la[i] - s) - lv.p[i] / lv.q[i] * t);
            return acc.value() + log_delta;
        };
        const auto root = detail::solve_decreasing(F, lv.t, tol);
        evaluations += root.iterations;
        lv.t = root.t;
        return root.t;
    }

    // log of the semimodular of the family scaled by exp(-s).
    double log_semimodular(double s, double tol) {
        detail::LogSumExp acc;
        for (auto& lv : levels) acc.add(inner(lv, s, tol));
        return acc.value();
    }

    bool empty() const {
        return std::all_of(levels.begin(), levels.end(), [](const LogLevel& l) { return l.la.empty(); });
    }

    NormResult norm(double tol) {
        NormResult r;
        r.tolerance = tol;
        if (empty()) return r;
        const double itol = inner_tolerance(tol);
        auto H = [&](double s) { return log_semimodular(s, itol); };
        const auto root = detail::solve_decreasing(H, 0.0, tol);
        r.value = std::exp(root.t);
        r.lo = std::exp(root.lo);
        r.hi = std::exp(root.hi);
        r.iterations = root.iterations;
        return r;
    }
};

std::vector<double> log_abs(const GridFunction& f) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        out[i] = a == 0.0 ? -INFINITY : std::log(a);
    }
    return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

void check_grid(const GridFunction& f, const ExponentField& e) {
    require(f.grid() == e.grid(), "function and exponent live on different grids");
}

MixedProblem family_problem(std::span<const GridFunction> fs, const ExponentField& p,
                            const ExponentField& q) {
    MixedProblem prob;
    if (fs.empty()) return prob;
    const Grid& grid = fs.front().grid();
    prob.log_delta = std::log(grid.weight());
    prob.p_infinite = p.is_infinite();
    const auto idx = all_indices(grid.size());
    for (const auto& f : fs) {
        check_grid(f, p);
        check_grid(f, q);
        const auto la = log_abs(f);
        prob.levels.push_back(make_level(la, idx, p, q));
    }
    return prob;
}

}  // namespace

double modular(const GridFunction& f, const ExponentField& p) {
    check_grid(f, p);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a != 0.0) s += std::pow(a, p[i]);
    }
    return s * f.grid().weight();
}

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol) {
    check_grid(f, p);
    require(tol > 0.0, "tolerance must be positive");
    const auto q = ExponentField::constant(f.grid(), 1.0, ExponentRole::summability);
    const GridFunction* one = &f;
    auto prob = family_problem(std::span(one, 1), p, q);
    prob.p_infinite = false;
    NormResult r;
    r.tolerance = tol;
    if (prob.empty()) return r;
    const auto root = detail::solve_decreasing(
        [&](double t) {
            detail::LogSumExp acc;
            const auto& lv = prob.levels.front();
            for (std::size_t i = 0; i < lv.la.size(); ++i) acc.add(lv.p[i] * (lv.la[i] - t));
            return acc.value() + prob.log_delta;
        },
        0.0, tol);
    r.value = std::exp(root.t);
    r.lo = std::exp(root.lo);
    r.hi = std::exp(root.hi);
    r.iterations = root.iterations;
    return r;
}

UnitBallCheck unit_ball_check(const GridFunction& f, const ExponentField& p, double tol) {
    return {luxemburg_norm(f, p, tol).value <= 1.0, modular(f, p) <= 1.0};
}

double mixed_modular(std::span<const GridFunction> fs, const ExponentField& p,
                     const ExponentField& q) {
    auto prob = family_problem(fs, p, q);
    const double lm = prob.log_semimodular(0.0, 1e-15);
    return std::exp(lm);
}

double mixed_modular_simplified(std::span<const GridFunction> fs, const ExponentField& p,
                                const ExponentField& q) {
    require(q.sup_value() < kExponentCap, "simplified semimodular needs q^+ below the cap");
    double total = 0.0;
    for (const auto& f : fs) {
        check_grid(f, p);
        check_grid(f, q);
        std::vector<Complex> g(f.size());
        std::vector<double> r(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            g[i] = std::pow(std::abs(f[i]), q[i]);
            r[i] = p[i] / q[i];
        }
        const GridFunction gf(f.grid(), std::move(g));
        if (p.is_infinite()) {
            total += gf.max_abs();
            continue;
        }
        const ExponentField ratio(f.grid(), std::move(r), ExponentRole::integrability, std::nullopt,
                                  1e-12);
        total += luxemburg_norm(gf, ratio, 1e-15).value;
    }
    return total;
}

NormResult mixed_norm(std::span<const GridFunction> fs, const ExponentField& p,
                      const ExponentField& q, double tol) {
    require(tol > 0.0, "tolerance must be positive");
    auto prob = family_problem(fs, p, q);
    return prob.norm(tol);
}

std::string mixed_norm_condition(const ExponentField& p, const ExponentField& q) {
    if (q.is_constant() && q.inf_value() >= 1.0 && p.inf_value() >= 1.0) return "q constant >= 1, p >= 1";
    bool holder = true;
    bool ordered = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
        holder = holder && 1.0 / p[i] + 1.0 / q[i] <= 1.0;
        ordered = ordered && 1.0 <= q[i] && q[i] <= p[i];
    }
    if (holder) return "1/p + 1/q <= 1";
    if (ordered) return "1 <= q <= p";
    return "none";
}

NormResult tau_mixed_norm(const LevelFamily& family, const ExponentField& p, const ExponentField& q,
                          const ExponentField& tau, CubeWindow window, int shift, double tol) {
    require(tol > 0.0, "tolerance must be positive");
    require(shift >= 0, "level shift must be non-negative");
    NormResult best;
    best.tolerance = tol;
    if (family.fs.empty()) return best;
    const Grid& grid = family.fs.front().grid();
    require(p.grid() == grid && q.grid() == grid && tau.grid() == grid,
            "exponents live on a different grid");
    std::vector<std::vector<double>> logs;
    logs.reserve(family.fs.size());
    for (const auto& f : family.fs) {
        require(f.grid() == grid, "family members live on different grids");
        logs.push_back(log_abs(f));
    }
    const double ln2n = std::numbers::ln2 * grid.dim();
    const auto cubes = cubes_in_window(grid, window.v_lo, window.v_hi);
    std::vector<MixedProblem> probs;
    std::vector<double> proxy;
    probs.reserve(cubes.size());
    for (const auto& P : cubes) {
        const int start = std::max(std::max(P.v, 0) - shift, family.first_level);
        if (start > family.last_level()) continue;
        const auto idx = cube_samples(grid, P);
        MixedProblem prob;
        prob.log_delta = std::log(grid.weight());
        prob.p_infinite = p.is_infinite();
        double pbar = 0.0, qbar = 0.0;
        for (std::size_t i : idx) {
            pbar += std::min(p[i], kExponentCap);
            qbar += std::min(q[i], kExponentCap);
        }
        pbar /= static_cast<double>(idx.size());
        qbar /= static_cast<double>(idx.size());
        detail::LogSumExp outer;
        for (int v = start; v <= family.last_level(); ++v) {
            const auto& la = logs[static_cast<std::size_t>(v - family.first_level)];
            LogLevel lv;
            detail::LogSumExp inner;
            for (std::size_t i : idx) {
                if (la[i] == -INFINITY) continue;
                // |P|^{-tau} = 2^{v_P n tau}
                lv.la.push_back(la[i] + tau[i] * P.v * ln2n);
                lv.p.push_back(p[i]);
                lv.q.push_back(q[i]);
                inner.add(pbar * lv.la.back());
            }
            if (!lv.la.empty()) outer.add(qbar / pbar * (inner.value() + prob.log_delta));
            prob.levels.push_back(std::move(lv));
        }
        if (prob.empty()) continue;
        // Constant-exponent estimate of the log norm; only used to order the cubes.
        proxy.push_back(outer.value() / qbar);
        probs.push_back(std::move(prob));
    }
    std::vector<std::size_t> order(probs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return proxy[a] > proxy[b]; });
    int total_iterations = 0;
    for (std::size_t k : order) {
        auto& prob = probs[k];
        // The semimodular is decreasing in the scale: a cube whose semimodular at the
        // running maximum is already below 1 cannot raise the supremum.
        if (best.value > 0.0 && prob.log_semimodular(std::log(best.value), inner_tolerance(tol)) < -1e-12)
            continue;
        const NormResult r = prob.norm(tol);
        total_iterations += r.iterations;
        if (r.value > best.value) {
            best.value = r.value;
            best.lo = r.lo;
            best.hi = r.hi;
        }
    }
    best.iterations = total_iterations;
    return best;
}

NormResult tilde_norm(const GridFunction& f, const ExponentField& p, const ExponentField& tau,
                      double tol) {
    require(tau.inf_value() >= 0.0, "tau must be non-negative");
    const Grid& grid = f.grid();
    const auto q = ExponentField::constant(grid, 1.0, ExponentRole::summability);
    LevelFamily fam{0, {f}};
    // Cubes with |P| >= 1 are the levels v_P <= 0; with q = 1 and a single
    // member the mixed norm reduces to the Luxemburg norm.
    return tau_mixed_norm(fam, p, q, tau, {-grid.jmax(), 0}, 0, tol);
}

}  // namespace varbesov
