#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "varbesov/fft.hpp"
#include "varbesov/harness.hpp"
#include "varbesov/kernels.hpp"
#include "varbesov/modular.hpp"

namespace varbesov {
namespace detail_harness {

using nlohmann::json;

struct Outcome {
    std::vector<std::string> labels;
    std::vector<double> ratios;
    std::vector<double> per_v;  // per-level constants, in level order
    int first_v = 0;
    std::map<std::string, double> metrics;  // keys "constant:*" are compared under refinement
    std::map<std::string, bool> conditions;
    std::vector<std::string> notes;

    void add(std::string label, double r) {
        labels.push_back(std::move(label));
        ratios.push_back(r);
    }
};

using Core = std::function<Outcome(const Corpus&, const HarnessConfig&)>;

double max_finite(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::isfinite(x) ? std::max(m, x) : INFINITY;
    return m;
}

double rel_change(double a, double b) {
    if (a == b) return 0.0;
    if (a == 0.0) return INFINITY;
    return std::abs(b / a - 1.0);
}

CheckReport make_report(const std::string& id, const std::string& inequality, bool exact, double bound,
                        const HarnessConfig& cfg) {
    CheckReport r;
    r.check_id = id;
    r.inequality = inequality;
    r.exact_constant = exact;
    r.bound = bound;
    r.config = cfg.echo();
    return r;
}

void absorb(CheckReport& rep, Outcome&& o) {
    for (std::size_t i = 0; i < o.ratios.size(); ++i) rep.add(o.labels[i], o.ratios[i]);
    for (auto& [k, v] : o.metrics) rep.metrics[k] = v;
    for (auto& [k, v] : o.conditions) rep.conditions[k] = v;
    for (auto& n : o.notes) rep.notes.push_back(n);
}

// Growth of the constant at the finest tested level over the largest earlier one.
void record_levels(CheckReport& rep, const Outcome& o, const HarnessConfig& cfg, const std::string& tag) {
    if (o.per_v.size() < 2) return;
    for (std::size_t i = 0; i < o.per_v.size(); ++i)
        rep.metrics[tag + "c_v[" + std::to_string(o.first_v + static_cast<int>(i)) + "]"] = o.per_v[i];
    const double earlier = *std::max_element(o.per_v.begin(), o.per_v.end() - 1);
    const double growth = earlier > 0.0 ? o.per_v.back() / earlier : INFINITY;
    rep.metrics[tag + "v_growth"] = growth;
    rep.conditions[tag + "stable_across_v"] = std::isfinite(growth) && growth <= 1.0 + cfg.tol.v_growth;
}

CheckReport run_core(const std::string& id, const std::string& inequality, double bound, const Core& core,
                     const Corpus& corpus, const HarnessConfig& cfg, bool level_stability = true) {
    CheckReport rep = make_report(id, inequality, false, bound, cfg);
    Outcome base = core(corpus, cfg);
    if (level_stability) record_levels(rep, base, cfg, "");
    const double c0 = max_finite(base.ratios);
    std::map<std::string, double> base_constants;
    for (const auto& [k, v] : base.metrics)
        if (k.rfind("constant:", 0) == 0) base_constants[k] = v;
    absorb(rep, std::move(base));
    if (cfg.refine) {
        const Corpus fine = make_corpus(cfg, corpus.grid.refined(1));
        Outcome ref = core(fine, cfg);
        if (level_stability) record_levels(rep, ref, cfg, "refined:");
        const double c1 = max_finite(ref.ratios);
        rep.metrics["refined_constant"] = c1;
        rep.metrics["refinement_change"] = rel_change(c0, c1);
        rep.conditions["refinement_stable"] = rel_change(c0, c1) <= cfg.tol.refinement;
        for (const auto& [k, v] : base_constants) {
            const auto it = ref.metrics.find(k);
            if (it == ref.metrics.end()) continue;
            rep.metrics["refined_" + k] = it->second;
            rep.metrics["refinement_change_" + k] = rel_change(v, it->second);
        }
        // Decay-order sweeps: the smallest order whose constant survives refinement.
        double smallest = INFINITY;
        for (const auto& [k, v] : base_constants) {
            if (k.rfind("constant:m=", 0) != 0) continue;
            const auto it = ref.metrics.find(k);
            if (it != ref.metrics.end() && std::isfinite(v) && rel_change(v, it->second) <= cfg.tol.refinement)
                smallest = std::min(smallest, std::stod(k.substr(11)));
        }
        if (std::isfinite(smallest)) rep.metrics["smallest_stable_m"] = smallest;
        for (const auto& [k, v] : ref.conditions) rep.conditions["refined:" + k] = v;
    }
    rep.finalize();
    return rep;
}

// ---- small helpers ---------------------------------------------------------

double tau_p_min(const SpaceParams& sp) {
    double m = INFINITY;
    for (std::size_t i = 0; i < sp.p.size(); ++i) m = std::min(m, sp.tau[i] * sp.p[i]);
    return m;
}

// tau^- > 0 and tau^+ < (tau p)^-, the standing assumptions of the tau-lemmas.
bool tau_lemma_hypotheses(const SpaceParams& sp) {
    return sp.tau.inf_value() > 0.0 && sp.tau.sup_value() < tau_p_min(sp) && sp.q.sup_value() < kExponentCap;
}

std::vector<double> radial(const Grid& grid, const std::function<double(double)>& fn) {
    auto mag = frequency_magnitudes(grid);
    for (auto& r : mag) r = fn(r);
    return mag;
}

// Fourier transform of omega: smooth, equal to 1 near 0, supported in the closed unit ball.
std::vector<double> omega_multiplier(const Grid& grid, double N) {
    const Margins mg;
    return radial(grid, [&](double r) { return profile_Phi(2.0 * r / N, mg); });
}

// Fourier transform of a Gaussian theta, dilated by R.
std::vector<double> theta_multiplier(const Grid& grid, double R) {
    return radial(grid, [&](double r) { return std::exp(-0.5 * (r / R) * (r / R)); });
}

GridFunction abs_of(const GridFunction& f) {
    GridFunction out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::abs(f[i]);
    return out;
}

GridFunction pow_abs(const GridFunction& f, double r) {
    GridFunction out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::pow(std::abs(f[i]), r);
    return out;
}

LevelFamily abs_family(LevelFamily fam) {
    for (auto& f : fam.fs) f = abs_of(f);
    return fam;
}

LevelFamily truncate(const LevelFamily& fam, int last) {
    LevelFamily out{fam.first_level, {}};
    for (int v = fam.first_level; v <= last; ++v) out.fs.push_back(fam.fs[static_cast<std::size_t>(v - fam.first_level)]);
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), 0x5eedu};
    return std::mt19937_64(seq);
}

// Levels over which per-v lemma constants are compared: 0 .. band_jfine - 2.
int top_level(const Corpus& c) { return c.band_jfine - 2; }

// ---- lemma cores -------------------------------------------------------------

Outcome core_dhr(const Corpus& c, const HarnessConfig&) {
    Outcome o;
    const Grid& grid = c.grid;
    const int n = grid.dim();
    const auto N = static_cast<std::int64_t>(grid.points_per_axis());
    const double h = grid.spacing();
    const int V = top_level(c);
    o.per_v.assign(static_cast<std::size_t>(V + 1), 0.0);
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& alpha = c.exponent_sets[s].alpha;
        const double clog = estimate_log_holder(alpha, grid).local_constant;
        const double R = std::ceil(clog);
        const double osc = alpha.sup_value() - alpha.inf_value();
        o.metrics["c_log(alpha):" + c.exponent_names[s]] = clog;
        for (int v = 0; v <= V; ++v) {
            // log2 of 2^{v(alpha(x) - alpha(y))} (1 + 2^v |x - y|)^{-R}; x = y gives 0.
            // Only offsets with R log2(1 + 2^v d) < v osc(alpha) can exceed 0.
            double best = 0.0;
            if (osc > 0.0) {
                const double radius = R > 0.0 ? (std::exp2(v * osc / R) - 1.0) * std::ldexp(1.0, -v) : INFINITY;
                const std::int64_t k = std::min<std::int64_t>(N / 2, static_cast<std::int64_t>(std::ceil(radius / h)));
                const std::int64_t k1 = n == 2 ? k : 0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const auto ia = grid.unravel(i);
                    for (std::int64_t d0 = -k; d0 <= k; ++d0)
                        for (std::int64_t d1 = -k1; d1 <= k1; ++d1) {
                            const double d = std::hypot(static_cast<double>(d0), static_cast<double>(d1)) * h;
                            const auto j0 = static_cast<std::size_t>(((static_cast<std::int64_t>(ia[0]) + d0) % N + N) % N);
                            const auto j1 = static_cast<std::size_t>(((static_cast<std::int64_t>(ia[1]) + d1) % N + N) % N);
                            const double da = std::abs(alpha[i] - alpha[grid.ravel(j0, n == 2 ? j1 : 0)]) * v;
                            if (da > best) best = std::max(best, da - R * std::log2(1.0 + std::ldexp(d, v)));
                        }
                }
            }
            const double ratio = std::exp2(best);
            o.add(c.exponent_names[s] + "/v=" + std::to_string(v), ratio);
            o.per_v[static_cast<std::size_t>(v)] = std::max(o.per_v[static_cast<std::size_t>(v)], ratio);
        }
    }
    return o;
}

Outcome core_r_trick(const Corpus& c, const HarnessConfig&) {
    Outcome o;
    const Grid& grid = c.grid;
    const int n = grid.dim();
    const double m = 2.0 * n + 2.0;
    const int V = top_level(c);
    o.first_v = 1;
    o.per_v.assign(static_cast<std::size_t>(V), 0.0);
    int skipped = 0;
    for (std::size_t fi = 0; fi < c.functions.size(); ++fi) {
        const auto spec = dft(grid, c.functions[fi].values());
        const double gmax = c.functions[fi].max_abs();
        for (int v = 1; v <= V; ++v) {
            const double N = std::ldexp(1.0, v);
            const auto om = omega_multiplier(grid, N);
            std::vector<Complex> buf(spec.size());
            for (std::size_t i = 0; i < spec.size(); ++i) buf[i] = spec[i] * om[i];
            const GridFunction h(grid, idft(grid, buf));
            if (h.max_abs() <= 1e-10 * gmax) {
                ++skipped;
                continue;
            }
            const auto eta = eta_scaled(N, m, grid);
            for (double R : {N / 2, N, 2 * N}) {
                const double A = std::max(1.0, std::pow(N / R, m));
                const auto th = theta_multiplier(grid, R);
                const auto hs = dft(grid, h.values());
                for (std::size_t i = 0; i < hs.size(); ++i) buf[i] = hs[i] * th[i];
                const GridFunction lhs(grid, idft(grid, buf));
                for (double r : {0.5, 1.0}) {
                    const auto conv = convolve(eta, pow_abs(h, r));
                    double worst = 0.0;
                    for (std::size_t i = 0; i < grid.size(); ++i) {
                        const double rhs = A * std::pow(std::max(conv[i].real(), 0.0), 1.0 / r);
                        worst = std::max(worst, std::abs(lhs[i]) / rhs);
                    }
                    o.add("f" + std::to_string(fi) + "/N=" + fmt(N) + "/R=" + fmt(R) + "/r=" + fmt(r), worst);
                    auto& pv = o.per_v[static_cast<std::size_t>(v - 1)];
                    pv = std::max(pv, worst);
                }
            }
        }
    }
    o.metrics["skipped_negligible_bands"] = skipped;
    o.metrics["m"] = m;
    return o;
}

Outcome core_dhhr(const Corpus& c, const HarnessConfig& cfg) {
    Outcome o;
    const Grid& grid = c.grid;
    const int n = grid.dim();
    const double m = 2.0 * n + 2.0;
    const int lo = -grid.jmax(), hi = top_level(c);
    o.first_v = lo;
    o.per_v.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    std::vector<double> wdecay(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        wdecay[i] = std::pow(std::numbers::e + grid.periodic_distance(grid.point(i), Point{0.0, 0.0}), -m);
    double beta_all = 1.0;
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& p = c.exponent_sets[s].p;
        for (std::size_t fi = 0; fi < c.functions.size(); ++fi) {
            const double norm = luxemburg_norm(c.functions[fi], p, cfg.tol.norm).hi;
            if (norm == 0.0) continue;
            std::vector<double> a(grid.size()), ap(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                a[i] = std::abs(c.functions[fi][i]) / norm;
                ap[i] = std::pow(a[i], p[i]);
            }
            for (int u = lo; u <= hi; ++u) {
                double beta = 1.0;
                const double vol = std::ldexp(1.0, -u * n);
                const double damp = std::min(std::pow(vol, m), 1.0);
                for (const auto& Q : cubes_at_level(grid, u)) {
                    const auto idx = cube_samples(grid, Q);
                    double sa = 0.0, sap = 0.0, sw = 0.0;
                    for (std::size_t i : idx) {
                        sa += a[i];
                        sap += ap[i];
                        sw += wdecay[i];
                    }
                    const double cnt = static_cast<double>(idx.size());
                    const double avg = sa / cnt;
                    if (avg == 0.0) continue;
                    for (std::size_t x : idx) {
                        const double rhs = sap / cnt + damp * (wdecay[x] + sw / cnt);
                        beta = std::min(beta, std::pow(rhs, 1.0 / p[x]) / avg);
                    }
                }
                const double ratio = 1.0 / beta;
                o.add(c.exponent_names[s] + "/f" + std::to_string(fi) + "/v=" + std::to_string(u), ratio);
                auto& pv = o.per_v[static_cast<std::size_t>(u - lo)];
                pv = std::max(pv, ratio);
                beta_all = std::min(beta_all, beta);
            }
        }
    }
    o.metrics["beta"] = beta_all;
    o.metrics["m"] = m;
    o.conditions["beta_in_(0,1]"] = beta_all > 0.0 && beta_all <= 1.0;
    o.notes.push_back("ratio = 1/beta_max where beta_max is the largest beta satisfying the inequality at every (Q, x)");
    return o;
}

std::vector<double> m_sweep(int n) {
    std::vector<double> ms{n + 1.0, 2.0 * n + 2.0, 4.0 * n};
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
}

Outcome core_alm_hasto(const Corpus& c, const HarnessConfig& cfg) {
    Outcome o;
    const Grid& grid = c.grid;
    const int n = grid.dim();
    const auto pair = build_pair(grid);
    const double m_main = 2.0 * n + 2.0;
    const int V = pair.v_max;
    const std::vector<int> tops{V - 2, V - 1, V};
    o.first_v = V - 2;
    o.per_v.assign(tops.size(), 0.0);
    std::map<double, double> per_m;
    std::map<int, std::vector<GridFunction>> etas;
    for (double m : m_sweep(n))
        for (int v = 0; v <= V; ++v) etas[static_cast<int>(m * 100) * 100 + v].push_back(eta_evaluate({v, m}, grid));
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& sp = c.exponent_sets[s];
        if (!tau_lemma_hypotheses(sp)) {
            o.notes.push_back(c.exponent_names[s] + ": hypotheses tau^- > 0, tau^+ < (tau p)^- not met, skipped");
            continue;
        }
        for (std::size_t fi = 0; fi < c.functions.size(); ++fi) {
            const auto fam = abs_family(besov_family(c.functions[fi], sp.alpha, pair));
            for (double m : m_sweep(n)) {
                LevelFamily conv{fam.first_level, {}};
                for (int v = 0; v <= V; ++v)
                    conv.fs.push_back(convolve(etas[static_cast<int>(m * 100) * 100 + v][0], fam.fs[static_cast<std::size_t>(v)]));
                const bool main = m == m_main;
                const std::size_t nt = main ? tops.size() : 1;
                for (std::size_t t = 0; t < nt; ++t) {
                    const int top = main ? tops[t] : V;
                    const auto a = truncate(fam, top), b = truncate(conv, top);
                    const double den = tau_mixed_norm(a, sp.p, sp.q, sp.tau, sp.window_for(top), 0, cfg.tol.norm).value;
                    const double num = tau_mixed_norm(b, sp.p, sp.q, sp.tau, sp.window_for(top), 0, cfg.tol.norm).value;
                    if (den == 0.0) continue;
                    const double ratio = num / den;
                    if (main) o.per_v[t] = std::max(o.per_v[t], ratio);
                    if (top == V) {
                        per_m[m] = std::max(per_m[m], ratio);
                        if (main) o.add(c.exponent_names[s] + "/f" + std::to_string(fi), ratio);
                    }
                }
            }
        }
    }
    for (const auto& [m, v] : per_m) o.metrics["constant:m=" + fmt(m)] = v;
    o.metrics["m"] = m_main;
    o.notes.push_back("per-level constants are for families truncated at the listed top level");
    return o;
}

Outcome core_key_estimate1(const Corpus& c, const HarnessConfig& cfg) {
    Outcome o;
    const Grid& grid = c.grid;
    const int V = top_level(c);
    o.per_v.assign(static_cast<std::size_t>(V + 1), 0.0);
    int skipped = 0;
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& sp = c.exponent_sets[s];
        if (!(sp.tau.inf_value() > 0.0)) continue;
        for (std::size_t fi = 0; fi < c.functions.size(); ++fi) {
            const auto spec = dft(grid, c.functions[fi].values());
            const double gmax = c.functions[fi].max_abs();
            for (int v = 0; v <= V; ++v) {
                const double N = std::ldexp(1.0, v);
                const auto om = omega_multiplier(grid, N);
                const auto th = theta_multiplier(grid, N);
                std::vector<Complex> b1(spec.size()), b2(spec.size());
                for (std::size_t i = 0; i < spec.size(); ++i) {
                    b1[i] = spec[i] * om[i];
                    b2[i] = b1[i] * th[i];
                }
                const GridFunction h(grid, idft(grid, b1)), th_h(grid, idft(grid, b2));
                if (h.max_abs() <= 1e-10 * gmax) {
                    ++skipped;
                    continue;
                }
                const double den = tilde_norm(h, sp.p, sp.tau, cfg.tol.norm).value;
                const double num = tilde_norm(th_h, sp.p, sp.tau, cfg.tol.norm).value;
                const double ratio = num / den;
                o.add(c.exponent_names[s] + "/f" + std::to_string(fi) + "/v=" + std::to_string(v), ratio);
                auto& pv = o.per_v[static_cast<std::size_t>(v)];
                pv = std::max(pv, ratio);
            }
        }
    }
    o.metrics["skipped_negligible_bands"] = skipped;
    o.notes.push_back("sup over dyadic P with |P| >= 1 of the left side equals the tilde norm of theta_v * omega_v * f");
    return o;
}

Outcome core_key_lemma(const Corpus& c, const HarnessConfig& cfg) {
    Outcome o;
    const Grid& grid = c.grid;
    const auto pair = build_pair(grid);
    const int V = pair.v_max;
    const std::vector<int> tops{V - 2, V - 1, V};
    o.first_v = V - 2;
    o.per_v.assign(tops.size(), 0.0);
    double c_half = 0.0;
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& sp = c.exponent_sets[s];
        for (std::size_t fi = 0; fi < c.functions.size(); ++fi) {
            const auto fam = abs_family(besov_family(c.functions[fi], sp.alpha, pair));
            for (double delta : {1.0, 0.5}) {
                LevelFamily g{0, smooth_levels(fam.fs, delta)};
                const bool main = delta == 1.0;
                const std::size_t nt = main ? tops.size() : 1;
                for (std::size_t t = 0; t < nt; ++t) {
                    const int top = main ? tops[t] : V;
                    // Smoothing is applied before truncation so both families see the same data.
                    const auto a = truncate(fam, top), b = truncate(g, top);
                    const double den = tau_mixed_norm(a, sp.p, sp.q, sp.tau, sp.window_for(top), 0, cfg.tol.norm).value;
                    const double num = tau_mixed_norm(b, sp.p, sp.q, sp.tau, sp.window_for(top), 0, cfg.tol.norm).value;
                    if (den == 0.0) continue;
                    const double ratio = num / den;
                    if (main) {
                        o.per_v[t] = std::max(o.per_v[t], ratio);
                        if (top == V) o.add(c.exponent_names[s] + "/f" + std::to_string(fi), ratio);
                    } else {
                        c_half = std::max(c_half, ratio);
                    }
                }
            }
        }
    }
    o.metrics["delta"] = 1.0;
    o.metrics["constant:delta=0.5"] = c_half;
    return o;
}

Outcome core_coeff_bound(const Corpus& c, const HarnessConfig&) {
    Outcome o;
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s)
        for (std::size_t i = 0; i < c.sequences.size(); ++i) {
            if (c.sequences[i].is_zero()) continue;
            o.add(c.exponent_names[s] + "/seq" + std::to_string(i), coeff_bound_ratio(c.sequences[i], c.exponent_sets[s]));
        }
    return o;
}

Outcome core_lambda_equi(const Corpus& c, const HarnessConfig& cfg) {
    Outcome o;
    const int n = c.grid.dim();
    bool lower_ok = true, doubling_ok = true;
    double worst_lower = 0.0, c2 = 0.0;
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& sp = c.exponent_sets[s];
        if (!(sp.tau.inf_value() > 0.0)) continue;
        const double r = std::min(1.0, 0.5 * tau_p_min(sp) / sp.tau.sup_value());
        const double a = std::ceil(estimate_log_holder(sp.alpha, c.grid).local_constant);
        const double L = 2.0 * n + 2.0;
        const double d = n + a + L + 1.0;
        o.metrics["r:" + c.exponent_names[s]] = r;
        o.metrics["d:" + c.exponent_names[s]] = d;
        for (std::size_t i = 0; i < c.sequences.size(); ++i) {
            const auto& lam = c.sequences[i];
            if (lam.is_zero()) continue;
            const double nb = b_norm(lam, sp, cfg.tol.norm).value;
            const double ns = b_norm(lambda_star(lam, r, d), sp, cfg.tol.norm).value;
            const double n2 = b_norm(lambda_star(lam, r, 2 * d), sp, cfg.tol.norm).value;
            o.add(c.exponent_names[s] + "/seq" + std::to_string(i), ns / nb);
            worst_lower = std::max(worst_lower, nb / ns);
            lower_ok = lower_ok && nb <= ns * (1.0 + cfg.tol.exact);
            doubling_ok = doubling_ok && n2 <= ns * (1.0 + cfg.tol.exact);
            c2 = std::max(c2, n2 / nb);
        }
    }
    o.metrics["max_lower_ratio"] = worst_lower;
    o.metrics["constant:2d"] = c2;
    o.conditions["lower_bound_exact"] = lower_ok;
    o.conditions["band_not_growing_when_d_doubles"] = doubling_ok;
    return o;
}

Outcome core_key_estimate(const Corpus& c, const HarnessConfig& cfg) {
    Outcome o;
    const Grid& grid = c.grid;
    const int n = grid.dim();
    const int V = top_level(c);
    o.per_v.assign(static_cast<std::size_t>(V + 1), 0.0);
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& sp = c.exponent_sets[s];
        const double r = 0.5 * sp.p.inf_value();
        for (std::size_t fi = 0; fi < c.functions.size(); ++fi) {
            const auto spec = dft(grid, c.functions[fi].values());
            const double gmax = c.functions[fi].max_abs();
            for (int v = 0; v <= V; ++v) {
                const auto om = omega_multiplier(grid, std::ldexp(1.0, v));
                std::vector<Complex> b(spec.size());
                for (std::size_t i = 0; i < spec.size(); ++i) b[i] = spec[i] * om[i];
                const GridFunction h(grid, idft(grid, b));
                if (h.max_abs() <= 1e-10 * gmax) continue;
                const double den = tilde_norm(h, sp.p, sp.tau, cfg.tol.norm).value;
                const double ratio = std::exp2(-v * n / r) * h.max_abs() / den;
                o.add(c.exponent_names[s] + "/f" + std::to_string(fi) + "/v=" + std::to_string(v), ratio);
                auto& pv = o.per_v[static_cast<std::size_t>(v)];
                pv = std::max(pv, ratio);
            }
        }
    }
    return o;
}

}  // namespace detail_harness

using namespace detail_harness;

std::vector<std::string> lemma_check_ids() {
    return {"DHR", "r_trick", "DHHR_estimate", "alm_hasto", "key_estimate1",
            "key_lemma", "key_lemmasection3", "lamda_equi", "key_estimate"};
}

CheckReport run_lemma_check(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg) {
    require(!corpus.functions.empty() || !corpus.sequences.empty(), "empty corpus");
    const double band = cfg.tol.band;
    if (id == "DHR")
        return run_core(id, "2^{v alpha(x)} eta_{v,m+R}(x-y) <= c 2^{v alpha(y)} eta_{v,m}(x-y), R = ceil(c_log(alpha))",
                        band, core_dhr, corpus, cfg);
    if (id == "r_trick")
        return run_core(id, "|theta_R * omega_N * g| <= c A (eta_{N,m} * |omega_N * g|^r)^{1/r}, A = max(1,(N/R)^m)",
                        band, core_r_trick, corpus, cfg);
    if (id == "DHHR_estimate")
        return run_core(id,
                        "(beta M_Q f)^{p(x)} <= M_Q(|f|^{p}) + min(|Q|^m,1) M_Q((e+|x|)^{-m} + (e+|.|)^{-m}); "
                        "ratio = 1/beta",
                        band, core_dhhr, corpus, cfg);
    if (id == "alm_hasto")
        return run_core(id, "||(eta_{v,m} * f_v)|| <= c ||(f_v)|| in l^q(L^p_tau)", band, core_alm_hasto, corpus, cfg);
    if (id == "key_estimate1")
        return run_core(id, "||theta_v * omega_v * f chi_P / |P|^tau||_p <= c ||omega_v * f||_tilde, |P| >= 1", band,
                        core_key_estimate1, corpus, cfg);
    if (id == "key_lemma")
        return run_core(id, "||(sum_k 2^{-|k-v| delta} f_k)_v|| <= c ||(f_v)|| in l^q(L^p_tau)", band, core_key_lemma,
                        corpus, cfg);
    if (id == "key_lemmasection3")
        return run_core(id, "|lambda_{v,m}| 2^{v(alpha(x)+n/2)} |Q|^{-tau(x)} ||chi_Q||_p <= c ||lambda||_b", band,
                        core_coeff_bound, corpus, cfg, false);
    if (id == "lamda_equi")
        return run_core(id, "||lambda||_b <= ||lambda*_{r,d}||_b <= c ||lambda||_b, d = n + a + L + 1", band,
                        core_lambda_equi, corpus, cfg, false);
    if (id == "key_estimate")
        return run_core(id, "2^{-vn/r} |omega_v * f(x)| <= c ||omega_v * f||_tilde, r = p^-/2", band, core_key_estimate,
                        corpus, cfg);
    throw DomainError("unknown lemma check id '" + id + "'");
}

// ---- property campaigns ------------------------------------------------------

namespace {

CheckReport check_luxemburg(const Corpus& c, const HarnessConfig& cfg) {
    CheckReport rep = make_report("luxemburg_closed_form", "| ||chi_B||_p - |B|^{1/p} | / |B|^{1/p}", true,
                                  cfg.tol.exact, cfg);
    const Grid& grid = c.grid;
    const int n = grid.dim();
    const std::vector<int> levels = n == 1 ? std::vector<int>{2, 0, -2} : std::vector<int>{1, 0, -1};
    for (double p : {1.0, 2.0, 3.0, 10.0})
        for (int u : levels) {
            if (u < -grid.jmax()) continue;
            const auto chi = indicator({u, {0, 0}}, grid);
            const double vol = std::ldexp(1.0, -u * n);
            const auto P = ExponentField::constant(grid, p, ExponentRole::integrability);
            const double got = luxemburg_norm(chi, P, cfg.tol.norm).value;
            const double want = std::pow(vol, 1.0 / p);
            rep.add("p=" + fmt(p) + "/|B|=" + fmt(vol), std::abs(got - want) / want);
        }
    rep.finalize();
    return rep;
}

ExponentField random_p(const Grid& grid, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u;
    ExponentSpec s;
    s.kind = ExponentSpec::Kind::bump;
    s.c0 = lo + (hi - lo) * u(rng);
    s.c1 = (hi - s.c0) * u(rng);
    s.center = {grid.side() * u(rng), grid.dim() == 2 ? grid.side() * u(rng) : 0.0};
    s.width = grid.side() * (0.1 + 0.4 * u(rng));
    s.decay_limit = s.c0;
    return s.sample(grid, ExponentRole::integrability);
}

CheckReport check_unit_ball(const Corpus& c, const HarnessConfig& cfg) {
    CheckReport rep = make_report("unit_ball", "[||f||_p <= 1] == [rho_p(f) <= 1]; ratio 1 marks a disagreement",
                                  true, 0.5, cfg);
    const Grid& grid = c.grid;
    auto rng = stream(cfg.seed, 3);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> u;
    int excluded = 0, disagree = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto p = random_p(grid, rng, 1.0, 4.0);
        GridFunction f(grid);
        const bool sparse = u(rng) < 0.3;
        for (std::size_t i = 0; i < grid.size(); ++i)
            f[i] = sparse && u(rng) < 0.9 ? 0.0 : gauss(rng);
        if (f.is_zero()) f[0] = 1.0;
        const int mode = k % 3;
        double scale = std::exp(6.0 * u(rng) - 3.0);
        if (mode == 0) {
            // Land close to the unit sphere on either side.
            const double nrm = luxemburg_norm(f, p, cfg.tol.norm).value;
            const double eps = std::pow(10.0, -2.0 - 4.0 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
            scale = (1.0 + eps) / nrm;
        }
        f *= scale;
        const double rho = modular(f, p);
        if (std::abs(rho - 1.0) < 1e-8) {
            ++excluded;
            continue;
        }
        const auto chk = unit_ball_check(f, p, cfg.tol.norm);
        const bool agree = chk.norm_le_one == chk.modular_le_one;
        disagree += agree ? 0 : 1;
        rep.add("case" + std::to_string(k), agree ? 0.0 : 1.0);
    }
    rep.metrics["excluded_boundary_cases"] = excluded;
    rep.metrics["disagreements"] = disagree;
    rep.finalize();
    return rep;
}

CheckReport check_mixed_dual(const Corpus& c, const HarnessConfig& cfg) {
    CheckReport rep = make_report("mixed_dual_route",
                                  "|semimodular (per-level roots) - sum_v || |f_v|^q ||_{p/q}| / max(1e-300, value)",
                                  true, cfg.tol.oracle, cfg);
    const Grid& grid = c.grid;
    auto rng = stream(cfg.seed, 4);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> u;
    const int v_max = c.band_jfine - 2;
    for (int k = 0; k < 200; ++k) {
        const auto& sp = c.exponent_sets[static_cast<std::size_t>(k) % c.exponent_sets.size()];
        SequenceCoeffs s(grid, v_max);
        for (int v = 0; v <= v_max; ++v) {
            auto lv = s.level(v);
            const std::size_t cnt = 1 + rng() % (1 + lv.size() / 3);
            for (std::size_t t = 0; t < cnt; ++t) lv[rng() % lv.size()] = Complex{gauss(rng), gauss(rng)};
        }
        auto fam = sequence_family(s, sp.alpha);
        const double mu = std::exp(8.0 * u(rng) - 2.0);
        for (auto& f : fam.fs) f *= 1.0 / mu;
        const double a = mixed_modular(fam.fs, sp.p, sp.q);
        const double b = mixed_modular_simplified(fam.fs, sp.p, sp.q);
        rep.add("seq" + std::to_string(k), std::abs(a - b) / std::max(std::abs(b), 1e-300));
    }
    rep.finalize();
    return rep;
}

CheckReport check_duality(const Corpus& c, const HarnessConfig& cfg) {
    CheckReport rep = make_report("duality_product", "||chi_B||_p ||chi_B||_{p'} / |B| within one band", false,
                                  cfg.tol.band, cfg);
    const Grid& grid = c.grid;
    const int n = grid.dim();
    // Constant exponents: exact equality.
    double worst_const = 0.0;
    for (double p : {1.5, 2.0, 3.0, 10.0})
        for (int u : {-1, 0, 1, 2}) {
            if (u < -grid.jmax()) continue;
            const auto P = ExponentField::constant(grid, p, ExponentRole::integrability);
            const auto chi = indicator({u, {0, 0}}, grid);
            const double prod = luxemburg_norm(chi, P, cfg.tol.norm).value *
                                luxemburg_norm(chi, conjugate_exponent(P), cfg.tol.norm).value;
            worst_const = std::max(worst_const, std::abs(prod / std::ldexp(1.0, -u * n) - 1.0));
        }
    rep.metrics["constant_p_max_rel_error"] = worst_const;
    rep.conditions["constant_p_exact"] = worst_const <= cfg.tol.exact;

    // Variable exponents: 100 cases, repeated on the refined grid.
    struct Case {
        ExponentSpec spec;
        DyadicCube cube;
    };
    std::vector<Case> cases;
    auto rng = stream(cfg.seed, 5);
    std::uniform_real_distribution<double> uni;
    const auto sets = cfg.exponent_sets();
    for (int k = 0; k < 100; ++k) {
        ExponentSpec s;
        if (k % 4 == 0 && !sets.empty()) {
            s = sets[static_cast<std::size_t>(k / 4) % sets.size()].p;
        } else {
            s.kind = ExponentSpec::Kind::bump;
            s.c0 = 1.2 + 1.8 * uni(rng);
            s.c1 = 2.0 * uni(rng);
            s.center = {grid.side() * uni(rng), n == 2 ? grid.side() * uni(rng) : 0.0};
            s.width = grid.side() * (0.1 + 0.4 * uni(rng));
            s.decay_limit = s.c0;
        }
        const int span = grid.jmax() + c.band_jfine - 2;
        const int u = -grid.jmax() + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(span));
        const auto per = static_cast<std::uint64_t>(cubes_per_axis(grid, u));
        DyadicCube Q{u, {static_cast<std::int64_t>(rng() % per), n == 2 ? static_cast<std::int64_t>(rng() % per) : 0}};
        cases.push_back({s, Q});
    }
    auto band_on = [&](const Grid& g, bool record) {
        double lo = INFINITY, hi = 0.0;
        for (std::size_t k = 0; k < cases.size(); ++k) {
            const auto P = cases[k].spec.sample(g, ExponentRole::integrability);
            const auto chi = indicator(cases[k].cube, g);
            const double vol = std::ldexp(1.0, -cases[k].cube.v * n);
            const double ratio = luxemburg_norm(chi, P, cfg.tol.norm).value *
                                 luxemburg_norm(chi, conjugate_exponent(P), cfg.tol.norm).value / vol;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            if (record) rep.add("case" + std::to_string(k) + "/v=" + std::to_string(cases[k].cube.v), ratio);
        }
        return std::pair{lo, hi};
    };
    const auto [lo, hi] = band_on(grid, true);
    rep.metrics["band_lo"] = lo;
    rep.metrics["band_hi"] = hi;
    rep.conditions["band_positive"] = lo > 0.0;
    if (cfg.refine) {
        const auto [lo2, hi2] = band_on(grid.refined(1), false);
        rep.metrics["refined_band_lo"] = lo2;
        rep.metrics["refined_band_hi"] = hi2;
        rep.metrics["refinement_change"] = std::max(rel_change(lo, lo2), rel_change(hi, hi2));
        rep.conditions["refinement_stable"] = rel_change(lo, lo2) <= cfg.tol.duality && rel_change(hi, hi2) <= cfg.tol.duality;
    }
    rep.finalize();
    return rep;
}

CheckReport check_calderon(const Corpus& c, const HarnessConfig& cfg) {
    CheckReport rep =
        make_report("calderon", "||T_psi S_phi f - f||_2 / ||f||_2", true, cfg.tol.oracle, cfg);
    const auto pair = build_pair(c.grid);
    const double res = calderon_residual(pair);
    rep.metrics["calderon_residual"] = res;
    rep.conditions["calderon_residual<=1e-12"] = res <= 1e-12;
    for (std::size_t i = 0; i < c.functions.size(); ++i) {
        const auto& f = c.functions[i];
        const auto back = synthesize(analyze(f, pair), pair);
        rep.add("f" + std::to_string(i), (back - f).l2_norm() / f.l2_norm());
    }
    rep.finalize();
    return rep;
}

const SpaceParams& first_variable(const Corpus& c, std::string* name = nullptr) {
    for (std::size_t s = 0; s < c.exponent_sets.size(); ++s) {
        const auto& sp = c.exponent_sets[s];
        if (!sp.p.is_constant() || !sp.alpha.is_constant() || !sp.q.is_constant() || !sp.tau.is_constant()) {
            if (name) *name = c.exponent_names[s];
            return sp;
        }
    }
    if (name) *name = c.exponent_names.front();
    return c.exponent_sets.front();
}

Outcome core_norm_variants(const Corpus& c, const HarnessConfig& cfg) {
    Outcome o;
    std::string name;
    const auto& sp = first_variable(c, &name);
    const auto pair = build_pair(c.grid);
    bool sharp_ok = true, peetre_ok = true;
    double cs = 0, cp = 0, csh = 0, csh_inv = 0;
    for (std::size_t i = 0; i < c.functions.size(); ++i) {
        const auto& f = c.functions[i];
        const double base = besov_norm(f, sp, pair, cfg.tol.norm).value;
        const double sharp = besov_norm_sharp(f, sp, pair, cfg.tol.norm).value;
        const double peetre = besov_norm_peetre(f, sp, pair, std::nullopt, cfg.tol.norm).value;
        const double shifted = besov_norm_shifted(f, sp, pair, 1, cfg.tol.norm).value;
        sharp_ok = sharp_ok && sharp <= base * (1.0 + cfg.tol.exact);
        peetre_ok = peetre_ok && base <= peetre * (1.0 + cfg.tol.exact);
        const std::string tag = name + "/f" + std::to_string(i);
        o.add(tag + "/base_over_sharp", base / sharp);
        o.add(tag + "/peetre_over_base", peetre / base);
        o.add(tag + "/shifted_over_base", shifted / base);
        o.add(tag + "/base_over_shifted", base / shifted);
        cs = std::max(cs, base / sharp);
        cp = std::max(cp, peetre / base);
        csh = std::max(csh, shifted / base);
        csh_inv = std::max(csh_inv, base / shifted);
    }
    o.metrics["constant:base_over_sharp"] = cs;
    o.metrics["constant:peetre_over_base"] = cp;
    o.metrics["constant:shifted_over_base"] = csh;
    o.metrics["constant:base_over_shifted"] = csh_inv;
    o.metrics["peetre_a"] = peetre_default_a(sp);
    o.conditions["sharp<=base"] = sharp_ok;
    o.conditions["base<=peetre"] = peetre_ok;
    return o;
}

CheckReport check_norm_variants(const Corpus& c, const HarnessConfig& cfg) {
    CheckReport rep = run_core("norm_variants",
                               "sharp <= base <= peetre exactly; base/sharp, peetre/base, shifted(1)/base banded",
                               cfg.tol.band, core_norm_variants, c, cfg, false);
    // Each band separately must be refinement-stable.
    if (cfg.refine) {
        bool ok = true;
        for (const auto& [k, v] : rep.metrics)
            if (k.rfind("refinement_change_constant:", 0) == 0) ok = ok && v <= cfg.tol.refinement;
        rep.conditions["each_band_refinement_stable"] = ok;
        rep.finalize();
    }
    return rep;
}

CheckReport check_atoms(const Corpus& c, const HarnessConfig& cfg) {
    CheckReport rep = make_report("atomic_round_trip",
                                  "||lambda||_b / ||f||_B and ||sum lambda rho||_B / ||lambda||_b banded; atoms valid",
                                  false, cfg.tol.band, cfg);
    std::string name;
    const auto& sp = first_variable(c, &name);
    const Grid& grid = c.grid;
    const int n = grid.dim();
    const auto pair = build_pair(grid);
    const auto kl = kl_requirements(sp, n);
    rep.metrics["K"] = kl.K_min;
    rep.metrics["L"] = kl.L_min;
    const AtomWindow window{AtomWindow::Kind::compact, kl.K_min, kl.L_min, 1.5, 0};
    std::size_t total = 0, failed = 0;
    double diff_margin = 0, mom_margin = 0, sup_margin = 0;
    for (std::size_t i = 0; i < c.functions.size(); ++i) {
        const auto& f = c.functions[i];
        const auto at = atomize(f, pair, window, kl.K_min, kl.L_min);
        for (const auto& a : at.atoms) {
            const auto r = validate_atom(a);
            ++total;
            failed += r.pass ? 0 : 1;
            diff_margin = std::max(diff_margin, r.diff_margin);
            mom_margin = std::max(mom_margin, r.moment_margin);
            sup_margin = std::max(sup_margin, r.support_margin);
        }
        const double nf = besov_norm(f, sp, pair, cfg.tol.norm).value;
        const double nl = b_norm(at.lambda, sp, cfg.tol.norm).value;
        const auto back = synthesize_atoms(at.lambda, at.atoms);
        const double nb = besov_norm(back, sp, pair, cfg.tol.norm).value;
        rep.add(name + "/f" + std::to_string(i) + "/lambda_over_f", nl / nf);
        rep.add(name + "/f" + std::to_string(i) + "/synth_over_lambda", nb / nl);
        if (i == 0) {
            const auto wide = atomize(f, pair, AtomWindow{AtomWindow::Kind::compact, kl.K_min, kl.L_min, 2.0, 0},
                                      kl.K_min, kl.L_min);
            rep.metrics["gamma2_lambda_over_f"] = b_norm(wide.lambda, sp, cfg.tol.norm).value / nf;
            rep.metrics["gamma1.5_lambda_over_f"] = nl / nf;
            // Decay of one atom per level.
            bool finite = true;
            for (int v = 1; v <= grid.jfine() - 2; ++v) {
                const AtomSpec* pick = nullptr;
                for (const auto& a : at.atoms)
                    if (a.cube.v == v && (!pick || std::abs(at.lambda.at(v, a.cube.m)) > std::abs(at.lambda.at(v, pick->cube.m))))
                        pick = &a;
                if (!pick) continue;
                const auto fj = fj_decay_check(*pick, pair, n + 1.0);
                rep.metrics["fj_constant_v=" + std::to_string(v)] = fj.constant;
                finite = finite && std::isfinite(fj.constant);
            }
            rep.conditions["fj_constants_finite"] = finite;
        }
    }
    rep.metrics["atoms_checked"] = static_cast<double>(total);
    rep.metrics["atoms_failed"] = static_cast<double>(failed);
    rep.metrics["worst_diff_margin"] = diff_margin;
    rep.metrics["worst_moment_margin"] = mom_margin;
    rep.metrics["worst_support_margin"] = sup_margin;
    rep.conditions["all_atoms_valid"] = failed == 0 && total > 0;
    rep.finalize();
    return rep;
}

}  // namespace

std::vector<std::string> property_check_ids() {
    return {"luxemburg_closed_form", "unit_ball", "mixed_dual_route", "duality_product",
            "calderon", "norm_variants", "atomic_round_trip"};
}

CheckReport run_property_check(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg) {
    if (id == "luxemburg_closed_form") return check_luxemburg(corpus, cfg);
    if (id == "unit_ball") return check_unit_ball(corpus, cfg);
    if (id == "mixed_dual_route") return check_mixed_dual(corpus, cfg);
    if (id == "duality_product") return check_duality(corpus, cfg);
    if (id == "calderon") return check_calderon(corpus, cfg);
    if (id == "norm_variants") return check_norm_variants(corpus, cfg);
    if (id == "atomic_round_trip") return check_atoms(corpus, cfg);
    throw DomainError("unknown property check id '" + id + "'");
}

CheckReport run_check(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg) {
    const auto has = [&](const std::vector<std::string>& ids) { return std::find(ids.begin(), ids.end(), id) != ids.end(); };
    if (has(lemma_check_ids())) return run_lemma_check(id, corpus, cfg);
    if (has(embedding_ids())) return run_embedding(id, corpus, cfg);
    if (has(property_check_ids())) return run_property_check(id, corpus, cfg);
    if (id == "oracle_reduction") return run_oracle_reduction(corpus, cfg);
    throw DomainError("unknown check id '" + id + "'");
}

}  // namespace varbesov
