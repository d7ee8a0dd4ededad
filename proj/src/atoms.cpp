#include "varbesov/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "varbesov/fft.hpp"

namespace varbesov {

std::array<std::int64_t, 2> LocalPatch::lattice_index(std::size_t flat) const {
    if (dim == 1) return {origin[0] + static_cast<std::int64_t>(flat), 0};
    return {origin[0] + static_cast<std::int64_t>(flat / extent), origin[1] + static_cast<std::int64_t>(flat % extent)};
}

double LocalPatch::spacing() const { return std::ldexp(1.0, -res); }

Point LocalPatch::coordinate(std::size_t flat) const {
    const auto k = lattice_index(flat);
    const double h = spacing();
    return {static_cast<double>(k[0]) * h, dim == 2 ? static_cast<double>(k[1]) * h : 0.0};
}

KLRequirements kl_requirements(const SpaceParams& sp, int n) {
    require(sp.tau.inf_value() > 0.0, "K/L thresholds need tau^- > 0");
    double tp = INFINITY;
    for (std::size_t i = 0; i < sp.p.size(); ++i) tp = std::min(tp, sp.tau[i] * sp.p[i]);
    const int K = std::max(0, static_cast<int>(std::floor(sp.alpha.sup_value() + n * sp.tau.sup_value())) + 1);
    const double ratio = std::min(1.0, tp / sp.tau.sup_value());
    const int L = std::max(-1, static_cast<int>(std::floor(n * (1.0 / ratio - 1.0) - sp.alpha.inf_value())));
    return {K, L};
}

namespace {

// ---- window theta = w * P ------------------------------------------------

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// k-th derivative of the centered cardinal B-spline of degree d, k < d.
double bspline(int d, int k, double t) {
    double s = 0.0;
    const int e = d - k;
    for (int i = 0; i <= d + 1; ++i) {
        const double x = t + 0.5 * (d + 1) - i;
        if (x > 0.0) s += (i % 2 ? -1.0 : 1.0) * binom(d + 1, i) * std::pow(x, e);
    }
    return s / factorial(e);
}

struct Monomial {
    int a0;
    int a1;
    double c;
};

// d^b0/dz0^b0 d^b1/dz1^b1 of sum c z0^a0 z1^a1.
double poly_derivative(const std::vector<Monomial>& poly, int b0, int b1, double z0, double z1) {
    double s = 0.0;
    for (const auto& m : poly) {
        if (m.a0 < b0 || m.a1 < b1) continue;
        double f = m.c;
        for (int i = 0; i < b0; ++i) f *= m.a0 - i;
        for (int i = 0; i < b1; ++i) f *= m.a1 - i;
        s += f * std::pow(z0, m.a0 - b0) * std::pow(z1, m.a1 - b1);
    }
    return s;
}

std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        require(std::abs(A[c][c]) > 0.0, "singular moment system");
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= A[c][k] * x[k];
        x[c] = s / A[c][c];
    }
    return x;
}

// theta sampled on the lattice s Z^n inside [-r, r]^n, plus C_theta.
struct ThetaTable {
    int dim = 1;
    std::int64_t R = 0;  // half-width in lattice steps
    std::vector<double> vals;
    double C = 1.0;

    double at(std::int64_t k0, std::int64_t k1) const {
        if (std::abs(k0) > R || std::abs(k1) > R) return 0.0;
        const std::size_t w = static_cast<std::size_t>(2 * R + 1);
        return dim == 1 ? vals[static_cast<std::size_t>(k0 + R)]
                        : vals[static_cast<std::size_t>(k0 + R) * w + static_cast<std::size_t>(k1 + R)];
    }
};

ThetaTable build_theta(int dim, int K, int L, double r, double s) {
    ThetaTable tab;
    tab.dim = dim;
    tab.R = static_cast<std::int64_t>(std::floor(r / s + 1e-9));
    require(tab.R >= 1, "window narrower than the sampling lattice");
    const int d = K + 1;
    const double c = 0.5 * (d + 1) / r;  // w(u) = B_d(c u)
    auto w1 = [&](int k, double u) { return std::pow(c, k) * bspline(d, k, c * u); };

    // Lattice nodes and weights.
    const std::int64_t R = tab.R;
    std::vector<std::array<double, 3>> nodes;  // z0, z1, weight
    for (std::int64_t i = -R; i <= R; ++i)
        for (std::int64_t j = (dim == 2 ? -R : 0); j <= (dim == 2 ? R : 0); ++j) {
            const double u0 = i * s, u1 = j * s;
            const double wt = w1(0, u0) * (dim == 2 ? w1(0, u1) : 1.0);
            nodes.push_back({u0 / r, u1 / r, wt});
        }

    // P = (z0 + z1)^{L+1} minus its w-weighted projection onto degree <= L.
    std::vector<Monomial> P;
    const int top = L + 1;
    for (int a = 0; a <= top; ++a) {
        if (dim == 1 && a != top) continue;
        P.push_back({a, dim == 2 ? top - a : 0, binom(top, a)});
    }
    if (dim == 1) P = {{top, 0, 1.0}};
    std::vector<std::pair<int, int>> basis;
    for (int deg = 0; deg <= L; ++deg)
        for (int a = deg; a >= 0; --a) {
            if (dim == 1 && a != deg) continue;
            basis.emplace_back(a, deg - a);
        }
    if (!basis.empty()) {
        const std::size_t nb = basis.size();
        std::vector<std::vector<double>> G(nb, std::vector<double>(nb, 0.0));
        std::vector<double> rhs(nb, 0.0);
        for (const auto& nd : nodes) {
            std::vector<double> m(nb);
            for (std::size_t k = 0; k < nb; ++k)
                m[k] = std::pow(nd[0], basis[k].first) * std::pow(nd[1], basis[k].second);
            const double t = poly_derivative(P, 0, 0, nd[0], nd[1]);
            for (std::size_t a = 0; a < nb; ++a) {
                rhs[a] += nd[2] * m[a] * t;
                for (std::size_t b = 0; b < nb; ++b) G[a][b] += nd[2] * m[a] * m[b];
            }
        }
        const auto coef = solve_dense(G, rhs);
        for (std::size_t k = 0; k < nb; ++k) P.push_back({basis[k].first, basis[k].second, -coef[k]});
    }

    // d^beta theta at u via Leibniz; z = u / r.
    auto deriv = [&](int b0, int b1, double u0, double u1) {
        double s = 0.0;
        for (int g0 = 0; g0 <= b0; ++g0)
            for (int g1 = 0; g1 <= b1; ++g1) {
                const double wpart = w1(g0, u0) * (dim == 2 ? w1(g1, u1) : 1.0);
                if (wpart == 0.0) continue;
                const double ppart = poly_derivative(P, b0 - g0, b1 - g1, u0 / r, u1 / r) *
                                     std::pow(1.0 / r, (b0 - g0) + (b1 - g1));
                s += binom(b0, g0) * binom(b1, g1) * wpart * ppart;
            }
        return s;
    };

    tab.vals.reserve(nodes.size());
    for (const auto& nd : nodes) tab.vals.push_back(nd[2] * poly_derivative(P, 0, 0, nd[0], nd[1]));

    const int fine = dim == 1 ? 4000 : 160;
    double C = 0.0;
    for (int b0 = 0; b0 <= K; ++b0)
        for (int b1 = 0; b1 <= (dim == 2 ? K - b0 : 0); ++b1)
            for (int i = 0; i <= fine; ++i)
                for (int j = 0; j <= (dim == 2 ? fine : 0); ++j) {
                    const double u0 = -r + 2.0 * r * i / fine;
                    const double u1 = dim == 2 ? -r + 2.0 * r * j / fine : 0.0;
                    C = std::max(C, std::abs(deriv(b0, b1, u0, u1)));
                }
    tab.C = C;
    return tab;
}

// ---- finite differences ---------------------------------------------------

// Fornberg weights for the order-d derivative at 0 on nodes -P..P.
std::vector<double> fd_weights(int d, int P) {
    const int n = 2 * P + 1;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = i - P;
    std::vector<std::vector<double>> c(n, std::vector<double>(d + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, d);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = c[i][d];
    return out;
}

// 4th-order central stencil for derivative order d.
std::vector<double> central_stencil(int d) {
    if (d == 0) return {1.0};
    return fd_weights(d, (d + 1) / 2 + 1);
}

std::vector<Complex> differentiate_axis(const std::vector<Complex>& v, int dim, std::size_t extent, int axis,
                                        int order, double h) {
    if (order == 0) return v;
    const auto w = central_stencil(order);
    const auto P = static_cast<std::int64_t>(w.size() / 2);
    const double scale = std::pow(h, -order);
    std::vector<Complex> out(v.size(), Complex{});
    const auto n = static_cast<std::int64_t>(extent);
    for (std::size_t flat = 0; flat < v.size(); ++flat) {
        std::int64_t i0 = dim == 1 ? static_cast<std::int64_t>(flat) : static_cast<std::int64_t>(flat / extent);
        std::int64_t i1 = dim == 1 ? 0 : static_cast<std::int64_t>(flat % extent);
        Complex s{};
        for (std::int64_t k = -P; k <= P; ++k) {
            std::int64_t j0 = i0, j1 = i1;
            (axis == 0 ? j0 : j1) += k;
            if (j0 < 0 || j0 >= n || j1 < 0 || (dim == 2 && j1 >= n)) continue;
            const std::size_t src = dim == 1 ? static_cast<std::size_t>(j0)
                                             : static_cast<std::size_t>(j0) * extent + static_cast<std::size_t>(j1);
            s += w[static_cast<std::size_t>(k + P)] * v[src];
        }
        out[flat] = s * scale;
    }
    return out;
}

std::size_t wrap_index(const Grid& grid, std::int64_t k0, std::int64_t k1) {
    const auto n = static_cast<std::int64_t>(grid.points_per_axis());
    const auto w0 = static_cast<std::size_t>(((k0 % n) + n) % n);
    const auto w1 = static_cast<std::size_t>(((k1 % n) + n) % n);
    return grid.ravel(w0, grid.dim() == 2 ? w1 : 0);
}

LocalPatch make_patch(int dim, int res, std::int64_t o0, std::int64_t o1, std::size_t extent) {
    LocalPatch p;
    p.dim = dim;
    p.res = res;
    p.origin = {o0, dim == 2 ? o1 : 0};
    p.extent = extent;
    p.values.assign(dim == 1 ? extent : extent * extent, Complex{});
    return p;
}

}  // namespace

GridFunction atom_samples(const AtomSpec& atom, const Grid& grid) {
    require(atom.coarse.res == grid.jfine() && atom.coarse.dim == grid.dim(), "atom was built for another grid");
    GridFunction out(grid);
    for (std::size_t i = 0; i < atom.coarse.size(); ++i) {
        const auto k = atom.coarse.lattice_index(i);
        out[wrap_index(grid, k[0], k[1])] += atom.coarse.values[i];
    }
    return out;
}

Atomization atomize(const GridFunction& f, const TransformPair& pair, const AtomWindow& window, int K, int L) {
    require(f.grid() == pair.grid, "function and transform pair live on different grids");
    require(K >= 0 && L >= -1, "need K >= 0 and L >= -1");
    const Grid& grid = pair.grid;
    const int n = grid.dim();
    const bool compact = window.kind == AtomWindow::Kind::compact;
    if (compact) {
        require(window.K >= K, "window is not C^K");
        require(window.L >= L, "window lacks the requested vanishing moments");
        require(window.gamma > 1.0, "gamma must exceed 1");
    }
    const double r = 0.5 * (window.gamma - 1.0);
    const int res_bits = window.res_bits > 0 ? window.res_bits : (n == 1 ? 6 : 5);

    Atomization out{SequenceCoeffs(grid, pair.v_max), {}, {}};
    const auto spec = dft(grid, f.values());
    std::vector<Complex> buf(spec.size());
    const double delta = grid.weight();

    for (int v = 0; v <= pair.v_max; ++v) {
        const auto& S = pair.synthesis_multiplier(v);
        for (std::size_t i = 0; i < spec.size(); ++i) buf[i] = spec[i] * S[i];
        const GridFunction g(grid, idft(grid, buf));

        const int res = std::max(grid.jfine(), v + res_bits);
        const std::int64_t stride = std::int64_t{1} << (res - grid.jfine());
        ThetaTable tab;
        double C = 1.0;
        if (compact) {
            tab = build_theta(n, window.K, window.L, r, std::ldexp(1.0, v - res));
            C = tab.C;
        }
        out.C_theta.push_back(C);

        const double level_scale = std::exp2(-0.5 * v * n);
        auto lam = out.lambda.level(v);
        for (std::size_t j = 0; j < lam.size(); ++j) {
            const DyadicCube Q{v, out.lambda.position(v, j)};
            const auto ys = cube_samples(grid, Q);
            double sup = 0.0;
            for (std::size_t y : ys) sup = std::max(sup, std::abs(g[y]));
            const double lambda = C * level_scale * sup;
            lam[j] = lambda;
            if (lambda == 0.0) continue;

            AtomSpec atom;
            atom.K = K;
            atom.L = L;
            atom.gamma = window.gamma;
            atom.cube = Q;
            const double amp = std::exp2(v * n) * delta / lambda;
            if (!compact) {
                std::vector<Complex> local(grid.size(), Complex{});
                for (std::size_t y : ys) local[y] = g[y];
                const auto rho = apply_multiplier(GridFunction(grid, std::move(local)), pair.analysis_multiplier(v));
                atom.coarse = make_patch(n, grid.jfine(), 0, 0, grid.points_per_axis());
                for (std::size_t i = 0; i < grid.size(); ++i) atom.coarse.values[i] = rho[i] / lambda;
                out.atoms.push_back(std::move(atom));
                continue;
            }
            // Cube Q in fine-lattice indices is [m P, (m+1) P) per axis; theta reaches R further.
            const std::int64_t Pf = std::int64_t{1} << (res - v);
            const std::int64_t margin = 4;
            std::vector<std::array<std::int64_t, 2>> yk;  // fine-lattice index of each y
            std::vector<Complex> gy;
            for (std::size_t y : ys) {
                const auto ii = grid.unravel(y);
                yk.push_back({static_cast<std::int64_t>(ii[0]) * stride, static_cast<std::int64_t>(ii[1]) * stride});
                gy.push_back(g[y]);
            }
            auto rho_at = [&](std::int64_t k0, std::int64_t k1) {
                Complex s{};
                for (std::size_t t = 0; t < yk.size(); ++t) {
                    const double th = tab.at(k0 - yk[t][0], n == 2 ? k1 - yk[t][1] : 0);
                    if (th != 0.0) s += th * gy[t];
                }
                return s * amp;
            };
            const std::int64_t f0 = Q.m[0] * Pf - tab.R - margin;
            const std::int64_t f1 = Q.m[1] * Pf - tab.R - margin;
            const auto fext = static_cast<std::size_t>(Pf + 2 * (tab.R + margin));
            atom.fine = make_patch(n, res, f0, f1, fext);
            for (std::size_t i = 0; i < atom.fine.size(); ++i) {
                const auto k = atom.fine.lattice_index(i);
                atom.fine.values[i] = rho_at(k[0], k[1]);
            }
            const std::int64_t Rc = (tab.R + stride - 1) / stride;
            const std::int64_t Pc = Pf / stride;
            const auto cext = static_cast<std::size_t>(Pc + 2 * Rc + 1);
            atom.coarse = make_patch(n, grid.jfine(), Q.m[0] * Pc - Rc, Q.m[1] * Pc - Rc, cext);
            for (std::size_t i = 0; i < atom.coarse.size(); ++i) {
                const auto k = atom.coarse.lattice_index(i);
                atom.coarse.values[i] = rho_at(k[0] * stride, k[1] * stride);
            }
            out.atoms.push_back(std::move(atom));
        }
    }
    return out;
}

GridFunction synthesize_atoms(const SequenceCoeffs& lambda, const std::vector<AtomSpec>& atoms) {
    const Grid& grid = lambda.grid();
    std::map<DyadicCube, const AtomSpec*> by_cube;
    for (const auto& a : atoms) {
        require(a.cube.v >= 0 && a.cube.v <= lambda.v_max(), "atom level outside the sequence");
        check_cube(a.cube, grid);
        by_cube[a.cube] = &a;
    }
    GridFunction out(grid);
    for (int v = 0; v <= lambda.v_max(); ++v) {
        const auto lv = lambda.level(v);
        for (std::size_t j = 0; j < lv.size(); ++j) {
            if (lv[j] == Complex{}) continue;
            const DyadicCube Q{v, lambda.position(v, j)};
            const auto it = by_cube.find(Q);
            require(it != by_cube.end(), "non-zero coefficient without an atom");
            const auto& patch = it->second->coarse;
            require(patch.res == grid.jfine(), "atom was built for another grid");
            for (std::size_t i = 0; i < patch.size(); ++i) {
                const auto k = patch.lattice_index(i);
                out[wrap_index(grid, k[0], k[1])] += lv[j] * patch.values[i];
            }
        }
    }
    return out;
}

AtomReport validate_atom(const AtomSpec& atom, double fd_tol, double mom_tol) {
    const LocalPatch& patch = atom.fine.size() > 0 ? atom.fine : atom.coarse;
    AtomReport rep;
    const int n = patch.dim;
    const int v = atom.cube.v;
    const auto geo = cube_geometry(atom.cube, n);
    const double half = 0.5 * atom.gamma * geo.side;
    const double h = patch.spacing();
    const double cell = std::pow(h, n);

    double amax = 0.0;
    for (const auto& z : patch.values) amax = std::max(amax, std::abs(z));
    if (amax == 0.0) return rep;

    // Displacement from c_Q, measured on the torus when the patch is a whole grid.
    const double side = patch.extent * h;
    const bool periodic = patch.origin[0] == 0 && patch.origin[1] == 0 && patch.res > 0 &&
                          std::abs(side - std::ldexp(1.0, static_cast<int>(std::lround(std::log2(side))))) == 0.0 &&
                          atom.fine.size() == 0;
    auto displacement = [&](std::size_t i) {
        const Point x = patch.coordinate(i);
        Point d{x[0] - geo.center[0], n == 2 ? x[1] - geo.center[1] : 0.0};
        if (periodic)
            for (int a = 0; a < n; ++a) d[a] -= side * std::round(d[a] / side);
        return d;
    };

    double outside = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < patch.size(); ++i) {
        const Point d = displacement(i);
        const double a = std::abs(patch.values[i]);
        mass += a * cell;
        bool inside = true;
        for (int k = 0; k < n; ++k) inside = inside && std::abs(d[k]) <= half * (1.0 + 1e-12);
        if (!inside) outside = std::max(outside, a);
    }
    rep.support_margin = outside / amax;
    rep.support_ok = outside == 0.0;

    for (int b0 = 0; b0 <= atom.K; ++b0)
        for (int b1 = 0; b1 <= (n == 2 ? atom.K - b0 : 0); ++b1) {
            auto d = differentiate_axis(patch.values, n, patch.extent, 0, b0, h);
            if (n == 2) d = differentiate_axis(d, n, patch.extent, 1, b1, h);
            double m = 0.0;
            for (const auto& z : d) m = std::max(m, std::abs(z));
            const double bound = std::exp2(v * (b0 + b1 + 0.5 * n));
            rep.diff_margin = std::max(rep.diff_margin, m / bound);
        }
    rep.diff_ok = rep.diff_margin <= 1.0 + fd_tol;

    if (v >= 1 && atom.L >= 0) {
        for (int deg = 0; deg <= atom.L; ++deg)
            for (int b0 = deg; b0 >= 0; --b0) {
                const int b1 = deg - b0;
                if (n == 1 && b1 != 0) continue;
                Complex mom{};
                for (std::size_t i = 0; i < patch.size(); ++i) {
                    const Point d = displacement(i);
                    mom += std::pow(d[0], b0) * std::pow(d[1], b1) * patch.values[i] * cell;
                }
                const double scale = mass * std::pow(atom.gamma * geo.side, deg);
                rep.moment_margin = std::max(rep.moment_margin, std::abs(mom) / scale);
            }
        rep.moment_ok = rep.moment_margin <= mom_tol;
    }
    rep.pass = rep.support_ok && rep.diff_ok && rep.moment_ok;
    return rep;
}

FjDecay fj_decay_check(const AtomSpec& atom, const TransformPair& pair, double M) {
    FjDecay out;
    const Grid& grid = pair.grid;
    const auto rho = atom_samples(atom, grid);
    if (rho.is_zero()) return out;
    const int n = grid.dim();
    const int v = atom.cube.v;
    const auto geo = cube_geometry(atom.cube, n);
    const auto bands = band_projections(rho, pair);
    for (int j = 0; j <= pair.v_max; ++j) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double dist = grid.periodic_distance(grid.point(i), geo.corner);
            const double val = std::abs(bands[j][i]);
            if (v <= j) {
                const double env = std::exp2((v - j) * atom.K + 0.5 * v * n) * std::pow(1.0 + std::ldexp(dist, v), -M);
                out.fine_bands = std::max(out.fine_bands, val / env);
            }
            if (v >= j) {
                const double env = std::exp2((j - v) * (atom.L + n + 1) + 0.5 * v * n) *
                                   std::pow(1.0 + std::ldexp(dist, j), -M);
                out.coarse_bands = std::max(out.coarse_bands, val / env);
            }
        }
    }
    out.constant = std::max(out.fine_bands, out.coarse_bands);
    return out;
}

}  // namespace varbesov
