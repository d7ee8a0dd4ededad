#include "varbesov/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace varbesov {

ExponentField::ExponentField(const Grid& grid, std::vector<double> samples, ExponentRole role,
                             std::optional<double> decay_limit, double floor)
    : grid_(grid), samples_(std::move(samples)), decay_limit_(decay_limit), role_(role), floor_(floor) {
    require(!samples_.empty(), "empty exponent field");
    require(samples_.size() == grid_.size(), "exponent sample count does not match grid");
    for (double s : samples_) require(std::isfinite(s), "non-finite exponent sample");
    const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
    inf_ = *lo;
    sup_ = *hi;
    require(floor_ > 0.0, "exponent floor must be positive");
    if (role_ == ExponentRole::integrability || role_ == ExponentRole::summability)
        require(inf_ >= floor_, "exponent infimum below the configured floor");
}

ExponentField ExponentField::constant(const Grid& grid, double value, ExponentRole role,
                                      std::optional<double> decay_limit) {
    return ExponentField(grid, std::vector<double>(grid.size(), value), role, decay_limit);
}

ExponentField combine(const ExponentField& a, const ExponentField& b, ExponentRole role,
                      double (*op)(double, double)) {
    require(a.grid() == b.grid(), "exponent grid mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return ExponentField(a.grid(), std::move(out), role);
}

LogHolderReport estimate_log_holder(const ExponentField& g, const Grid& grid) {
    require(grid.size() >= 2, "log-Hölder estimate needs at least two points");
    require(g.grid() == grid, "exponent grid mismatch");
    LogHolderReport rep;
    const std::size_t n = grid.size();
    double best = 0.0;
    std::pair<std::size_t, std::size_t> witness{0, 1};
    if (!g.is_constant()) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const double dg = std::abs(g[a] - g[b]);
                if (dg == 0.0) continue;
                const double r = dg * std::log(std::numbers::e + 1.0 / grid.periodic_distance(a, b));
                if (r > best) {
                    best = r;
                    witness = {a, b};
                }
            }
        }
    }
    rep.local_constant = best;
    rep.witness_pairs.push_back(witness);
    if (g.decay_limit()) {
        const Point origin{0.0, 0.0};
        double dec = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double r = grid.periodic_distance(grid.point(a), origin);
            dec = std::max(dec, std::abs(g[a] - *g.decay_limit()) * std::log(std::numbers::e + r));
        }
        rep.decay_constant = dec;
    }
    return rep;
}

ExponentField conjugate_exponent(const ExponentField& p) {
    require(p.inf_value() >= 1.0, "conjugate exponent needs p^- >= 1");
    return p.map(
        [](double s) {
            if (s >= kExponentCap) return 1.0;
            if (s == 1.0) return kExponentCap;
            return std::min(kExponentCap, s / (s - 1.0));
        },
        p.role());
}

ClassFlags classify(const ExponentField& p, double growth_threshold) {
    ClassFlags flags;
    flags.in_P0 = p.inf_value() > 0.0;
    flags.in_P = p.inf_value() >= 1.0;
    const Grid& grid = p.grid();
    const auto inv = p.map([](double s) { return 1.0 / s; }, ExponentRole::smoothness);
    flags.local_constant = estimate_log_holder(inv, grid).local_constant;
    if (grid.jfine() >= 2 && flags.local_constant > 0.0) {
        const Grid coarse(grid.dim(), grid.jmax(), grid.jfine() - 1);
        std::vector<double> sub(coarse.size());
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            const auto [a, b] = coarse.unravel(i);
            sub[i] = inv[grid.ravel(2 * a, 2 * b)];
        }
        const ExponentField coarse_field(coarse, std::move(sub), ExponentRole::smoothness);
        const double c = estimate_log_holder(coarse_field, coarse).local_constant;
        flags.refinement_growth = c > 0.0 ? flags.local_constant / c : 1.0;
    }
    flags.in_Plog = flags.in_P && p.decay_limit().has_value() &&
                    flags.refinement_growth <= growth_threshold;
    return flags;
}

double smooth_bump(double t) {
    const double s = t * t;
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s));
}

ExponentField ExponentSpec::sample(const Grid& grid, ExponentRole role) const {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.periodic_distance(grid.point(i), center);
        switch (kind) {
            case Kind::constant: out[i] = c0; break;
            case Kind::bump: out[i] = c0 + c1 * smooth_bump(d / width); break;
            case Kind::ramp: out[i] = c0 + c1 * std::min(1.0, std::log2(1.0 + d / width)); break;
            case Kind::step: out[i] = c0 + (d < width ? c1 : 0.0); break;
        }
    }
    return ExponentField(grid, std::move(out), role, decay_limit);
}

}  // namespace varbesov
