#include "rootfind.hpp"

#include <algorithm>
#include <numbers>

#include "varbesov/error.hpp"

namespace varbesov::detail {

Root solve_decreasing(const std::function<double(double)>& F, double t0, double tol, int max_iter) {
    require(tol > 0.0, "tolerance must be positive");
    constexpr int kMaxDoublings = 64;
    double step = std::numbers::ln2;
    double lo = t0;
    double flo = F(lo);
    int evals = 1;
    if (flo == 0.0) return {lo, lo, lo, evals};
    double hi = lo;
    double fhi = flo;
    if (flo > 0.0) {
        int k = 0;
        while (fhi > 0.0) {
            if (++k > kMaxDoublings) throw OverflowError("scale bracket not found after 64 expansions");
            lo = hi;
            flo = fhi;
            hi += step;
            step *= 2.0;
            fhi = F(hi);
            ++evals;
        }
    } else {
        int k = 0;
        while (flo < 0.0) {
            if (++k > kMaxDoublings) throw OverflowError("scale bracket not found after 64 contractions");
            hi = lo;
            fhi = flo;
            lo -= step;
            step *= 2.0;
            flo = F(lo);
            ++evals;
        }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw OverflowError("scale bracket left the floating-point range");
    if (flo == 0.0) return {lo, lo, lo, evals};
    if (fhi == 0.0) return {hi, hi, hi, evals};

    // A log-width of tol/2 bounds the relative width of the lambda-bracket by tol.
    auto converged = [&] {
        const double mid = 0.5 * (lo + hi);
        return hi - lo <= 0.5 * tol || mid <= lo || mid >= hi;
    };
    int side = 0;  // which endpoint was retained last: -1 lo, +1 hi
    double width_before = hi - lo;
    for (int it = 0; it < max_iter && !converged(); ++it) {
        double t;
        if (it % 3 == 2 && hi - lo > 0.5 * width_before) {
            t = 0.5 * (lo + hi);
        } else {
            t = (lo * fhi - hi * flo) / (fhi - flo);
            if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
        }
        if (it % 3 == 2) width_before = hi - lo;
        const double ft = F(t);
        ++evals;
        if (ft == 0.0) return {t, t, t, evals};
        if (ft > 0.0) {
            lo = t;
            flo = ft;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = t;
            fhi = ft;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    return {0.5 * (lo + hi), lo, hi, evals};
}

}  // namespace varbesov::detail
