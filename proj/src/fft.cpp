#include "varbesov/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace varbesov {
namespace {

struct Buffer {
    explicit Buffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~Buffer() { fftw_free(data); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;
    fftw_complex* data;
};

struct Plan {
    Plan(int dim, int n, int sign) : size(static_cast<std::size_t>(dim == 1 ? n : n * n)), buf(size) {
        const int dims[2] = {n, n};
        plan = fftw_plan_dft(dim, dims, buf.data, buf.data, sign, FFTW_ESTIMATE);
        if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
    }
    ~Plan() { fftw_destroy_plan(plan); }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    std::size_t size;
    Buffer buf;
    fftw_plan plan;
};

// Planning is not thread-safe in FFTW; execution through a cached plan reuses
// its buffer, so both go under one lock.
std::mutex& fft_mutex() {
    static std::mutex m;
    return m;
}

std::vector<Complex> transform(const Grid& grid, std::span<const Complex> values, int sign) {
    require(values.size() == grid.size(), "DFT input size does not match grid");
    static std::map<std::tuple<int, int, int>, std::unique_ptr<Plan>> cache;
    const int n = static_cast<int>(grid.points_per_axis());
    std::lock_guard lock(fft_mutex());
    auto& slot = cache[{grid.dim(), n, sign}];
    if (!slot) slot = std::make_unique<Plan>(grid.dim(), n, sign);
    std::memcpy(slot->buf.data, values.data(), sizeof(fftw_complex) * values.size());
    fftw_execute(slot->plan);
    std::vector<Complex> out(values.size());
    std::memcpy(static_cast<void*>(out.data()), slot->buf.data, sizeof(fftw_complex) * values.size());
    return out;
}

}  // namespace

std::vector<Complex> dft(const Grid& grid, std::span<const Complex> values) {
    return transform(grid, values, FFTW_FORWARD);
}

std::vector<Complex> idft(const Grid& grid, std::span<const Complex> values) {
    auto out = transform(grid, values, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& z : out) z *= scale;
    return out;
}

Point frequency(const Grid& grid, std::size_t idx) {
    const auto ii = grid.unravel(idx);
    const auto n = static_cast<std::int64_t>(grid.points_per_axis());
    const double base = 2.0 * std::numbers::pi / grid.side();
    Point xi{0.0, 0.0};
    for (int i = 0; i < grid.dim(); ++i) {
        auto k = static_cast<std::int64_t>(ii[i]);
        if (k >= n / 2) k -= n;
        xi[i] = base * static_cast<double>(k);
    }
    return xi;
}

std::vector<double> frequency_magnitudes(const Grid& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Point xi = frequency(grid, i);
        out[i] = std::hypot(xi[0], xi[1]);
    }
    return out;
}

GridFunction apply_multiplier(const GridFunction& f, std::span<const double> multiplier) {
    require(multiplier.size() == f.size(), "multiplier size does not match grid");
    auto spec = dft(f.grid(), f.values());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= multiplier[i];
    return GridFunction(f.grid(), idft(f.grid(), spec));
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    require(f.grid() == g.grid(), "grid mismatch");
    auto a = dft(f.grid(), f.values());
    const auto b = dft(g.grid(), g.values());
    const double w = f.grid().weight();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i] * w;
    return GridFunction(f.grid(), idft(f.grid(), a));
}

}  // namespace varbesov
