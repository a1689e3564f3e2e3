#include "repac/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace repac::fft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Pow2Plan {
    std::size_t n = 0;
    std::vector<std::size_t> bitrev;
    std::vector<cplx> roots;  // roots[k] = exp(-2*pi*i*k/n), k in [0, n/2)

    explicit Pow2Plan(std::size_t n_) : n(n_) {
        bitrev.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            bitrev[i] = r;
        }
        roots.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            roots[k] = cplx(std::cos(a), std::sin(a));
        }
    }

    void run(cplx* a, bool inverse) const {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = bitrev[i];
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = n / len;
            for (std::size_t base = 0; base < n; base += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    cplx w = roots[k * step];
                    if (inverse) w = std::conj(w);
                    const cplx u = a[base + k];
                    const cplx v = a[base + k + half] * w;
                    a[base + k] = u + v;
                    a[base + k + half] = u - v;
                }
            }
        }
        if (inverse) {
            const double s = 1.0 / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) a[i] *= s;
        }
    }
};

struct BluesteinPlan {
    std::size_t n = 0;
    std::size_t m = 0;  // padded power-of-two length >= 2n-1
    std::vector<cplx> chirp;     // chirp[k] = exp(-i*pi*k^2/n), k in [0, n)
    std::vector<cplx> kernel_f;  // forward FFT of the padded conjugate-chirp kernel
    std::shared_ptr<const Pow2Plan> inner;

    BluesteinPlan(std::size_t n_, std::shared_ptr<const Pow2Plan> inner_)
        : n(n_), m(inner_->n), inner(std::move(inner_)) {
        chirp.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the angle argument small and exact.
            const std::size_t k2 = (k * k) % (2 * n);
            const double a = -kTwoPi * 0.5 * static_cast<double>(k2) / static_cast<double>(n);
            chirp[k] = cplx(std::cos(a), std::sin(a));
        }
        std::vector<cplx> b(m, cplx(0.0, 0.0));
        b[0] = std::conj(chirp[0]);
        for (std::size_t k = 1; k < n; ++k) {
            b[k] = std::conj(chirp[k]);
            b[m - k] = std::conj(chirp[k]);
        }
        inner->run(b.data(), false);
        kernel_f = std::move(b);
    }

    void run(cplx* x, bool inverse) const {
        std::vector<cplx> a(m, cplx(0.0, 0.0));
        if (!inverse) {
            for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * std::conj(chirp[k]);
        }
        inner->run(a.data(), false);
        for (std::size_t k = 0; k < m; ++k)
            a[k] *= inverse ? std::conj(kernel_f[k]) : kernel_f[k];
        inner->run(a.data(), true);
        if (!inverse) {
            for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
        } else {
            const double s = 1.0 / static_cast<double>(n);
            for (std::size_t k = 0; k < n; ++k)
                x[k] = a[k] * std::conj(chirp[k]) * s;
        }
    }
};

std::mutex g_plan_mutex;
std::map<std::size_t, std::shared_ptr<const Pow2Plan>> g_pow2_plans;
std::map<std::size_t, std::shared_ptr<const BluesteinPlan>> g_bluestein_plans;

std::shared_ptr<const Pow2Plan> pow2_plan(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = g_pow2_plans.find(n);
    if (it != g_pow2_plans.end()) return it->second;
    auto plan = std::make_shared<const Pow2Plan>(n);
    g_pow2_plans.emplace(n, plan);
    return plan;
}

std::shared_ptr<const BluesteinPlan> bluestein_plan(std::size_t n) {
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        auto it = g_bluestein_plans.find(n);
        if (it != g_bluestein_plans.end()) return it->second;
    }
    auto inner = pow2_plan(next_pow2(2 * n - 1));
    auto plan = std::make_shared<const BluesteinPlan>(n, inner);
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto [it, inserted] = g_bluestein_plans.emplace(n, plan);
    return it->second;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (n == 1) return;
    if (is_pow2(n)) {
        pow2_plan(n)->run(data.data(), inverse);
    } else {
        bluestein_plan(n)->run(data.data(), inverse);
    }
}

std::vector<cplx> forward_real(const std::vector<double>& x, std::size_t n) {
    std::vector<cplx> v(n, cplx(0.0, 0.0));
    const std::size_t c = std::min(n, x.size());
    for (std::size_t i = 0; i < c; ++i) v[i] = cplx(x[i], 0.0);
    forward(v);
    return v;
}

std::vector<cplx> dft_oracle(const std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    const long double sign = inverse ? 1.0L : -1.0L;
    const long double twopi = 6.283185307179586476925286766559L;
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0.0L, im = 0.0L;
        for (std::size_t t = 0; t < n; ++t) {
            const long double a =
                sign * twopi * static_cast<long double>((k * t) % n) / static_cast<long double>(n);
            const long double c = std::cos(a), s = std::sin(a);
            const long double xr = x[t].real(), xi = x[t].imag();
            re += xr * c - xi * s;
            im += xr * s + xi * c;
        }
        if (inverse) {
            re /= static_cast<long double>(n);
            im /= static_cast<long double>(n);
        }
        out[k] = cplx(static_cast<double>(re), static_cast<double>(im));
    }
    return out;
}

}  // namespace repac::fft
