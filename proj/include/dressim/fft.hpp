// fft.hpp — discrete Fourier transform, X_k = Σ_m s_m e^{sign·2πi·km/n}
// (sign = -1 forward), unnormalized. Radix-2 in-place for power-of-two sizes,
// direct evaluation otherwise.

#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "dressim/errors.hpp"

namespace dressim {

namespace detail {

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

inline std::vector<std::complex<double>> dft_roots(std::size_t n, int sign) {
    std::vector<std::complex<double>> roots(n / 2);
    const double base = static_cast<double>(sign) * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j)
        roots[j] = std::polar(1.0, base * static_cast<double>(j));
    return roots;
}

} // namespace detail

inline void dft_inplace(std::vector<std::complex<double>>& a, int sign) {
    if (sign != 1 && sign != -1) throw ContractViolation("DFT sign must be +1 or -1");
    const std::size_t n = a.size();
    if (n <= 1) return;

    if (!detail::is_power_of_two(n)) {
        const double base =
            static_cast<double>(sign) * 2.0 * std::numbers::pi / static_cast<double>(n);
        std::vector<std::complex<double>> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t m = 0; m < n; ++m) {
                const std::size_t idx = (k * m) % n;
                acc += a[m] * std::polar(1.0, base * static_cast<double>(idx));
            }
            out[k] = acc;
        }
        a = std::move(out);
        return;
    }

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto roots = detail::dft_roots(n, sign);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> w = roots[j * stride];
                const std::complex<double> u = a[start + j];
                const std::complex<double> v = a[start + j + len / 2] * w;
                a[start + j] = u + v;
                a[start + j + len / 2] = u - v;
            }
        }
    }
}

inline std::vector<std::complex<double>> dft(std::vector<std::complex<double>> a, int sign) {
    dft_inplace(a, sign);
    return a;
}

} // namespace dressim
