#include "dsce/dft.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dsce {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform, sign = -1 forward / +1 inverse,
// without any normalization.
void fft_pow2(CVector& a, int sign) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / len;
        const std::complex<double> wlen = std::polar(1.0, ang);
        for (int i = 0; i < n; i += len) {
            std::complex<double> w = 1.0;
            for (int j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

CVector direct_dft(const CVector& x, int sign) {
    const int n = static_cast<int>(x.size());
    CVector out(n);
    for (int m = 0; m < n; ++m) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k < n; ++k)
            acc += x[k] * std::polar(1.0, sign * 2.0 * M_PI * double(m) *
                                              double(k) / double(n));
        out[m] = acc;
    }
    return out;
}

CVector transform(const CVector& x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("transform: empty vector");
    CVector out;
    if (is_pow2(n)) {
        out = x;
        fft_pow2(out, sign);
    } else {
        out = direct_dft(x, sign);
    }
    out /= std::sqrt(double(n));
    return out;
}

}  // namespace

CMatrix dft_matrix(int n) {
    if (n <= 0) throw std::invalid_argument("dft_matrix: n must be positive");
    CMatrix w(n, n);
    const double scale = 1.0 / std::sqrt(double(n));
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            w(m, k) = std::polar(scale, -2.0 * M_PI * double(m) * double(k) / double(n));
    return w;
}

CVector unitary_dft(const CVector& x) { return transform(x, -1); }

CVector unitary_idft(const CVector& x) { return transform(x, +1); }

}  // namespace dsce
