#include "dsce/smoothing.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dsce {

std::vector<int> detect_strong_taps(const ChannelRealization& ch, int k) {
    if (ch.h.empty()) throw std::invalid_argument("detect_strong_taps: no antennas");
    const int l = static_cast<int>(ch.h[0].cols());
    if (k <= 0 || k > l) throw std::invalid_argument("detect_strong_taps: need 0 < k <= taps");
    std::vector<double> energy(l, 0.0);
    for (const CMatrix& h : ch.h)
        for (int tap = 0; tap < l; ++tap) energy[tap] += h.col(tap).squaredNorm();
    std::vector<int> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return energy[a] > energy[b]; });
    std::vector<int> taps(order.begin(), order.begin() + k);
    std::sort(taps.begin(), taps.end());
    return taps;
}

ChannelRealization linear_smooth(const ChannelRealization& ch, const std::vector<int>& strong_taps,
                                 SmoothingReport* report) {
    if (ch.h.empty()) throw std::invalid_argument("linear_smooth: no antennas");
    const int n = static_cast<int>(ch.h[0].rows());
    const int l = static_cast<int>(ch.h[0].cols());
    if (n % 4 != 0) throw std::invalid_argument("linear_smooth: block length must be divisible by 4");
    for (int tap : strong_taps)
        if (tap < 0 || tap >= l) throw std::out_of_range("linear_smooth: tap outside delay spread");

    const int nt = static_cast<int>(ch.h.size());
    const int half = n / 2;
    // The fitted line passes through the centroids of the two half blocks:
    // mean over [0, N/2) at abscissa (N/2-1)/2 and mean over [N/2, N) at
    // (3N-2)/4, which pins slope and offset without a full regression.
    const double anchor = (half - 1) / 2.0;

    if (report) {
        report->taps = strong_taps;
        report->mean_first = CMatrix::Zero(nt, strong_taps.size());
        report->mean_second = CMatrix::Zero(nt, strong_taps.size());
        report->slope = CMatrix::Zero(nt, strong_taps.size());
    }

    ChannelRealization out;
    out.support = strong_taps;
    out.h.reserve(nt);
    for (int a = 0; a < nt; ++a) {
        if (ch.h[a].rows() != n || ch.h[a].cols() != l)
            throw std::invalid_argument("linear_smooth: ragged antenna blocks");
        CMatrix smoothed = CMatrix::Zero(n, l);
        for (std::size_t ti = 0; ti < strong_taps.size(); ++ti) {
            const int tap = strong_taps[ti];
            std::complex<double> m1 = ch.h[a].col(tap).head(half).mean();
            std::complex<double> m2 = ch.h[a].col(tap).tail(half).mean();
            std::complex<double> beta = (m2 - m1) / static_cast<double>(half);
            for (int i = 0; i < n; ++i) smoothed(i, tap) = (i - anchor) * beta + m1;
            if (report) {
                report->mean_first(a, ti) = m1;
                report->mean_second(a, ti) = m2;
                report->slope(a, ti) = beta;
            }
        }
        out.h.push_back(std::move(smoothed));
    }
    return out;
}

}  // namespace dsce
