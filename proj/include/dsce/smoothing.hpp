#pragma once

#include <vector>

#include "dsce/bem.hpp"

namespace dsce {

// Per-(antenna, strong tap) line parameters actually applied. Columns follow
// the order of the taps vector.
struct SmoothingReport {
    std::vector<int> taps;
    CMatrix mean_first;   // antennas x taps: first half-symbol average
    CMatrix mean_second;  // antennas x taps: second half-symbol average
    CMatrix slope;        // antennas x taps: beta
};

// The K taps with the largest energy sum_{nt,n} |h[nt](n,l)|^2, sorted;
// ties break toward the lower index.
std::vector<int> detect_strong_taps(const ChannelRealization& ch, int k);

// Replaces each strong-tap trajectory with the straight line through the two
// half-symbol averages:
//   m1 = (2/N) sum_{n <  N/2} h[n],   m2 = (2/N) sum_{n >= N/2} h[n],
//   beta = (m2 - m1) / (N/2),
//   out[n] = (n - (N/2 - 1)/2) * beta + m1.
// The line passes through both half-interval centroids, so half means are
// preserved and a second application is an exact no-op. Taps outside
// strong_taps are zeroed. Requires N divisible by 4. Intended for normalized
// Doppler < 0.2, where tap trajectories are near-linear across one symbol;
// the harness enforces that gate.
ChannelRealization linear_smooth(const ChannelRealization& ch,
                                 const std::vector<int>& strong_taps,
                                 SmoothingReport* report = nullptr);

}  // namespace dsce
