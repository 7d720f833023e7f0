#pragma once

#include <cstdint>
#include <vector>

#include "dsce/bem.hpp"
#include "dsce/rng.hpp"

namespace dsce {

// All scalar experiment parameters. Defaults are the desk-scale setup
// (a 4x reduction of the full-scale N=1024/G=96 geometry with the same
// pilot density).
struct SystemConfig {
    int n = 256;    // subcarriers per OFDM symbol
    int g = 24;     // nonzero pilot groups
    int l = 16;     // channel length (taps)
    int k = 2;      // strong taps per antenna
    int d = 3;      // BEM order (odd)
    int nt = 4;     // transmit antennas
    double doppler_norm = 0.057;  // max Doppler, cycles per OFDM symbol
    double snr_db = 20.0;         // +inf means noiseless
    std::uint64_t seed = 1;
    int oscillators = 32;  // sum-of-sinusoids paths per fading process

    // Per-strong-tap average powers; empty means equal (1/K each).
    std::vector<double> tap_powers;

    // Experiment overrides used by the exactness oracles.
    bool bem_exact = false;  // project the fading onto the basis before use
    bool zero_data = false;  // zeros instead of QPSK on data subcarriers

    void validate() const;  // throws std::invalid_argument
};

// One transmit frame in both domains; freq = W * time.
struct OfdmSymbol {
    CVector freq;
    CVector time;
};

OfdmSymbol ofdm_modulate(const CVector& freq);
CVector ofdm_demodulate(const CVector& time);

// K distinct tap indices, uniform over [0, L), sorted. One support is shared
// by all antennas.
std::vector<int> generate_support(int l, int k, Rng& rng);

// Independent Jakes (sum-of-sinusoids) fading per antenna and supported tap,
// sampled at n = 0..N-1 with maximum Doppler doppler_norm/N cycles per
// sample. Average total power across the supported taps is 1 per antenna.
// Honors cfg.bem_exact by projecting every trajectory onto the CE basis.
ChannelRealization generate_ds_channel(const SystemConfig& cfg,
                                       const std::vector<int>& support,
                                       Rng& rng);

// Noiseless received samples y[n] = sum_nt sum_l h[nt](n, l) s_nt[(n-l) mod N].
CVector apply_channel_time(const ChannelRealization& ch,
                           const std::vector<OfdmSymbol>& symbols);

// Adds circular complex Gaussian noise with sigma^2 = mean|y|^2 / 10^(snr/10).
// Infinite SNR returns y unchanged.
CVector add_noise(const CVector& y, double snr_db, Rng& rng);

}  // namespace dsce
