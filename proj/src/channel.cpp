#include "dsce/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dsce {

void SystemConfig::validate() const {
    if (n <= 0 || l <= 0 || k <= 0 || g <= 0 || nt <= 0)
        throw std::invalid_argument("SystemConfig: dimensions must be positive");
    if (k > l || l > n)
        throw std::invalid_argument("SystemConfig: need k <= l <= n");
    if (d <= 0 || d % 2 == 0)
        throw std::invalid_argument("SystemConfig: basis order must be odd and positive");
    if (g * (2 * d - 1) > n)
        throw std::invalid_argument("SystemConfig: pilot groups with guards exceed the symbol length");
    if (doppler_norm < 0.0)
        throw std::invalid_argument("SystemConfig: doppler_norm must be nonnegative");
    if (oscillators <= 0)
        throw std::invalid_argument("SystemConfig: oscillators must be positive");
    if (!tap_powers.empty()) {
        if (static_cast<int>(tap_powers.size()) != k)
            throw std::invalid_argument("SystemConfig: tap_powers must have one entry per active tap");
        for (double p : tap_powers)
            if (p <= 0.0) throw std::invalid_argument("SystemConfig: tap powers must be positive");
    }
}

OfdmSymbol ofdm_modulate(const CVector& freq) {
    OfdmSymbol sym;
    sym.freq = freq;
    sym.time = unitary_idft(freq);
    return sym;
}

CVector ofdm_demodulate(const CVector& time) { return unitary_dft(time); }

std::vector<int> generate_support(int l, int k, Rng& rng) {
    if (k > l || k <= 0) throw std::invalid_argument("generate_support: need 0 < k <= l");
    // Partial Fisher-Yates over tap indices, then sort for a canonical order.
    std::vector<int> pool(l);
    for (int i = 0; i < l; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> pick(i, l - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> support(pool.begin(), pool.begin() + k);
    std::sort(support.begin(), support.end());
    return support;
}

ChannelRealization generate_ds_channel(const SystemConfig& cfg, const std::vector<int>& support,
                                       Rng& rng) {
    const int k_active = static_cast<int>(support.size());
    if (k_active == 0) throw std::invalid_argument("generate_ds_channel: empty support");
    for (int tap : support)
        if (tap < 0 || tap >= cfg.l)
            throw std::invalid_argument("generate_ds_channel: support tap out of range");

    std::vector<double> powers = cfg.tap_powers;
    if (powers.empty()) powers.assign(k_active, 1.0 / k_active);
    if (static_cast<int>(powers.size()) != k_active)
        throw std::invalid_argument("generate_ds_channel: tap power count mismatch");

    const int m = cfg.oscillators;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ChannelRealization ch;
    ch.support = support;
    ch.h.reserve(cfg.nt);
    for (int a = 0; a < cfg.nt; ++a) {
        CMatrix h = CMatrix::Zero(cfg.n, cfg.l);
        for (int t = 0; t < k_active; ++t) {
            // Sum-of-sinusoids fading: oscillator angles share a random rotation
            // so the ensemble autocorrelation is p * J0(2*pi*nu*m/N).
            double u = unit(rng);
            std::vector<double> phase(m), rate(m);
            for (int i = 0; i < m; ++i) {
                double alpha = 2.0 * M_PI * (i + u) / m;
                rate[i] = 2.0 * M_PI * cfg.doppler_norm * std::cos(alpha) / cfg.n;
                phase[i] = 2.0 * M_PI * unit(rng);
            }
            double amp = std::sqrt(powers[t] / m);
            for (int n = 0; n < cfg.n; ++n) {
                std::complex<double> acc = 0.0;
                for (int i = 0; i < m; ++i) acc += std::polar(1.0, rate[i] * n + phase[i]);
                h(n, support[t]) = amp * acc;
            }
        }
        ch.h.push_back(std::move(h));
    }

    if (cfg.bem_exact) ch = bem_project(ch, cebem_basis(cfg.n, cfg.d));
    return ch;
}

CVector apply_channel_time(const ChannelRealization& ch, const std::vector<OfdmSymbol>& symbols) {
    if (ch.h.empty()) throw std::invalid_argument("apply_channel_time: no antennas");
    if (symbols.size() != ch.h.size())
        throw std::invalid_argument("apply_channel_time: one symbol per transmit antenna required");
    const int n = static_cast<int>(ch.h[0].rows());
    const int l = static_cast<int>(ch.h[0].cols());
    CVector y = CVector::Zero(n);
    for (std::size_t a = 0; a < ch.h.size(); ++a) {
        if (symbols[a].time.size() != n)
            throw std::invalid_argument("apply_channel_time: symbol length mismatch");
        const CMatrix& h = ch.h[a];
        const CVector& s = symbols[a].time;
        for (int tap : ch.support) {
            if (tap >= l) throw std::invalid_argument("apply_channel_time: tap exceeds delay spread");
            for (int idx = 0; idx < n; ++idx) y[idx] += h(idx, tap) * s[(idx - tap + n) % n];
        }
    }
    return y;
}

CVector add_noise(const CVector& y, double snr_db, Rng& rng) {
    if (std::isinf(snr_db)) return y;
    const double signal_power = y.squaredNorm() / y.size();
    if (signal_power <= 0.0)
        throw std::invalid_argument("add_noise: zero-power signal has no finite-SNR noise level");
    const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
    CVector out = y;
    for (int i = 0; i < out.size(); ++i) {
        double re = gauss(rng);
        double im = gauss(rng);
        out[i] += std::complex<double>(re, im);
    }
    return out;
}

}  // namespace dsce
