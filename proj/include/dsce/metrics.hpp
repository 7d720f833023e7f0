#pragma once

#include "dsce/bem.hpp"

namespace dsce {

inline constexpr double kNmseFloorDb = -120.0;

// 10 log10( |vec(est) - vec(truth)|^2 / |vec(truth)|^2 ) over the full
// (antenna, instant, tap) tensor, clamped below at -120 dB. All-zero truth
// is rejected.
double nmse_db(const ChannelRealization& estimate,
               const ChannelRealization& truth);

}  // namespace dsce
