#include "dsce/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dsce {

double nmse_db(const ChannelRealization& estimate, const ChannelRealization& truth) {
    if (estimate.h.size() != truth.h.size())
        throw std::invalid_argument("nmse_db: antenna count mismatch");
    if (truth.h.empty()) throw std::invalid_argument("nmse_db: empty realization");
    double num = 0.0, den = 0.0;
    for (std::size_t a = 0; a < truth.h.size(); ++a) {
        if (estimate.h[a].rows() != truth.h[a].rows() || estimate.h[a].cols() != truth.h[a].cols())
            throw std::invalid_argument("nmse_db: shape mismatch");
        num += (estimate.h[a] - truth.h[a]).squaredNorm();
        den += truth.h[a].squaredNorm();
    }
    if (den == 0.0) throw std::invalid_argument("nmse_db: zero-power reference channel");
    if (num == 0.0) return kNmseFloorDb;
    return std::max(kNmseFloorDb, 10.0 * std::log10(num / den));
}

}  // namespace dsce
