#include "dsce/rng.hpp"

namespace dsce {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point_index,
                          std::uint64_t trial_index) {
    std::uint64_t z = mix64(base);
    z = mix64(z ^ (point_index + 0x9E3779B97F4A7C15ull));
    z = mix64(z ^ (trial_index + 0xD1B54A32D192ED03ull));
    return z;
}

}  // namespace dsce
