#include "ogemm/rng.hpp"

#include <cmath>
#include <numbers>

namespace ogemm {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void round_once(PhiloxBlock& x, PhiloxKey k) {
    const uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * x[0];
    const uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * x[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
    const uint32_t lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
    const uint32_t lo1 = static_cast<uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k.k0, lo1, hi0 ^ x[3] ^ k.k1, lo0};
}

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double u64_to_unit(uint64_t v) {
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

inline uint64_t join(uint32_t lo, uint32_t hi) {
    return static_cast<uint64_t>(lo) | (static_cast<uint64_t>(hi) << 32);
}

}  // namespace

PhiloxBlock philox4x32(PhiloxBlock counter, PhiloxKey key) {
    for (int r = 0; r < 10; ++r) {
        round_once(counter, key);
        key.k0 += kPhiloxW0;
        key.k1 += kPhiloxW1;
    }
    return counter;
}

PhiloxKey philox_key(uint64_t seed) {
    const uint64_t mixed = splitmix64(seed);
    return {static_cast<uint32_t>(mixed), static_cast<uint32_t>(mixed >> 32)};
}

double gaussian_at(PhiloxKey key, uint64_t stream, uint64_t index) {
    // Top counter bit tags the shot-noise domain so these draws can never
    // collide with sequential Rng streams of the same seed.
    const PhiloxBlock ctr = {static_cast<uint32_t>(index),
                             static_cast<uint32_t>(index >> 32),
                             static_cast<uint32_t>(stream),
                             static_cast<uint32_t>(stream >> 32) | 0x80000000u};
    const PhiloxBlock out = philox4x32(ctr, key);
    const double u0 = u64_to_unit(join(out[0], out[1]));
    const double u1 = u64_to_unit(join(out[2], out[3]));
    // 1-u0 keeps the log argument in (0, 1].
    const double radius = std::sqrt(-2.0 * std::log1p(-u0));
    return radius * std::cos(2.0 * std::numbers::pi * u1);
}

Rng::Rng(uint64_t seed, uint64_t stream)
    : key_(philox_key(seed)), seed_(seed), stream_(stream) {}

void Rng::refill() {
    const PhiloxBlock ctr = {static_cast<uint32_t>(block_),
                             static_cast<uint32_t>(block_ >> 32),
                             static_cast<uint32_t>(stream_),
                             static_cast<uint32_t>(stream_ >> 32) & 0x7FFFFFFFu};
    buf_ = philox4x32(ctr, key_);
    ++block_;
    pos_ = 0;
}

uint32_t Rng::next_u32() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

uint64_t Rng::next_u64() {
    const uint32_t lo = next_u32();
    const uint32_t hi = next_u32();
    return join(lo, hi);
}

double Rng::uniform01() { return u64_to_unit(next_u64()); }

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

uint32_t Rng::below(uint32_t n) {
    if (n <= 1) return 0;
    // rejection sampling over the largest multiple of n
    const uint32_t limit = UINT32_MAX - (UINT32_MAX % n + 1) % n;
    uint32_t v = next_u32();
    while (v > limit) v = next_u32();
    return v % n;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u0 = uniform01();
    const double u1 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log1p(-u0));
    const double angle = 2.0 * std::numbers::pi * u1;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace ogemm
