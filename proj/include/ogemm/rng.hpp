#pragma once

#include <array>
#include <cstdint>

namespace ogemm {

// Counter-based PRNG (Philox4x32-10, Salmon et al. SC'11). Every random
// quantity in the project is addressed by (seed, stream, position), so
// results are identical regardless of thread count or evaluation order.
struct PhiloxKey {
    uint32_t k0 = 0;
    uint32_t k1 = 0;
};

using PhiloxBlock = std::array<uint32_t, 4>;

PhiloxBlock philox4x32(PhiloxBlock counter, PhiloxKey key);

// Derives a key from a 64-bit user seed (splitmix64 finalizer).
PhiloxKey philox_key(uint64_t seed);

// One standard-normal draw fully determined by (seed, stream, index).
// Used for detector shot noise so that parallel emulator calls stay
// bitwise reproducible.
double gaussian_at(PhiloxKey key, uint64_t stream, uint64_t index);

// Sequential convenience stream over the same generator. Distinct
// `stream` values never overlap for a fixed seed.
class Rng {
  public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint32_t next_u32();
    uint64_t next_u64();

    double uniform01();                       // [0, 1), 53-bit resolution
    double uniform(double lo, double hi);     // [lo, hi)
    uint32_t below(uint32_t n);               // [0, n), unbiased
    double gaussian();                        // standard normal (Box-Muller)

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

  private:
    void refill();

    PhiloxKey key_;
    uint64_t seed_ = 0;
    uint64_t stream_ = 0;
    uint64_t block_ = 0;
    PhiloxBlock buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ogemm
