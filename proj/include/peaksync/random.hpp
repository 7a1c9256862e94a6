#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace peaksync {

/// Identifier written into run metadata so surrogate and synthetic draws can
/// be traced back to the generator that produced them.
inline constexpr const char* kRngAlgorithm =
    "mt19937_64; uniform01 = top 53 bits; index = bitmask rejection; normal = Box-Muller";

/// Seeded 64-bit generator with distribution helpers whose output does not
/// depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t index(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t v = engine_() & mask;
            if (v < bound) return v;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace peaksync
