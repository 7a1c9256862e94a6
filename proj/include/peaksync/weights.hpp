#pragma once

// Weight vectors for the peak synchronization measure.
//
// A symmetric unimodal density is cut into strips of equal width 2x centred
// on 0. The central strip has mass a0, which fixes x; strip j covers
// [(2j-1)x, (2j+1)x] and its mass becomes the coefficient a_j. Strips are
// added until the covered mass reaches 1 - tau.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/normal.hpp"

namespace peaksync {

/// A probability density symmetric about 0, non-decreasing on (-inf, 0] and
/// non-increasing on [0, inf).
class Density {
public:
    struct Gaussian {
        double sigma;
    };
    struct Uniform {
        double half_width;
    };
    struct Custom {
        std::function<double(double)> cdf;
    };

    static Density gaussian(double sigma = 1.0) {
        detail::require(std::isfinite(sigma) && sigma > 0.0, "gaussian scale must be positive");
        return Density(Gaussian{sigma});
    }

    static Density uniform(double half_width = 1.0) {
        detail::require(std::isfinite(half_width) && half_width > 0.0, "uniform half-width must be positive");
        return Density(Uniform{half_width});
    }

    /// Wraps a caller-supplied CDF. The symmetry F(-t) = 1 - F(t) is checked
    /// at 10 points and monotonicity at 100; anything finer is trusted.
    static Density custom(std::function<double(double)> cdf) {
        detail::require(static_cast<bool>(cdf), "custom density needs a CDF");
        constexpr std::array<double, 10> probes{0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 100.0};
        for (double t : probes) {
            const double lhs = cdf(-t);
            const double rhs = 1.0 - cdf(t);
            detail::require(std::abs(lhs - rhs) <= 1e-9, "custom CDF is not symmetric about 0");
        }
        double previous = cdf(-1e3);
        detail::require(previous >= 0.0 && previous <= 1.0, "custom CDF leaves [0, 1]");
        for (int i = 1; i < 100; ++i) {
            // 50 points per side, log-spaced between 1e3 and 1e-3.
            const int k = i < 50 ? i : 99 - i;
            const double magnitude = std::pow(10.0, 3.0 - 6.0 * k / 49.0);
            const double t = i < 50 ? -magnitude : magnitude;
            const double value = cdf(t);
            detail::require(value >= 0.0 && value <= 1.0, "custom CDF leaves [0, 1]");
            detail::require(value >= previous - 1e-15, "custom CDF is not non-decreasing");
            previous = value;
        }
        return Density(Custom{std::move(cdf)});
    }

    double cdf(double t) const {
        return std::visit(
            [t](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Gaussian>) {
                    return standard_normal_cdf(t / d.sigma);
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    return std::clamp((t + d.half_width) / (2.0 * d.half_width), 0.0, 1.0);
                } else {
                    return d.cdf(t);
                }
            },
            kind_);
    }

    /// Mass of [-x, x], x >= 0.
    double central_mass(double x) const {
        return std::visit(
            [x](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Gaussian>) {
                    return standard_normal_central_mass(x / d.sigma);
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    return std::min(x / d.half_width, 1.0);
                } else {
                    return d.cdf(x) - d.cdf(-x);
                }
            },
            kind_);
    }

    /// Mass of [lo, hi] for 0 <= lo <= hi.
    double strip_mass(double lo, double hi) const {
        return std::visit(
            [lo, hi](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Gaussian>) {
                    // upper-tail difference keeps relative accuracy far out
                    return standard_normal_upper_tail(lo / d.sigma) - standard_normal_upper_tail(hi / d.sigma);
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    return (std::min(hi, d.half_width) - std::min(lo, d.half_width)) / (2.0 * d.half_width);
                } else {
                    return d.cdf(hi) - d.cdf(lo);
                }
            },
            kind_);
    }

    std::string name() const {
        return std::visit(
            [](const auto& d) -> std::string {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
                else if constexpr (std::is_same_v<T, Uniform>) return "uniform";
                else return "custom";
            },
            kind_);
    }

    /// Scale parameter: sigma for gaussian, half-width for uniform, 0 for custom.
    double scale() const {
        if (const auto* g = std::get_if<Gaussian>(&kind_)) return g->sigma;
        if (const auto* u = std::get_if<Uniform>(&kind_)) return u->half_width;
        return 0.0;
    }

private:
    using Kind = std::variant<Gaussian, Uniform, Custom>;
    explicit Density(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

/// Coefficients a_{-n}..a_n, stored at offsets 0..2n.
struct WeightVector {
    std::vector<double> coefficients;
    std::size_t n = 0;
    double a0 = 0.0;
    double tau = 0.0;
    double strip_half_width = 0.0;

    /// a_j for j in [-n, n].
    double at(std::ptrdiff_t j) const { return coefficients[static_cast<std::size_t>(j + static_cast<std::ptrdiff_t>(n))]; }
    std::size_t length() const noexcept { return coefficients.size(); }

    double total() const {
        double sum = 0.0;
        for (double a : coefficients) sum += a;
        return sum;
    }
};

inline constexpr double kQuantileTolerance = 1e-12;

/// x > 0 with central_mass(x) = a0, found by bisection. The bracket starts
/// at [0, 1] and doubles its upper end until it encloses the root; bisection
/// then runs to full double resolution (at most 200 halvings), which leaves
/// the mass within 1e-12 of a0.
inline double strip_half_width(double a0, const Density& density) {
    detail::require(std::isfinite(a0) && a0 > 0.0 && a0 < 1.0, "central coefficient a0 must lie in (0, 1)");
    double lo = 0.0;
    double hi = 1.0;
    for (int grow = 0; density.central_mass(hi) < a0; ++grow) {
        detail::require(grow < 2000 && std::isfinite(hi * 2.0), "could not bracket the strip half-width");
        lo = hi;
        hi *= 2.0;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (density.central_mass(mid) < a0)
            lo = mid;
        else
            hi = mid;
    }
    const double x = density.central_mass(hi) - a0 <= a0 - density.central_mass(lo) ? hi : lo;
    detail::require(std::abs(density.central_mass(x) - a0) <= kQuantileTolerance,
                    "strip half-width did not converge (is the CDF continuous?)");
    return x;
}

/// Smallest n with central_mass((2n+1)x) >= 1 - tau.
inline std::size_t half_support(double x, double tau, const Density& density) {
    detail::require(std::isfinite(x) && x > 0.0, "strip half-width must be positive");
    detail::require(std::isfinite(tau) && tau > 0.0 && tau < 1.0, "tail threshold tau must lie in (0, 1)");
    constexpr std::size_t kMaxHalfSupport = 1'000'000;
    std::size_t n = 0;
    while (density.central_mass(static_cast<double>(2 * n + 1) * x) < 1.0 - tau) {
        ++n;
        detail::require(n <= kMaxHalfSupport, "tail mass never drops below tau");
    }
    return n;
}

inline WeightVector build_weights(double a0, double tau, const Density& density) {
    const double x = strip_half_width(a0, density);
    const std::size_t n = half_support(x, tau, density);

    WeightVector w;
    w.n = n;
    w.a0 = a0;
    w.tau = tau;
    w.strip_half_width = x;
    w.coefficients.assign(2 * n + 1, 0.0);
    w.coefficients[n] = a0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double mass = density.strip_mass(static_cast<double>(2 * j - 1) * x, static_cast<double>(2 * j + 1) * x);
        const double inner = w.coefficients[n + j - 1];
        detail::require(mass > 0.0, "weight vector has an empty strip");
        detail::require(mass <= inner + 1e-12, "weights increase away from 0 (density not unimodal?)");
        // equal strips of a flat density can round one ulp above their neighbour
        w.coefficients[n + j] = std::min(mass, inner);
        w.coefficients[n - j] = w.coefficients[n + j];
    }
    return w;
}

}  // namespace peaksync
