#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cogsa::chaos {

// Logistic-map sequence cs(1..T):  cs(t+1) = a * cs(t) * (1 - cs(t)).
// Immutable after construction; two constructions with identical (a, seed, T)
// are element-wise bit-identical.
struct ChaoticSequence {
    std::vector<double> values;  // values[t-1] == cs(t), 1-based over iterations
    double a = 4.0;
    double seed_value = 0.7;

    double at(std::size_t t) const { return values.at(t - 1); }
    std::size_t length() const { return values.size(); }
};

inline ChaoticSequence logistic_sequence(double a, double seed_value, std::size_t length) {
    if (length == 0)
        throw std::invalid_argument("logistic_sequence: length must be >= 1");
    if (!std::isfinite(a) || !std::isfinite(seed_value))
        throw std::invalid_argument("logistic_sequence: non-finite parameter");
    if (!(seed_value > 0.0 && seed_value < 1.0))
        throw std::invalid_argument("logistic_sequence: seed_value must lie in (0, 1)");
    if (!(a > 0.0 && a <= 4.0))
        throw std::invalid_argument("logistic_sequence: a must lie in (0, 4]");
    // Fixed/periodic seeds of the a = 4 map; the orbit would collapse to 0 or
    // stick at 0.75 instead of filling (0, 1).
    if (a == 4.0 && (seed_value == 0.25 || seed_value == 0.5 || seed_value == 0.75))
        throw std::invalid_argument("logistic_sequence: degenerate seed " +
                                    std::to_string(seed_value) + " for a = 4");

    ChaoticSequence cs;
    cs.a = a;
    cs.seed_value = seed_value;
    cs.values.resize(length);
    cs.values[0] = seed_value;
    for (std::size_t t = 1; t < length; ++t) {
        double prev = cs.values[t - 1];
        cs.values[t] = a * prev * (1.0 - prev);
    }
    return cs;
}

// Parameters of the sine-cosine chaotic alpha. The amplitude r = A * (1 - t/T)
// shrinks linearly to zero, so alpha always lies in
// [scale * (B - A), scale * (B + A)] and equals scale * B at t = T.
struct ChaoticAlphaConfig {
    double A = 2.0;
    double B = 25.0;
    double scale = 1.0;
    std::size_t T = 1000;

    void validate() const {
        if (!(A >= 0.0) || !(B > 0.0) || !(scale > 0.0) || T == 0)
            throw std::invalid_argument("ChaoticAlphaConfig: need A >= 0, B > 0, scale > 0, T >= 1");
    }
};

// One alpha draw for iteration t. `coin` decides the sine/cosine branch and is
// drawn by the caller from the run's master-seeded stream; coin >= 0.5 takes
// the cosine branch.
inline double chaotic_alpha(const ChaoticAlphaConfig& cfg, double cs_t, std::size_t t, double coin) {
    cfg.validate();
    if (t > cfg.T)
        throw std::invalid_argument("chaotic_alpha: t must satisfy 0 <= t <= T");
    if (!(cs_t > 0.0 && cs_t < 1.0))
        throw std::invalid_argument("chaotic_alpha: cs_t must lie in (0, 1)");
    double r = cfg.A * (1.0 - static_cast<double>(t) / static_cast<double>(cfg.T));
    double alpha = coin < 0.5 ? cfg.B - r * std::sin(cs_t) : cfg.B + r * std::cos(cs_t);
    return cfg.scale * alpha;
}

}  // namespace cogsa::chaos
