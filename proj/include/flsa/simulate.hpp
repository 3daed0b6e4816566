#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace flsa {

/// An observation sequence, with the generating truth attached when known.
struct Signal {
    std::vector<double> y;
    std::optional<std::vector<double>> truth;
};

enum class NoiseKind { Gaussian, StudentT };

struct NoiseModel {
    NoiseKind kind = NoiseKind::Gaussian;
    double variance = 0.1;  ///< Gaussian variance (not standard deviation)
    double df = 2.0;        ///< Student-t degrees of freedom
    double scale = 0.3;     ///< Student-t scale

    static NoiseModel gaussian(double variance) {
        if (!(variance > 0.0)) throw std::invalid_argument("NoiseModel: variance must be > 0");
        NoiseModel m;
        m.kind = NoiseKind::Gaussian;
        m.variance = variance;
        return m;
    }

    static NoiseModel student_t(double df, double scale) {
        if (!(df > 0.0) || !(scale > 0.0)) {
            throw std::invalid_argument("NoiseModel: df and scale must be > 0");
        }
        NoiseModel m;
        m.kind = NoiseKind::StudentT;
        m.df = df;
        m.scale = scale;
        return m;
    }
};

/// Piecewise-constant test signal on levels {0, 1, 2}: roughly 20% of the
/// samples at level 1, another 20% at level 2, the rest at 0. Fully
/// determined by the seed.
struct SignalSpec {
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    double level1_fraction = 0.2;
    double level2_fraction = 0.2;
    std::size_t min_block_length = 0;  ///< 0 selects the default max(5, n/50)
    NoiseModel noise;

    std::size_t effective_min_block_length() const {
        return min_block_length > 0 ? min_block_length
                                    : std::max<std::size_t>(5, n / 50);
    }

    void validate() const {
        if (!(level1_fraction >= 0.0) || !(level2_fraction >= 0.0) ||
            level1_fraction + level2_fraction > 1.0) {
            throw std::invalid_argument("SignalSpec: level fractions must be in [0,1] and sum to <= 1");
        }
        if (n < 2 * effective_min_block_length()) {
            throw std::invalid_argument("SignalSpec: n must be at least twice the minimum block length");
        }
    }
};

/// Generates (truth, noisy) per the spec. Blocks get lengths uniform in
/// [m, 3m] (m the minimum block length; the final block absorbs any short
/// remainder), and each block's level is drawn with weights proportional to
/// the remaining per-level sample quota, which keeps the realized fractions
/// near their targets for any n.
inline Signal generate(const SignalSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    const std::size_t m = spec.effective_min_block_length();
    std::mt19937_64 rng(spec.seed);

    std::vector<double> truth(n);
    const double quota[3] = {
        (1.0 - spec.level1_fraction - spec.level2_fraction) * static_cast<double>(n),
        spec.level1_fraction * static_cast<double>(n),
        spec.level2_fraction * static_cast<double>(n),
    };
    double assigned[3] = {0.0, 0.0, 0.0};

    std::uniform_int_distribution<std::size_t> block_length(m, 3 * m);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::size_t pos = 0;
    while (pos < n) {
        std::size_t len = block_length(rng);
        if (n - pos < len + m) len = n - pos;  // never leave a sub-minimum tail

        double weights[3];
        double total = 0.0;
        for (int l = 0; l < 3; ++l) {
            weights[l] = std::max(quota[l] - assigned[l], 0.0);
            total += weights[l];
        }
        int level = 0;
        if (total > 0.0) {
            const double u = unit(rng) * total;
            double acc = 0.0;
            for (int l = 0; l < 3; ++l) {
                acc += weights[l];
                if (u < acc) {
                    level = l;
                    break;
                }
            }
        }
        assigned[level] += static_cast<double>(len);
        std::fill(truth.begin() + static_cast<std::ptrdiff_t>(pos),
                  truth.begin() + static_cast<std::ptrdiff_t>(pos + len),
                  static_cast<double>(level));
        pos += len;
    }

    std::vector<double> noisy(n);
    if (spec.noise.kind == NoiseKind::Gaussian) {
        std::normal_distribution<double> noise(0.0, std::sqrt(spec.noise.variance));
        for (std::size_t i = 0; i < n; ++i) noisy[i] = truth[i] + noise(rng);
    } else {
        std::student_t_distribution<double> noise(spec.noise.df);
        for (std::size_t i = 0; i < n; ++i) noisy[i] = truth[i] + spec.noise.scale * noise(rng);
    }

    Signal out;
    out.y = std::move(noisy);
    out.truth = std::move(truth);
    return out;
}

}  // namespace flsa
