#pragma once

#include <array>
#include <functional>
#include <vector>

#include "entrolab/entropy.hpp"
#include "entrolab/quantum.hpp"

namespace entrolab::testing {

// Multi-stage zoom of the Bloch-ball brute force: repeatedly grids a shrinking
// cube around the incumbent. Stays a pure exhaustive search (no simplex, no
// Newton), refined enough to serve as a 1e-3-grade ground truth.
inline double zoomed_bloch_maximum(const std::function<double(const Matrix&)>& objective,
                                   int resolution = 11, int stages = 14, double shrink = 0.5) {
    const double radius = 1.0 - 1e-6;
    double cx = 0.0, cy = 0.0, cz = 0.0, h = radius;
    double best = -std::numeric_limits<double>::infinity();
    for (int stage = 0; stage < stages; ++stage) {
        double bx = cx, by = cy, bz = cz;
        for (int ix = 0; ix < resolution; ++ix)
            for (int iy = 0; iy < resolution; ++iy)
                for (int iz = 0; iz < resolution; ++iz) {
                    double x = cx + h * (-1.0 + 2.0 * ix / (resolution - 1));
                    double y = cy + h * (-1.0 + 2.0 * iy / (resolution - 1));
                    double z = cz + h * (-1.0 + 2.0 * iz / (resolution - 1));
                    const double r2 = x * x + y * y + z * z;
                    if (r2 > radius * radius) {
                        const double s = radius / std::sqrt(r2);
                        x *= s;
                        y *= s;
                        z *= s;
                    }
                    Matrix sigma(2, 2);
                    sigma << Complex(0.5 * (1.0 + z), 0.0), Complex(0.5 * x, -0.5 * y),
                        Complex(0.5 * x, 0.5 * y), Complex(0.5 * (1.0 - z), 0.0);
                    const double v = objective(sigma);
                    if (std::isfinite(v) && v > best) {
                        best = v;
                        bx = x;
                        by = y;
                        bz = z;
                    }
                }
        cx = bx;
        cy = by;
        cz = bz;
        h *= shrink;
    }
    return best;
}

inline DensityOperator bell_with_trivial_c() {
    const DensityOperator bell = maximally_entangled(2);
    return DensityOperator{bell.matrix, DimSignature{{"A", 2}, {"B", 2}, {"C", 1}}};
}

// The optimized specs the campaigns exercise.
inline std::vector<EntropySpec> optimized_specs() {
    return {EntropySpec::min_rel(Conditioning::optimized),
            EntropySpec::max_rel(Conditioning::optimized),
            EntropySpec::renyi(0.5, Conditioning::optimized),
            EntropySpec::renyi(1.5, Conditioning::optimized),
            EntropySpec::renyi_zero(Conditioning::optimized)};
}

}  // namespace entrolab::testing
