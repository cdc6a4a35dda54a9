#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace zlab {

// Centered sampling grid on [-L1,L1] x [-L2,L2] x [-L3,L3]. Samples sit at
// cell centers x = (m + 1/2) h - L, so no sample ever lies on a coordinate
// plane; singular kernels can be evaluated at every sample without special
// cases.
struct Grid3 {
    std::array<double, 3> half_extent{};
    std::array<std::size_t, 3> points{};

    std::array<double, 3> spacing() const {
        return {2.0 * half_extent[0] / points[0], 2.0 * half_extent[1] / points[1],
                2.0 * half_extent[2] / points[2]};
    }
    double cell_volume() const {
        const auto h = spacing();
        return h[0] * h[1] * h[2];
    }
    // center coordinate of cell m along axis
    double coord(int axis, std::size_t m) const {
        const double h = 2.0 * half_extent[axis] / points[axis];
        return (static_cast<double>(m) + 0.5) * h - half_extent[axis];
    }
    std::size_t size() const { return points[0] * points[1] * points[2]; }
    // row-major, x1 slowest
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * points[1] + j) * points[2] + k;
    }
    bool operator==(const Grid3&) const = default;
};

struct SampledField3 {
    Grid3 grid;
    std::vector<double> values;  // length points[0]*points[1]*points[2]
};

Grid3 make_grid(const std::array<double, 3>& half_extent,
                const std::array<std::size_t, 3>& points);

SampledField3 sample_field(const Grid3& grid,
                           const std::function<double(double, double, double)>& f);

// Riemann-sum L^p norm (sum |v|^p h1 h2 h3)^(1/p); fixed-order pairwise
// reduction, so the value is independent of how callers parallelize.
double lp_norm(const SampledField3& field, double p);

// || f - g ||_p on a common grid
double lp_distance(const SampledField3& f, const SampledField3& g, double p);

}  // namespace zlab
