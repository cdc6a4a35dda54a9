#include "zlab/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "zlab/detail/pairwise.hpp"

namespace zlab {

Grid3 make_grid(const std::array<double, 3>& half_extent,
                const std::array<std::size_t, 3>& points) {
    for (int a = 0; a < 3; ++a) {
        if (!(half_extent[a] > 0.0) || !std::isfinite(half_extent[a]))
            throw std::invalid_argument("make_grid: half_extent must be positive");
        if (points[a] < 4 || points[a] % 2 != 0) {
            std::ostringstream os;
            os << "make_grid: points[" << a << "] = " << points[a]
               << " (need an even count >= 4)";
            throw std::invalid_argument(os.str());
        }
    }
    return Grid3{half_extent, points};
}

SampledField3 sample_field(const Grid3& grid,
                           const std::function<double(double, double, double)>& f) {
    SampledField3 out{grid, std::vector<double>(grid.size())};
    std::size_t idx = 0;
    for (std::size_t i = 0; i < grid.points[0]; ++i) {
        const double x1 = grid.coord(0, i);
        for (std::size_t j = 0; j < grid.points[1]; ++j) {
            const double x2 = grid.coord(1, j);
            for (std::size_t k = 0; k < grid.points[2]; ++k) {
                const double x3 = grid.coord(2, k);
                const double v = f(x1, x2, x3);
                if (!std::isfinite(v)) {
                    std::ostringstream os;
                    os << "sample_field: non-finite value at (" << x1 << ", " << x2
                       << ", " << x3 << ")";
                    throw std::domain_error(os.str());
                }
                out.values[idx++] = v;
            }
        }
    }
    return out;
}

double lp_norm(const SampledField3& field, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    std::vector<double> terms(field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i)
        terms[i] = std::pow(std::fabs(field.values[i]), p);
    const double s = detail::pairwise_sum(terms) * field.grid.cell_volume();
    return std::pow(s, 1.0 / p);
}

double lp_distance(const SampledField3& f, const SampledField3& g, double p) {
    if (!(f.grid == g.grid))
        throw std::invalid_argument("lp_distance: fields live on different grids");
    SampledField3 d{f.grid, std::vector<double>(f.values.size())};
    for (std::size_t i = 0; i < f.values.size(); ++i)
        d.values[i] = f.values[i] - g.values[i];
    return lp_norm(d, p);
}

}  // namespace zlab
