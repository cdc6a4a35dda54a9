#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace zlab::detail {

// Function table on a uniform grid with 4-point (cubic Lagrange)
// interpolation; O(h^4) for smooth data. Out-of-range queries return the
// configured tail value (0 for the rapidly decaying profiles stored here).
class CubicTable {
  public:
    CubicTable() = default;
    CubicTable(double x0, double dx, std::vector<double> values, double tail = 0.0)
        : x0_(x0), dx_(dx), v_(std::move(values)), tail_(tail) {
        assert(v_.size() >= 4);
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * static_cast<double>(v_.size() - 1); }
    bool empty() const { return v_.empty(); }

    double operator()(double x) const {
        const double u = (x - x0_) / dx_;
        if (u < 0.0 || u > static_cast<double>(v_.size() - 1)) return tail_;
        // clamp the stencil to the table
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(u);
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v_.size());
        if (i < 1) i = 1;
        if (i > n - 3) i = n - 3;
        const double t = u - static_cast<double>(i);
        const double vm = v_[i - 1], v0 = v_[i], v1 = v_[i + 1], v2 = v_[i + 2];
        // cubic Lagrange on {-1, 0, 1, 2}
        const double a = (-t * (t - 1.0) * (t - 2.0)) / 6.0;
        const double b = ((t + 1.0) * (t - 1.0) * (t - 2.0)) / 2.0;
        const double c = (-(t + 1.0) * t * (t - 2.0)) / 2.0;
        const double d = ((t + 1.0) * t * (t - 1.0)) / 6.0;
        return a * vm + b * v0 + c * v1 + d * v2;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::fabs(x));
        return m;
    }

    void scale(double c) {
        for (double& x : v_) x *= c;
    }

  private:
    double x0_ = 0.0, dx_ = 1.0;
    std::vector<double> v_;
    double tail_ = 0.0;
};

// Tensor-grid table in two variables with bicubic (4x4 Lagrange) stencils.
class BicubicTable {
  public:
    BicubicTable() = default;
    BicubicTable(double x0, double dx, std::size_t nx, double y0, double dy,
                 std::size_t ny, std::vector<double> values, double tail = 0.0)
        : x0_(x0), dx_(dx), nx_(nx), y0_(y0), dy_(dy), ny_(ny), v_(std::move(values)),
          tail_(tail) {
        assert(v_.size() == nx_ * ny_ && nx_ >= 4 && ny_ >= 4);
    }

    double operator()(double x, double y) const {
        const double u = (x - x0_) / dx_;
        const double w = (y - y0_) / dy_;
        if (u < 0.0 || u > static_cast<double>(nx_ - 1) || w < 0.0 ||
            w > static_cast<double>(ny_ - 1))
            return tail_;
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(u);
        std::ptrdiff_t j = static_cast<std::ptrdiff_t>(w);
        i = std::min<std::ptrdiff_t>(std::max<std::ptrdiff_t>(i, 1), nx_ - 3);
        j = std::min<std::ptrdiff_t>(std::max<std::ptrdiff_t>(j, 1), ny_ - 3);
        const double t = u - static_cast<double>(i);
        const double s = w - static_cast<double>(j);
        double cx[4], cy[4];
        weights(t, cx);
        weights(s, cy);
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) {
            const double* row = &v_[(i - 1 + a) * ny_ + (j - 1)];
            acc += cx[a] * (cy[0] * row[0] + cy[1] * row[1] + cy[2] * row[2] +
                            cy[3] * row[3]);
        }
        return acc;
    }

  private:
    static void weights(double t, double c[4]) {
        c[0] = (-t * (t - 1.0) * (t - 2.0)) / 6.0;
        c[1] = ((t + 1.0) * (t - 1.0) * (t - 2.0)) / 2.0;
        c[2] = (-(t + 1.0) * t * (t - 2.0)) / 2.0;
        c[3] = ((t + 1.0) * t * (t - 1.0)) / 6.0;
    }

    double x0_ = 0.0, dx_ = 1.0;
    std::size_t nx_ = 0;
    double y0_ = 0.0, dy_ = 1.0;
    std::size_t ny_ = 0;
    std::vector<double> v_;
    double tail_ = 0.0;
};

}  // namespace zlab::detail
