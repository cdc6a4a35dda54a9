#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace zlab::detail {

// Truncated Taylor (jet) arithmetic up to degree D, used to take high-order
// derivatives of composite smooth functions exactly at f64 precision.
template <int D>
struct Jet {
    std::array<double, D + 1> c{};  // c[m] = f^(m)(a) / m!

    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    // the identity x evaluated at a
    static Jet variable(double a) {
        Jet j;
        j.c[0] = a;
        if constexpr (D >= 1) j.c[1] = 1.0;
        return j;
    }

    Jet operator+(const Jet& o) const {
        Jet r;
        for (int m = 0; m <= D; ++m) r.c[m] = c[m] + o.c[m];
        return r;
    }
    Jet operator-(const Jet& o) const {
        Jet r;
        for (int m = 0; m <= D; ++m) r.c[m] = c[m] - o.c[m];
        return r;
    }
    Jet operator*(const Jet& o) const {
        Jet r;
        for (int m = 0; m <= D; ++m) {
            double s = 0.0;
            for (int i = 0; i <= m; ++i) s += c[i] * o.c[m - i];
            r.c[m] = s;
        }
        return r;
    }

    friend Jet operator*(double s, const Jet& j) {
        Jet r;
        for (int m = 0; m <= D; ++m) r.c[m] = s * j.c[m];
        return r;
    }

    // derivative value f^(m)(a)
    double derivative(int m) const {
        double fact = 1.0;
        for (int i = 2; i <= m; ++i) fact *= i;
        return c[m] * fact;
    }
};

// reciprocal 1/f, requires f(a) != 0
template <int D>
Jet<D> reciprocal(const Jet<D>& f) {
    Jet<D> r;
    r.c[0] = 1.0 / f.c[0];
    for (int m = 1; m <= D; ++m) {
        double s = 0.0;
        for (int i = 1; i <= m; ++i) s += f.c[i] * r.c[m - i];
        r.c[m] = -s / f.c[0];
    }
    return r;
}

// exp(f) via the standard convolution recurrence (e' = e * f')
template <int D>
Jet<D> exp(const Jet<D>& f) {
    Jet<D> e;
    e.c[0] = std::exp(f.c[0]);
    for (int m = 1; m <= D; ++m) {
        double s = 0.0;
        for (int i = 1; i <= m; ++i) s += static_cast<double>(i) * f.c[i] * e.c[m - i];
        e.c[m] = s / static_cast<double>(m);
    }
    return e;
}

// The standard mollifier exp(-1/(1-x^2)) on (-1,1) as a jet at a.
template <int D>
Jet<D> mollifier_jet(double a) {
    const auto x = Jet<D>::variable(a);
    const auto one = Jet<D>::constant(1.0);
    const auto g = one - x * x;  // positive on (-1,1)
    return exp<D>(Jet<D>::constant(-1.0) * reciprocal(g));
}

}  // namespace zlab::detail
