#include "zlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "zlab/detail/pairwise.hpp"

namespace zlab {

namespace {

// Nodes as roots of the Legendre polynomial by Newton iteration.
GLRule compute_rule(int n) {
    GLRule r;
    r.node.resize(n);
    r.weight.resize(n);
    const double fac = M_PI / (0.5 + n);
    const int m = (n + 1) >> 1;
    for (int i = 0; i < m; ++i) {
        double z = std::cos((i + 0.75) * fac);
        double pp = 0.0, p1 = 0.0, dz;
        do {
            p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / static_cast<double>(j);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            dz = -p1 / pp;
            z += dz;
        } while (std::fabs(dz) >= 4.0 * std::numeric_limits<double>::epsilon());
        r.node[i] = -z;
        r.node[n - 1 - i] = z;
        r.weight[n - 1 - i] = r.weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

}  // namespace

const GLRule& gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, GLRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

std::vector<Panel> dyadic_panels(double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("dyadic_panels: need 0 < lo < hi");
    std::vector<Panel> out;
    const int m_lo = static_cast<int>(std::floor(std::log2(lo)));
    const int m_hi = static_cast<int>(std::ceil(std::log2(hi)));
    double a = lo;
    for (int m = m_lo; m < m_hi; ++m) {
        const double b = std::min(std::ldexp(1.0, m + 1), hi);
        if (b > a) out.push_back({a, b});
        a = b;
        if (a >= hi) break;
    }
    if (out.empty()) out.push_back({lo, hi});
    return out;
}

std::vector<Panel> subdivide(std::vector<Panel> panels, double max_width) {
    if (!(max_width > 0.0)) return panels;
    std::vector<Panel> out;
    for (const Panel& p : panels) {
        const double len = p.b - p.a;
        if (len <= max_width) {
            out.push_back(p);
            continue;
        }
        const int k = static_cast<int>(std::ceil(len / max_width));
        const double w = len / k;
        for (int i = 0; i + 1 < k; ++i) out.push_back({p.a + i * w, p.a + (i + 1) * w});
        out.push_back({p.a + (k - 1) * w, p.b});
    }
    return out;
}

std::vector<Panel> panels_refined_toward(double lo, double hi, double c,
                                         double min_width, double base_width) {
    if (!(hi > lo)) throw std::invalid_argument("panels_refined_toward: empty range");
    std::vector<Panel> out;
    // Panels shrinking geometrically toward the singular end s over [s, t]
    // (or [t, s]); the innermost panel touches s.
    auto side = [&](double s, double t) {
        const double len = std::fabs(t - s);
        if (len == 0.0) return;
        double d = len;
        std::vector<double> dist{d};
        while (d > min_width) {
            d *= 0.5;
            dist.push_back(d);
        }
        dist.push_back(0.0);
        const double dir = (t > s) ? 1.0 : -1.0;
        for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
            const double u = s + dir * dist[i + 1];
            const double v = s + dir * dist[i];
            out.push_back({std::min(u, v), std::max(u, v)});
        }
    };
    if (c <= lo) {
        side(lo, hi);
    } else if (c >= hi) {
        side(hi, lo);
    } else {
        side(c, lo);
        side(c, hi);
    }
    std::sort(out.begin(), out.end(), [](const Panel& a, const Panel& b) { return a.a < b.a; });
    return subdivide(std::move(out), base_width);
}

NodeSet panel_nodes(std::span<const Panel> panels, int order) {
    const GLRule& rule = gauss_legendre(order);
    NodeSet ns;
    ns.x.reserve(panels.size() * order);
    ns.w.reserve(panels.size() * order);
    for (const Panel& p : panels) {
        const double mid = 0.5 * (p.a + p.b);
        const double half = 0.5 * (p.b - p.a);
        for (int i = 0; i < order; ++i) {
            ns.x.push_back(mid + half * rule.node[i]);
            ns.w.push_back(half * rule.weight[i]);
        }
    }
    return ns;
}

double integrate(std::span<const Panel> panels, int order,
                 const std::function<double(double)>& fn) {
    const NodeSet ns = panel_nodes(panels, order);
    std::vector<double> terms(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) terms[i] = ns.w[i] * fn(ns.x[i]);
    return detail::pairwise_sum(terms);
}

double integrate_adaptive(std::span<const Panel> panels, int order, int max_order,
                          double rel_tol, const std::function<double(double)>& fn,
                          bool* converged) {
    double prev = integrate(panels, order, fn);
    for (int o = order + order / 2 + 1; o <= max_order; o += o / 2 + 1) {
        const double cur = integrate(panels, o, fn);
        const double scale = std::max({std::fabs(cur), std::fabs(prev), 1e-300});
        if (std::fabs(cur - prev) <= rel_tol * scale) {
            if (converged) *converged = true;
            return cur;
        }
        prev = cur;
    }
    if (converged) *converged = false;
    return prev;
}

}  // namespace zlab
