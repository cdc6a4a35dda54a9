#pragma once

#include <functional>
#include <span>
#include <vector>

namespace zlab {

// Gauss-Legendre rule on [-1, 1].
struct GLRule {
    std::vector<double> node;
    std::vector<double> weight;
};

// Cached rule of the given order (order >= 1).
const GLRule& gauss_legendre(int order);

struct Panel {
    double a;
    double b;
};

// Splits [lo, hi] (0 < lo < hi) at the powers of two it contains, one panel
// per octave. Scale-invariant integrands then contribute comparably per panel.
std::vector<Panel> dyadic_panels(double lo, double hi);

// Splits every panel into equal pieces no wider than max_width. Pass
// max_width = pi / (4 |freq|) to resolve a factor exp(i freq x).
std::vector<Panel> subdivide(std::vector<Panel> panels, double max_width);

// Panels on [lo, hi] refined geometrically toward the interior point c, down
// to width min_width, starting from pieces of width about base_width. Used
// for integrable singularities at known locations.
std::vector<Panel> panels_refined_toward(double lo, double hi, double c,
                                         double min_width, double base_width);

// Tensor-ready node/weight list for a panel set at a fixed GL order.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

NodeSet panel_nodes(std::span<const Panel> panels, int order);

double integrate(std::span<const Panel> panels, int order,
                 const std::function<double(double)>& fn);

// Integral with a built-in self-check: the order is raised until two
// successive evaluations agree to rel_tol (or max_order is hit, flagging
// non-convergence through *converged when provided).
double integrate_adaptive(std::span<const Panel> panels, int order, int max_order,
                          double rel_tol, const std::function<double(double)>& fn,
                          bool* converged = nullptr);

}  // namespace zlab
