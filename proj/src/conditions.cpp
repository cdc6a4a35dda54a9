#include "zlab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "zlab/detail/pairwise.hpp"
#include "zlab/parallel.hpp"
#include "zlab/quadrature.hpp"

namespace zlab {

void validate(const HolderParams& p) {
    if (!(p.theta1 > 0.0) || !(p.theta1 <= 1.0))
        throw std::invalid_argument("HolderParams: theta1 must lie in (0, 1]");
    if (!(p.theta2 > 0.0) || !(p.theta2 < 1.0))
        throw std::invalid_argument("HolderParams: theta2 must lie in (0, 1)");
}

double balanced_factor(double x1, double x2, double x3) {
    const double u = std::fabs(x1 * x2 / x3);
    return u + 1.0 / u;
}

bool diff_index_admissible(int alpha, int beta, int gamma) {
    if (alpha < 0 || alpha > 1 || beta < 0 || beta > 1 || gamma < 0 || gamma > 1)
        return false;
    return (alpha <= 1 && beta + gamma <= 1) || (alpha + gamma <= 1 && beta <= 1);
}

double finite_difference(const Kernel& kernel, const std::array<double, 3>& x,
                         const DiffIndex& idx) {
    if (!diff_index_admissible(idx.alpha, idx.beta, idx.gamma))
        throw std::invalid_argument("finite_difference: inadmissible (alpha,beta,gamma)");
    const int ord[3] = {idx.alpha, idx.beta, idx.gamma};
    for (int a = 0; a < 3; ++a) {
        if (ord[a] == 1) {
            if (!(std::fabs(idx.h[a]) > 0.0) || std::fabs(x[a]) < 2.0 * std::fabs(idx.h[a]))
                throw std::invalid_argument(
                    "finite_difference: need |x_i| >= 2 |h_i| > 0 on differenced axes");
        }
    }
    // Delta^1 f = f(x+h) - f(x); Delta^0 f = -f(x). Compose the three axes.
    double total = 0.0;
    for (int c1 = 0; c1 <= (ord[0] == 1 ? 1 : 0); ++c1)
        for (int c2 = 0; c2 <= (ord[1] == 1 ? 1 : 0); ++c2)
            for (int c3 = 0; c3 <= (ord[2] == 1 ? 1 : 0); ++c3) {
                double sign = 1.0;
                sign *= (ord[0] == 1) ? (c1 ? 1.0 : -1.0) : -1.0;
                sign *= (ord[1] == 1) ? (c2 ? 1.0 : -1.0) : -1.0;
                sign *= (ord[2] == 1) ? (c3 ? 1.0 : -1.0) : -1.0;
                total += sign * kernel.eval(x[0] + (c1 ? idx.h[0] : 0.0),
                                            x[1] + (c2 ? idx.h[1] : 0.0),
                                            x[2] + (c3 ? idx.h[2] : 0.0));
            }
    return total;
}

// ---------------------------------------------------------------------------
// shared tensor integrator

namespace {

struct AxisQuad {
    std::vector<double> coord;
    std::vector<double> coeff;  // per +/- pair when paired, else per coord
    bool paired = false;
};

// signed annulus nodes: coord holds +u, -u interleaved, coeff one weight per pair
AxisQuad annulus_axis(double delta, double r, int order) {
    const auto panels = dyadic_panels(delta, r);
    const auto ns = panel_nodes(panels, order);
    AxisQuad q;
    q.paired = true;
    q.coeff = ns.w;
    q.coord.resize(2 * ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        q.coord[2 * i] = ns.x[i];
        q.coord[2 * i + 1] = -ns.x[i];
    }
    return q;
}

// fixed axis carrying a difference operator: order -1 = identity,
// 0 = negation, 1 = forward difference
AxisQuad fixed_axis(double x, double h, int diff_order) {
    AxisQuad q;
    q.paired = false;
    if (diff_order <= -1) {
        q.coord = {x};
        q.coeff = {1.0};
    } else if (diff_order == 0) {
        q.coord = {x};
        q.coeff = {-1.0};
    } else {
        q.coord = {x, x + h};
        q.coeff = {-1.0, 1.0};
    }
    return q;
}

using Weight = std::function<double(double, double, double)>;

// sum over the tensor grid with the per-axis coefficients; +/- pairs on
// integration axes are combined adjacently so that odd symmetries cancel
// exactly in floating point
double tensor_integral(const Kernel& kernel, const AxisQuad& a1, const AxisQuad& a2,
                       const AxisQuad& a3, const Weight* weight) {
    const std::size_t n2 = a2.coord.size(), n3 = a3.coord.size();
    auto slab = kernel.tensor_slab_evaluator(a1.coord, a2.coord, a3.coord);
    std::vector<double> acc(n2 * n3, 0.0), buf(n2 * n3), buf2(n2 * n3);

    auto apply_weight = [&](std::vector<double>& v, double u1) {
        if (!weight) return;
        std::size_t r = 0;
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++r)
                v[r] *= (*weight)(u1, a2.coord[i2], a3.coord[i3]);
    };

    if (a1.paired) {
        for (std::size_t p = 0; p * 2 < a1.coord.size(); ++p) {
            slab(2 * p, buf);
            apply_weight(buf, a1.coord[2 * p]);
            slab(2 * p + 1, buf2);
            apply_weight(buf2, a1.coord[2 * p + 1]);
            const double c = a1.coeff[p];
            for (std::size_t r = 0; r < acc.size(); ++r)
                acc[r] += c * (buf[r] + buf2[r]);
        }
    } else {
        for (std::size_t i1 = 0; i1 < a1.coord.size(); ++i1) {
            slab(i1, buf);
            apply_weight(buf, a1.coord[i1]);
            const double c = a1.coeff[i1];
            for (std::size_t r = 0; r < acc.size(); ++r) acc[r] += c * buf[r];
        }
    }

    // reduce x3 within each x2 row, then x2
    std::vector<double> col(n2);
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const double* row = acc.data() + i2 * n3;
        double s = 0.0;
        if (a3.paired) {
            for (std::size_t p = 0; p * 2 < n3; ++p)
                s += a3.coeff[p] * (row[2 * p] + row[2 * p + 1]);
        } else {
            for (std::size_t i3 = 0; i3 < n3; ++i3) s += a3.coeff[i3] * row[i3];
        }
        col[i2] = s;
    }
    double total = 0.0;
    if (a2.paired) {
        for (std::size_t p = 0; p * 2 < n2; ++p)
            total += a2.coeff[p] * (col[2 * p] + col[2 * p + 1]);
    } else {
        for (std::size_t i2 = 0; i2 < n2; ++i2) total += a2.coeff[i2] * col[i2];
    }
    return total;
}

// nested log-spaced magnitude lattice; density d refines by midpoint insertion
std::vector<double> log_lattice(double lo, double hi, int base_count, int density) {
    const int count = base_count <= 1 ? 1 : (base_count - 1) * (1 << density) + 1;
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = std::sqrt(lo * hi);
        return v;
    }
    const double llo = std::log2(lo), lhi = std::log2(hi);
    for (int i = 0; i < count; ++i)
        v[i] = std::exp2(llo + (lhi - llo) * i / (count - 1));
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// regularity check

ConditionReport check_R(const Kernel& kernel, const HolderParams& params,
                        const RSamplePlan& plan) {
    validate(params);
    ConditionReport rep;
    rep.condition_id = "R";
    rep.theta1 = params.theta1;
    rep.theta2 = params.theta2;

    static const std::array<std::array<int, 3>, 7> combos = {{{0, 0, 0},
                                                              {1, 0, 0},
                                                              {0, 1, 0},
                                                              {0, 0, 1},
                                                              {1, 1, 0},
                                                              {1, 0, 1},
                                                              {0, 1, 1}}};
    const double t1 = params.theta1, t2 = params.theta2;
    double c_hat = 0.0;
    std::map<std::string, double> worst;
    long count = 0;

    for (int d = 0; d < plan.densities; ++d) {
        const auto mags = log_lattice(plan.lo, plan.hi, plan.mags, d);
        struct Best {
            double c = 0.0;
            std::map<std::string, double> sample;
            long n = 0;
        };
        const std::function<Best(std::size_t)> eval_m1 = [&](std::size_t i1) {
            Best best;
            for (double s1 : {1.0, -1.0})
                for (double m2 : mags)
                    for (double s2 : {1.0, -1.0})
                        for (double m3 : mags)
                            for (double s3 : {1.0, -1.0}) {
                                const std::array<double, 3> x = {
                                    s1 * mags[i1] / plan.dilate_s,
                                    s2 * m2 / plan.dilate_t,
                                    s3 * m3 / (plan.dilate_s * plan.dilate_t)};
                                for (double ratio : plan.h_ratios)
                                    for (const auto& cb : combos) {
                                        DiffIndex idx;
                                        idx.alpha = cb[0];
                                        idx.beta = cb[1];
                                        idx.gamma = cb[2];
                                        for (int a = 0; a < 3; ++a)
                                            if (cb[a]) idx.h[a] = ratio * std::fabs(x[a]);
                                        double val;
                                        try {
                                            val = std::fabs(finite_difference(kernel, x, idx));
                                        } catch (const std::domain_error& e) {
                                            std::ostringstream os;
                                            os << e.what() << " [sample x=(" << x[0] << ","
                                               << x[1] << "," << x[2] << ")]";
                                            throw std::domain_error(os.str());
                                        }
                                        ++best.n;
                                        if (val == 0.0) continue;
                                        double num = val;
                                        num *= std::pow(std::fabs(x[0]), cb[0] * t1 + 1.0);
                                        num *= std::pow(std::fabs(x[1]), cb[1] * t1 + 1.0);
                                        num *= std::pow(std::fabs(x[2]), cb[2] * t1 + 1.0);
                                        num *= std::pow(balanced_factor(x[0], x[1], x[2]), t2);
                                        double den = 1.0;
                                        for (int a = 0; a < 3; ++a)
                                            if (cb[a]) den *= std::pow(idx.h[a], t1);
                                        const double r = num / den;
                                        if (r > best.c) {
                                            best.c = r;
                                            best.sample = {{"x1", x[0]},       {"x2", x[1]},
                                                           {"x3", x[2]},       {"h1", idx.h[0]},
                                                           {"h2", idx.h[1]},   {"h3", idx.h[2]},
                                                           {"alpha", 1.0 * cb[0]},
                                                           {"beta", 1.0 * cb[1]},
                                                           {"gamma", 1.0 * cb[2]}};
                                        }
                                    }
                            }
            return best;
        };
        const auto parts = parallel_map<Best>(mags.size(), eval_m1, plan.workers);
        for (const auto& b : parts) {
            count += b.n;
            if (b.c > c_hat) {
                c_hat = b.c;
                worst = b.sample;
            }
        }
        rep.history.push_back(c_hat);
    }
    rep.sample_count = count;
    rep.c_hat = c_hat;
    rep.worst_sample = std::move(worst);
    const std::size_t hn = rep.history.size();
    rep.stable = hn >= 2 && std::fabs(rep.history[hn - 1] - rep.history[hn - 2]) <=
                                0.1 * std::max(rep.history[hn - 1], 1e-300);
    return rep;
}

// ---------------------------------------------------------------------------
// cancellation families

namespace {

struct FamilySpec {
    std::vector<int> int_axes;                  // integration axes in order
    std::vector<std::array<int, 3>> combos;     // -1 = no operator on that axis
};

FamilySpec family_spec(CancellationFamily f) {
    using CF = CancellationFamily;
    switch (f) {
        case CF::C1a:
        case CF::C2a:
        case CF::C2pa:
            return {{0, 1, 2}, {{{-1, -1, -1}}}};
        case CF::C1b:
            return {{0, 1}, {{{-1, -1, 0}}, {{-1, -1, 1}}}};
        case CF::C1c:
        case CF::C2c:
            return {{1, 2}, {{{0, -1, -1}}, {{1, -1, -1}}}};
        case CF::C1d:
        case CF::C2pc:
            return {{0, 2}, {{{-1, 0, -1}}, {{-1, 1, -1}}}};
        case CF::C2b:
            return {{0}, {{{-1, 0, 0}}, {{-1, 1, 0}}, {{-1, 0, 1}}}};
        case CF::C2pb:
            return {{1}, {{{0, -1, 0}}, {{1, -1, 0}}, {{0, -1, 1}}}};
    }
    throw std::logic_error("family_spec: unreachable");
}

double family_rhs(CancellationFamily f, const HolderParams& p,
                  const std::array<double, 3>& x, const std::array<double, 3>& h,
                  const std::array<int, 3>& d, double delta_int, double r_int,
                  bool plus_one) {
    using CF = CancellationFamily;
    const double t1 = p.theta1, t2 = p.theta2;
    auto hx = [&](int axis) {
        // |h_i|^(d th1) / |x_i|^(d th1 + 1)
        const double o = d[axis] == 1 ? t1 : 0.0;
        return std::pow(std::fabs(h[axis]), o) / std::pow(std::fabs(x[axis]), o + 1.0);
    };
    auto two_sided = [&](double xa) {
        // balanced factor at the two ends of the integration range
        const double br = std::fabs(r_int * xa / x[2]) + std::fabs(x[2] / (r_int * xa));
        const double bd = std::fabs(delta_int * xa / x[2]) + std::fabs(x[2] / (delta_int * xa));
        return std::pow(br, -t2) + std::pow(bd, -t2);
    };
    switch (f) {
        case CF::C1a:
        case CF::C2a:
        case CF::C2pa:
            return 1.0;
        case CF::C1b:
            return hx(2);
        case CF::C1c:
        case CF::C2c:
            return hx(0);
        case CF::C1d:
        case CF::C2pc:
            return hx(1);
        case CF::C2b:
            return hx(1) * hx(2) * two_sided(x[1]);
        case CF::C2pb: {
            const double o1 = d[0] == 1 ? t1 : 0.0;
            const double o3 = d[2] == 1 ? t1 : 0.0;
            const double e3 = o3 + (plus_one ? 1.0 : 0.0);
            return std::pow(std::fabs(h[0]), o1) / std::pow(std::fabs(x[0]), o1 + 1.0) *
                   std::pow(std::fabs(h[2]), o3) / std::pow(std::fabs(x[2]), e3) *
                   two_sided(x[0]);
        }
    }
    throw std::logic_error("family_rhs: unreachable");
}

}  // namespace

std::string to_string(CancellationFamily f) {
    switch (f) {
        case CancellationFamily::C1a: return "C1a";
        case CancellationFamily::C1b: return "C1b";
        case CancellationFamily::C1c: return "C1c";
        case CancellationFamily::C1d: return "C1d";
        case CancellationFamily::C2a: return "C2a";
        case CancellationFamily::C2b: return "C2b";
        case CancellationFamily::C2c: return "C2c";
        case CancellationFamily::C2pa: return "C2pa";
        case CancellationFamily::C2pb: return "C2pb";
        case CancellationFamily::C2pc: return "C2pc";
    }
    return "?";
}

CancellationFamily cancellation_family_from_string(const std::string& s) {
    static const std::map<std::string, CancellationFamily> m = {
        {"C1a", CancellationFamily::C1a}, {"C1b", CancellationFamily::C1b},
        {"C1c", CancellationFamily::C1c}, {"C1d", CancellationFamily::C1d},
        {"C2a", CancellationFamily::C2a}, {"C2b", CancellationFamily::C2b},
        {"C2c", CancellationFamily::C2c}, {"C2pa", CancellationFamily::C2pa},
        {"C2pb", CancellationFamily::C2pb}, {"C2pc", CancellationFamily::C2pc}};
    auto it = m.find(s);
    if (it == m.end())
        throw std::invalid_argument("unknown cancellation family '" + s + "'");
    return it->second;
}

int integration_axis_count(CancellationFamily f) {
    return static_cast<int>(family_spec(f).int_axes.size());
}

AnnulusSweep AnnulusSweep::geometric(int axes, int m_max, int densities) {
    AnnulusSweep sw;
    sw.by_density.resize(densities);
    for (int d = 0; d < densities; ++d) {
        const int stride = 1 << (densities - 1 - d);
        for (int m = stride; m <= m_max; m += stride) {
            Tuple t;
            for (int a = 0; a < axes; ++a)
                t.push_back({std::ldexp(1.0, -m), std::ldexp(1.0, m)});
            sw.by_density[d].push_back(std::move(t));
        }
    }
    return sw;
}

ConditionReport check_cancellation(const Kernel& kernel, CancellationFamily family,
                                   const AnnulusSweep& sweep, const HolderParams& params,
                                   const CancellationConfig& cfg) {
    validate(params);
    const FamilySpec spec = family_spec(family);
    ConditionReport rep;
    rep.condition_id = to_string(family);
    rep.theta1 = params.theta1;
    rep.theta2 = params.theta2;

    struct Task {
        AnnulusSweep::Tuple annuli;
        std::array<double, 3> x{1.0, 1.0, 1.0};  // fixed coords (int axes ignored)
        std::array<double, 3> h{0.0, 0.0, 0.0};
        std::array<int, 3> d{-1, -1, -1};
        int density = 0;
    };

    std::vector<int> fixed_axes;
    for (int a = 0; a < 3; ++a)
        if (std::find(spec.int_axes.begin(), spec.int_axes.end(), a) ==
            spec.int_axes.end())
            fixed_axes.push_back(a);

    double c_hat = 0.0;
    std::map<std::string, double> worst;
    long count = 0;

    for (std::size_t density = 0; density < sweep.by_density.size(); ++density) {
        std::vector<Task> tasks;
        const auto mags =
            log_lattice(cfg.fixed_lo, cfg.fixed_hi, cfg.fixed_mags, static_cast<int>(density));
        // enumerate fixed coordinates (magnitude x sign per fixed axis)
        std::vector<std::array<double, 3>> fixed_pts;
        {
            std::vector<std::array<double, 3>> acc = {{1.0, 1.0, 1.0}};
            for (int a : fixed_axes) {
                std::vector<std::array<double, 3>> next;
                for (const auto& base : acc)
                    for (double m : mags)
                        for (double s : {1.0, -1.0}) {
                            auto p = base;
                            p[a] = s * m;
                            next.push_back(p);
                        }
                acc = std::move(next);
            }
            fixed_pts = std::move(acc);
        }
        for (const auto& annuli : sweep.by_density[density]) {
            if (annuli.size() != spec.int_axes.size())
                throw std::invalid_argument(
                    "check_cancellation: tuple arity does not match the family");
            for (const auto& fx : fixed_pts)
                for (const auto& cb : spec.combos) {
                    bool has_diff = false;
                    for (int a : fixed_axes) has_diff |= cb[a] == 1;
                    const std::vector<double> ratios =
                        has_diff ? cfg.h_ratios : std::vector<double>{0.0};
                    for (double ratio : ratios) {
                        Task t;
                        t.annuli = annuli;
                        t.x = fx;
                        t.d = cb;
                        t.density = static_cast<int>(density);
                        for (int a : fixed_axes)
                            if (cb[a] == 1) t.h[a] = ratio * std::fabs(fx[a]);
                        tasks.push_back(std::move(t));
                    }
                }
        }

        const std::function<ConditionReport::Row(std::size_t)> run =
            [&](std::size_t ti) -> ConditionReport::Row {
            const Task& t = tasks[ti];
            AxisQuad ax[3];
            for (std::size_t ia = 0; ia < spec.int_axes.size(); ++ia)
                ax[spec.int_axes[ia]] = annulus_axis(t.annuli[ia].first,
                                                     t.annuli[ia].second, cfg.gl_order);
            for (int a : fixed_axes) ax[a] = fixed_axis(t.x[a], t.h[a], t.d[a]);

            const double val = tensor_integral(kernel, ax[0], ax[1], ax[2], nullptr);
            ConditionReport::Row row;
            row.lhs = std::fabs(val);
            row.rhs = family_rhs(family, params, t.x, t.h, t.d, t.annuli[0].first,
                                 t.annuli[0].second, cfg.c2pb_plus_one);
            row.ratio = row.lhs / row.rhs;
            if (cfg.quad_check) {
                for (std::size_t ia = 0; ia < spec.int_axes.size(); ++ia)
                    ax[spec.int_axes[ia]] = annulus_axis(
                        t.annuli[ia].first, t.annuli[ia].second, 2 * cfg.gl_order);
                const double val2 = tensor_integral(kernel, ax[0], ax[1], ax[2], nullptr);
                const double scale = std::max(std::fabs(val), std::fabs(val2));
                row.flagged = scale > 1e-14 * std::max(1.0, row.rhs) &&
                              std::fabs(val - val2) > cfg.quad_check_rel * scale;
            }
            for (std::size_t ia = 0; ia < spec.int_axes.size(); ++ia) {
                const std::string sfx = std::to_string(spec.int_axes[ia] + 1);
                row.params["delta" + sfx] = t.annuli[ia].first;
                row.params["r" + sfx] = t.annuli[ia].second;
            }
            for (int a : fixed_axes) {
                row.params["x" + std::to_string(a + 1)] = t.x[a];
                if (t.d[a] == 1) row.params["h" + std::to_string(a + 1)] = t.h[a];
                if (t.d[a] >= 0)
                    row.params[a == 0 ? "alpha" : (a == 1 ? "beta" : "gamma")] = t.d[a];
            }
            row.params["density"] = static_cast<double>(t.density);
            return row;
        };
        auto rows = parallel_map<ConditionReport::Row>(tasks.size(), run, cfg.workers);
        for (auto& row : rows) {
            count += 1;
            rep.quadrature_flagged |= row.flagged;
            if (row.ratio > c_hat) {
                c_hat = row.ratio;
                worst = row.params;
            }
            rep.rows.push_back(std::move(row));
        }
        rep.history.push_back(c_hat);
    }
    rep.sample_count = count;
    rep.c_hat = c_hat;
    rep.worst_sample = std::move(worst);
    const std::size_t hn = rep.history.size();
    rep.stable = hn >= 2 && std::fabs(rep.history[hn - 1] - rep.history[hn - 2]) <=
                                0.1 * std::max(rep.history[hn - 1], 1e-300);
    return rep;
}

// ---------------------------------------------------------------------------
// bump-tested cancellation

std::string to_string(C3Family f) {
    switch (f) {
        case C3Family::C3a: return "C3a";
        case C3Family::C3b: return "C3b";
        case C3Family::C3c: return "C3c";
        case C3Family::C3pa: return "C3pa";
        case C3Family::C3pb: return "C3pb";
        case C3Family::C3pc: return "C3pc";
    }
    return "?";
}

C3Family c3_family_from_string(const std::string& s) {
    static const std::map<std::string, C3Family> m = {
        {"C3a", C3Family::C3a},   {"C3b", C3Family::C3b},   {"C3c", C3Family::C3c},
        {"C3pa", C3Family::C3pa}, {"C3pb", C3Family::C3pb}, {"C3pc", C3Family::C3pc}};
    auto it = m.find(s);
    if (it == m.end()) throw std::invalid_argument("unknown C3 family '" + s + "'");
    return it->second;
}

namespace {

struct C3Spec {
    std::vector<int> int_axes;
    std::vector<std::array<int, 3>> combos;
    int bump_dim;
};

C3Spec c3_spec(C3Family f) {
    switch (f) {
        case C3Family::C3a:
        case C3Family::C3pa:
            return {{0, 1, 2}, {{{-1, -1, -1}}}, 3};
        case C3Family::C3b:
            return {{0}, {{{-1, 0, 0}}, {{-1, 1, 0}}, {{-1, 0, 1}}}, 1};
        case C3Family::C3pb:
            return {{1}, {{{0, -1, 0}}, {{1, -1, 0}}, {{0, -1, 1}}}, 1};
        case C3Family::C3c:
            return {{1, 2}, {{{0, -1, -1}}, {{1, -1, -1}}}, 2};
        case C3Family::C3pc:
            return {{0, 2}, {{{-1, 0, -1}}, {{-1, 1, -1}}}, 2};
    }
    throw std::logic_error("c3_spec: unreachable");
}

double c3_rhs(C3Family f, const HolderParams& p, const std::array<double, 3>& x,
              const std::array<double, 3>& h, const std::array<int, 3>& d, double R) {
    const double t1 = p.theta1, t2 = p.theta2;
    auto hx = [&](int axis) {
        const double o = d[axis] == 1 ? t1 : 0.0;
        return std::pow(std::fabs(h[axis]), o) / std::pow(std::fabs(x[axis]), o + 1.0);
    };
    switch (f) {
        case C3Family::C3a:
        case C3Family::C3pa:
            return 1.0;
        case C3Family::C3b: {
            const double bal = std::fabs(R * x[2] / x[1]) + std::fabs(x[1] / (R * x[2]));
            return hx(1) * hx(2) / std::pow(bal, t2);
        }
        case C3Family::C3pb: {
            const double bal = std::fabs(R * x[2] / x[0]) + std::fabs(x[0] / (R * x[2]));
            return hx(0) * hx(2) / std::pow(bal, t2);
        }
        case C3Family::C3c:
            return hx(0);
        case C3Family::C3pc:
            return hx(1);
    }
    throw std::logic_error("c3_rhs: unreachable");
}

}  // namespace

double c3_integral(const Kernel& kernel, C3Family family,
                   const std::array<double, 3>& scales,
                   const std::array<double, 3>& fixed_point, const DiffIndex& diff,
                   const std::function<double(std::array<double, 3>)>& bump,
                   int gl_order, int depth_octaves) {
    const C3Spec spec = c3_spec(family);
    // bump argument scale per integration axis; domain |x_i| <= 1 / scale_i
    std::array<double, 3> arg_scale{0.0, 0.0, 0.0};
    switch (family) {
        case C3Family::C3a:
        case C3Family::C3pa:
            arg_scale = {scales[0], scales[1], scales[0] * scales[1]};
            break;
        case C3Family::C3b:
            arg_scale = {scales[0], 0.0, 0.0};
            break;
        case C3Family::C3pb:
            arg_scale = {0.0, scales[0], 0.0};
            break;
        case C3Family::C3c:
            arg_scale = {0.0, scales[0], scales[1]};
            break;
        case C3Family::C3pc:
            arg_scale = {scales[0], 0.0, scales[1]};
            break;
    }
    const std::array<int, 3> d = {diff.alpha, diff.beta, diff.gamma};
    AxisQuad ax[3];
    std::vector<int> fixed_axes;
    for (int a = 0; a < 3; ++a)
        if (std::find(spec.int_axes.begin(), spec.int_axes.end(), a) ==
            spec.int_axes.end())
            fixed_axes.push_back(a);
    for (int a : spec.int_axes) {
        const double b = 1.0 / arg_scale[a];
        const auto panels = dyadic_panels(std::ldexp(b, -depth_octaves), b);
        const auto ns = panel_nodes(panels, gl_order);
        AxisQuad q;
        q.paired = true;
        q.coeff = ns.w;
        q.coord.resize(2 * ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) {
            q.coord[2 * i] = ns.x[i];
            q.coord[2 * i + 1] = -ns.x[i];
        }
        ax[a] = std::move(q);
    }
    for (int a : fixed_axes) ax[a] = fixed_axis(fixed_point[a], diff.h[a], d[a]);

    const Weight w = [&](double u1, double u2, double u3) {
        std::array<double, 3> arg{0.0, 0.0, 0.0};
        const double u[3] = {u1, u2, u3};
        int slot = 0;
        for (int a : spec.int_axes) arg[slot++] = arg_scale[a] * u[a];
        return bump(arg);
    };
    return tensor_integral(kernel, ax[0], ax[1], ax[2], &w);
}

ConditionReport check_c3(const Kernel& kernel, C3Family family, const C3Config& cfg,
                         const HolderParams& params) {
    validate(params);
    const C3Spec spec = c3_spec(family);
    ConditionReport rep;
    rep.condition_id = to_string(family);
    rep.theta1 = params.theta1;
    rep.theta2 = params.theta2;

    std::vector<int> fixed_axes;
    for (int a = 0; a < 3; ++a)
        if (std::find(spec.int_axes.begin(), spec.int_axes.end(), a) ==
            spec.int_axes.end())
            fixed_axes.push_back(a);
    const bool two_scales = spec.bump_dim != 1;

    double c_hat = 0.0;
    std::map<std::string, double> worst;
    long count = 0;

    for (int density = 0; density < cfg.densities; ++density) {
        // refine the scale grid geometrically at each density
        std::vector<double> scales = cfg.scales;
        std::sort(scales.begin(), scales.end());
        for (int d = 0; d < density; ++d) {
            std::vector<double> refined;
            for (std::size_t i = 0; i < scales.size(); ++i) {
                refined.push_back(scales[i]);
                if (i + 1 < scales.size())
                    refined.push_back(std::sqrt(scales[i] * scales[i + 1]));
            }
            scales = std::move(refined);
        }
        const auto mags = log_lattice(cfg.fixed_lo, cfg.fixed_hi, cfg.fixed_mags, density);

        struct Task {
            std::array<double, 3> scales{1.0, 1.0, 1.0};
            std::array<double, 3> x{1.0, 1.0, 1.0};
            DiffIndex diff;
            std::uint64_t seed = 0;
            double R_for_rhs = 1.0;
            int density = 0;
        };
        std::vector<Task> tasks;
        std::vector<std::array<double, 2>> scale_pairs;
        if (two_scales) {
            for (double r1 : scales)
                for (double r2 : scales) scale_pairs.push_back({r1, r2});
        } else {
            for (double r : scales) scale_pairs.push_back({r, 0.0});
        }
        std::vector<std::array<double, 3>> fixed_pts = {{1.0, 1.0, 1.0}};
        for (int a : fixed_axes) {
            std::vector<std::array<double, 3>> next;
            for (const auto& base : fixed_pts)
                for (double m : mags)
                    for (double s : {1.0, -1.0}) {
                        auto p = base;
                        p[a] = s * m;
                        next.push_back(p);
                    }
            fixed_pts = std::move(next);
        }
        for (const auto& sp : scale_pairs)
            for (std::uint64_t seed : cfg.nbf_seeds)
                for (const auto& fx : fixed_pts)
                    for (const auto& cb : spec.combos) {
                        bool has_diff = false;
                        for (int a : fixed_axes) has_diff |= cb[a] == 1;
                        const std::vector<double> ratios =
                            has_diff ? cfg.h_ratios : std::vector<double>{0.0};
                        for (double ratio : ratios) {
                            Task t;
                            t.scales = {sp[0], sp[1], 1.0};
                            t.x = fx;
                            t.seed = seed;
                            t.density = density;
                            t.R_for_rhs = sp[0];
                            t.diff.alpha = std::max(cb[0], 0);
                            t.diff.beta = std::max(cb[1], 0);
                            t.diff.gamma = std::max(cb[2], 0);
                            // keep the identity/negation distinction
                            for (int a = 0; a < 3; ++a)
                                if (cb[a] == 1) t.diff.h[a] = ratio * std::fabs(fx[a]);
                            tasks.push_back(t);
                        }
                    }

        const std::function<ConditionReport::Row(std::size_t)> run =
            [&, spec](std::size_t ti) -> ConditionReport::Row {
            const Task& t = tasks[ti];
            const NormalizedBump nbf = make_nbf(spec.bump_dim, t.seed);
            const auto bump_fn = [&nbf](std::array<double, 3> a) { return nbf(a); };
            const std::array<int, 3> d = {t.diff.alpha, t.diff.beta, t.diff.gamma};
            double val = c3_integral(kernel, family, t.scales, t.x, t.diff, bump_fn,
                                     cfg.gl_order, cfg.depth_octaves);
            ConditionReport::Row row;
            row.lhs = std::fabs(val);
            row.rhs = c3_rhs(family, params, t.x, t.diff.h, d, t.R_for_rhs);
            row.ratio = row.lhs / row.rhs;
            if (cfg.quad_check) {
                const double val2 =
                    c3_integral(kernel, family, t.scales, t.x, t.diff, bump_fn,
                                cfg.gl_order + cfg.gl_order / 2 + 1, cfg.depth_octaves);
                const double scale = std::max(std::fabs(val), std::fabs(val2));
                row.flagged = scale > 1e-14 * std::max(1.0, row.rhs) &&
                              std::fabs(val - val2) > cfg.quad_check_rel * scale;
            }
            row.params["R1"] = t.scales[0];
            if (two_scales) row.params["R2"] = t.scales[1];
            row.params["seed"] = static_cast<double>(t.seed);
            for (int a : fixed_axes) {
                row.params["x" + std::to_string(a + 1)] = t.x[a];
                if (d[a] == 1) row.params["h" + std::to_string(a + 1)] = t.diff.h[a];
            }
            row.params["density"] = static_cast<double>(t.density);
            return row;
        };
        auto rows = parallel_map<ConditionReport::Row>(tasks.size(), run, cfg.workers);
        for (auto& row : rows) {
            count += 1;
            rep.quadrature_flagged |= row.flagged;
            if (row.ratio > c_hat) {
                c_hat = row.ratio;
                worst = row.params;
            }
            rep.rows.push_back(std::move(row));
        }
        rep.history.push_back(c_hat);
    }
    rep.sample_count = count;
    rep.c_hat = c_hat;
    rep.worst_sample = std::move(worst);
    const std::size_t hn = rep.history.size();
    rep.stable = hn >= 2 && (std::fabs(rep.history[hn - 1] - rep.history[hn - 2]) <=
                                 0.1 * std::max(rep.history[hn - 1], 1e-300) ||
                             (rep.history[hn - 1] == 0.0 && rep.history[hn - 2] == 0.0));
    return rep;
}

}  // namespace zlab
