#include "zlab/conv_operator.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "zlab/detail/fft3.hpp"
#include "zlab/detail/interp.hpp"
#include "zlab/detail/pairwise.hpp"
#include "zlab/parallel.hpp"
#include "zlab/quadrature.hpp"

namespace zlab {

namespace {

using detail::Fft3;
using detail::next_fast_size;

// truncated-kernel sample for the cell centered at x, cell-averaged when the
// cell touches a truncation face
double truncated_sample(const Kernel& kernel, const TruncationBox& box,
                        const std::array<double, 3>& x, const std::array<double, 3>& h) {
    if (!box.contains(x[0], x[1], x[2])) return 0.0;
    bool near_face = false;
    for (int a = 0; a < 3; ++a) {
        const double d = std::min(std::fabs(x[a]) - box.eps[a],
                                  box.cap[a] - std::fabs(x[a]));
        if (d < h[a]) near_face = true;
    }
    if (!near_face) return kernel.eval(x[0], x[1], x[2]);

    // clip the cell to the box per axis (the cell cannot cross 0: spacing
    // resolves eps)
    std::array<std::pair<double, double>, 3> iv;
    for (int a = 0; a < 3; ++a) {
        double lo = x[a] - 0.5 * h[a], hi = x[a] + 0.5 * h[a];
        if (x[a] > 0.0) {
            lo = std::max(lo, box.eps[a]);
            hi = std::min(hi, box.cap[a]);
        } else {
            lo = std::max(lo, -box.cap[a]);
            hi = std::min(hi, -box.eps[a]);
        }
        if (!(hi > lo)) return 0.0;
        iv[a] = {lo, hi};
    }
    const GLRule& rule = gauss_legendre(4);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double u = 0.5 * (iv[0].first + iv[0].second) +
                         0.5 * (iv[0].second - iv[0].first) * rule.node[i];
        for (int j = 0; j < 4; ++j) {
            const double v = 0.5 * (iv[1].first + iv[1].second) +
                             0.5 * (iv[1].second - iv[1].first) * rule.node[j];
            for (int k = 0; k < 4; ++k) {
                const double w = 0.5 * (iv[2].first + iv[2].second) +
                                 0.5 * (iv[2].second - iv[2].first) * rule.node[k];
                acc += rule.weight[i] * rule.weight[j] * rule.weight[k] *
                       kernel.eval(u, v, w);
            }
        }
    }
    const double vol = 0.125 * (iv[0].second - iv[0].first) *
                       (iv[1].second - iv[1].first) * (iv[2].second - iv[2].first);
    return acc * vol / (h[0] * h[1] * h[2]);
}

}  // namespace

SampledField3 convolve_truncated(const Kernel& kernel, const TruncationBox& box,
                                 const SampledField3& f) {
    const Grid3& g = f.grid;
    const auto h = g.spacing();
    for (int a = 0; a < 3; ++a) {
        if (h[a] > box.eps[a] / 2.0 + 1e-12 * box.eps[a]) {
            std::ostringstream os;
            os << "convolve_truncated: spacing " << h[a] << " on axis " << (a + 1)
               << " does not resolve eps = " << box.eps[a] << " (need h <= "
               << box.eps[a] / 2.0 << ")";
            throw std::invalid_argument(os.str());
        }
    }

    // bounding box of the nonzero samples
    std::array<std::size_t, 3> lo{g.points[0], g.points[1], g.points[2]};
    std::array<std::size_t, 3> hi{0, 0, 0};
    bool any = false;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.points[0]; ++i)
        for (std::size_t j = 0; j < g.points[1]; ++j)
            for (std::size_t k = 0; k < g.points[2]; ++k, ++idx) {
                if (f.values[idx] == 0.0) continue;
                any = true;
                lo = {std::min(lo[0], i), std::min(lo[1], j), std::min(lo[2], k)};
                hi = {std::max(hi[0], i), std::max(hi[1], j), std::max(hi[2], k)};
            }
    SampledField3 out{g, std::vector<double>(g.size(), 0.0)};
    if (!any) return out;

    for (int a = 0; a < 3; ++a) {
        const double supp = std::max(std::fabs(g.coord(a, lo[a])),
                                     std::fabs(g.coord(a, hi[a]))) +
                            0.5 * h[a];
        if (g.half_extent[a] + 1e-12 < box.cap[a] + supp) {
            std::ostringstream os;
            os << "convolve_truncated: extent " << g.half_extent[a] << " on axis "
               << (a + 1) << " does not cover supp(f) + cap (need >= "
               << box.cap[a] + supp << ")";
            throw std::invalid_argument(os.str());
        }
    }

    // kernel difference lattice d = m - p, m output cell, p input cell
    std::array<int, 3> klen, pad;
    for (int a = 0; a < 3; ++a) {
        const int w = static_cast<int>(hi[a] - lo[a]);
        klen[a] = static_cast<int>(g.points[a]) + w;
        pad[a] = next_fast_size(static_cast<int>(g.points[a]) + 2 * w);
    }
    Fft3 fft(pad);

    std::vector<double> kbuf(fft.real_size, 0.0);
    for (int d1 = 0; d1 < klen[0]; ++d1)
        for (int d2 = 0; d2 < klen[1]; ++d2)
            for (int d3 = 0; d3 < klen[2]; ++d3) {
                // offset index d - d_min with d_min = -(hi - lo)
                const std::array<double, 3> x = {
                    (d1 - static_cast<int>(hi[0] - lo[0])) * h[0],
                    (d2 - static_cast<int>(hi[1] - lo[1])) * h[1],
                    (d3 - static_cast<int>(hi[2] - lo[2])) * h[2]};
                const double v = truncated_sample(kernel, box, x, h);
                if (v != 0.0)
                    kbuf[(static_cast<std::size_t>(d1) * pad[1] + d2) * pad[2] + d3] = v;
            }
    auto kspec = fft.forward(kbuf);
    kbuf.clear();
    kbuf.shrink_to_fit();

    std::vector<double> fbuf(fft.real_size, 0.0);
    for (std::size_t i = lo[0]; i <= hi[0]; ++i)
        for (std::size_t j = lo[1]; j <= hi[1]; ++j)
            for (std::size_t k = lo[2]; k <= hi[2]; ++k)
                fbuf[((i - lo[0]) * pad[1] + (j - lo[1])) * pad[2] + (k - lo[2])] =
                    f.values[g.index(i, j, k)];
    auto fspec = fft.forward(fbuf);
    fbuf.clear();
    fbuf.shrink_to_fit();

    for (std::size_t i = 0; i < fft.cplx_size; ++i) kspec[i] *= fspec[i];
    fspec.clear();
    fspec.shrink_to_fit();
    auto conv = fft.inverse(kspec);

    const double vol = g.cell_volume();
    for (std::size_t m1 = 0; m1 < g.points[0]; ++m1)
        for (std::size_t m2 = 0; m2 < g.points[1]; ++m2)
            for (std::size_t m3 = 0; m3 < g.points[2]; ++m3) {
                const std::size_t c1 = m1 + (hi[0] - lo[0]);
                const std::size_t c2 = m2 + (hi[1] - lo[1]);
                const std::size_t c3 = m3 + (hi[2] - lo[2]);
                out.values[g.index(m1, m2, m3)] =
                    vol * conv[(c1 * pad[1] + c2) * pad[2] + c3];
            }
    return out;
}

// ---------------------------------------------------------------------------
// Fourier-bound scan

namespace {

// oscillation-resolved nodes on [eps, cap]
NodeSet scan_axis_nodes(double eps, double cap, double freq, int order) {
    auto panels = subdivide(dyadic_panels(eps, cap), M_PI / (4.0 * std::max(std::fabs(freq), 0.25)));
    return panel_nodes(panels, order);
}

// generic path: iterated tensor quadrature of K e^{-i w.x}
double scan_generic(const Kernel& kernel, const TruncationBox& box,
                    const std::array<double, 3>& w, int order) {
    NodeSet ns[3];
    for (int a = 0; a < 3; ++a) ns[a] = scan_axis_nodes(box.eps[a], box.cap[a], w[a], order);
    // signed coordinates, phases cached per axis
    std::array<std::vector<double>, 3> coord;
    std::array<std::vector<std::complex<double>>, 3> phase;
    for (int a = 0; a < 3; ++a) {
        coord[a].resize(2 * ns[a].size());
        phase[a].resize(2 * ns[a].size());
        for (std::size_t i = 0; i < ns[a].size(); ++i) {
            coord[a][2 * i] = ns[a].x[i];
            coord[a][2 * i + 1] = -ns[a].x[i];
            phase[a][2 * i] = std::polar(1.0, -w[a] * ns[a].x[i]);
            phase[a][2 * i + 1] = std::conj(phase[a][2 * i]);
        }
    }
    auto slab = kernel.tensor_slab_evaluator(coord[0], coord[1], coord[2]);
    const std::size_t n2 = coord[1].size(), n3 = coord[2].size();
    std::vector<double> buf(n2 * n3);
    std::complex<double> total = 0.0;
    for (std::size_t i1 = 0; i1 < coord[0].size(); ++i1) {
        slab(i1, buf);
        std::complex<double> s1 = 0.0;
        for (std::size_t i2 = 0; i2 < n2; ++i2) {
            std::complex<double> s2 = 0.0;
            const double* row = buf.data() + i2 * n3;
            for (std::size_t i3 = 0; i3 < n3; ++i3)
                s2 += ns[2].w[i3 / 2] * phase[2][i3] * row[i3];
            s1 += ns[1].w[i2 / 2] * phase[1][i2] * s2;
        }
        total += ns[0].w[i1 / 2] * phase[0][i1] * s1;
    }
    return std::abs(total);
}

// Closed-form-in-structure path for the sign(x1 x2) g(|x1|) g(|x2|) /
// (a^2 + x3^2) family: the x3 integral depends on (x1, x2) only through
// a = |x1|^alpha |x2|^beta, so it is tabulated over log a and the remaining
// double integral is a sine-sine quadrature.
double scan_nw(const Kernel::NagelWainger& nw, const TruncationBox& box,
               const std::array<double, 3>& w, int order, int table_per_octave) {
    const double a_min = std::pow(box.eps[0], nw.alpha) * std::pow(box.eps[1], nw.beta);
    const double a_max = std::pow(box.cap[0], nw.alpha) * std::pow(box.cap[1], nw.beta);
    const double t_lo = std::log(a_min), t_hi = std::log(a_max);
    const int nt = std::max(
        8, static_cast<int>(std::ceil((t_hi - t_lo) / M_LN2 * table_per_octave)) + 1);
    std::vector<double> tab(nt);
    const auto panels3 = subdivide(dyadic_panels(box.eps[2], box.cap[2]),
                                   M_PI / (4.0 * std::max(std::fabs(w[2]), 0.25)));
    for (int i = 0; i < nt; ++i) {
        const double a = std::exp(t_lo + (t_hi - t_lo) * i / (nt - 1));
        tab[i] = 2.0 * integrate(panels3, order, [&](double u3) {
                     return std::cos(w[2] * u3) / (a * a + u3 * u3);
                 });
    }
    detail::CubicTable itab(t_lo, (t_hi - t_lo) / (nt - 1), std::move(tab));

    const NodeSet n1 = scan_axis_nodes(box.eps[0], box.cap[0], w[0], order);
    const NodeSet n2 = scan_axis_nodes(box.eps[1], box.cap[1], w[1], order);
    std::vector<double> f1(n1.size()), f2(n2.size());
    for (std::size_t i = 0; i < n1.size(); ++i)
        f1[i] = n1.w[i] * std::pow(n1.x[i], nw.alpha - 1.0) * std::sin(w[0] * n1.x[i]);
    for (std::size_t i = 0; i < n2.size(); ++i)
        f2[i] = n2.w[i] * std::pow(n2.x[i], nw.beta - 1.0) * std::sin(w[1] * n2.x[i]);
    std::vector<double> rows(n1.size());
    std::vector<double> terms(n2.size());
    for (std::size_t i = 0; i < n1.size(); ++i) {
        const double la = nw.alpha * std::log(n1.x[i]);
        for (std::size_t j = 0; j < n2.size(); ++j)
            terms[j] = f2[j] * itab(la + nw.beta * std::log(n2.x[j]));
        rows[i] = f1[i] * detail::pairwise_sum(terms);
    }
    return std::fabs(-4.0 * detail::pairwise_sum(rows));
}

double scan_one(const Kernel& kernel, const TruncationBox& box,
                const std::array<double, 3>& w, int order, int table_per_octave) {
    if (std::holds_alternative<Kernel::Zero>(kernel.variant())) return 0.0;
    if (const auto* nw = std::get_if<Kernel::NagelWainger>(&kernel.variant()))
        return scan_nw(*nw, box, w, order, table_per_octave);
    return scan_generic(kernel, box, w, order);
}

FrequencyScan run_scan(const Kernel& kernel, const TruncationBox& box,
                       std::vector<std::array<double, 3>> freqs, const ScanOptions& opts) {
    if (freqs.empty())
        throw std::invalid_argument("fourier_bound_scan: empty frequency schedule");
    FrequencyScan scan;
    scan.frequencies = std::move(freqs);
    scan.magnitudes.resize(scan.frequencies.size());
    scan.flagged.assign(scan.frequencies.size(), 0);
    const std::function<std::pair<double, char>(std::size_t)> run =
        [&](std::size_t i) -> std::pair<double, char> {
        const auto& w = scan.frequencies[i];
        const double m = scan_one(kernel, box, w, opts.gl_order, 24);
        char flag = 0;
        if (opts.convergence_check) {
            const double m2 = scan_one(kernel, box, w, opts.gl_order + 8, 36);
            const double scale = std::max(m, m2);
            flag = scale > 1e-14 && std::fabs(m - m2) > opts.check_rel * scale;
        }
        return {m, flag};
    };
    auto vals =
        parallel_map<std::pair<double, char>>(scan.frequencies.size(), run, opts.workers);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        scan.magnitudes[i] = vals[i].first;
        scan.flagged[i] = vals[i].second;
        scan.sup = std::max(scan.sup, vals[i].first);
    }
    return scan;
}

}  // namespace

FrequencyScan fourier_bound_scan(const Kernel& kernel, const TruncationBox& box,
                                 std::span<const double> xi_schedule, ScanMode mode,
                                 const ScanOptions& opts) {
    (void)mode;  // reduced mode pins (chi, eta) = (1, 1)
    std::vector<std::array<double, 3>> freqs;
    freqs.reserve(xi_schedule.size());
    for (double xi : xi_schedule) freqs.push_back({1.0, 1.0, xi});
    return run_scan(kernel, box, std::move(freqs), opts);
}

FrequencyScan fourier_bound_scan(const Kernel& kernel, const TruncationBox& box,
                                 std::span<const std::array<double, 3>> frequencies,
                                 const ScanOptions& opts) {
    return run_scan(kernel, box,
                    std::vector<std::array<double, 3>>(frequencies.begin(),
                                                       frequencies.end()),
                    opts);
}

// ---------------------------------------------------------------------------
// probes

ProbeResult operator_norm_probe(const Kernel& kernel, const TruncationBox& box,
                                std::span<const SampledField3> tests, double p) {
    if (tests.empty())
        throw std::invalid_argument("operator_norm_probe: empty test family");
    ProbeResult res;
    res.p = p;
    for (const SampledField3& f : tests) {
        const double nf = lp_norm(f, p);
        if (!(nf > 0.0))
            throw std::invalid_argument("operator_norm_probe: zero test function");
        const SampledField3 tf = convolve_truncated(kernel, box, f);
        res.ratios.push_back(lp_norm(tf, p) / nf);
    }
    for (double r : res.ratios) res.max_ratio = std::max(res.max_ratio, r);
    return res;
}

std::vector<double> truncation_convergence_probe(const Kernel& kernel,
                                                 const SampledField3& f,
                                                 std::span<const TruncationBox> schedule) {
    for (std::size_t m = 0; m + 1 < schedule.size(); ++m)
        for (int a = 0; a < 3; ++a)
            if (!(schedule[m + 1].eps[a] < schedule[m].eps[a]) ||
                !(schedule[m + 1].cap[a] > schedule[m].cap[a]))
                throw std::invalid_argument(
                    "truncation_convergence_probe: schedule must widen strictly");
    std::vector<double> distances;
    if (schedule.size() < 2) return distances;
    SampledField3 prev = convolve_truncated(kernel, schedule[0], f);
    for (std::size_t m = 1; m < schedule.size(); ++m) {
        SampledField3 cur = convolve_truncated(kernel, schedule[m], f);
        distances.push_back(lp_distance(cur, prev, 2.0));
        prev = std::move(cur);
    }
    return distances;
}

}  // namespace zlab
