#include "zlab/bumps.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

#include "zlab/detail/interp.hpp"
#include "zlab/detail/pairwise.hpp"
#include "zlab/detail/taylor.hpp"
#include "zlab/quadrature.hpp"
#include "zlab/rng.hpp"

namespace zlab {

namespace {

// ---------------------------------------------------------------------------
// annulus window with exact dyadic normalization

// smooth 0 -> 1 transition on [0, 1]
double glue(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// C-infinity, positive exactly on (1/2, 2), transition bands [1/2,1] and [1,2]
double annulus_window(double u) {
    if (u <= 0.5 || u >= 2.0) return 0.0;
    return glue(2.0 * u - 1.0) * glue(2.0 - u);
}

// sum_j W(2^j u); the window spans one octave pair, so at most two terms are
// active and the sum is invariant under u -> 2u by construction
double window_partition_sum(double u) {
    const double l = std::log2(u);
    const int j_lo = static_cast<int>(std::ceil(-1.0 - l));
    const int j_hi = static_cast<int>(std::floor(1.0 - l));
    double s = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) s += annulus_window(std::ldexp(u, j));
    return s;
}

// normalized window: sum_j w(2^j u)^2 = 1 for all u > 0
double meyer_window(double u) {
    if (u <= 0.5 || u >= 2.0) return 0.0;
    return std::sqrt(annulus_window(u) / window_partition_sum(u));
}

// ---------------------------------------------------------------------------
// compactly supported profile: 12th derivative of the standard mollifier

constexpr int kDerivOrder = 12;
constexpr double kFreqTabMax = 400.0;

struct MollifierProfile {
    detail::CubicTable spatial;  // psi on [0, 1], even extension implied
    detail::CubicTable freq;     // psi-hat on [0, kFreqTabMax], even
    double sup = 0.0;
    double freq_lo = 0.0, freq_hi = kFreqTabMax;  // where |psi-hat| matters
};

MollifierProfile build_mollifier_profile() {
    MollifierProfile p;
    // 12th derivative via jet arithmetic, normalized to sup 1
    const std::size_t n = 8193;
    const double dx = 1.0 / static_cast<double>(n - 1);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * dx;
        if (x >= 1.0 - 1e-9) {
            vals[i] = 0.0;
            continue;
        }
        vals[i] = detail::mollifier_jet<kDerivOrder + 1>(x).derivative(kDerivOrder);
    }
    double sup = 0.0;
    for (double v : vals) sup = std::max(sup, std::fabs(v));
    for (double& v : vals) v /= sup;
    p.spatial = detail::CubicTable(0.0, dx, std::move(vals));
    p.sup = 1.0;

    // cosine transform: psi-hat(xi) = 2 int_0^1 psi cos(xi x) dx
    const std::size_t nf = 6401;
    const double df = kFreqTabMax / static_cast<double>(nf - 1);
    std::vector<double> fv(nf);
    std::vector<Panel> base{{0.0, 1.0}};
    for (std::size_t i = 0; i < nf; ++i) {
        const double xi = static_cast<double>(i) * df;
        const auto panels = subdivide(base, M_PI / (4.0 * std::max(xi, 1.0)));
        fv[i] = 2.0 * integrate(panels, 16, [&](double x) {
                    return p.spatial(x) * std::cos(xi * x);
                });
    }
    p.freq = detail::CubicTable(0.0, df, std::move(fv));
    // effective frequency support for partition sums
    double fm = p.freq.max_abs();
    double lo = 0.0, hi = kFreqTabMax;
    for (double u = df; u < kFreqTabMax; u += df)
        if (std::fabs(p.freq(u)) > 1e-11 * fm) {
            lo = std::max(0.0, u - df);
            break;
        }
    for (double u = kFreqTabMax - df; u > 0; u -= df)
        if (std::fabs(p.freq(u)) > 1e-11 * fm) {
            hi = std::min(kFreqTabMax, u + df);
            break;
        }
    p.freq_lo = lo;
    p.freq_hi = hi;
    return p;
}

const MollifierProfile& mollifier_profile() {
    static const MollifierProfile p = build_mollifier_profile();
    return p;
}

// ---------------------------------------------------------------------------
// spatial profiles of the annulus-window pair (tabulated transforms)

constexpr double kSpatialTabMax = 48.0;

struct FourierProfiles {
    detail::CubicTable phi1;       // on [0, kSpatialTabMax]
    detail::CubicTable phi2;       // radial profile, same range
    double sup1 = 0.0, sup2 = 0.0;
    double decay1 = 0.0, decay2 = 0.0;  // |phi| <= decay/(1+r)^8 beyond the core
};

FourierProfiles build_fourier_profiles() {
    FourierProfiles f;
    const std::size_t n = 12289;
    const double dx = kSpatialTabMax / static_cast<double>(n - 1);
    const std::vector<Panel> base{{0.5, 2.0}};
    std::vector<double> v1(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * dx;
        const auto panels = subdivide(base, M_PI / (4.0 * std::max(x, 1.0)));
        v1[i] = (1.0 / M_PI) * integrate(panels, 16, [&](double u) {
                    return meyer_window(u) * std::cos(x * u);
                });
        v2[i] = (1.0 / (2.0 * M_PI)) * integrate(panels, 16, [&](double u) {
                    return meyer_window(u) * ::j0(x * u) * u;
                });
    }
    auto envelope = [&](const std::vector<double>& v) {
        double a = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = static_cast<double>(i) * dx;
            a = std::max(a, std::fabs(v[i]) * std::pow(1.0 + x, 8));
        }
        return 2.0 * a;
    };
    f.decay1 = envelope(v1);
    f.decay2 = envelope(v2);
    for (double x : v1) f.sup1 = std::max(f.sup1, std::fabs(x));
    for (double x : v2) f.sup2 = std::max(f.sup2, std::fabs(x));
    f.phi1 = detail::CubicTable(0.0, dx, std::move(v1));
    f.phi2 = detail::CubicTable(0.0, dx, std::move(v2));
    return f;
}

const FourierProfiles& fourier_profiles() {
    static const FourierProfiles f = build_fourier_profiles();
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bump1D / Bump2D

struct Bump1D::Impl {
    BumpKind kind;
    double radius;       // support (spatial) or table cutoff (fourier)
    double scale = 1.0;  // spatial dilation of the base profile
    double amp = 1.0;    // overall normalization
    double sup = 0.0;
    double decay = 0.0;  // fourier kind envelope constant
};

struct Bump2D::Impl {
    BumpKind kind;
    double radius;
    double scale = 1.0;  // per-factor dilation (spatial tensor kind)
    double amp = 1.0;
    double sup = 0.0;
    double decay = 0.0;
};

BumpKind Bump1D::kind() const { return impl_->kind; }
double Bump1D::support_radius() const { return impl_->radius; }
double Bump1D::sup_norm() const { return impl_->sup; }

double Bump1D::spatial(double x) const {
    const Impl& im = *impl_;
    if (im.kind == BumpKind::fourier_exact)
        return im.amp * fourier_profiles().phi1(std::fabs(x));
    return im.amp * mollifier_profile().spatial(std::fabs(x) / im.scale);
}

double Bump1D::frequency(double xi) const {
    const Impl& im = *impl_;
    if (im.kind == BumpKind::fourier_exact) return meyer_window(std::fabs(xi));
    return im.amp * im.scale * mollifier_profile().freq(im.scale * std::fabs(xi));
}

double Bump1D::decay_bound(double r) const {
    const Impl& im = *impl_;
    if (im.kind == BumpKind::spatial_compact)
        return std::fabs(r) >= im.radius ? 0.0 : im.sup;
    return im.decay / std::pow(1.0 + std::fabs(r), 8);
}

double Bump1D::partition_sum(double xi) const {
    const Impl& im = *impl_;
    const double u = std::fabs(xi);
    if (u == 0.0) throw std::domain_error("partition_sum: xi = 0 is excluded");
    if (im.kind == BumpKind::fourier_exact) {
        const double l = std::log2(u);
        const int j_lo = static_cast<int>(std::ceil(-1.0 - l)) - 1;
        const int j_hi = static_cast<int>(std::floor(1.0 - l)) + 1;
        double s = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double w = meyer_window(std::ldexp(u, j));
            s += w * w;
        }
        return s;
    }
    const MollifierProfile& mp = mollifier_profile();
    const double su = im.scale * u;
    const int j_lo = static_cast<int>(std::floor(std::log2(std::max(mp.freq_lo, 1e-8) / su)));
    const int j_hi = static_cast<int>(std::ceil(std::log2(mp.freq_hi / su)));
    double s = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double w = frequency(std::ldexp(u, j));
        s += w * w;
    }
    return s;
}

BumpKind Bump2D::kind() const { return impl_->kind; }
double Bump2D::support_radius() const { return impl_->radius; }
double Bump2D::sup_norm() const { return impl_->sup; }

double Bump2D::spatial(double x2, double x3) const {
    const Impl& im = *impl_;
    if (im.kind == BumpKind::fourier_exact)
        return im.amp * fourier_profiles().phi2(std::hypot(x2, x3));
    const auto& sp = mollifier_profile().spatial;
    return im.amp * sp(std::fabs(x2) / im.scale) * sp(std::fabs(x3) / im.scale);
}

double Bump2D::frequency(double xi2, double xi3) const {
    const Impl& im = *impl_;
    if (im.kind == BumpKind::fourier_exact)
        return meyer_window(std::hypot(xi2, xi3));
    const auto& fr = mollifier_profile().freq;
    const double s = im.scale;
    return im.amp * s * s * fr(s * std::fabs(xi2)) * fr(s * std::fabs(xi3));
}

double Bump2D::decay_bound(double r) const {
    const Impl& im = *impl_;
    if (im.kind == BumpKind::spatial_compact)
        return std::fabs(r) >= im.radius ? 0.0 : im.sup;
    return im.decay / std::pow(1.0 + std::fabs(r), 8);
}

bool Bump2D::is_tensor() const { return impl_->kind == BumpKind::spatial_compact; }

double Bump2D::tensor_factor(double u) const {
    const Impl& im = *impl_;
    if (im.kind != BumpKind::spatial_compact)
        throw std::logic_error("tensor_factor: radial profile has no tensor factor");
    return std::sqrt(im.amp) * mollifier_profile().spatial(std::fabs(u) / im.scale);
}

double Bump2D::tensor_factor_radius() const {
    if (impl_->kind != BumpKind::spatial_compact)
        throw std::logic_error("tensor_factor_radius: radial profile");
    return impl_->scale;
}

double Bump2D::partition_sum(double xi2, double xi3) const {
    const Impl& im = *impl_;
    const double rho = std::hypot(xi2, xi3);
    if (rho == 0.0) throw std::domain_error("partition_sum: (xi2, xi3) = 0 is excluded");
    if (im.kind == BumpKind::fourier_exact) {
        const double l = std::log2(rho);
        const int k_lo = static_cast<int>(std::ceil(-1.0 - l)) - 1;
        const int k_hi = static_cast<int>(std::floor(1.0 - l)) + 1;
        double s = 0.0;
        for (int k = k_lo; k <= k_hi; ++k) {
            const double w = meyer_window(std::ldexp(rho, k));
            s += w * w;
        }
        return s;
    }
    const MollifierProfile& mp = mollifier_profile();
    const double m = im.scale * std::max(std::fabs(xi2), std::fabs(xi3));
    const int k_lo = static_cast<int>(std::floor(std::log2(std::max(mp.freq_lo, 1e-8) / std::max(m, 1e-300))));
    const int k_hi = static_cast<int>(std::ceil(std::log2(mp.freq_hi / std::max(m, 1e-300))));
    double s = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double w = frequency(std::ldexp(xi2, k), std::ldexp(xi3, k));
        s += w * w;
    }
    return s;
}

// ---------------------------------------------------------------------------
// pair construction

BumpPair build_fourier_bumps() {
    const FourierProfiles& fp = fourier_profiles();
    static std::shared_ptr<const Bump1D::Impl> i1 = [&] {
        auto p = std::make_shared<Bump1D::Impl>();
        p->kind = BumpKind::fourier_exact;
        p->radius = kSpatialTabMax;
        p->sup = fp.sup1;
        p->decay = fp.decay1;
        return p;
    }();
    static std::shared_ptr<const Bump2D::Impl> i2 = [&] {
        auto p = std::make_shared<Bump2D::Impl>();
        p->kind = BumpKind::fourier_exact;
        p->radius = kSpatialTabMax;
        p->sup = fp.sup2;
        p->decay = fp.decay2;
        return p;
    }();
    return BumpPair{Bump1D(i1), Bump2D(i2)};
}

namespace {

// mean of the dyadic partition sum over one octave, used to put the
// spatial-compact pair on the same footing as the exact one
double octave_mean_partition_1d(double scale) {
    double acc = 0.0;
    const int n = 64;
    const MollifierProfile& mp = mollifier_profile();
    for (int i = 0; i < n; ++i) {
        const double u = std::exp2(static_cast<double>(i) / n);  // [1, 2)
        const double su = scale * u;
        const int j_lo = static_cast<int>(std::floor(std::log2(std::max(mp.freq_lo, 1e-8) / su)));
        const int j_hi = static_cast<int>(std::ceil(std::log2(mp.freq_hi / su)));
        double s = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double w = scale * mp.freq(scale * std::ldexp(u, j));
            s += w * w;
        }
        acc += s;
    }
    return acc / n;
}

double octave_mean_partition_2d(double scale) {
    double acc = 0.0;
    const int nr = 16, na = 8;
    const MollifierProfile& mp = mollifier_profile();
    for (int i = 0; i < nr; ++i) {
        const double rho = std::exp2(static_cast<double>(i) / nr);
        for (int a = 0; a < na; ++a) {
            const double th = (a + 0.5) * (M_PI / 2.0) / na;
            const double u2 = rho * std::cos(th), u3 = rho * std::sin(th);
            const double m = scale * std::max(u2, u3);
            const int k_lo = static_cast<int>(std::floor(std::log2(std::max(mp.freq_lo, 1e-8) / m)));
            const int k_hi = static_cast<int>(std::ceil(std::log2(mp.freq_hi / m)));
            double s = 0.0;
            for (int k = k_lo; k <= k_hi; ++k) {
                const double w = scale * scale * mp.freq(scale * std::ldexp(u2, k)) *
                                 mp.freq(scale * std::ldexp(u3, k));
                s += w * w;
            }
            acc += s;
        }
    }
    return acc / (nr * na);
}

}  // namespace

BumpPair build_spatial_bumps(double support_radius) {
    if (!(support_radius > 0.0))
        throw std::invalid_argument("build_spatial_bumps: support_radius must be > 0");
    if (support_radius > 1.0)
        throw std::invalid_argument("build_spatial_bumps: support_radius must be <= 1");
    static std::map<double, BumpPair> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(support_radius);
    if (it != cache.end()) return it->second;

    // octave_mean_partition_* already folds in the dilation factors, so amp
    // alone brings the dyadic partition sum to mean 1 over an octave
    const MollifierProfile& mp = mollifier_profile();
    auto i1 = std::make_shared<Bump1D::Impl>();
    i1->kind = BumpKind::spatial_compact;
    i1->radius = support_radius;
    i1->scale = support_radius;
    i1->amp = 1.0 / std::sqrt(octave_mean_partition_1d(support_radius));
    i1->sup = i1->amp * mp.sup;

    const double s2 = support_radius / std::sqrt(2.0);
    auto i2 = std::make_shared<Bump2D::Impl>();
    i2->kind = BumpKind::spatial_compact;
    i2->radius = support_radius;
    i2->scale = s2;
    i2->amp = 1.0 / std::sqrt(octave_mean_partition_2d(s2));
    i2->sup = i2->amp * mp.sup * mp.sup;

    BumpPair pair{Bump1D(i1), Bump2D(i2)};
    cache.emplace(support_radius, pair);
    return pair;
}

std::string BumpPair::descriptor_json() const {
    nlohmann::json j;
    if (kind() == BumpKind::fourier_exact) {
        j["kind"] = "fourier_exact";
        j["window"] = {{"support", {0.5, 2.0}}, {"glue", "exp(-1/t)"}};
    } else {
        j["kind"] = "spatial_compact";
        j["support_radius"] = phi1.support_radius();
        j["derivative_order"] = kDerivOrder;
    }
    j["moment_order"] = 10;
    return j.dump(2);
}

BumpPair bump_pair_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fourier_exact") return build_fourier_bumps();
    if (kind == "spatial_compact")
        return build_spatial_bumps(j.at("support_radius").get<double>());
    throw std::invalid_argument("bump_pair_from_json: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// partition defect / moments

FrequencySamples log_frequency_samples(double lo, double hi, std::size_t count) {
    FrequencySamples s;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        const double xi = lo * std::pow(hi / lo, t);
        s.xi1.push_back(xi);
        // spread the 2D samples over directions as the magnitude sweeps
        const double th = 0.1 + 1.4 * std::fmod(static_cast<double>(i) * 0.61803398875, 1.0);
        s.xi23.push_back({xi * std::cos(th), xi * std::sin(th)});
    }
    return s;
}

double partition_defect(const BumpPair& pair, const FrequencySamples& samples) {
    if (samples.xi1.empty() && samples.xi23.empty())
        throw std::invalid_argument("partition_defect: empty sample set");
    double defect = 0.0;
    for (double xi : samples.xi1) {
        if (xi == 0.0) throw std::domain_error("partition_defect: xi1 = 0 excluded");
        defect = std::max(defect, std::fabs(pair.phi1.partition_sum(xi) - 1.0));
    }
    for (const auto& q : samples.xi23) {
        if (q[0] == 0.0 && q[1] == 0.0)
            throw std::domain_error("partition_defect: (xi2, xi3) = 0 excluded");
        defect = std::max(defect, std::fabs(pair.phi2.partition_sum(q[0], q[1]) - 1.0));
    }
    return defect;
}

double moment(const Bump1D& bump, int alpha) {
    if (alpha < 0) throw std::invalid_argument("moment: negative order");
    if (bump.kind() == BumpKind::fourier_exact) return 0.0;
    const double R = bump.support_radius();
    const auto panels = subdivide({{0.0, R}}, R / 64.0);
    // evaluate +/- x together so odd orders cancel exactly
    return integrate(panels, 16, [&](double x) {
        const double sym = std::pow(x, alpha) + std::pow(-x, alpha);
        return sym * bump.spatial(x);
    });
}

double moment(const Bump2D& bump, int beta, int gamma) {
    if (beta < 0 || gamma < 0) throw std::invalid_argument("moment: negative order");
    if (bump.kind() == BumpKind::fourier_exact) return 0.0;
    const double R = bump.support_radius();
    const auto panels = subdivide({{0.0, R}}, R / 64.0);
    const auto nodes = panel_nodes(panels, 16);
    std::vector<double> rows(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const double x2 = nodes.x[a];
        std::vector<double> terms(nodes.size());
        for (std::size_t b = 0; b < nodes.size(); ++b) {
            const double x3 = nodes.x[b];
            double cell = 0.0;
            for (double s2 : {1.0, -1.0})
                for (double s3 : {1.0, -1.0})
                    cell += std::pow(s2 * x2, beta) * std::pow(s3 * x3, gamma) *
                            bump.spatial(s2 * x2, s3 * x3);
            terms[b] = nodes.w[b] * cell;
        }
        rows[a] = nodes.w[a] * detail::pairwise_sum(terms);
    }
    return detail::pairwise_sum(rows);
}

// ---------------------------------------------------------------------------
// normalized bump functions

struct NormalizedBump::Impl {
    int dim = 1;
    std::uint64_t seed = 0;
    struct Wave {
        std::array<double, 3> k;
        double amp, phase;
    };
    std::vector<Wave> waves;
    double norm = 1.0;
};

namespace {

double nbf_raw(const NormalizedBump::Impl& im, const std::array<double, 3>& x) {
    double s = 0.0;
    for (int a = 0; a < im.dim; ++a) s += x[a] * x[a];
    if (s >= 1.0) return 0.0;
    const double mol = std::exp(1.0 - 1.0 / (1.0 - s));
    double t = 0.0;
    for (const auto& w : im.waves) {
        double ph = w.phase;
        for (int a = 0; a < im.dim; ++a) ph += M_PI * w.k[a] * x[a];
        t += w.amp * std::cos(ph);
    }
    return mol * t;
}

std::array<double, 3> nbf_raw_grad(const NormalizedBump::Impl& im,
                                   const std::array<double, 3>& x) {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    double s = 0.0;
    for (int a = 0; a < im.dim; ++a) s += x[a] * x[a];
    if (s >= 1.0) return g;
    const double om = 1.0 - s;
    const double mol = std::exp(1.0 - 1.0 / om);
    const double dmol = -mol / (om * om);  // d/ds
    double t = 0.0;
    std::array<double, 3> dt{0.0, 0.0, 0.0};
    for (const auto& w : im.waves) {
        double ph = w.phase;
        for (int a = 0; a < im.dim; ++a) ph += M_PI * w.k[a] * x[a];
        t += w.amp * std::cos(ph);
        const double d = -w.amp * std::sin(ph) * M_PI;
        for (int a = 0; a < im.dim; ++a) dt[a] += d * w.k[a];
    }
    for (int a = 0; a < im.dim; ++a) g[a] = dmol * 2.0 * x[a] * t + mol * dt[a];
    return g;
}

}  // namespace

int NormalizedBump::dimension() const { return impl_->dim; }
std::uint64_t NormalizedBump::seed() const { return impl_->seed; }

double NormalizedBump::operator()(std::array<double, 3> x) const {
    return impl_->norm * nbf_raw(*impl_, x);
}
double NormalizedBump::eval1(double x) const { return (*this)({x, 0.0, 0.0}); }
double NormalizedBump::eval2(double x2, double x3) const {
    return (*this)({x2, x3, 0.0});
}

NormalizedBump make_nbf(int dimension, std::uint64_t seed) {
    if (dimension < 1 || dimension > 3)
        throw std::invalid_argument("make_nbf: dimension must be 1, 2 or 3");
    static std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const NormalizedBump::Impl>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({dimension, seed});
        if (it != cache.end()) return NormalizedBump(it->second);
    }

    auto im = std::make_shared<NormalizedBump::Impl>();
    im->dim = dimension;
    im->seed = seed;
    Rng rng(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(dimension));
    const int waves = 6;
    for (int i = 0; i < waves; ++i) {
        NormalizedBump::Impl::Wave w{};
        for (int a = 0; a < dimension; ++a)
            w.k[a] = static_cast<double>(rng.uniform_int(-2, 2));
        w.amp = rng.uniform(-1.0, 1.0);
        w.phase = rng.uniform(0.0, 2.0 * M_PI);
        im->waves.push_back(w);
    }
    // normalize sup |phi| and sup |grad phi| on a dense grid, with margin
    const int n = dimension == 1 ? 8192 : (dimension == 2 ? 512 : 96);
    double m = 0.0;
    std::array<double, 3> x{0.0, 0.0, 0.0};
    auto visit = [&](const std::array<double, 3>& pt) {
        m = std::max(m, std::fabs(nbf_raw(*im, pt)));
        const auto g = nbf_raw_grad(*im, pt);
        m = std::max(m, std::hypot(g[0], std::hypot(g[1], g[2])));
    };
    if (dimension == 1) {
        for (int i = 0; i <= n; ++i) visit({-1.0 + 2.0 * i / n, 0.0, 0.0});
    } else if (dimension == 2) {
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) visit({-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n, 0.0});
    } else {
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= n; ++k)
                    visit({-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n, -1.0 + 2.0 * k / n});
    }
    (void)x;
    im->norm = (m > 0.0) ? 0.98 / m : 1.0;

    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.emplace(std::make_pair(dimension, seed), im);
    return NormalizedBump(it->second);
}

}  // namespace zlab
