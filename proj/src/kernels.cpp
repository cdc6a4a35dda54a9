#include "zlab/kernels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace zlab {

namespace {

[[noreturn]] void plane_error(double x1, double x2, double x3) {
    std::ostringstream os;
    os << "kernel eval on a coordinate plane: (" << x1 << ", " << x2 << ", " << x3
       << ")";
    throw std::domain_error(os.str());
}

double eval_nw(const Kernel::NagelWainger& nw, double x1, double x2, double x3) {
    // finite whenever x1, x2 != 0; the x3 = 0 plane is regular for this
    // closed form
    if (x1 == 0.0 || x2 == 0.0) plane_error(x1, x2, x3);
    const double a1 = std::fabs(x1), a2 = std::fabs(x2);
    const double sign = (x1 > 0.0 ? 1.0 : -1.0) * (x2 > 0.0 ? 1.0 : -1.0);
    if (nw.alpha == 1.0 && nw.beta == 1.0) {
        return sign / (a1 * a1 * a2 * a2 + x3 * x3);
    }
    const double num = std::pow(a1, nw.alpha - 1.0) * std::pow(a2, nw.beta - 1.0);
    const double den = std::pow(a1, 2.0 * nw.alpha) * std::pow(a2, 2.0 * nw.beta) +
                       x3 * x3;
    return sign * num / den;
}

double eval_rs(const Kernel::RicciStein& rs, double x1, double x2, double x3) {
    if (x1 == 0.0 || x2 == 0.0 || x3 == 0.0) plane_error(x1, x2, x3);
    const Bump1D& b1 = rs.bumps.phi1;
    const Bump2D& b2 = rs.bumps.phi2;
    const double decay2_sup = b2.decay_bound(0.0);
    double sum = 0.0;
    for (int j = rs.j_lo; j <= rs.j_hi; ++j) {
        const double u1 = std::ldexp(x1, j);
        const double aj = std::ldexp(b1.spatial(u1), 2 * j);
        if (aj == 0.0) continue;
        const double abs_aj = std::fabs(aj);
        for (int k = rs.k_lo; k <= rs.k_hi; ++k) {
            const double u2 = std::ldexp(x2, k);
            const double u3 = std::ldexp(x3, j + k);
            const double rho = std::hypot(u2, u3);
            // term bound from the bump envelopes; negligible terms are skipped
            const double bound =
                std::ldexp(abs_aj * std::min(b2.decay_bound(rho), decay2_sup), 2 * k);
            if (bound == 0.0 || bound < 1e-16 * std::fabs(sum)) continue;
            sum += aj * std::ldexp(b2.spatial(u2, u3), 2 * k);
        }
    }
    return sum;
}

}  // namespace

bool TruncationBox::contains(double x1, double x2, double x3) const {
    const double a1 = std::fabs(x1), a2 = std::fabs(x2), a3 = std::fabs(x3);
    return a1 >= eps[0] && a1 <= cap[0] && a2 >= eps[1] && a2 <= cap[1] &&
           a3 >= eps[2] && a3 <= cap[2];
}

TruncationBox make_truncation_box(const std::array<double, 3>& eps,
                                  const std::array<double, 3>& cap) {
    for (int a = 0; a < 3; ++a) {
        if (!(eps[a] > 0.0) || !(cap[a] >= eps[a]))
            throw std::invalid_argument(
                "make_truncation_box: need 0 < eps[i] <= cap[i]");
    }
    return TruncationBox{eps, cap};
}

Kernel Kernel::zero() { return Kernel(Variant(Zero{})); }

Kernel Kernel::nagel_wainger(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("nagel_wainger: alpha, beta must be > 0");
    return Kernel(Variant(NagelWainger{alpha, beta}));
}

double Kernel::eval(double x1, double x2, double x3) const {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Zero>) {
                if (x1 == 0.0 || x2 == 0.0 || x3 == 0.0) plane_error(x1, x2, x3);
                return 0.0;
            } else if constexpr (std::is_same_v<T, NagelWainger>) {
                return eval_nw(k, x1, x2, x3);
            } else if constexpr (std::is_same_v<T, RicciStein>) {
                return eval_rs(k, x1, x2, x3);
            } else if constexpr (std::is_same_v<T, Dilated>) {
                const double s = k.s, t = k.t;
                return s * s * t * t * k.base->eval(s * x1, t * x2, s * t * x3);
            } else {
                if (!std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(x3))
                    throw std::domain_error("truncated kernel: non-finite point");
                if (!k.box.contains(x1, x2, x3)) return 0.0;
                return k.base->eval(x1, x2, x3);
            }
        },
        *v_);
}

std::function<void(std::size_t, std::span<double>)> Kernel::tensor_slab_evaluator(
    std::vector<double> x1, std::vector<double> x2, std::vector<double> x3) const {
    if (const auto* rs = std::get_if<RicciStein>(v_.get())) {
        // factor the double sum: K = sum_j A_j(x1) G_j(x2, x3) with
        // G_j = sum_k 2^(2k) phi2(2^k x2, 2^(j+k) x3)
        const int nj = rs->j_hi - rs->j_lo + 1;
        const std::size_t n2 = x2.size(), n3 = x3.size();
        auto G = std::make_shared<std::vector<double>>(n2 * n3 * nj);
        const Bump2D& b2 = rs->bumps.phi2;
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3) {
                double* row = G->data() + (i2 * n3 + i3) * nj;
                for (int j = rs->j_lo; j <= rs->j_hi; ++j) {
                    double g = 0.0;
                    for (int k = rs->k_lo; k <= rs->k_hi; ++k) {
                        const double v = b2.spatial(std::ldexp(x2[i2], k),
                                                    std::ldexp(x3[i3], j + k));
                        if (v != 0.0) g += std::ldexp(v, 2 * k);
                    }
                    row[j - rs->j_lo] = g;
                }
            }
        const Bump1D b1 = rs->bumps.phi1;
        const int j_lo = rs->j_lo;
        auto xs1 = std::make_shared<std::vector<double>>(std::move(x1));
        return [G, b1, j_lo, nj, n2, n3, xs1](std::size_t i1, std::span<double> out) {
            std::vector<double> A(nj);
            for (int a = 0; a < nj; ++a)
                A[a] = std::ldexp(b1.spatial(std::ldexp((*xs1)[i1], j_lo + a)),
                                  2 * (j_lo + a));
            for (std::size_t r = 0; r < n2 * n3; ++r) {
                const double* row = G->data() + r * nj;
                double s = 0.0;
                for (int a = 0; a < nj; ++a) s += A[a] * row[a];
                out[r] = s;
            }
        };
    }
    auto self = *this;
    auto xs1 = std::make_shared<std::vector<double>>(std::move(x1));
    auto xs2 = std::make_shared<std::vector<double>>(std::move(x2));
    auto xs3 = std::make_shared<std::vector<double>>(std::move(x3));
    return [self, xs1, xs2, xs3](std::size_t i1, std::span<double> out) {
        const double u1 = (*xs1)[i1];
        std::size_t idx = 0;
        for (double u2 : *xs2)
            for (double u3 : *xs3) out[idx++] = self.eval(u1, u2, u3);
    };
}

Kernel zygmund_dilate(const Kernel& k, double s, double t) {
    if (!(s > 0.0) || !(t > 0.0))
        throw std::invalid_argument("zygmund_dilate: s, t must be > 0");
    return Kernel(Kernel::Variant(
        Kernel::Dilated{std::make_shared<const Kernel>(k), s, t}));
}

Kernel synth_ricci_stein(const BumpPair& bumps, std::pair<int, int> j_range,
                         std::pair<int, int> k_range) {
    if (j_range.first > j_range.second || k_range.first > k_range.second)
        throw std::invalid_argument("synth_ricci_stein: empty index range");
    return Kernel(Kernel::Variant(Kernel::RicciStein{
        bumps, j_range.first, j_range.second, k_range.first, k_range.second}));
}

Kernel truncate(const Kernel& k, const TruncationBox& box) {
    return Kernel(Kernel::Variant(
        Kernel::Truncated{std::make_shared<const Kernel>(k), box}));
}

std::string Kernel::descriptor_json() const {
    std::function<nlohmann::json(const Kernel&)> tojson = [&](const Kernel& k) {
        nlohmann::json j;
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Zero>) {
                    j["variant"] = "zero";
                } else if constexpr (std::is_same_v<T, NagelWainger>) {
                    j["variant"] = "nagel_wainger";
                    j["alpha"] = v.alpha;
                    j["beta"] = v.beta;
                } else if constexpr (std::is_same_v<T, RicciStein>) {
                    j["variant"] = "ricci_stein";
                    j["j_range"] = {v.j_lo, v.j_hi};
                    j["k_range"] = {v.k_lo, v.k_hi};
                    j["bumps"] = nlohmann::json::parse(v.bumps.descriptor_json());
                } else if constexpr (std::is_same_v<T, Dilated>) {
                    j["variant"] = "dilated";
                    j["s"] = v.s;
                    j["t"] = v.t;
                    j["base"] = tojson(*v.base);
                } else {
                    j["variant"] = "truncated";
                    j["eps"] = v.box.eps;
                    j["cap"] = v.box.cap;
                    j["base"] = tojson(*v.base);
                }
            },
            k.variant());
        return j;
    };
    return tojson(*this).dump(2);
}

Kernel Kernel::from_json(const std::string& json_text) {
    std::function<Kernel(const nlohmann::json&)> parse =
        [&](const nlohmann::json& j) -> Kernel {
        const std::string v = j.at("variant").get<std::string>();
        if (v == "zero") return Kernel::zero();
        if (v == "nagel_wainger")
            return Kernel::nagel_wainger(j.at("alpha").get<double>(),
                                         j.at("beta").get<double>());
        if (v == "ricci_stein") {
            const auto jr = j.at("j_range");
            const auto kr = j.at("k_range");
            return synth_ricci_stein(bump_pair_from_json(j.at("bumps").dump()),
                                     {jr.at(0).get<int>(), jr.at(1).get<int>()},
                                     {kr.at(0).get<int>(), kr.at(1).get<int>()});
        }
        if (v == "dilated")
            return zygmund_dilate(parse(j.at("base")), j.at("s").get<double>(),
                                  j.at("t").get<double>());
        if (v == "truncated") {
            std::array<double, 3> eps = j.at("eps").get<std::array<double, 3>>();
            std::array<double, 3> cap = j.at("cap").get<std::array<double, 3>>();
            return truncate(parse(j.at("base")), make_truncation_box(eps, cap));
        }
        throw std::invalid_argument("kernel descriptor: unknown variant '" + v + "'");
    };
    return parse(nlohmann::json::parse(json_text));
}

}  // namespace zlab
