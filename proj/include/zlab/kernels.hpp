#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zlab/bumps.hpp"

namespace zlab {

struct TruncationBox {
    std::array<double, 3> eps{};
    std::array<double, 3> cap{};
    bool contains(double x1, double x2, double x3) const;
};

TruncationBox make_truncation_box(const std::array<double, 3>& eps,
                                  const std::array<double, 3>& cap);

// Evaluable singular kernel on R^3 minus the coordinate planes. All variants
// are immutable values; Dilated and Truncated wrap a shared base.
class Kernel {
  public:
    struct Zero {};
    struct NagelWainger {
        double alpha = 1.0;
        double beta = 1.0;
    };
    struct RicciStein {
        BumpPair bumps;
        int j_lo, j_hi, k_lo, k_hi;
    };
    struct Dilated {
        std::shared_ptr<const Kernel> base;
        double s, t;
    };
    struct Truncated {
        std::shared_ptr<const Kernel> base;
        TruncationBox box;
    };
    using Variant = std::variant<Zero, NagelWainger, RicciStein, Dilated, Truncated>;

    static Kernel zero();
    static Kernel nagel_wainger(double alpha, double beta);

    double eval(double x1, double x2, double x3) const;
    double eval(const std::array<double, 3>& x) const {
        return eval(x[0], x[1], x[2]);
    }

    const Variant& variant() const { return *v_; }

    // Slab-wise evaluation over the tensor grid x1 x x2 x x3: the returned
    // callable fills out[i2 * x3.size() + i3] for one i1 at a time. The
    // dyadic-sum variant amortizes its inner sums across the grid; everything
    // else falls back to pointwise eval.
    std::function<void(std::size_t, std::span<double>)> tensor_slab_evaluator(
        std::vector<double> x1, std::vector<double> x2, std::vector<double> x3) const;

    std::string descriptor_json() const;
    static Kernel from_json(const std::string& json_text);

    explicit Kernel(Variant v) : v_(std::make_shared<Variant>(std::move(v))) {}

  private:
    std::shared_ptr<const Variant> v_;
};

// s^2 t^2 K(s x1, t x2, s t x3); the exact symmetry of the two-parameter
// scaling family (an identity for the Nagel-Wainger kernel with alpha = beta).
Kernel zygmund_dilate(const Kernel& k, double s, double t);

// Double dyadic sum sum_{j,k} 2^(2j+2k) phi1(2^j x1) phi2(2^k x2, 2^(j+k) x3).
Kernel synth_ricci_stein(const BumpPair& bumps, std::pair<int, int> j_range,
                         std::pair<int, int> k_range);

Kernel truncate(const Kernel& k, const TruncationBox& box);

}  // namespace zlab
