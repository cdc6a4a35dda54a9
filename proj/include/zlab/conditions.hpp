#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "zlab/kernels.hpp"

namespace zlab {

// Holder exponents of the regularity bound: theta1 in (0, 1] weights the
// difference quotients, theta2 in (0, 1) the decay of the scale-balanced
// factor |x1 x2 / x3| + |x3 / (x1 x2)|.
struct HolderParams {
    double theta1 = 1.0;
    double theta2 = 0.5;
};

void validate(const HolderParams& p);

// |x1 x2 / x3| + |x3 / (x1 x2)|
double balanced_factor(double x1, double x2, double x3);

// Difference-operator multi-index. Order 0 is negation (0 * K(x+h) - K(x)),
// so the all-zero index reproduces the plain size bound up to sign.
struct DiffIndex {
    int alpha = 0, beta = 0, gamma = 0;  // each 0 or 1
    std::array<double, 3> h{0.0, 0.0, 0.0};
};

bool diff_index_admissible(int alpha, int beta, int gamma);

double finite_difference(const Kernel& kernel, const std::array<double, 3>& x,
                         const DiffIndex& idx);

struct ConditionReport {
    std::string condition_id;
    double theta1 = 0.0, theta2 = 0.0;
    long sample_count = 0;
    double c_hat = 0.0;
    std::map<std::string, double> worst_sample;
    std::vector<double> history;  // c_hat at successive sample densities
    bool stable = false;
    bool quadrature_flagged = false;

    struct Row {
        std::map<std::string, double> params;
        double lhs = 0.0, rhs = 0.0, ratio = 0.0;
        bool flagged = false;
    };
    std::vector<Row> rows;
};

// ---------------------------------------------------------------------------
// regularity check

struct RSamplePlan {
    int mags = 3;  // log-spaced magnitudes per axis at the base density
    double lo = 1.0 / 64.0, hi = 64.0;
    std::vector<double> h_ratios = {0.25, 0.125};
    int densities = 3;  // history at 1x, 2x, 4x
    // maps every sample through the two-parameter scaling family, for the
    // covariance check
    double dilate_s = 1.0, dilate_t = 1.0;
    int workers = 0;
};

ConditionReport check_R(const Kernel& kernel, const HolderParams& params,
                        const RSamplePlan& plan);

// ---------------------------------------------------------------------------
// annulus cancellation checks

enum class CancellationFamily { C1a, C1b, C1c, C1d, C2a, C2b, C2c, C2pa, C2pb, C2pc };

std::string to_string(CancellationFamily f);
CancellationFamily cancellation_family_from_string(const std::string& s);
int integration_axis_count(CancellationFamily f);

// Per tuple: one (delta, r) pair per integration axis of the family, in the
// family's axis order. geometric() builds the nested schedules
// delta = 2^-m, r = 2^m used to probe the improper limits.
struct AnnulusSweep {
    using Tuple = std::vector<std::pair<double, double>>;
    std::vector<std::vector<Tuple>> by_density;

    static AnnulusSweep geometric(int axes, int m_max, int densities);
};

struct CancellationConfig {
    int fixed_mags = 2;  // magnitudes of each fixed variable at base density
    double fixed_lo = 0.25, fixed_hi = 4.0;
    std::vector<double> h_ratios = {0.25};
    int gl_order = 16;  // per dyadic subinterval, per sign
    bool c2pb_plus_one = false;  // alternative |x3| exponent reading
    bool quad_check = false;     // re-run each tuple at doubled order
    double quad_check_rel = 1e-6;
    int workers = 0;
};

ConditionReport check_cancellation(const Kernel& kernel, CancellationFamily family,
                                   const AnnulusSweep& sweep, const HolderParams& params,
                                   const CancellationConfig& cfg = {});

// ---------------------------------------------------------------------------
// bump-tested cancellation checks

enum class C3Family { C3a, C3b, C3c, C3pa, C3pb, C3pc };

std::string to_string(C3Family f);
C3Family c3_family_from_string(const std::string& s);

struct C3Config {
    std::vector<std::uint64_t> nbf_seeds = {11, 12};
    std::vector<double> scales = {0.25, 1.0, 4.0};  // values taken by R, R1, R2
    int fixed_mags = 2;
    double fixed_lo = 0.25, fixed_hi = 4.0;
    std::vector<double> h_ratios = {0.25};
    int gl_order = 8;
    int depth_octaves = 16;  // refinement toward the coordinate planes
    int densities = 2;
    bool quad_check = false;
    double quad_check_rel = 1e-6;
    int workers = 0;
};

ConditionReport check_c3(const Kernel& kernel, C3Family family, const C3Config& cfg,
                         const HolderParams& params);

// Single bump-tested integral with an arbitrary bump evaluator; the sweep
// driver is built on this, and tests can feed symmetric bumps through it.
double c3_integral(const Kernel& kernel, C3Family family,
                   const std::array<double, 3>& scales,
                   const std::array<double, 3>& fixed_point, const DiffIndex& diff,
                   const std::function<double(std::array<double, 3>)>& bump,
                   int gl_order = 8, int depth_octaves = 16);

}  // namespace zlab
