#pragma once

#include <utility>
#include <vector>

#include "zlab/bumps.hpp"
#include "zlab/grid.hpp"
#include "zlab/kernels.hpp"

namespace zlab {

struct DyadicIndex {
    int j = 0;
    int k = 0;
    bool operator==(const DyadicIndex&) const = default;
};

struct LPFamily {
    BumpPair bumps;
    std::vector<DyadicIndex> indices;
    double lambda = 0.25;  // min(theta1, theta2) / 2
};

LPFamily make_lp_family(const BumpPair& bumps, int j_lo, int j_hi, int k_lo, int k_hi,
                        double theta1 = 1.0, double theta2 = 0.5);

// 2^(-2(j+k)) phi1(2^-j x1) phi2(2^-k x2, 2^-(j+k) x3)
double phi_jk(const BumpPair& bumps, int j, int k, const std::array<double, 3>& x);
// its (real, even) transform phi1^(2^j xi1) phi2^(2^k xi2, 2^(j+k) xi3)
double phi_jk_hat(const BumpPair& bumps, int j, int k, const std::array<double, 3>& xi);

// pointwise l2 aggregate of the family convolutions, computed spectrally:
// each convolution is an FFT multiplier application with the exact transform
SampledField3 square_function(const SampledField3& f, const LPFamily& family);

// sum of phi_jk * phi_jk * f over the family, plus the relative L2 residual
std::pair<SampledField3, double> calderon_reconstruct(const SampledField3& f,
                                                      const LPFamily& family);

enum class OrthoMode { pair, sandwich };

struct OrthogonalityMatrix {
    OrthoMode mode = OrthoMode::pair;
    double L = 2.0, M = 2.0;  // pair-mode envelope parameters
    double lambda = 0.25;     // sandwich-mode envelope exponent is 1 + lambda
    struct Entry {
        DyadicIndex a, b;
        double raw_sup = 0.0;
        double normalized = 0.0;
    };
    std::vector<Entry> entries;
};

struct OrthoOptions {
    double L = 2.0, M = 2.0;
    // pairs to evaluate; empty means every ordered pair of family indices
    std::vector<std::pair<DyadicIndex, DyadicIndex>> pairs;
    int workers = 0;
    int gl_order = 8;       // sandwich quadrature order
    int sup_refine = 3;     // local refinement rounds of the sup search
};

// pair mode: sup |phi_jk * phi_j'k'| against the two-parameter envelope with
// exponents (L, M); sandwich mode: sup |phi_jk * K * phi_j'k'| against the
// dyadic-decay envelope with exponent 1 + lambda. Sandwich mode needs
// spatially compact bumps (annulus-window pairs are exactly orthogonal beyond
// unit separation, leaving nothing to measure).
OrthogonalityMatrix almost_orthogonality_matrix(const LPFamily& family, OrthoMode mode,
                                                const Kernel* kernel,
                                                const OrthoOptions& opts = {});

struct DecayFit {
    double slope_j = 0.0;
    double slope_k = 0.0;
    double residual = 0.0;
};

// least-squares slopes of log2(raw sup) against |j - j'| and |k - k'| over
// the nonzero entries
DecayFit decay_fit(const OrthogonalityMatrix& matrix);

}  // namespace zlab
