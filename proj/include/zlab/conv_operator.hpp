#pragma once

#include <span>

#include "zlab/grid.hpp"
#include "zlab/kernels.hpp"

namespace zlab {

// Truncated-kernel convolution on the field's grid by zero-padded FFT (linear
// convolution). Kernel samples whose cell sits within one cell of a
// truncation face are replaced by the cell average (4^3 Gauss-Legendre on the
// cell clipped to the box), which suppresses the boundary staircase error.
SampledField3 convolve_truncated(const Kernel& kernel, const TruncationBox& box,
                                 const SampledField3& f);

enum class ScanMode { reduced, full };

struct FrequencyScan {
    std::vector<std::array<double, 3>> frequencies;
    std::vector<double> magnitudes;
    double sup = 0.0;
    std::vector<char> flagged;  // per-frequency quadrature self-check failures
};

struct ScanOptions {
    int gl_order = 16;
    bool convergence_check = false;
    double check_rel = 1e-6;
    int workers = 0;
};

// |K-hat| of the truncated kernel. Reduced mode evaluates at (1, 1, xi);
// full mode takes arbitrary frequency triples. Each axis range [eps, cap] is
// split into dyadic panels, each panel subdivided to a quarter wavelength of
// the frequency on that axis, Gauss-Legendre per piece.
FrequencyScan fourier_bound_scan(const Kernel& kernel, const TruncationBox& box,
                                 std::span<const double> xi_schedule, ScanMode mode,
                                 const ScanOptions& opts = {});
FrequencyScan fourier_bound_scan(const Kernel& kernel, const TruncationBox& box,
                                 std::span<const std::array<double, 3>> frequencies,
                                 const ScanOptions& opts = {});

struct ProbeResult {
    double p = 2.0;
    std::vector<double> ratios;
    double max_ratio = 0.0;
};

// ||K * f||_p / ||f||_p over a family of test fields; the maximum is a lower
// bound for the truncated operator norm on the grid.
ProbeResult operator_norm_probe(const Kernel& kernel, const TruncationBox& box,
                                std::span<const SampledField3> tests, double p);

// L2 distances between consecutive truncations of a widening schedule.
std::vector<double> truncation_convergence_probe(const Kernel& kernel,
                                                 const SampledField3& f,
                                                 std::span<const TruncationBox> schedule);

}  // namespace zlab
