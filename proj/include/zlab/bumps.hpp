#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace zlab {

// Two bump flavors. fourier_exact carries an annulus window normalized so the
// dyadic partition of unity holds exactly on the frequency side; its spatial
// profile decays rapidly but is not compactly supported. spatial_compact is
// a high-order derivative of a mollifier: exact compact support and vanishing
// moments, approximate frequency partition.
enum class BumpKind { fourier_exact, spatial_compact };

class Bump1D {
  public:
    BumpKind kind() const;
    double support_radius() const;  // exact for spatial kind, table cutoff otherwise
    int moment_order() const { return 10; }

    double spatial(double x) const;
    double frequency(double xi) const;

    double sup_norm() const;
    // upper bound for |spatial(x)| on |x| >= r
    double decay_bound(double r) const;

    // sum_j |frequency(2^j xi)|^2, xi != 0
    double partition_sum(double xi) const;

    struct Impl;
    explicit Bump1D(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    const Impl& impl() const { return *impl_; }

  private:
    std::shared_ptr<const Impl> impl_;
};

class Bump2D {
  public:
    BumpKind kind() const;
    double support_radius() const;

    double spatial(double x2, double x3) const;
    double frequency(double xi2, double xi3) const;

    double sup_norm() const;
    // upper bound for |spatial| outside the centered ball of radius r
    double decay_bound(double r) const;

    // sum_k |frequency(2^k xi2, 2^k xi3)|^2, (xi2, xi3) != 0
    double partition_sum(double xi2, double xi3) const;

    // The spatial-compact profile is a product f(x2) f(x3); these expose the
    // factor (throws for the radial annulus-window kind).
    bool is_tensor() const;
    double tensor_factor(double u) const;
    double tensor_factor_radius() const;

    struct Impl;
    explicit Bump2D(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    const Impl& impl() const { return *impl_; }

  private:
    std::shared_ptr<const Impl> impl_;
};

struct BumpPair {
    Bump1D phi1;
    Bump2D phi2;
    BumpKind kind() const { return phi1.kind(); }
    std::string descriptor_json() const;
};

// Annulus-window pair: the frequency partition holds exactly (construction
// forces it); every moment vanishes exactly because the transforms are
// identically zero near the origin.
BumpPair build_fourier_bumps();

// Compactly supported pair with vanishing moments through order 10 (actually
// 11: an even profile needs an even derivative order, so the 12th derivative
// of the mollifier is used). The frequency partition is only approximate.
BumpPair build_spatial_bumps(double support_radius);

BumpPair bump_pair_from_json(const std::string& json_text);

struct FrequencySamples {
    std::vector<double> xi1;
    std::vector<std::array<double, 2>> xi23;
};

// Log-spaced default sweep over [lo, hi] per axis (count per list).
FrequencySamples log_frequency_samples(double lo, double hi, std::size_t count);

// sup over the samples of |partition_sum - 1|, 1D and 2D checked separately,
// maximum of the two. Samples on the excluded sets (xi1 = 0 or xi23 = 0) are
// rejected.
double partition_defect(const BumpPair& pair, const FrequencySamples& samples);

// integral of x^alpha phi1 (exactly 0 for the fourier kind: the transform
// vanishes near 0, so every frequency derivative at 0 does too)
double moment(const Bump1D& bump, int alpha);
// integral of x2^beta x3^gamma phi2
double moment(const Bump2D& bump, int beta, int gamma);

// Smooth random bump supported in the unit ball with |phi| <= 1 and
// |grad phi| <= 1; identical seeds give identical evaluators.
class NormalizedBump {
  public:
    int dimension() const;
    std::uint64_t seed() const;
    double operator()(std::array<double, 3> x) const;  // unused axes ignored
    double eval1(double x) const;
    double eval2(double x2, double x3) const;

    struct Impl;
    explicit NormalizedBump(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  private:
    std::shared_ptr<const Impl> impl_;
};

NormalizedBump make_nbf(int dimension, std::uint64_t seed);

}  // namespace zlab
