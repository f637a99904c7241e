#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace hmfp {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform cell-centred discretisation of the torus in theta times
/// [-v_max, v_max] in velocity.
///
/// Theta node i sits at i * d_theta (periodic, node n_theta == node 0);
/// velocity node j sits at the centre of cell j, -v_max + (j + 1/2) * d_v.
/// Every cell carries the midpoint weight d_theta * d_v.
class PhaseGrid {
  public:
    PhaseGrid() = default;

    std::size_t n_theta() const noexcept { return n_theta_; }
    std::size_t n_v() const noexcept { return n_v_; }
    std::size_t size() const noexcept { return n_theta_ * n_v_; }
    double v_max() const noexcept { return v_max_; }
    double d_theta() const noexcept { return two_pi / static_cast<double>(n_theta_); }
    double d_v() const noexcept { return 2.0 * v_max_ / static_cast<double>(n_v_); }
    double cell_area() const noexcept { return d_theta() * d_v(); }

    double theta(std::size_t i) const noexcept { return static_cast<double>(i) * d_theta(); }
    double v(std::size_t j) const noexcept { return -v_max_ + (static_cast<double>(j) + 0.5) * d_v(); }

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * n_v_ + j; }
    std::size_t wrap_theta(long long i) const noexcept;

    friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;

  private:
    friend PhaseGrid make_grid(std::size_t, std::size_t, double);
    PhaseGrid(std::size_t n_theta, std::size_t n_v, double v_max)
        : n_theta_(n_theta), n_v_(n_v), v_max_(v_max) {}

    std::size_t n_theta_ = 0;
    std::size_t n_v_ = 0;
    double v_max_ = 0.0;
};

/// Throws InvalidArgument for n_theta < 8, n_v < 8 or v_max <= 0.
PhaseGrid make_grid(std::size_t n_theta, std::size_t n_v, double v_max);

/// Nonnegative phase-space density sampled at cell centres, theta-major.
class DistributionField {
  public:
    DistributionField() = default;
    explicit DistributionField(const PhaseGrid& grid);
    /// Takes ownership of row-major (theta outer, v inner) samples and
    /// validates them (finite, nonnegative, right length).
    DistributionField(const PhaseGrid& grid, std::vector<double> values);

    const PhaseGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[grid_.index(i, j)]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(values_).subspan(i * grid_.n_v(), grid_.n_v());
    }
    std::span<double> row(std::size_t i) noexcept {
        return std::span<double>(values_).subspan(i * grid_.n_v(), grid_.n_v());
    }

    double max_value() const noexcept;

    /// Cyclic shift in theta: result(i, j) = this(i + cells, j).
    DistributionField shifted(long long cells) const;

    DistributionField& operator*=(double s);

  private:
    PhaseGrid grid_;
    std::vector<double> values_;
};

/// Zero-mean periodic potential sampled at theta nodes, together with its
/// derivative at the same nodes.
struct Potential {
    std::size_t n_theta() const noexcept { return values.size(); }
    double min() const;
    double max() const;
    double mean() const;
    /// Cyclic shift: result[i] = this[i + cells].
    Potential shifted(long long cells) const;

    std::vector<double> values;
    std::vector<double> derivative;
};

/// Potential that vanishes identically.
Potential zero_potential(std::size_t n_theta);

/// Midpoint quadrature of the whole field.
double integrate(const DistributionField& f);

/// Midpoint quadrature of (1 + v^2) |f - g|. Throws GridMismatch.
double weighted_l1_distance(const DistributionField& f, const DistributionField& g);

/// Plain L1 distance by midpoint quadrature. Throws GridMismatch.
double l1_distance(const DistributionField& f, const DistributionField& g);

} // namespace hmfp
