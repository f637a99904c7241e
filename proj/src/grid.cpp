#include "hmfp/grid.hpp"

#include "hmfp/errors.hpp"
#include "hmfp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hmfp {

std::size_t PhaseGrid::wrap_theta(long long i) const noexcept {
    const auto n = static_cast<long long>(n_theta_);
    long long r = i % n;
    if (r < 0) r += n;
    return static_cast<std::size_t>(r);
}

PhaseGrid make_grid(std::size_t n_theta, std::size_t n_v, double v_max) {
    if (n_theta < 8 || n_v < 8)
        throw InvalidArgument("grid too coarse: need n_theta >= 8 and n_v >= 8, got " +
                              std::to_string(n_theta) + "x" + std::to_string(n_v));
    if (!(v_max > 0.0) || !std::isfinite(v_max))
        throw InvalidArgument("v_max must be positive and finite");
    return PhaseGrid(n_theta, n_v, v_max);
}

DistributionField::DistributionField(const PhaseGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

DistributionField::DistributionField(const PhaseGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw InvalidArgument("field has " + std::to_string(values_.size()) + " samples, grid expects " +
                              std::to_string(grid_.size()));
    for (double x : values_)
        if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("field samples must be finite and nonnegative");
}

double DistributionField::max_value() const noexcept {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

DistributionField DistributionField::shifted(long long cells) const {
    DistributionField out(grid_);
    for (std::size_t i = 0; i < grid_.n_theta(); ++i) {
        auto src = row(grid_.wrap_theta(static_cast<long long>(i) + cells));
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

DistributionField& DistributionField::operator*=(double s) {
    if (!(s >= 0.0)) throw InvalidArgument("field scale factor must be nonnegative");
    for (double& x : values_) x *= s;
    return *this;
}

double Potential::min() const { return *std::min_element(values.begin(), values.end()); }
double Potential::max() const { return *std::max_element(values.begin(), values.end()); }
double Potential::mean() const {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Potential Potential::shifted(long long cells) const {
    const auto n = static_cast<long long>(values.size());
    Potential out{std::vector<double>(values.size()), std::vector<double>(derivative.size())};
    for (long long i = 0; i < n; ++i) {
        long long k = ((i + cells) % n + n) % n;
        out.values[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(k)];
        if (!derivative.empty()) out.derivative[static_cast<std::size_t>(i)] = derivative[static_cast<std::size_t>(k)];
    }
    return out;
}

Potential zero_potential(std::size_t n_theta) {
    return Potential{std::vector<double>(n_theta, 0.0), std::vector<double>(n_theta, 0.0)};
}

double integrate(const DistributionField& f) {
    const auto& g = f.grid();
    std::vector<double> rows(g.n_theta());
    kernels::omp::row_sums(f.values(), g.n_v(), rows);
    return std::accumulate(rows.begin(), rows.end(), 0.0) * g.cell_area();
}

double weighted_l1_distance(const DistributionField& f, const DistributionField& g) {
    if (!(f.grid() == g.grid())) throw GridMismatch();
    const auto& grid = f.grid();
    std::vector<double> weight(grid.n_v());
    for (std::size_t j = 0; j < grid.n_v(); ++j) weight[j] = 1.0 + grid.v(j) * grid.v(j);
    return kernels::omp::weighted_abs_diff(f.values(), g.values(), weight, 0) * grid.cell_area();
}

double l1_distance(const DistributionField& f, const DistributionField& g) {
    if (!(f.grid() == g.grid())) throw GridMismatch();
    const auto& grid = f.grid();
    std::vector<double> weight(grid.n_v(), 1.0);
    return kernels::omp::weighted_abs_diff(f.values(), g.values(), weight, 0) * grid.cell_area();
}

} // namespace hmfp
