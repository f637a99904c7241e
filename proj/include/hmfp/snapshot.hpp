#pragma once

#include "hmfp/grid.hpp"

#include <filesystem>
#include <iosfwd>

namespace hmfp {

struct Snapshot {
    DistributionField field;
    double time = 0.0;
};

/// Header "HMFP1 n_theta n_v v_max time", then the samples theta-major with
/// 17 significant digits, one theta row per line.
void write_snapshot(std::ostream& os, const DistributionField& f, double time);
Snapshot read_snapshot(std::istream& is);

void save_snapshot(const std::filesystem::path& path, const DistributionField& f, double time);
Snapshot load_snapshot(const std::filesystem::path& path);

} // namespace hmfp
