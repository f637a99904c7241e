#include "hmfp/snapshot.hpp"

#include "hmfp/errors.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace hmfp {

void write_snapshot(std::ostream& os, const DistributionField& f, double time) {
    const auto& g = f.grid();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g %.17g", g.v_max(), time);
    os << "HMFP1 " << g.n_theta() << ' ' << g.n_v() << ' ' << buf << '\n';
    for (std::size_t i = 0; i < g.n_theta(); ++i) {
        auto row = f.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", row[j]);
            os << buf << (j + 1 == row.size() ? '\n' : ' ');
        }
    }
}

Snapshot read_snapshot(std::istream& is) {
    std::string magic;
    std::size_t nt = 0, nv = 0;
    double v_max = 0.0, time = 0.0;
    if (!(is >> magic >> nt >> nv >> v_max >> time) || magic != "HMFP1")
        throw IoError("not an HMFP1 snapshot header");
    PhaseGrid grid;
    try {
        grid = make_grid(nt, nv, v_max);
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("snapshot grid: ") + e.what());
    }
    std::vector<double> values(grid.size());
    std::string tok;
    for (auto& x : values) {
        if (!(is >> tok)) throw IoError("snapshot truncated");
        try {
            x = std::stod(tok);
        } catch (const std::exception&) {
            throw IoError("bad snapshot value '" + tok + "'");
        }
    }
    try {
        return {DistributionField(grid, std::move(values)), time};
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("snapshot values: ") + e.what());
    }
}

void save_snapshot(const std::filesystem::path& path, const DistributionField& f, double time) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path.string());
    write_snapshot(os, f, time);
    if (!os) throw IoError("write failed for " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path.string());
    return read_snapshot(is);
}

} // namespace hmfp
