#pragma once

#include <string>
#include <vector>

#include "tp/sh.hpp"

namespace tp {

// Binary snapshot record: t, v (doubles), then the mode array as interleaved
// re/im doubles, little-endian. One file holds consecutive records of equal
// size; the sidecar manifest (json) carries the grid and record layout.
struct SnapshotRecord {
    double t = 0.0;
    double v = 0.0;
    std::vector<cdouble> modes;
};

void write_snapshots(const std::string& path, const Grid1D& grid,
                     const std::vector<SnapshotRecord>& records);
// Writes <path> and the sidecar <path>.manifest.json.

std::vector<SnapshotRecord> read_snapshots(const std::string& path, Grid1D* grid_out = nullptr);

// CSV observable stream (t, v, hul_norm, max_abs, mode1_abs).
void write_observables_csv(const std::string& path, const std::vector<ObservableRow>& rows);

} // namespace tp
