#include "tp/snapshots.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "tp/csv.hpp"
#include "tp/errors.hpp"

namespace tp {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts unsupported");

void write_snapshots(const std::string& path, const Grid1D& grid,
                     const std::vector<SnapshotRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("write_snapshots: cannot open " + path);
    for (const auto& rec : records) {
        if (static_cast<int>(rec.modes.size()) != grid.n_points)
            throw config_error("write_snapshots: record size does not match grid");
        out.write(reinterpret_cast<const char*>(&rec.t), sizeof(double));
        out.write(reinterpret_cast<const char*>(&rec.v), sizeof(double));
        out.write(reinterpret_cast<const char*>(rec.modes.data()),
                  static_cast<std::streamsize>(rec.modes.size() * sizeof(cdouble)));
    }

    nlohmann::json manifest;
    manifest["format"] = "tp-snapshot-v1";
    manifest["byte_order"] = "little";
    manifest["periods"] = grid.periods;
    manifest["n_points"] = grid.n_points;
    manifest["record_doubles"] = 2 + 2 * grid.n_points;
    manifest["n_records"] = records.size();
    std::ofstream m(path + ".manifest.json", std::ios::binary);
    m << manifest.dump(2) << "\n";
}

std::vector<SnapshotRecord> read_snapshots(const std::string& path, Grid1D* grid_out) {
    std::ifstream m(path + ".manifest.json", std::ios::binary);
    if (!m) throw config_error("read_snapshots: missing manifest for " + path);
    nlohmann::json manifest = nlohmann::json::parse(m);
    Grid1D grid(manifest.at("periods").get<int>(), manifest.at("n_points").get<int>());
    if (grid_out) *grid_out = grid;

    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("read_snapshots: cannot open " + path);
    std::vector<SnapshotRecord> records;
    size_t n_records = manifest.at("n_records").get<size_t>();
    for (size_t r = 0; r < n_records; ++r) {
        SnapshotRecord rec;
        rec.modes.resize(grid.n_points);
        in.read(reinterpret_cast<char*>(&rec.t), sizeof(double));
        in.read(reinterpret_cast<char*>(&rec.v), sizeof(double));
        in.read(reinterpret_cast<char*>(rec.modes.data()),
                static_cast<std::streamsize>(rec.modes.size() * sizeof(cdouble)));
        if (!in) throw config_error("read_snapshots: truncated file " + path);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_observables_csv(const std::string& path, const std::vector<ObservableRow>& rows) {
    CsvWriter csv(path, {"t", "v", "hul_norm", "max_abs", "mode1_abs"});
    for (const auto& r : rows)
        csv.row({CsvWriter::num(r.t), CsvWriter::num(r.v), CsvWriter::num(r.norm_theta),
                 CsvWriter::num(r.max_abs), CsvWriter::num(r.mode1_abs)});
}

} // namespace tp
