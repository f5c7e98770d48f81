#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "geonet/graph.hpp"

namespace geonet {

enum class Units { dbz, mm_per_hour };

const char* units_name(Units u);
Units parse_units(const std::string& s); // "dBZ" | "mm_per_hour"

struct GridCell {
    int id = 0;
    double x_km = 0.0, y_km = 0.0;
    double lat = 0.0, lon = 0.0;
    std::vector<double> series;
};

// A set of grid-point cells with aligned, equal-length time series.
struct GridSeries {
    std::vector<GridCell> cells;
    double time_step_minutes = 1.0;
    Units units = Units::mm_per_hour;

    int cell_count() const { return static_cast<int>(cells.size()); }
    int series_length() const {
        return cells.empty() ? 0 : static_cast<int>(cells.front().series.size());
    }
    // cells non-empty, ids contiguous from 0, series lengths equal (T >= 2),
    // (x_km, y_km) unique.
    void validate() const;
};

enum class GridFormat { csv, binary };

// Marshall-Palmer Z = a R^b, inverted: R = (10^(dbz/10) / a)^(1/b).
double dbz_to_rain_rate(double dbz, double a = 200.0, double b = 1.6);

// Region selection: either a closed polygon ring in (lat, lon) or an
// explicit cell-id inclusion list. Polygon containment is strict: points
// on the boundary are outside.
class RegionMask {
public:
    static RegionMask from_polygon(std::vector<std::pair<double, double>> ring_lat_lon);
    static RegionMask from_ids(std::vector<int> ids);

    bool is_polygon() const { return !ring_.empty(); }
    bool contains(double lat, double lon) const; // polygon form only
    bool contains_cell(const GridCell& cell) const;

    const std::vector<std::pair<double, double>>& ring() const { return ring_; }
    const std::vector<int>& ids() const { return ids_; }

private:
    std::vector<std::pair<double, double>> ring_; // closed: first == last
    std::vector<int> ids_;
};

GridSeries load_grid(const std::filesystem::path& path, GridFormat format);
void save_grid(const GridSeries& grid, const std::filesystem::path& path, GridFormat format);

// GeoJSON Polygon (single ring) or plain text with one cell id per line.
RegionMask load_mask(const std::filesystem::path& path);

// Keeps the cells inside the mask, converts dBZ to mm/h, zeroes samples at
// or below min_rate_mm_h, and re-indexes ids contiguously in original order.
GridSeries apply_mask_and_filter(const GridSeries& grid, const RegionMask& mask,
                                 double min_rate_mm_h = 1.0);

// Ids of cells whose series is constant (e.g. never wet). The similarity
// stage treats these as degenerate.
std::vector<int> constant_cell_ids(const GridSeries& grid);

std::vector<GeoNode> node_table(const GridSeries& grid);

} // namespace geonet
