#include "geonet/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geonet/errors.hpp"

namespace geonet {

const char* units_name(Units u) {
    return u == Units::dbz ? "dBZ" : "mm_per_hour";
}

Units parse_units(const std::string& s) {
    if (s == "dBZ") return Units::dbz;
    if (s == "mm_per_hour") return Units::mm_per_hour;
    throw InputError("unknown units '" + s + "' (expected dBZ or mm_per_hour)");
}

void GridSeries::validate() const {
    if (cells.empty()) throw InputError("grid has no cells");
    const std::size_t t = cells.front().series.size();
    if (t < 2) throw InputError("grid series length must be at least 2");
    std::set<std::pair<double, double>> coords;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const GridCell& c = cells[k];
        if (c.id != static_cast<int>(k))
            throw InputError("cell ids not contiguous from 0: cell " + std::to_string(k) +
                             " has id " + std::to_string(c.id));
        if (c.series.size() != t)
            throw InputError("ragged series: cell " + std::to_string(c.id) + " has length " +
                             std::to_string(c.series.size()) + ", expected " + std::to_string(t));
        if (!coords.insert({c.x_km, c.y_km}).second)
            throw InputError("duplicate grid position at cell " + std::to_string(c.id));
    }
    if (time_step_minutes <= 0) throw InputError("time step must be positive");
}

double dbz_to_rain_rate(double dbz, double a, double b) {
    return std::pow(std::pow(10.0, dbz / 10.0) / a, 1.0 / b);
}

// ---------------------------------------------------------------------------
// RegionMask

RegionMask RegionMask::from_polygon(std::vector<std::pair<double, double>> ring_lat_lon) {
    if (ring_lat_lon.size() < 4)
        throw InputError("polygon ring needs at least 4 vertices (closed triangle)");
    if (ring_lat_lon.front() != ring_lat_lon.back())
        throw InputError("polygon ring is not closed (first vertex != last vertex)");
    RegionMask m;
    m.ring_ = std::move(ring_lat_lon);
    return m;
}

RegionMask RegionMask::from_ids(std::vector<int> ids) {
    RegionMask m;
    m.ids_ = std::move(ids);
    std::sort(m.ids_.begin(), m.ids_.end());
    return m;
}

namespace {

bool on_segment(double px, double py, double ax, double ay, double bx, double by) {
    const double cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    if (cross != 0.0) return false;
    return px >= std::min(ax, bx) && px <= std::max(ax, bx) &&
           py >= std::min(ay, by) && py <= std::max(ay, by);
}

} // namespace

bool RegionMask::contains(double lat, double lon) const {
    // Even-odd ray casting in the (lon, lat) plane; boundary points excluded.
    const double px = lon, py = lat;
    bool inside = false;
    for (std::size_t k = 0; k + 1 < ring_.size(); ++k) {
        const double ax = ring_[k].second, ay = ring_[k].first;
        const double bx = ring_[k + 1].second, by = ring_[k + 1].first;
        if (on_segment(px, py, ax, ay, bx, by)) return false;
        if ((ay > py) != (by > py)) {
            const double x_cross = ax + (bx - ax) * (py - ay) / (by - ay);
            if (px < x_cross) inside = !inside;
        }
    }
    return inside;
}

bool RegionMask::contains_cell(const GridCell& cell) const {
    if (is_polygon()) return contains(cell.lat, cell.lon);
    return std::binary_search(ids_.begin(), ids_.end(), cell.id);
}

// ---------------------------------------------------------------------------
// CSV / binary grid files

namespace {

double parse_double_field(const std::string& field, const std::string& where) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw InputError(where + ": '" + field + "' is not a number");
    return v;
}

long parse_int_field(const std::string& field, const std::string& where) {
    long v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw InputError(where + ": '" + field + "' is not an integer");
    return v;
}

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

GridSeries load_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open grid file: " + path.string());
    const std::string name = path.filename().string();

    std::string line;
    if (!std::getline(in, line)) throw InputError(name + ": empty grid file");
    const std::vector<std::string> header = split_csv_line(line);
    static const char* expected[] = {"id", "x_km", "y_km", "lat", "lon", "units"};
    if (header.size() < 8)
        throw InputError(name + ":1: malformed header, expected id,x_km,y_km,lat,lon,units,t0,... "
                         "with at least two samples");
    for (int k = 0; k < 6; ++k)
        if (header[k] != expected[k])
            throw InputError(name + ":1: malformed header, column " + std::to_string(k + 1) +
                             " is '" + header[k] + "', expected '" + expected[k] + "'");
    const std::size_t t = header.size() - 6;

    GridSeries grid;
    std::string units_seen;
    std::map<std::pair<double, double>, long> coord_rows;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::string where = name + ":" + std::to_string(row);
        if (fields.size() != header.size())
            throw InputError(where + ": has " + std::to_string(fields.size()) +
                             " fields, header has " + std::to_string(header.size()));
        GridCell cell;
        cell.id = static_cast<int>(parse_int_field(fields[0], where + " column id"));
        cell.x_km = parse_double_field(fields[1], where + " column x_km");
        cell.y_km = parse_double_field(fields[2], where + " column y_km");
        cell.lat = parse_double_field(fields[3], where + " column lat");
        cell.lon = parse_double_field(fields[4], where + " column lon");
        const auto [it, fresh] = coord_rows.insert({{cell.x_km, cell.y_km}, row});
        if (!fresh)
            throw InputError(where + " columns x_km,y_km: position duplicates row " +
                             std::to_string(it->second));
        if (units_seen.empty()) {
            units_seen = fields[5];
            grid.units = parse_units(units_seen);
        } else if (fields[5] != units_seen) {
            throw InputError(where + " column units: '" + fields[5] +
                             "' differs from '" + units_seen + "' seen earlier");
        }
        cell.series.reserve(t);
        for (std::size_t k = 6; k < fields.size(); ++k)
            cell.series.push_back(
                parse_double_field(fields[k], where + " column t" + std::to_string(k - 6)));
        grid.cells.push_back(std::move(cell));
    }
    if (grid.cells.empty()) throw InputError(name + ": no cell rows");
    grid.validate();
    return grid;
}

void save_grid_csv(const GridSeries& grid, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write grid file: " + path.string());
    char buf[64];
    auto put = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.write(buf, ptr - buf);
        (void)ec;
    };
    out << "id,x_km,y_km,lat,lon,units";
    for (int k = 0; k < grid.series_length(); ++k) out << ",t" << k;
    out << "\n";
    for (const GridCell& c : grid.cells) {
        out << c.id << ',';
        put(c.x_km); out << ',';
        put(c.y_km); out << ',';
        put(c.lat); out << ',';
        put(c.lon); out << ',';
        out << units_name(grid.units);
        for (double v : c.series) {
            out << ',';
            put(v);
        }
        out << "\n";
    }
}

constexpr char kGridMagic[8] = {'G', 'N', 'E', 'T', 'G', 'R', 'D', '1'};

GridSeries load_grid_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open grid file: " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kGridMagic, 8) != 0)
        throw InputError(path.filename().string() + ": not a binary grid file");
    std::uint32_t n = 0, t = 0;
    std::uint8_t units = 0;
    double step = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&t), 4);
    in.read(reinterpret_cast<char*>(&units), 1);
    in.read(reinterpret_cast<char*>(&step), 8);
    if (!in) throw InputError(path.filename().string() + ": truncated header");
    GridSeries grid;
    grid.units = units == 0 ? Units::dbz : Units::mm_per_hour;
    grid.time_step_minutes = step;
    grid.cells.resize(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        GridCell& c = grid.cells[k];
        c.id = static_cast<int>(k);
        double pos[4];
        in.read(reinterpret_cast<char*>(pos), sizeof pos);
        c.x_km = pos[0];
        c.y_km = pos[1];
        c.lat = pos[2];
        c.lon = pos[3];
        c.series.resize(t);
        in.read(reinterpret_cast<char*>(c.series.data()), static_cast<std::streamsize>(t) * 8);
        if (!in)
            throw InputError(path.filename().string() + ": truncated at cell " + std::to_string(k));
    }
    grid.validate();
    return grid;
}

void save_grid_binary(const GridSeries& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write grid file: " + path.string());
    out.write(kGridMagic, 8);
    const std::uint32_t n = static_cast<std::uint32_t>(grid.cell_count());
    const std::uint32_t t = static_cast<std::uint32_t>(grid.series_length());
    const std::uint8_t units = grid.units == Units::dbz ? 0 : 1;
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&t), 4);
    out.write(reinterpret_cast<const char*>(&units), 1);
    out.write(reinterpret_cast<const char*>(&grid.time_step_minutes), 8);
    for (const GridCell& c : grid.cells) {
        const double pos[4] = {c.x_km, c.y_km, c.lat, c.lon};
        out.write(reinterpret_cast<const char*>(pos), sizeof pos);
        out.write(reinterpret_cast<const char*>(c.series.data()),
                  static_cast<std::streamsize>(t) * 8);
    }
}

} // namespace

GridSeries load_grid(const std::filesystem::path& path, GridFormat format) {
    return format == GridFormat::csv ? load_grid_csv(path) : load_grid_binary(path);
}

void save_grid(const GridSeries& grid, const std::filesystem::path& path, GridFormat format) {
    if (format == GridFormat::csv)
        save_grid_csv(grid, path);
    else
        save_grid_binary(grid, path);
}

RegionMask load_mask(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mask file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw InputError(path.filename().string() + ": empty mask file");
    if (text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path.filename().string() + ": invalid GeoJSON: " + e.what());
        }
        nlohmann::json geom = doc;
        if (doc.contains("geometry")) geom = doc["geometry"]; // Feature wrapper
        if (!geom.contains("type") || geom["type"] != "Polygon" || !geom.contains("coordinates"))
            throw InputError(path.filename().string() + ": mask must be a GeoJSON Polygon");
        const auto& rings = geom["coordinates"];
        if (!rings.is_array() || rings.empty())
            throw InputError(path.filename().string() + ": polygon has no rings");
        std::vector<std::pair<double, double>> ring;
        for (const auto& coord : rings[0]) {
            if (!coord.is_array() || coord.size() < 2)
                throw InputError(path.filename().string() + ": bad coordinate in polygon ring");
            // GeoJSON order is [lon, lat]
            ring.emplace_back(coord[1].get<double>(), coord[0].get<double>());
        }
        return RegionMask::from_polygon(std::move(ring));
    }

    // Plain text: one cell id per line.
    std::vector<int> ids;
    std::istringstream lines(text);
    std::string line;
    long row = 0;
    while (std::getline(lines, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ids.push_back(static_cast<int>(
            parse_int_field(line, path.filename().string() + ":" + std::to_string(row))));
    }
    if (ids.empty()) throw InputError(path.filename().string() + ": no cell ids in mask");
    return RegionMask::from_ids(std::move(ids));
}

GridSeries apply_mask_and_filter(const GridSeries& grid, const RegionMask& mask,
                                 double min_rate_mm_h) {
    grid.validate();
    GridSeries out;
    out.time_step_minutes = grid.time_step_minutes;
    out.units = Units::mm_per_hour;
    for (const GridCell& cell : grid.cells) {
        if (!mask.contains_cell(cell)) continue;
        GridCell kept = cell;
        kept.id = out.cell_count();
        for (double& v : kept.series) {
            if (grid.units == Units::dbz) v = dbz_to_rain_rate(v);
            if (v <= min_rate_mm_h) v = 0.0;
        }
        out.cells.push_back(std::move(kept));
    }
    if (out.cells.empty()) throw InputError("mask excludes every cell (empty selection)");
    return out;
}

std::vector<int> constant_cell_ids(const GridSeries& grid) {
    std::vector<int> ids;
    for (const GridCell& c : grid.cells) {
        const auto [lo, hi] = std::minmax_element(c.series.begin(), c.series.end());
        if (c.series.empty() || *lo == *hi) ids.push_back(c.id);
    }
    return ids;
}

std::vector<GeoNode> node_table(const GridSeries& grid) {
    std::vector<GeoNode> nodes;
    nodes.reserve(grid.cells.size());
    for (const GridCell& c : grid.cells)
        nodes.push_back({c.id, c.x_km, c.y_km, c.lat, c.lon});
    return nodes;
}

} // namespace geonet
