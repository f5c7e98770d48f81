#include "geonet/io.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "geonet/errors.hpp"

namespace geonet {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return {buf, ptr};
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());
    return in;
}

struct LineParser {
    explicit LineParser(const std::filesystem::path& p) : path(p) {}

    const std::filesystem::path& path;
    long row = 0;
    std::string line;

    bool next(std::ifstream& in) {
        while (std::getline(in, line)) {
            ++row;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError(path.filename().string() + ":" + std::to_string(row) + ": " + what);
    }

    template <typename T>
    const char* field(const char* p, const char* end, T& out, bool last) {
        auto [ptr, ec] = std::from_chars(p, end, out);
        if (ec != std::errc() || (last ? ptr != end : (ptr == end || *ptr != ',')))
            fail("malformed row '" + line + "'");
        return last ? ptr : ptr + 1;
    }
};

} // namespace

void save_nodes_csv(std::span<const GeoNode> nodes, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "id,x_km,y_km,lat,lon\n";
    for (const GeoNode& n : nodes)
        out << n.id << ',' << format_double(n.x_km) << ',' << format_double(n.y_km) << ','
            << format_double(n.lat) << ',' << format_double(n.lon) << "\n";
}

std::vector<GeoNode> load_nodes_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    LineParser p{path};
    if (!p.next(in) || p.line != "id,x_km,y_km,lat,lon")
        throw InputError(path.filename().string() + ":1: expected header id,x_km,y_km,lat,lon");
    std::vector<GeoNode> nodes;
    while (p.next(in)) {
        GeoNode n;
        const char* cur = p.line.data();
        const char* end = p.line.data() + p.line.size();
        cur = p.field(cur, end, n.id, false);
        cur = p.field(cur, end, n.x_km, false);
        cur = p.field(cur, end, n.y_km, false);
        cur = p.field(cur, end, n.lat, false);
        p.field(cur, end, n.lon, true);
        if (n.id != static_cast<int>(nodes.size())) p.fail("node ids must be contiguous from 0");
        nodes.push_back(n);
    }
    if (nodes.empty()) throw InputError(path.filename().string() + ": no nodes");
    return nodes;
}

void save_edges_csv(const GeoGraph& g, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "i,j,weight\n";
    for (const GeoEdge& e : g.edges)
        out << e.i << ',' << e.j << ',' << format_double(e.weight) << "\n";
}

GeoGraph load_graph(const std::filesystem::path& edges_csv,
                    const std::filesystem::path& nodes_csv, std::string label) {
    GeoGraph g;
    g.label = std::move(label);
    g.nodes = load_nodes_csv(nodes_csv);
    std::ifstream in = open_in(edges_csv);
    LineParser p{edges_csv};
    if (!p.next(in) || p.line != "i,j,weight")
        throw InputError(edges_csv.filename().string() + ":1: expected header i,j,weight");
    while (p.next(in)) {
        GeoEdge e;
        const char* cur = p.line.data();
        const char* end = p.line.data() + p.line.size();
        cur = p.field(cur, end, e.i, false);
        cur = p.field(cur, end, e.j, false);
        p.field(cur, end, e.weight, true);
        g.edges.push_back(e);
    }
    g.validate();
    return g;
}

void save_geojson(const GeoGraph& g, const std::filesystem::path& path) {
    nlohmann::json features = nlohmann::json::array();
    for (const GeoNode& n : g.nodes) {
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", {n.lon, n.lat}}}},
                            {"properties", {{"id", n.id}, {"network", g.label}}}});
    }
    for (const GeoEdge& e : g.edges) {
        const GeoNode& a = g.nodes[e.i];
        const GeoNode& b = g.nodes[e.j];
        features.push_back(
            {{"type", "Feature"},
             {"geometry",
              {{"type", "LineString"},
               {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}}},
             {"properties",
              {{"i", e.i}, {"j", e.j}, {"weight", e.weight}, {"network", g.label}}}});
    }
    nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    open_out(path) << doc.dump(2) << "\n";
}

void save_histogram_csv(const Histogram& h, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t k = 0; k < h.counts.size(); ++k)
        out << format_double(h.bin_edges[k]) << ',' << format_double(h.bin_edges[k + 1]) << ','
            << h.counts[k] << "\n";
}

void save_scatter_csv(const DistancePairSet& pairs, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "i,j,topo_hops,geo_km\n";
    for (const DistancePair& p : pairs.pairs)
        out << p.i << ',' << p.j << ',' << p.topo_hops << ',' << format_double(p.geo_km) << "\n";
}

void save_regression_json(const RegressionResult& r, const std::filesystem::path& path) {
    nlohmann::json doc = {{"slope", r.slope},
                          {"intercept", r.intercept},
                          {"r_squared", r.r_squared},
                          {"p_value", r.p_value},
                          {"n_pairs", r.n_pairs},
                          {"response", "topo_hops"},
                          {"predictor", "geo_km"}};
    open_out(path) << doc.dump(2) << "\n";
}

void save_edge_length_json(const EdgeLengthStats& s, const std::filesystem::path& path) {
    nlohmann::json doc = {{"mean_km", s.mean_km}, {"max_km", s.max_km}};
    open_out(path) << doc.dump(2) << "\n";
}

std::uint64_t content_hash(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file for hashing: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            h ^= static_cast<std::uint8_t>(buf[k]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

} // namespace geonet
