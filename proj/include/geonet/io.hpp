#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "geonet/geoanalysis.hpp"
#include "geonet/graph.hpp"

namespace geonet {

// Shortest round-trip decimal representation (locale-independent).
std::string format_double(double v);

void save_nodes_csv(std::span<const GeoNode> nodes, const std::filesystem::path& path);
std::vector<GeoNode> load_nodes_csv(const std::filesystem::path& path);

// Edge list `i,j,weight`.
void save_edges_csv(const GeoGraph& g, const std::filesystem::path& path);
GeoGraph load_graph(const std::filesystem::path& edges_csv,
                    const std::filesystem::path& nodes_csv, std::string label = {});

// FeatureCollection: Point per node, LineString per edge (weight + network
// label as properties).
void save_geojson(const GeoGraph& g, const std::filesystem::path& path);

// `bin_lo,bin_hi,count` rows.
void save_histogram_csv(const Histogram& h, const std::filesystem::path& path);

// `i,j,topo_hops,geo_km` rows.
void save_scatter_csv(const DistancePairSet& pairs, const std::filesystem::path& path);

void save_regression_json(const RegressionResult& r, const std::filesystem::path& path);
void save_edge_length_json(const EdgeLengthStats& s, const std::filesystem::path& path);

// FNV-1a 64-bit content fingerprint (not cryptographic).
std::uint64_t content_hash(std::span<const std::uint8_t> bytes);
std::uint64_t file_hash(const std::filesystem::path& path);

} // namespace geonet
