#pragma once

#include <span>
#include <string>
#include <vector>

namespace geonet {

struct GeoNode {
    int id = 0;
    double x_km = 0.0, y_km = 0.0; // planar grid position, kilometers
    double lat = 0.0, lon = 0.0;   // decimal degrees, carried for export
};

struct GeoEdge {
    int i = 0, j = 0; // i < j
    double weight = 0.0;
};

// Undirected weighted graph whose nodes carry fixed geographic positions.
struct GeoGraph {
    std::vector<GeoNode> nodes;
    std::vector<GeoEdge> edges;
    std::string label;

    int node_count() const { return static_cast<int>(nodes.size()); }
    long edge_count() const { return static_cast<long>(edges.size()); }

    // Throws InputError on self-loops, duplicate or out-of-range edges,
    // or non-finite weights.
    void validate() const;
};

// CSR adjacency for traversals.
class Adjacency {
public:
    Adjacency() = default;
    Adjacency(int n, std::span<const GeoEdge> edges);
    explicit Adjacency(const GeoGraph& g) : Adjacency(g.node_count(), g.edges) {}

    int size() const { return static_cast<int>(offsets_.size()) - 1; }
    std::span<const int> neighbors(int v) const {
        return {targets_.data() + offsets_[v],
                static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
    }
    int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }

private:
    std::vector<int> offsets_{0};
    std::vector<int> targets_;
};

// Hop distances from src into dist (resized to n); -1 where unreachable.
void bfs_distances(const Adjacency& adj, int src, std::vector<int>& dist);

struct ComponentDecomposition {
    std::vector<int> component_of; // node -> component index
    std::vector<int> sizes;        // component index -> node count

    int count() const { return static_cast<int>(sizes.size()); }
    int giant_size() const;
    int singleton_count() const;
};

ComponentDecomposition connected_components(const Adjacency& adj);

// Diameter of the largest component: the maximum BFS eccentricity inside it.
// When several components tie for largest the maximum over them is taken.
// 0 for an edgeless graph.
int giant_component_diameter(const Adjacency& adj);

// Planar Euclidean distance in km between node positions.
double geo_distance_km(const GeoNode& a, const GeoNode& b);

} // namespace geonet
