#include "geonet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "geonet/errors.hpp"

namespace geonet {

void GeoGraph::validate() const {
    const int n = node_count();
    std::set<std::pair<int, int>> seen;
    for (const GeoEdge& e : edges) {
        if (e.i == e.j)
            throw InputError("graph '" + label + "': self-loop at node " + std::to_string(e.i));
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
            throw InputError("graph '" + label + "': edge endpoint out of range: (" +
                             std::to_string(e.i) + "," + std::to_string(e.j) + ")");
        if (e.i > e.j)
            throw InputError("graph '" + label + "': edge endpoints not ordered i < j");
        if (!std::isfinite(e.weight))
            throw InputError("graph '" + label + "': non-finite weight on edge (" +
                             std::to_string(e.i) + "," + std::to_string(e.j) + ")");
        if (!seen.insert({e.i, e.j}).second)
            throw InputError("graph '" + label + "': duplicate edge (" +
                             std::to_string(e.i) + "," + std::to_string(e.j) + ")");
    }
}

Adjacency::Adjacency(int n, std::span<const GeoEdge> edges) {
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const GeoEdge& e : edges) {
        ++offsets_[e.i + 1];
        ++offsets_[e.j + 1];
    }
    for (int v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    targets_.resize(static_cast<std::size_t>(offsets_[n]));
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const GeoEdge& e : edges) {
        targets_[cursor[e.i]++] = e.j;
        targets_[cursor[e.j]++] = e.i;
    }
    for (int v = 0; v < n; ++v) {
        auto begin = targets_.begin() + offsets_[v];
        auto end = targets_.begin() + offsets_[v + 1];
        std::sort(begin, end);
    }
}

void bfs_distances(const Adjacency& adj, int src, std::vector<int>& dist) {
    const int n = adj.size();
    dist.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(n));
    dist[src] = 0;
    queue.push_back(src);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        const int dv = dist[v];
        for (int u : adj.neighbors(v)) {
            if (dist[u] < 0) {
                dist[u] = dv + 1;
                queue.push_back(u);
            }
        }
    }
}

int ComponentDecomposition::giant_size() const {
    int best = 0;
    for (int s : sizes) best = std::max(best, s);
    return best;
}

int ComponentDecomposition::singleton_count() const {
    int c = 0;
    for (int s : sizes)
        if (s == 1) ++c;
    return c;
}

ComponentDecomposition connected_components(const Adjacency& adj) {
    const int n = adj.size();
    ComponentDecomposition out;
    out.component_of.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> queue;
    for (int start = 0; start < n; ++start) {
        if (out.component_of[start] >= 0) continue;
        const int comp = out.count();
        out.sizes.push_back(0);
        queue.clear();
        queue.push_back(start);
        out.component_of[start] = comp;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int v = queue[head];
            ++out.sizes[comp];
            for (int u : adj.neighbors(v)) {
                if (out.component_of[u] < 0) {
                    out.component_of[u] = comp;
                    queue.push_back(u);
                }
            }
        }
    }
    return out;
}

int giant_component_diameter(const Adjacency& adj) {
    const ComponentDecomposition comps = connected_components(adj);
    const int giant = comps.giant_size();
    if (giant <= 1) return 0;
    int best = 0;
    std::vector<int> dist;
    for (int v = 0; v < adj.size(); ++v) {
        if (comps.sizes[comps.component_of[v]] != giant) continue;
        bfs_distances(adj, v, dist);
        for (int d : dist) best = std::max(best, d);
    }
    return best;
}

double geo_distance_km(const GeoNode& a, const GeoNode& b) {
    const double dx = a.x_km - b.x_km;
    const double dy = a.y_km - b.y_km;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace geonet
