#pragma once

// Independent brute-force reference implementations used to cross-check the
// library. Everything here is written directly from the defining formulas,
// deliberately sharing no code with the implementation under test.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "geonet/graph.hpp"

namespace oracles {

// Pearson correlation, two-pass textbook form.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0, dx2 = 0, dy2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        num += (x[k] - mx) * (y[k] - my);
        dx2 += (x[k] - mx) * (x[k] - mx);
        dy2 += (y[k] - my) * (y[k] - my);
    }
    return num / (std::sqrt(dx2) * std::sqrt(dy2));
}

// Mutual information from an equal-width 2-D histogram, summing the full
// bins x bins probability table in row-major order.
inline double mutual_information(const std::vector<double>& x, const std::vector<double>& y,
                                 int bins, bool normalize) {
    const std::size_t n = x.size();
    const double xmin = *std::min_element(x.begin(), x.end());
    const double xmax = *std::max_element(x.begin(), x.end());
    const double ymin = *std::min_element(y.begin(), y.end());
    const double ymax = *std::max_element(y.begin(), y.end());
    std::vector<long> joint(static_cast<std::size_t>(bins) * bins, 0);
    std::vector<long> rx(static_cast<std::size_t>(bins), 0), ry(static_cast<std::size_t>(bins), 0);
    auto bin_of = [bins](double v, double lo, double hi) {
        int b = static_cast<int>((v - lo) / ((hi - lo) / bins));
        return std::clamp(b, 0, bins - 1);
    };
    for (std::size_t k = 0; k < n; ++k) {
        const int bx = bin_of(x[k], xmin, xmax);
        const int by = bin_of(y[k], ymin, ymax);
        joint[static_cast<std::size_t>(bx) * bins + by] += 1;
        rx[static_cast<std::size_t>(bx)] += 1;
        ry[static_cast<std::size_t>(by)] += 1;
    }
    double mi = 0.0;
    for (int a = 0; a < bins; ++a) {
        for (int b = 0; b < bins; ++b) {
            const long c = joint[static_cast<std::size_t>(a) * bins + b];
            if (c == 0) continue;
            const double pxy = static_cast<double>(c) / static_cast<double>(n);
            const double px = static_cast<double>(rx[static_cast<std::size_t>(a)]) /
                              static_cast<double>(n);
            const double py = static_cast<double>(ry[static_cast<std::size_t>(b)]) /
                              static_cast<double>(n);
            mi += pxy * std::log2(pxy / (px * py));
        }
    }
    if (normalize) mi /= std::log2(static_cast<double>(bins));
    return mi;
}

// Dense all-pairs hop distances (Floyd-Warshall). -1 where unreachable.
inline std::vector<std::vector<int>> all_pairs_distances(const geonet::GeoGraph& g) {
    const int n = g.node_count();
    const int INF = 1 << 29;
    std::vector<std::vector<int>> d(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), INF));
    for (int v = 0; v < n; ++v) d[v][v] = 0;
    for (const geonet::GeoEdge& e : g.edges) d[e.i][e.j] = d[e.j][e.i] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d[i][j] >= INF) d[i][j] = -1;
    return d;
}

inline double mean_path_from_matrix(const std::vector<std::vector<int>>& d) {
    long long sum = 0, pairs = 0;
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d[i][j] > 0) {
                sum += d[i][j];
                ++pairs;
            }
    return static_cast<double>(sum) / static_cast<double>(pairs);
}

inline int diameter_from_matrix(const std::vector<std::vector<int>>& d) {
    int best = 0;
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) best = std::max(best, d[i][j]);
    return best;
}

// Mean local clustering by direct neighbor-pair enumeration on a dense
// adjacency matrix; degree < 2 contributes 0.
inline double mean_clustering(const geonet::GeoGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
    for (const geonet::GeoEdge& e : g.edges) adj[e.i][e.j] = adj[e.j][e.i] = true;
    double sum = 0.0;
    for (int v = 0; v < n; ++v) {
        std::vector<int> nb;
        for (int u = 0; u < n; ++u)
            if (adj[v][u]) nb.push_back(u);
        const int k = static_cast<int>(nb.size());
        if (k < 2) continue;
        long links = 0;
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                if (adj[nb[a]][nb[b]]) ++links;
        sum += 2.0 * static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
    }
    return sum / static_cast<double>(n);
}

inline double kappa(const geonet::GeoGraph& g) {
    std::vector<int> deg(static_cast<std::size_t>(g.node_count()), 0);
    for (const geonet::GeoEdge& e : g.edges) {
        ++deg[e.i];
        ++deg[e.j];
    }
    double k1 = 0, k2 = 0;
    for (int k : deg) {
        k1 += k;
        k2 += static_cast<double>(k) * k;
    }
    const double n = static_cast<double>(deg.size());
    return (k2 / n) / ((k1 / n) * (k1 / n));
}

struct Components {
    int count = 0, giant = 0, singletons = 0;
};

inline Components components(const geonet::GeoGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const geonet::GeoEdge& e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    Components out;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++out.count;
        int size = 0;
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            ++size;
            for (int u : adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
        }
        out.giant = std::max(out.giant, size);
        if (size == 1) ++out.singletons;
    }
    return out;
}

// Uniform random simple graph on n nodes with the given edge probability;
// weights uniform in (0, 1).
inline geonet::GeoGraph random_graph(int n, double edge_prob, std::uint64_t seed) {
    geonet::GeoGraph g;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int v = 0; v < n; ++v)
        g.nodes.push_back({v, unit(rng) * 20.0, unit(rng) * 20.0, 0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (unit(rng) < edge_prob) g.edges.push_back({i, j, 0.001 + 0.999 * unit(rng)});
    return g;
}

inline std::vector<double> random_series(int t, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> s(static_cast<std::size_t>(t));
    for (double& v : s) v = gauss(rng);
    return s;
}

} // namespace oracles
