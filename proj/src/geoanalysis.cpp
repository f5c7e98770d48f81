#include "geonet/geoanalysis.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "geonet/errors.hpp"

namespace geonet {

DistancePairSet distance_pairs(const GeoGraph& g) {
    if (g.edges.empty()) throw ComputeError("distance pairs undefined: graph has no edges");
    const Adjacency adj(g);
    const int n = adj.size();
    DistancePairSet out;

    std::vector<std::vector<DistancePair>> per_source(static_cast<std::size_t>(n));
#pragma omp parallel
    {
        std::vector<int> dist;
#pragma omp for schedule(dynamic, 16)
        for (int v = 0; v < n; ++v) {
            if (adj.degree(v) == 0) continue;
            bfs_distances(adj, v, dist);
            for (int u = v + 1; u < n; ++u)
                if (dist[u] > 0)
                    per_source[v].push_back(
                        {v, u, dist[u], geo_distance_km(g.nodes[v], g.nodes[u])});
        }
    }
    for (auto& chunk : per_source)
        out.pairs.insert(out.pairs.end(), chunk.begin(), chunk.end());
    return out;
}

RegressionResult regress_topo_on_geo(const DistancePairSet& pairs) {
    const long n = static_cast<long>(pairs.pairs.size());
    if (n < 3) throw InputError("regression needs at least 3 pairs");

    double sx = 0, sy = 0;
    for (const DistancePair& p : pairs.pairs) {
        sx += p.geo_km;
        sy += p.topo_hops;
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (const DistancePair& p : pairs.pairs) {
        const double dx = p.geo_km - mx;
        const double dy = static_cast<double>(p.topo_hops) - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0) throw ComputeError("regression predictor has zero variance");

    RegressionResult res;
    res.n_pairs = n;
    res.slope = sxy / sxx;
    res.intercept = my - res.slope * mx;
    res.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;

    const double rss = std::max(syy - res.slope * sxy, 0.0);
    const double dof = static_cast<double>(n - 2);
    if (rss == 0.0) {
        res.p_value = 0.0; // exact fit
    } else {
        const double se = std::sqrt(rss / dof / sxx);
        const double t = std::abs(res.slope / se);
        const boost::math::students_t dist(dof);
        res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    }
    return res;
}

namespace {

Histogram make_histogram(const std::vector<double>& values, int bins, double lo, double hi) {
    if (bins < 1) throw InputError("histogram needs at least one bin");
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    const double width = (hi - lo) / bins;
    for (int k = 0; k <= bins; ++k) h.bin_edges[k] = lo + width * k;
    h.bin_edges[static_cast<std::size_t>(bins)] = hi;
    for (double v : values) {
        int b = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
        h.counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1;
    }
    return h;
}

} // namespace

EdgeLengthStats edge_length_stats(const GeoGraph& g, int bins) {
    if (g.edges.empty()) throw ComputeError("edge length stats undefined: graph has no edges");
    std::vector<double> lengths;
    lengths.reserve(g.edges.size());
    for (const GeoEdge& e : g.edges)
        lengths.push_back(geo_distance_km(g.nodes[e.i], g.nodes[e.j]));
    EdgeLengthStats stats;
    double sum = 0.0;
    stats.max_km = lengths.front();
    for (double v : lengths) {
        sum += v;
        stats.max_km = std::max(stats.max_km, v);
    }
    stats.mean_km = sum / static_cast<double>(lengths.size());
    stats.histogram = make_histogram(lengths, bins, 0.0, stats.max_km);
    return stats;
}

Histogram weight_histogram(const GeoGraph& g, int bins) {
    if (g.edges.empty()) throw ComputeError("weight histogram undefined: graph has no edges");
    std::vector<double> weights;
    weights.reserve(g.edges.size());
    double lo = g.edges.front().weight, hi = lo;
    for (const GeoEdge& e : g.edges) {
        weights.push_back(e.weight);
        lo = std::min(lo, e.weight);
        hi = std::max(hi, e.weight);
    }
    return make_histogram(weights, bins, lo, hi);
}

} // namespace geonet
