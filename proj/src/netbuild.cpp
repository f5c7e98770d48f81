#include "geonet/netbuild.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "geonet/errors.hpp"

namespace geonet {

namespace {

void check_nodes(const SimilarityMatrix& sim, std::span<const GeoNode> nodes) {
    if (static_cast<int>(nodes.size()) != sim.size())
        throw InputError("node table size " + std::to_string(nodes.size()) +
                         " does not match similarity matrix size " + std::to_string(sim.size()));
}

std::vector<GeoNode> copy_nodes(std::span<const GeoNode> nodes) {
    return {nodes.begin(), nodes.end()};
}

} // namespace

GeoGraph threshold_graph(const SimilarityMatrix& sim, std::span<const GeoNode> nodes,
                         double tau, bool inclusive, std::string label) {
    check_nodes(sim, nodes);
    GeoGraph g;
    g.label = std::move(label);
    g.nodes = copy_nodes(nodes);
    const int n = sim.size();
    for (int i = 0; i < n; ++i) {
        if (sim.node_degenerate(i)) continue;
        for (int j = i + 1; j < n; ++j) {
            if (sim.node_degenerate(j)) continue;
            const double w = sim.at(i, j);
            if (w > tau || (inclusive && w == tau)) g.edges.push_back({i, j, w});
        }
    }
    return g;
}

std::vector<double> default_threshold_candidates(const SimilarityMatrix& sim) {
    const int n = sim.size();
    std::vector<double> weights;
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (int i = 0; i < n; ++i) {
        if (sim.node_degenerate(i)) continue;
        for (int j = i + 1; j < n; ++j) {
            if (sim.node_degenerate(j)) continue;
            const double w = sim.at(i, j);
            if (!any) {
                lo = hi = w;
                any = true;
            } else {
                lo = std::min(lo, w);
                hi = std::max(hi, w);
            }
            if (n <= 1000) weights.push_back(w);
        }
    }
    if (!any) throw ComputeError("similarity matrix has no non-degenerate pair");
    if (n <= 1000) {
        std::sort(weights.begin(), weights.end());
        weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
        return weights;
    }
    std::vector<double> grid(200);
    for (int k = 0; k < 200; ++k)
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / 199.0;
    return grid;
}

ThresholdScan scan_max_diameter_threshold(const SimilarityMatrix& sim,
                                          std::span<const GeoNode> nodes,
                                          std::span<const double> taus, bool inclusive) {
    check_nodes(sim, nodes);
    if (taus.empty()) throw InputError("threshold scan needs at least one candidate");
    if (!std::is_sorted(taus.begin(), taus.end()))
        throw InputError("threshold candidates must be sorted ascending");

    ThresholdScan scan;
    scan.taus.assign(taus.begin(), taus.end());
    scan.diameters.assign(taus.size(), 0);

    const long count = static_cast<long>(taus.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < count; ++k) {
        const GeoGraph g = threshold_graph(sim, nodes, taus[k], inclusive);
        scan.diameters[k] = giant_component_diameter(Adjacency(g));
    }

    scan.chosen_index = 0;
    for (long k = 1; k < count; ++k)
        if (scan.diameters[k] > scan.diameters[scan.chosen_index]) scan.chosen_index = static_cast<int>(k);
    scan.chosen_tau = scan.taus[scan.chosen_index];
    return scan;
}

double disparity_pvalue(double w, double strength, int degree) {
    if (!(strength > 0.0))
        throw ComputeError("disparity p-value needs positive strength");
    if (degree < 1) throw ComputeError("disparity p-value needs degree >= 1");
    if (w < 0.0 || w > strength)
        throw ComputeError("disparity p-value needs 0 <= w <= strength");
    return std::pow(1.0 - w / strength, degree - 1);
}

namespace {

struct SubstrateEdge {
    int i, j;
    double weight;
    double min_p;
};

// The complete weighted graph over positive, non-degenerate pairs, with
// the smaller endpoint p-value attached to every edge.
std::vector<SubstrateEdge> backbone_substrate(const SimilarityMatrix& sim) {
    const int n = sim.size();
    std::vector<SubstrateEdge> edges;
    std::vector<double> strength(static_cast<std::size_t>(n), 0.0);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        if (sim.node_degenerate(i)) continue;
        for (int j = i + 1; j < n; ++j) {
            if (sim.node_degenerate(j)) continue;
            const double w = sim.at(i, j);
            if (w <= 0.0) continue;
            edges.push_back({i, j, w, 1.0});
            strength[i] += w;
            strength[j] += w;
            ++degree[i];
            ++degree[j];
        }
    }
    for (SubstrateEdge& e : edges)
        e.min_p = std::min(disparity_pvalue(e.weight, strength[e.i], degree[e.i]),
                           disparity_pvalue(e.weight, strength[e.j], degree[e.j]));
    return edges;
}

} // namespace

GeoGraph backbone_graph(const SimilarityMatrix& sim, std::span<const GeoNode> nodes,
                        double alpha, std::string label) {
    check_nodes(sim, nodes);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InputError("alpha must be in (0, 1)");
    GeoGraph g;
    g.label = std::move(label);
    g.nodes = copy_nodes(nodes);
    for (const SubstrateEdge& e : backbone_substrate(sim))
        if (e.min_p < alpha) g.edges.push_back({e.i, e.j, e.weight});
    return g;
}

BackboneCalibration calibrate_alpha(const SimilarityMatrix& sim, long target_edges) {
    if (target_edges < 0) throw InputError("target edge count must be non-negative");

    std::vector<double> ps;
    for (const SubstrateEdge& e : backbone_substrate(sim)) ps.push_back(e.min_p);
    std::sort(ps.begin(), ps.end());
    const auto count_below = [&](double alpha) {
        return static_cast<long>(std::lower_bound(ps.begin(), ps.end(), alpha) - ps.begin());
    };

    // p > 0 on the substrate (w < strength whenever degree >= 2), so any
    // alpha at or below the smallest p yields zero edges, and p = 1 edges
    // are unreachable for alpha < 1.
    const long max_count = count_below(1.0);

    BackboneCalibration cal;
    cal.target_edges = target_edges;
    if (target_edges >= max_count) {
        cal.alpha = max_count > 0 ? (ps[max_count - 1] + 1.0) / 2.0 : 0.5;
        cal.achieved_edges = max_count;
        return cal;
    }
    if (target_edges == 0) {
        cal.alpha = ps.empty() ? 0.5 : ps.front() / 2.0;
        cal.achieved_edges = 0;
        return cal;
    }

    // Bisection on the monotone step count(alpha), run until the bracket
    // collapses to adjacent doubles; the two ends then hold the best
    // achievable counts on either side of the target.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) break;
        if (count_below(mid) < target_edges)
            lo = mid;
        else
            hi = mid;
    }
    const long c_lo = count_below(lo);
    const long c_hi = count_below(hi);
    // Ties prefer the smaller count.
    if (target_edges - c_lo <= c_hi - target_edges && lo > 0.0) {
        cal.alpha = lo;
        cal.achieved_edges = c_lo;
    } else if (target_edges - c_lo <= c_hi - target_edges) {
        // lo never moved off 0: zero edges is the best from below.
        cal.alpha = ps.front() / 2.0;
        cal.achieved_edges = 0;
    } else {
        cal.alpha = hi;
        cal.achieved_edges = c_hi;
    }
    return cal;
}

SharedEdges shared_edges(const GeoGraph& g1, const GeoGraph& g2) {
    if (g1.node_count() != g2.node_count())
        throw InputError("shared_edges: node sets differ in size");
    for (int k = 0; k < g1.node_count(); ++k)
        if (g1.nodes[k].id != g2.nodes[k].id)
            throw InputError("shared_edges: node sets differ at index " + std::to_string(k));

    std::unordered_set<long long> first;
    first.reserve(g1.edges.size() * 2);
    const auto key = [](const GeoEdge& e) {
        return static_cast<long long>(e.i) << 32 | static_cast<unsigned>(e.j);
    };
    for (const GeoEdge& e : g1.edges) first.insert(key(e));

    SharedEdges out;
    for (const GeoEdge& e : g2.edges)
        if (first.count(key(e))) ++out.count;
    out.fraction_of_first =
        g1.edges.empty() ? 0.0 : static_cast<double>(out.count) / static_cast<double>(g1.edges.size());
    return out;
}

} // namespace geonet
