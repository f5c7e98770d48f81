#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geonet/graph.hpp"

namespace geonet {

// Raw stub-matching sample: self-loops and parallel edges allowed.
struct Pseudograph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> weights; // one per edge
};

// Random pseudograph realizing the degree sequence exactly, with the given
// weight multiset permuted onto the edges. Deterministic for a given seed.
Pseudograph configuration_sample(std::span<const int> degrees,
                                 std::span<const double> weights, std::uint64_t seed);

// Drops self-loops and collapses parallel edges; a collapsed edge keeps the
// weight of its first occurrence, surplus weights are discarded.
GeoGraph simplify(const Pseudograph& pg, std::span<const GeoNode> nodes,
                  std::string label = {});

struct EnsembleReport {
    long samples = 0;
    std::uint64_t seed = 0;
    double mean_l = 0.0;
    double mean_c = 0.0;
    double mean_diameter = 0.0;
    double kappa = 0.0; // from the degree sequence, identical to the source
    double weight_min = 0.0, weight_max = 0.0;
    // Samples that simplified to a graph without reachable pairs; these are
    // excluded from mean_l and mean_diameter.
    long samples_without_paths = 0;
};

// Degree-sequence-matched ensemble: per-sample mean shortest path, mean
// clustering and diameter on the simplified graphs, averaged over samples.
// Sample k draws from a stream derived from (seed, k), so the report does
// not depend on thread count.
EnsembleReport ensemble_metrics(const GeoGraph& g, long samples, std::uint64_t seed);

// Regenerates sample `index` of the ensemble (already simplified).
GeoGraph ensemble_sample(const GeoGraph& g, std::uint64_t seed, long index,
                         std::string label = {});

struct ErAnalytics {
    int n = 0;
    long l_edges = 0;
    double p = 0.0;      // 2L / (N (N-1))
    double mean_k = 0.0; // p (N-1)
    double c_rand = 0.0; // = p
    double l_rand = 0.0; // log(N) / log(mean_k)
};

ErAnalytics er_analytics(int n, long l_edges);

// True iff l < l_rand and c > c_rand (both strict).
bool small_world_test(double l, double c, double l_rand, double c_rand);

} // namespace geonet
