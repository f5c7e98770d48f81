#pragma once

#include <vector>

#include "geonet/graph.hpp"

namespace geonet {

struct DistancePair {
    int i = 0, j = 0;
    int topo_hops = 0;
    double geo_km = 0.0;
};

// Every unordered reachable pair with its BFS hop count and planar km
// distance.
struct DistancePairSet {
    std::vector<DistancePair> pairs;
};

DistancePairSet distance_pairs(const GeoGraph& g);

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double p_value = 1.0; // two-sided t-test on the slope, n-2 dof
    long n_pairs = 0;
};

// OLS of hop distance on geographic distance.
RegressionResult regress_topo_on_geo(const DistancePairSet& pairs);

struct Histogram {
    std::vector<double> bin_edges; // bins + 1 boundaries
    std::vector<long> counts;
};

struct EdgeLengthStats {
    double mean_km = 0.0;
    double max_km = 0.0;
    Histogram histogram; // equal-width over [0, max_km]
};

EdgeLengthStats edge_length_stats(const GeoGraph& g, int bins = 20);

// Equal-width histogram of edge weights over [min, max]; counts sum to |E|.
Histogram weight_histogram(const GeoGraph& g, int bins = 20);

} // namespace geonet
