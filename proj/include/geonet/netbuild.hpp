#pragma once

#include <span>
#include <string>
#include <vector>

#include "geonet/graph.hpp"
#include "geonet/similarity.hpp"

namespace geonet {

// Keeps edge (i,j) iff weight > tau (>= tau when inclusive). Degenerate
// pairs never produce edges. All nodes are retained, isolates included.
GeoGraph threshold_graph(const SimilarityMatrix& sim, std::span<const GeoNode> nodes,
                         double tau, bool inclusive = false, std::string label = {});

// Candidates for the diameter scan: the sorted distinct off-diagonal
// weights when n <= 1000, otherwise a 200-point uniform grid over the
// weight range.
std::vector<double> default_threshold_candidates(const SimilarityMatrix& sim);

struct ThresholdScan {
    std::vector<double> taus;
    std::vector<int> diameters; // giant-component diameter at each tau
    double chosen_tau = 0.0;
    int chosen_index = -1;
};

// Evaluates every candidate and picks the tau of maximum giant-component
// diameter; ties break toward the smallest tau.
ThresholdScan scan_max_diameter_threshold(const SimilarityMatrix& sim,
                                          std::span<const GeoNode> nodes,
                                          std::span<const double> taus,
                                          bool inclusive = false);

// Probability that a uniformly random split of `strength` over `degree`
// links puts at least w on one of them: (1 - w/strength)^(degree - 1).
double disparity_pvalue(double w, double strength, int degree);

// Disparity-filter backbone. The substrate is the complete weighted graph
// over all non-degenerate pairs with positive weight; an edge survives iff
// the smaller of its two endpoint p-values is below alpha.
GeoGraph backbone_graph(const SimilarityMatrix& sim, std::span<const GeoNode> nodes,
                        double alpha, std::string label = {});

struct BackboneCalibration {
    double alpha = 0.0;
    long target_edges = 0;
    long achieved_edges = 0;
};

// Searches alpha in (0, 1) for the backbone whose edge count is nearest to
// target_edges, preferring the smaller count on exact ties. The edge count
// is monotone non-decreasing in alpha, so a bisection over the edge
// p-values finds the optimum exactly.
BackboneCalibration calibrate_alpha(const SimilarityMatrix& sim, long target_edges);

struct SharedEdges {
    long count = 0;
    double fraction_of_first = 0.0;
};

// Undirected edge-set intersection; both graphs must share the node set.
SharedEdges shared_edges(const GeoGraph& g1, const GeoGraph& g2);

} // namespace geonet
