#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "geonet/graph.hpp"
#include "geonet/nullmodels.hpp"

namespace geonet {

// Unweighted hop metrics; shortest paths average over reachable pairs only.

double mean_shortest_path(const GeoGraph& g); // ComputeError if no reachable pair
double mean_clustering(const GeoGraph& g);    // nodes of degree < 2 count as 0
int diameter(const GeoGraph& g);              // max over components; ComputeError if edgeless
double heterogeneity(const GeoGraph& g);      // <k^2> / <k>^2; ComputeError if no edges

struct ComponentSummary {
    int num_components = 0;
    int giant_size = 0;
    int singletons = 0;
};

ComponentSummary components(const GeoGraph& g);

// Shared single-sweep computation used by full_report and the ensembles.
struct CoreMetrics {
    std::optional<double> mean_l; // absent when no pair is reachable
    std::optional<int> diameter;  // absent when no pair is reachable
    double mean_c = 0.0;
};

CoreMetrics core_metrics(const Adjacency& adj);

// kappa of a degree sequence: n * sum(k^2) / sum(k)^2.
double degree_heterogeneity(std::span<const int> degrees);

struct MetricsReport {
    std::string label;
    int n = 0;
    long l_edges = 0;
    std::optional<double> weight_min, weight_max;
    std::optional<double> mean_shortest_path;
    double mean_clustering = 0.0;
    std::optional<int> diameter;
    std::optional<double> kappa;
    int num_components = 0;
    int giant_component_size = 0;
    int singletons = 0;
    std::optional<ErAnalytics> er; // absent when the analytic form is undefined
};

MetricsReport full_report(const GeoGraph& g);

// One row of the summary table. Ensemble rows carry fractional diameters
// and no component counts, so everything is optional.
struct TableRow {
    std::string label;
    long l_edges = 0;
    std::optional<double> weight_min, weight_max;
    std::optional<double> mean_l;
    std::optional<double> mean_c;
    std::optional<double> diameter;
    std::optional<double> kappa;
    std::optional<long> num_components, giant_size, singletons;
    std::optional<double> l_rand, c_rand;
};

TableRow table_row(const MetricsReport& report);
TableRow table_row(const EnsembleReport& report, const std::string& label);

// CSV with one row per network; absent values written as '-'.
void save_table_csv(std::span<const TableRow> rows, const std::filesystem::path& path);

void save_metrics_json(const MetricsReport& report, const std::filesystem::path& path);
void save_ensemble_json(const EnsembleReport& report, const std::string& label,
                        const std::filesystem::path& path);

} // namespace geonet
