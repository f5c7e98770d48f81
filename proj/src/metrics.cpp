#include "geonet/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "geonet/errors.hpp"

namespace geonet {

CoreMetrics core_metrics(const Adjacency& adj) {
    const int n = adj.size();
    CoreMetrics out;

    // Distances: one BFS per source, summed over ordered reachable pairs.
    std::vector<long long> sums(static_cast<std::size_t>(n), 0);
    std::vector<long long> pair_counts(static_cast<std::size_t>(n), 0);
    std::vector<int> maxima(static_cast<std::size_t>(n), 0);
#pragma omp parallel
    {
        std::vector<int> dist;
#pragma omp for schedule(dynamic, 16)
        for (int v = 0; v < n; ++v) {
            if (adj.degree(v) == 0) continue;
            bfs_distances(adj, v, dist);
            long long sum = 0, count = 0;
            int maxd = 0;
            for (int d : dist) {
                if (d > 0) {
                    sum += d;
                    ++count;
                    maxd = std::max(maxd, d);
                }
            }
            sums[v] = sum;
            pair_counts[v] = count;
            maxima[v] = maxd;
        }
    }
    long long total = 0, pairs = 0;
    int diam = 0;
    for (int v = 0; v < n; ++v) {
        total += sums[v];
        pairs += pair_counts[v];
        diam = std::max(diam, maxima[v]);
    }
    if (pairs > 0) {
        out.mean_l = static_cast<double>(total) / static_cast<double>(pairs);
        out.diameter = diam;
    }

    // Clustering: count links among each node's neighbors by sorted-list
    // intersection (neighbor lists come sorted from the CSR build).
    double c_sum = 0.0;
    for (int v = 0; v < n; ++v) {
        const auto nv = adj.neighbors(v);
        const int k = static_cast<int>(nv.size());
        if (k < 2) continue;
        long links2 = 0; // twice the number of links among neighbors
        for (int u : nv) {
            const auto nu = adj.neighbors(u);
            std::size_t a = 0, b = 0;
            while (a < nv.size() && b < nu.size()) {
                if (nv[a] < nu[b])
                    ++a;
                else if (nv[a] > nu[b])
                    ++b;
                else {
                    ++links2;
                    ++a;
                    ++b;
                }
            }
        }
        c_sum += static_cast<double>(links2) / (static_cast<double>(k) * (k - 1));
    }
    out.mean_c = n > 0 ? c_sum / static_cast<double>(n) : 0.0;
    return out;
}

double mean_shortest_path(const GeoGraph& g) {
    const CoreMetrics core = core_metrics(Adjacency(g));
    if (!core.mean_l)
        throw ComputeError("mean shortest path undefined: no reachable pair");
    return *core.mean_l;
}

double mean_clustering(const GeoGraph& g) {
    return core_metrics(Adjacency(g)).mean_c;
}

int diameter(const GeoGraph& g) {
    const CoreMetrics core = core_metrics(Adjacency(g));
    if (!core.diameter) throw ComputeError("diameter undefined: graph has no edges");
    return *core.diameter;
}

double degree_heterogeneity(std::span<const int> degrees) {
    long long sum = 0, sum_sq = 0;
    for (int k : degrees) {
        sum += k;
        sum_sq += static_cast<long long>(k) * k;
    }
    if (sum == 0) throw ComputeError("heterogeneity undefined: mean degree is zero");
    const double n = static_cast<double>(degrees.size());
    return n * static_cast<double>(sum_sq) / (static_cast<double>(sum) * static_cast<double>(sum));
}

double heterogeneity(const GeoGraph& g) {
    const Adjacency adj(g);
    std::vector<int> degrees(static_cast<std::size_t>(adj.size()));
    for (int v = 0; v < adj.size(); ++v) degrees[v] = adj.degree(v);
    return degree_heterogeneity(degrees);
}

ComponentSummary components(const GeoGraph& g) {
    const ComponentDecomposition comps = connected_components(Adjacency(g));
    return {comps.count(), comps.giant_size(), comps.singleton_count()};
}

MetricsReport full_report(const GeoGraph& g) {
    g.validate();
    MetricsReport report;
    report.label = g.label;
    report.n = g.node_count();
    report.l_edges = g.edge_count();

    if (!g.edges.empty()) {
        double lo = g.edges.front().weight, hi = lo;
        for (const GeoEdge& e : g.edges) {
            lo = std::min(lo, e.weight);
            hi = std::max(hi, e.weight);
        }
        report.weight_min = lo;
        report.weight_max = hi;
    }

    const Adjacency adj(g);
    const CoreMetrics core = core_metrics(adj);
    report.mean_shortest_path = core.mean_l;
    report.mean_clustering = core.mean_c;
    report.diameter = core.diameter;

    if (!g.edges.empty()) {
        std::vector<int> degrees(static_cast<std::size_t>(adj.size()));
        for (int v = 0; v < adj.size(); ++v) degrees[v] = adj.degree(v);
        report.kappa = degree_heterogeneity(degrees);
    }

    const ComponentDecomposition comps = connected_components(adj);
    report.num_components = comps.count();
    report.giant_component_size = comps.giant_size();
    report.singletons = comps.singleton_count();

    try {
        report.er = er_analytics(report.n, report.l_edges);
    } catch (const Error&) {
        // No analytic equivalent (too few nodes/edges or mean degree 1).
    }
    return report;
}

TableRow table_row(const MetricsReport& r) {
    TableRow row;
    row.label = r.label;
    row.l_edges = r.l_edges;
    row.weight_min = r.weight_min;
    row.weight_max = r.weight_max;
    row.mean_l = r.mean_shortest_path;
    row.mean_c = r.mean_clustering;
    if (r.diameter) row.diameter = static_cast<double>(*r.diameter);
    row.kappa = r.kappa;
    row.num_components = r.num_components;
    row.giant_size = r.giant_component_size;
    row.singletons = r.singletons;
    if (r.er) {
        row.l_rand = r.er->l_rand;
        row.c_rand = r.er->c_rand;
    }
    return row;
}

TableRow table_row(const EnsembleReport& r, const std::string& label) {
    TableRow row;
    row.label = label;
    row.l_edges = 0; // filled by the caller when known
    row.weight_min = r.weight_min;
    row.weight_max = r.weight_max;
    row.mean_l = r.mean_l;
    row.mean_c = r.mean_c;
    row.diameter = r.mean_diameter;
    row.kappa = r.kappa;
    return row;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return {buf, ptr};
}

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : "-"; }
std::string cell(const std::optional<long>& v) { return v ? std::to_string(*v) : "-"; }

} // namespace

void save_table_csv(std::span<const TableRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write table file: " + path.string());
    out << "network,L,weight_min,weight_max,mean_shortest_path,mean_clustering,"
           "diameter,kappa,num_components,giant_component,singletons,l_rand,c_rand\n";
    for (const TableRow& r : rows) {
        out << r.label << ',' << r.l_edges << ',' << cell(r.weight_min) << ','
            << cell(r.weight_max) << ',' << cell(r.mean_l) << ',' << cell(r.mean_c) << ','
            << cell(r.diameter) << ',' << cell(r.kappa) << ',' << cell(r.num_components)
            << ',' << cell(r.giant_size) << ',' << cell(r.singletons) << ','
            << cell(r.l_rand) << ',' << cell(r.c_rand) << "\n";
    }
}

namespace {

nlohmann::json er_to_json(const ErAnalytics& er) {
    return {{"n", er.n},     {"l_edges", er.l_edges}, {"p", er.p},
            {"mean_k", er.mean_k}, {"c_rand", er.c_rand},  {"l_rand", er.l_rand}};
}

} // namespace

void save_metrics_json(const MetricsReport& r, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["label"] = r.label;
    doc["n"] = r.n;
    doc["l_edges"] = r.l_edges;
    doc["weight_min"] = r.weight_min ? nlohmann::json(*r.weight_min) : nlohmann::json();
    doc["weight_max"] = r.weight_max ? nlohmann::json(*r.weight_max) : nlohmann::json();
    doc["mean_shortest_path"] =
        r.mean_shortest_path ? nlohmann::json(*r.mean_shortest_path) : nlohmann::json();
    doc["mean_clustering"] = r.mean_clustering;
    doc["diameter"] = r.diameter ? nlohmann::json(*r.diameter) : nlohmann::json();
    doc["kappa"] = r.kappa ? nlohmann::json(*r.kappa) : nlohmann::json();
    doc["num_components"] = r.num_components;
    doc["giant_component_size"] = r.giant_component_size;
    doc["singletons"] = r.singletons;
    doc["er"] = r.er ? er_to_json(*r.er) : nlohmann::json();
    std::ofstream out(path);
    if (!out) throw InputError("cannot write metrics file: " + path.string());
    out << doc.dump(2) << "\n";
}

void save_ensemble_json(const EnsembleReport& r, const std::string& label,
                        const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["label"] = label;
    doc["samples"] = r.samples;
    doc["seed"] = r.seed;
    doc["mean_shortest_path"] = r.mean_l;
    doc["mean_clustering"] = r.mean_c;
    doc["mean_diameter"] = r.mean_diameter;
    doc["kappa"] = r.kappa;
    doc["weight_min"] = r.weight_min;
    doc["weight_max"] = r.weight_max;
    doc["samples_without_paths"] = r.samples_without_paths;
    std::ofstream out(path);
    if (!out) throw InputError("cannot write ensemble file: " + path.string());
    out << doc.dump(2) << "\n";
}

} // namespace geonet
