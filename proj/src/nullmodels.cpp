#include "geonet/nullmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "geonet/errors.hpp"
#include "geonet/metrics.hpp"

namespace geonet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (seed, index) so samples can be generated in any
// order, or in parallel, without changing the ensemble.
std::mt19937_64 sample_rng(std::uint64_t seed, long index) {
    const std::uint64_t mixed =
        splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
    return std::mt19937_64(mixed);
}

struct SourceData {
    std::vector<int> degrees;
    std::vector<double> weights;
};

SourceData source_data(const GeoGraph& g) {
    SourceData src;
    src.degrees.assign(static_cast<std::size_t>(g.node_count()), 0);
    for (const GeoEdge& e : g.edges) {
        ++src.degrees[e.i];
        ++src.degrees[e.j];
        src.weights.push_back(e.weight);
    }
    return src;
}

Pseudograph sample_with_rng(std::span<const int> degrees, std::span<const double> weights,
                            std::mt19937_64& rng) {
    long stub_count = 0;
    for (int d : degrees) {
        if (d < 0) throw InputError("negative degree in sequence");
        stub_count += d;
    }
    if (stub_count % 2 != 0)
        throw ComputeError("degree sequence has odd sum: " + std::to_string(stub_count));
    const long edge_count = stub_count / 2;
    if (static_cast<long>(weights.size()) != edge_count)
        throw InputError("weight multiset size " + std::to_string(weights.size()) +
                         " does not match edge count " + std::to_string(edge_count));

    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(stub_count));
    for (std::size_t v = 0; v < degrees.size(); ++v)
        stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[v]), static_cast<int>(v));
    std::shuffle(stubs.begin(), stubs.end(), rng);

    std::vector<std::size_t> perm(weights.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    Pseudograph pg;
    pg.n = static_cast<int>(degrees.size());
    pg.edges.reserve(static_cast<std::size_t>(edge_count));
    pg.weights.reserve(static_cast<std::size_t>(edge_count));
    for (long e = 0; e < edge_count; ++e) {
        pg.edges.emplace_back(stubs[2 * e], stubs[2 * e + 1]);
        pg.weights.push_back(weights[perm[static_cast<std::size_t>(e)]]);
    }
    return pg;
}

} // namespace

Pseudograph configuration_sample(std::span<const int> degrees,
                                 std::span<const double> weights, std::uint64_t seed) {
    std::mt19937_64 rng = sample_rng(seed, 0);
    return sample_with_rng(degrees, weights, rng);
}

GeoGraph simplify(const Pseudograph& pg, std::span<const GeoNode> nodes, std::string label) {
    if (static_cast<int>(nodes.size()) != pg.n)
        throw InputError("node table size does not match pseudograph");
    GeoGraph g;
    g.label = std::move(label);
    g.nodes.assign(nodes.begin(), nodes.end());
    std::unordered_set<long long> seen;
    seen.reserve(pg.edges.size() * 2);
    for (std::size_t e = 0; e < pg.edges.size(); ++e) {
        int i = pg.edges[e].first, j = pg.edges[e].second;
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        const long long key = static_cast<long long>(i) << 32 | static_cast<unsigned>(j);
        if (seen.insert(key).second) g.edges.push_back({i, j, pg.weights[e]});
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const GeoEdge& a, const GeoEdge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return g;
}

GeoGraph ensemble_sample(const GeoGraph& g, std::uint64_t seed, long index, std::string label) {
    const SourceData src = source_data(g);
    std::mt19937_64 rng = sample_rng(seed, index);
    const Pseudograph pg = sample_with_rng(src.degrees, src.weights, rng);
    return simplify(pg, g.nodes, std::move(label));
}

EnsembleReport ensemble_metrics(const GeoGraph& g, long samples, std::uint64_t seed) {
    if (samples < 1) throw InputError("ensemble needs at least one sample");
    const SourceData src = source_data(g);
    if (src.weights.empty())
        throw ComputeError("ensemble undefined for an edgeless source graph");

    struct SampleResult {
        double l = 0.0, c = 0.0;
        int diam = 0;
        bool has_paths = false;
        double wmin = 0.0, wmax = 0.0;
        bool has_edges = false;
    };
    std::vector<SampleResult> results(static_cast<std::size_t>(samples));

#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < samples; ++k) {
        std::mt19937_64 rng = sample_rng(seed, k);
        const Pseudograph pg = sample_with_rng(src.degrees, src.weights, rng);
        const GeoGraph sample = simplify(pg, g.nodes);
        SampleResult& r = results[static_cast<std::size_t>(k)];
        const CoreMetrics core = core_metrics(Adjacency(sample));
        r.c = core.mean_c;
        if (core.mean_l) {
            r.l = *core.mean_l;
            r.diam = *core.diameter;
            r.has_paths = true;
        }
        if (!sample.edges.empty()) {
            r.has_edges = true;
            r.wmin = r.wmax = sample.edges.front().weight;
            for (const GeoEdge& e : sample.edges) {
                r.wmin = std::min(r.wmin, e.weight);
                r.wmax = std::max(r.wmax, e.weight);
            }
        }
    }

    // Order-fixed compensated sums keep the report independent of the
    // parallel schedule.
    auto kahan_add = [](double& sum, double& comp, double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    double l_sum = 0, l_comp = 0, c_sum = 0, c_comp = 0, d_sum = 0, d_comp = 0;
    long with_paths = 0;
    bool any_edges = false;
    double wmin = 0, wmax = 0;
    for (const SampleResult& r : results) {
        kahan_add(c_sum, c_comp, r.c);
        if (r.has_paths) {
            kahan_add(l_sum, l_comp, r.l);
            kahan_add(d_sum, d_comp, static_cast<double>(r.diam));
            ++with_paths;
        }
        if (r.has_edges) {
            if (!any_edges) {
                wmin = r.wmin;
                wmax = r.wmax;
                any_edges = true;
            } else {
                wmin = std::min(wmin, r.wmin);
                wmax = std::max(wmax, r.wmax);
            }
        }
    }
    if (with_paths == 0)
        throw ComputeError("no ensemble sample has a reachable pair");

    EnsembleReport report;
    report.samples = samples;
    report.seed = seed;
    report.mean_l = l_sum / static_cast<double>(with_paths);
    report.mean_diameter = d_sum / static_cast<double>(with_paths);
    report.mean_c = c_sum / static_cast<double>(samples);
    report.kappa = degree_heterogeneity(src.degrees);
    report.weight_min = wmin;
    report.weight_max = wmax;
    report.samples_without_paths = samples - with_paths;
    return report;
}

ErAnalytics er_analytics(int n, long l_edges) {
    if (n < 2) throw InputError("analytic random-graph values need n >= 2");
    if (l_edges < 1) throw InputError("analytic random-graph values need at least one edge");
    ErAnalytics er;
    er.n = n;
    er.l_edges = l_edges;
    er.p = 2.0 * static_cast<double>(l_edges) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
    er.mean_k = er.p * static_cast<double>(n - 1);
    er.c_rand = er.p;
    const double log_k = std::log(er.mean_k);
    if (log_k == 0.0)
        throw ComputeError("mean degree 1 leaves the path-length estimate undefined");
    er.l_rand = std::log(static_cast<double>(n)) / log_k;
    return er;
}

bool small_world_test(double l, double c, double l_rand, double c_rand) {
    if (!std::isfinite(l) || !std::isfinite(c) || !std::isfinite(l_rand) ||
        !std::isfinite(c_rand))
        throw InputError("small-world test needs finite inputs");
    return l < l_rand && c > c_rand;
}

} // namespace geonet
