#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "geonet/errors.hpp"
#include "geonet/metrics.hpp"
#include "geonet/nullmodels.hpp"
#include "oracles.hpp"

using namespace geonet;

namespace {

GeoGraph triangle() {
    GeoGraph g;
    for (int v = 0; v < 3; ++v) g.nodes.push_back({v, static_cast<double>(v), 0, 0, 0});
    g.edges = {{0, 1, 0.5}, {0, 2, 0.6}, {1, 2, 0.7}};
    return g;
}

std::vector<int> realized_degrees(const Pseudograph& pg) {
    std::vector<int> deg(static_cast<std::size_t>(pg.n), 0);
    for (const auto& [i, j] : pg.edges) {
        deg[static_cast<std::size_t>(i)] += 1;
        deg[static_cast<std::size_t>(j)] += 1; // a self-loop adds 2 in total
    }
    return deg;
}

// Exact enumeration of all perfect matchings of the stub multiset for a
// degree sequence, applying the same simplification convention.
struct Enumeration {
    double expect_c = 0;          // over all matchings
    double expect_l_defined = 0;  // over matchings with a reachable pair
    double expect_d_defined = 0;
    long defined = 0;
    long total = 0;
};

void enumerate_matchings(std::vector<int>& stubs, std::vector<std::pair<int, int>>& acc,
                         Enumeration& out, const std::vector<GeoNode>& nodes) {
    if (stubs.empty()) {
        Pseudograph pg;
        pg.n = static_cast<int>(nodes.size());
        pg.edges = acc;
        pg.weights.assign(acc.size(), 1.0);
        const GeoGraph simple = simplify(pg, nodes);
        const CoreMetrics core = core_metrics(Adjacency(simple));
        out.total += 1;
        out.expect_c += core.mean_c;
        if (core.mean_l) {
            out.defined += 1;
            out.expect_l_defined += *core.mean_l;
            out.expect_d_defined += static_cast<double>(*core.diameter);
        }
        return;
    }
    const int first = stubs.front();
    for (std::size_t k = 1; k < stubs.size(); ++k) {
        std::vector<int> rest;
        for (std::size_t m = 1; m < stubs.size(); ++m)
            if (m != k) rest.push_back(stubs[m]);
        acc.push_back({first, stubs[k]});
        enumerate_matchings(rest, acc, out, nodes);
        acc.pop_back();
    }
}

} // namespace

TEST_CASE("configuration samples preserve the degree sequence exactly") {
    const std::vector<int> degrees = {2, 2, 2};
    const std::vector<double> weights = {0.1, 0.2, 0.3};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Pseudograph pg = configuration_sample(degrees, weights, seed);
        CHECK(realized_degrees(pg) == degrees);
        CHECK(pg.edges.size() == 3);
    }
}

TEST_CASE("degenerate degree sequences") {
    CHECK(configuration_sample(std::vector<int>{0, 0, 0}, std::vector<double>{}, 1).edges.empty());

    // (4,0,0) can only match into two self-loops at node 0.
    const Pseudograph pg =
        configuration_sample(std::vector<int>{4, 0, 0}, std::vector<double>{0.5, 0.5}, 7);
    REQUIRE(pg.edges.size() == 2);
    for (const auto& [i, j] : pg.edges) {
        CHECK(i == 0);
        CHECK(j == 0);
    }

    CHECK_THROWS_AS(configuration_sample(std::vector<int>{3, 0}, std::vector<double>{0.1}, 1),
                    ComputeError);
    CHECK_THROWS_AS(configuration_sample(std::vector<int>{2, 2}, std::vector<double>{0.1}, 1),
                    InputError);
}

TEST_CASE("simplification drops loops and collapses parallels") {
    Pseudograph pg;
    pg.n = 3;
    pg.edges = {{1, 1}, {0, 2}, {2, 0}, {0, 1}};
    pg.weights = {9.0, 0.25, 0.75, 0.5};
    std::vector<GeoNode> nodes = triangle().nodes;
    const GeoGraph g = simplify(pg, nodes);
    REQUIRE(g.edge_count() == 2);
    CHECK(g.edges[0].i == 0);
    CHECK(g.edges[0].j == 1);
    CHECK(g.edges[0].weight == 0.5);
    CHECK(g.edges[1].j == 2);
    CHECK(g.edges[1].weight == 0.25); // first occurrence wins
    g.validate();
}

TEST_CASE("ensemble means match the exact matching enumeration") {
    const GeoGraph g = triangle();

    Enumeration exact;
    std::vector<int> stubs = {0, 0, 1, 1, 2, 2};
    std::vector<std::pair<int, int>> acc;
    enumerate_matchings(stubs, acc, exact, g.nodes);
    CHECK(exact.total == 15);
    const double exact_c = exact.expect_c / static_cast<double>(exact.total);
    const double exact_l = exact.expect_l_defined / static_cast<double>(exact.defined);
    const double exact_d = exact.expect_d_defined / static_cast<double>(exact.defined);
    CHECK(exact_c == doctest::Approx(8.0 / 15.0)); // 8 of 15 matchings are the triangle
    CHECK(exact_l == 1.0);
    CHECK(exact_d == 1.0);

    const long samples = 10000;
    const EnsembleReport report = ensemble_metrics(g, samples, 2024);
    // c per sample is 1 (triangle) or 0, so 3 standard errors of the mean:
    const double se = std::sqrt(exact_c * (1.0 - exact_c) / static_cast<double>(samples));
    CHECK(std::abs(report.mean_c - exact_c) < 3.0 * se);
    CHECK(report.mean_l == 1.0);
    CHECK(report.mean_diameter == 1.0);
    CHECK(report.samples_without_paths > 0); // the all-self-loop matching occurs
    CHECK(report.weight_min == 0.5);
    CHECK(report.weight_max == 0.7);
}

TEST_CASE("ensemble kappa equals the source kappa bit-exactly") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        const GeoGraph g = oracles::random_graph(20, 0.2, rng());
        if (g.edges.empty()) continue;
        const EnsembleReport report = ensemble_metrics(g, 50, 11);
        CHECK(report.kappa == heterogeneity(g));
    }
}

TEST_CASE("ensembles are reproducible and seed-sensitive") {
    const GeoGraph g = oracles::random_graph(15, 0.25, 5);
    const EnsembleReport a = ensemble_metrics(g, 200, 77);
    const EnsembleReport b = ensemble_metrics(g, 200, 77);
    CHECK(a.mean_l == b.mean_l);
    CHECK(a.mean_c == b.mean_c);
    CHECK(a.mean_diameter == b.mean_diameter);
    CHECK(a.weight_min == b.weight_min);
    CHECK(a.weight_max == b.weight_max);

    const EnsembleReport c = ensemble_metrics(g, 200, 78);
    CHECK((a.mean_l != c.mean_l || a.mean_c != c.mean_c));

    const GeoGraph s0 = ensemble_sample(g, 77, 0);
    const GeoGraph s0_again = ensemble_sample(g, 77, 0);
    REQUIRE(s0.edge_count() == s0_again.edge_count());
    for (long k = 0; k < s0.edge_count(); ++k) {
        CHECK(s0.edges[static_cast<std::size_t>(k)].i == s0_again.edges[static_cast<std::size_t>(k)].i);
        CHECK(s0.edges[static_cast<std::size_t>(k)].j == s0_again.edges[static_cast<std::size_t>(k)].j);
    }
}

TEST_CASE("analytic random-graph values") {
    const ErAnalytics big = er_analytics(587, 1270);
    CHECK(big.p == doctest::Approx(0.00738).epsilon(1e-3));
    CHECK(big.c_rand == big.p);
    CHECK(big.mean_k == doctest::Approx(2.0 * 1270 / 587).epsilon(1e-12));
    CHECK(big.l_rand == doctest::Approx(4.3519).epsilon(1e-4));

    const ErAnalytics mid = er_analytics(587, 964);
    CHECK(mid.l_rand == doctest::Approx(5.3607).epsilon(1e-4));

    const ErAnalytics complete = er_analytics(10, 45);
    CHECK(complete.p == 1.0);
    CHECK(complete.c_rand == 1.0);
    CHECK(complete.mean_k == 9.0);

    // Internal consistency to machine precision.
    CHECK(std::abs(mid.mean_k - mid.p * 586.0) <= 1e-15 * mid.mean_k);
    CHECK(mid.c_rand == mid.p);

    CHECK_THROWS_AS(er_analytics(1, 5), InputError);
    CHECK_THROWS_AS(er_analytics(10, 0), InputError);
    CHECK_THROWS_AS(er_analytics(4, 2), ComputeError); // mean degree exactly 1
}

TEST_CASE("small-world verdicts on the published metric rows") {
    // (l, c, l_rand, c_rand) per network; only miBB qualifies.
    CHECK_FALSE(small_world_test(8.93, 0.536, 4.35, 0.007)); // pcGT
    CHECK_FALSE(small_world_test(4.42, 0.225, 4.34, 0.007)); // pcBB
    CHECK_FALSE(small_world_test(10.38, 0.474, 5.36, 0.005)); // miGT
    CHECK(small_world_test(3.88, 0.159, 5.36, 0.005));        // miBB
    CHECK_FALSE(small_world_test(3.0, 0.1, 3.0, 0.1)); // strict inequalities
    CHECK_THROWS_AS(small_world_test(std::nan(""), 0.1, 3.0, 0.1), InputError);
}

TEST_CASE("ensemble error paths") {
    GeoGraph empty;
    empty.nodes = triangle().nodes;
    CHECK_THROWS_AS(ensemble_metrics(empty, 10, 1), ComputeError);
    CHECK_THROWS_AS(ensemble_metrics(triangle(), 0, 1), InputError);

    // Degrees (1,1,0) only ever match into the edge itself.
    GeoGraph pair2;
    pair2.nodes = triangle().nodes;
    pair2.edges = {{0, 1, 1.0}};
    const EnsembleReport ok = ensemble_metrics(pair2, 5, 9);
    CHECK(ok.mean_l == 1.0);
    CHECK(ok.samples_without_paths == 0);
}
