#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geonet/errors.hpp"
#include "geonet/similarity.hpp"
#include "oracles.hpp"

using namespace geonet;

namespace {

GridSeries grid_from_series(std::vector<std::vector<double>> series) {
    GridSeries g;
    for (std::size_t i = 0; i < series.size(); ++i) {
        GridCell c;
        c.id = static_cast<int>(i);
        c.x_km = static_cast<double>(i);
        c.y_km = 0.0;
        c.series = std::move(series[i]);
        g.cells.push_back(std::move(c));
    }
    return g;
}

} // namespace

TEST_CASE("pearson basics") {
    CHECK(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) ==
          doctest::Approx(-1.0).epsilon(1e-12));

    const std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 1, 4, 3, 6};
    CHECK(pearson(x, y) == doctest::Approx(oracles::pearson(x, y)).epsilon(1e-12));
}

TEST_CASE("pearson rejects bad input and flags zero variance") {
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), InputError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{2}), InputError);
    bool degenerate = false;
    CHECK(pearson(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}, &degenerate) == 0.0);
    CHECK(degenerate);
}

TEST_CASE("pearson is invariant under positive affine maps, flips sign for negative") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<double> x = oracles::random_series(20, rng);
        const std::vector<double> y = oracles::random_series(20, rng);
        const double r = pearson(x, y);
        std::vector<double> scaled(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) scaled[k] = 2.5 * x[k] + 7.0;
        CHECK(pearson(scaled, y) == doctest::Approx(r).epsilon(1e-9));
        for (std::size_t k = 0; k < x.size(); ++k) scaled[k] = -1.5 * x[k] + 3.0;
        CHECK(pearson(scaled, y) == doctest::Approx(-r).epsilon(1e-9));
    }
}

TEST_CASE("mutual information on hand-built tables") {
    // Identity series spreading one sample per bin: I = log2(4) = 2 bits.
    const std::vector<double> x = {0, 1, 2, 3};
    CHECK(mutual_information(x, x, 4, MiNormalization::none) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mutual_information(x, x, 4, MiNormalization::max_entropy) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Uniform 2x2 joint equals the product of its marginals: I = 0.
    const std::vector<double> a = {1, 1, 2, 2}, b = {1, 2, 1, 2};
    CHECK(mutual_information(a, b, 2, MiNormalization::none) == 0.0);
}

TEST_CASE("mutual information input validation and degenerate flag") {
    const std::vector<double> x = {1, 2, 3};
    CHECK_THROWS_AS(mutual_information(x, std::vector<double>{1, 2}, 4), InputError);
    CHECK_THROWS_AS(mutual_information(x, x, 1), InputError);
    CHECK_THROWS_AS(mutual_information(x, x, 300), InputError);
    bool degenerate = false;
    CHECK(mutual_information(std::vector<double>{2, 2, 2}, x, 4, MiNormalization::none,
                             &degenerate) == 0.0);
    CHECK(degenerate);
}

TEST_CASE("mutual information matches the direct-table oracle on random series") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        const int t = 8 + static_cast<int>(rng() % 43);
        const int bins = 2 + static_cast<int>(rng() % 7);
        const std::vector<double> x = oracles::random_series(t, rng);
        const std::vector<double> y = oracles::random_series(t, rng);
        const double got = mutual_information(x, y, bins, MiNormalization::none);
        const double want = oracles::mutual_information(x, y, bins, false);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        // Symmetry and bounds.
        CHECK(mutual_information(y, x, bins, MiNormalization::none) ==
              doctest::Approx(got).epsilon(1e-12));
        CHECK(got >= 0.0);
        const double normalized = mutual_information(x, y, bins, MiNormalization::max_entropy);
        CHECK(normalized >= 0.0);
        CHECK(normalized <= 1.0 + 1e-12);
    }
}

TEST_CASE("mutual information never exceeds either marginal entropy") {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 50; ++rep) {
        const int t = 16 + static_cast<int>(rng() % 30);
        const int bins = 2 + static_cast<int>(rng() % 6);
        const std::vector<double> x = oracles::random_series(t, rng);
        const std::vector<double> y = oracles::random_series(t, rng);
        auto entropy = [&](const std::vector<double>& s) {
            std::vector<long> counts(static_cast<std::size_t>(bins), 0);
            const double lo = *std::min_element(s.begin(), s.end());
            const double hi = *std::max_element(s.begin(), s.end());
            for (double v : s) {
                int b = static_cast<int>((v - lo) / ((hi - lo) / bins));
                counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1;
            }
            double h = 0;
            for (long c : counts) {
                if (c == 0) continue;
                const double p = static_cast<double>(c) / static_cast<double>(t);
                h -= p * std::log2(p);
            }
            return h;
        };
        const double mi = mutual_information(x, y, bins, MiNormalization::none);
        CHECK(mi <= std::min(entropy(x), entropy(y)) + 1e-9);
    }
}

TEST_CASE("similarity matrix equals the single-pair operations") {
    std::mt19937_64 rng(41);
    std::vector<std::vector<double>> series;
    for (int i = 0; i < 6; ++i) series.push_back(oracles::random_series(24, rng));
    const GridSeries grid = grid_from_series(series);

    const SimilarityMatrix pc = similarity_matrix(grid, Measure::pc);
    const SimilarityMatrix mi = similarity_matrix(grid, Measure::mi, 5, MiNormalization::none);
    for (int i = 0; i < 6; ++i) {
        CHECK(pc.at(i, i) == 0.0);
        CHECK(mi.at(i, i) == 0.0);
        for (int j = i + 1; j < 6; ++j) {
            CHECK(pc.at(i, j) == doctest::Approx(oracles::pearson(series[i], series[j]))
                                     .epsilon(1e-12));
            CHECK(mi.at(i, j) ==
                  doctest::Approx(oracles::mutual_information(series[i], series[j], 5, false))
                      .epsilon(1e-12));
            // Stored symmetrically, bit-exact.
            CHECK(pc.at(i, j) == pc.at(j, i));
            CHECK(mi.at(i, j) == mi.at(j, i));
        }
    }
}

TEST_CASE("identical non-constant series correlate at 1; a single cell has no pairs") {
    const GridSeries two = grid_from_series({{1, 2, 3, 4}, {1, 2, 3, 4}});
    CHECK(similarity_matrix(two, Measure::pc).at(0, 1) == doctest::Approx(1.0));

    GridSeries one = grid_from_series({{1, 2, 3}});
    const SimilarityMatrix sim = similarity_matrix(one, Measure::pc);
    CHECK(sim.size() == 1);
    CHECK(sim.at(0, 0) == 0.0);
}

TEST_CASE("constant cells are degenerate and zero everywhere") {
    const GridSeries grid = grid_from_series({{1, 2, 3, 4}, {7, 7, 7, 7}, {4, 3, 2, 1}});
    for (Measure m : {Measure::pc, Measure::mi}) {
        const SimilarityMatrix sim = similarity_matrix(grid, m, 4);
        CHECK(sim.node_degenerate(1));
        CHECK_FALSE(sim.node_degenerate(0));
        CHECK(sim.degenerate_node_count() == 1);
        CHECK(sim.at(0, 1) == 0.0);
        CHECK(sim.at(1, 2) == 0.0);
        CHECK(sim.at(0, 2) != 0.0);
        CHECK(sim.pair_degenerate(0, 1));
        CHECK_FALSE(sim.pair_degenerate(0, 2));
    }
}

TEST_CASE("sturges default bins") {
    CHECK(sturges_bins(64) == 7);
    CHECK(sturges_bins(100) == 8);
}

#ifdef _OPENMP
TEST_CASE("matrix values do not depend on the thread count") {
    std::mt19937_64 rng(43);
    std::vector<std::vector<double>> series;
    for (int i = 0; i < 10; ++i) series.push_back(oracles::random_series(40, rng));
    const GridSeries grid = grid_from_series(series);

    const int saved = omp_get_max_threads();
    const SimilarityMatrix threaded = similarity_matrix(grid, Measure::pc);
    omp_set_num_threads(1);
    const SimilarityMatrix serial = similarity_matrix(grid, Measure::pc);
    omp_set_num_threads(saved);
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j) CHECK(threaded.at(i, j) == serial.at(i, j));
}
#endif

TEST_CASE("similarity round-trips through CSV + sidecar") {
    std::mt19937_64 rng(47);
    std::vector<std::vector<double>> series;
    for (int i = 0; i < 5; ++i) series.push_back(oracles::random_series(16, rng));
    series.push_back({3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3}); // degenerate
    const GridSeries grid = grid_from_series(series);
    const SimilarityMatrix sim = similarity_matrix(grid, Measure::mi, 6);

    const auto path = std::filesystem::temp_directory_path() / "sim_rt.csv";
    save_similarity(sim, path);
    const SimilarityMatrix back = load_similarity(path);
    CHECK(back.size() == sim.size());
    CHECK(back.measure() == Measure::mi);
    CHECK(back.mi_bins == 6);
    CHECK(back.node_degenerate(5));
    for (int i = 0; i < sim.size(); ++i)
        for (int j = i + 1; j < sim.size(); ++j) CHECK(back.at(i, j) == sim.at(i, j));
}
