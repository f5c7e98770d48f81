#include "geonet/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "geonet/errors.hpp"
#include "geonet/kernels.hpp"

namespace geonet {

const char* measure_name(Measure m) { return m == Measure::pc ? "PC" : "MI"; }

Measure parse_measure(const std::string& s) {
    if (s == "PC" || s == "pc") return Measure::pc;
    if (s == "MI" || s == "mi") return Measure::mi;
    throw InputError("unknown similarity measure '" + s + "' (expected pc or mi)");
}

const char* normalization_name(MiNormalization n) {
    return n == MiNormalization::max_entropy ? "max_entropy" : "none";
}

MiNormalization parse_normalization(const std::string& s) {
    if (s == "none") return MiNormalization::none;
    if (s == "max_entropy") return MiNormalization::max_entropy;
    throw InputError("unknown MI normalization '" + s + "' (expected none or max_entropy)");
}

int sturges_bins(int t) {
    return static_cast<int>(std::ceil(std::log2(static_cast<double>(t)))) + 1;
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw InputError("series length mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
    if (x.size() < 2) throw InputError("series must have at least 2 samples");
}

// Constant series are detected exactly (min == max): a constant input
// carries no variance even when a floating mean would not cancel exactly.
bool is_constant(std::span<const double> x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *lo == *hi;
}

void center(std::span<const double> x, std::vector<double>& out) {
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / static_cast<double>(x.size());
    out.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] - mean;
}

double pearson_centered(const std::vector<double>& cx, const std::vector<double>& cy) {
    const std::size_t t = cx.size();
    const double nx = std::sqrt(kernels::dot(cx.data(), cx.data(), t));
    const double ny = std::sqrt(kernels::dot(cy.data(), cy.data(), t));
    const double r = kernels::dot(cx.data(), cy.data(), t) / (nx * ny);
    return std::clamp(r, -1.0, 1.0);
}

// Equal-width bin index in [0, bins); the maximum sample lands in the last bin.
void bin_series(std::span<const double> x, int bins, std::vector<std::uint8_t>& out) {
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width = (hi - lo) / bins;
    out.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        int b = static_cast<int>((x[k] - lo) / width);
        out[k] = static_cast<std::uint8_t>(std::clamp(b, 0, bins - 1));
    }
}

// Sums p(x,y) log2(p(x,y)/(p(x)p(y))) by walking the samples: each occupied
// joint cell is consumed on first visit, which also resets `counts` to zero
// for reuse.
double mi_consume_counts(const std::uint8_t* xb, const std::uint8_t* yb, std::size_t t,
                         int bins, std::uint32_t* counts,
                         const std::uint32_t* row_marginal, const std::uint32_t* col_marginal) {
    const double total = static_cast<double>(t);
    double mi = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t f = static_cast<std::size_t>(xb[k]) * bins + yb[k];
        const std::uint32_t c = counts[f];
        if (c == 0) continue;
        counts[f] = 0;
        const double pxy = static_cast<double>(c) / total;
        const double ratio = (static_cast<double>(c) * total) /
                             (static_cast<double>(row_marginal[xb[k]]) *
                              static_cast<double>(col_marginal[yb[k]]));
        mi += pxy * std::log2(ratio);
    }
    return std::max(mi, 0.0);
}

void marginal_counts(const std::vector<std::uint8_t>& b, int bins, std::uint32_t* out) {
    std::fill(out, out + bins, 0u);
    for (std::uint8_t v : b) out[v] += 1;
}

void check_bins(int bins) {
    if (bins < 2 || bins > 255)
        throw InputError("bin count must be in [2, 255], got " + std::to_string(bins));
}

} // namespace

double pearson(std::span<const double> x, std::span<const double> y, bool* degenerate) {
    check_pair(x, y);
    if (degenerate) *degenerate = false;
    if (is_constant(x) || is_constant(y)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    std::vector<double> cx, cy;
    center(x, cx);
    center(y, cy);
    return pearson_centered(cx, cy);
}

double mutual_information(std::span<const double> x, std::span<const double> y, int bins,
                          MiNormalization norm, bool* degenerate) {
    check_pair(x, y);
    check_bins(bins);
    if (degenerate) *degenerate = false;
    if (is_constant(x) || is_constant(y)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    std::vector<std::uint8_t> xb, yb;
    bin_series(x, bins, xb);
    bin_series(y, bins, yb);
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(bins) * bins, 0u);
    kernels::joint_histogram(xb.data(), yb.data(), x.size(), bins, counts.data());
    std::vector<std::uint32_t> rx(bins), ry(bins);
    marginal_counts(xb, bins, rx.data());
    marginal_counts(yb, bins, ry.data());
    double mi = mi_consume_counts(xb.data(), yb.data(), x.size(), bins, counts.data(),
                                  rx.data(), ry.data());
    if (norm == MiNormalization::max_entropy) mi /= std::log2(static_cast<double>(bins));
    return mi;
}

SimilarityMatrix::SimilarityMatrix(int n, Measure measure)
    : n_(n),
      measure_(measure),
      values_(static_cast<std::size_t>(n) * n, 0.0),
      degenerate_(static_cast<std::size_t>(n), 0) {
    if (n < 1) throw InputError("similarity matrix needs at least one node");
}

int SimilarityMatrix::degenerate_node_count() const {
    int c = 0;
    for (std::uint8_t d : degenerate_)
        if (d) ++c;
    return c;
}

namespace {

SimilarityMatrix pearson_matrix(const GridSeries& grid) {
    const int n = grid.cell_count();
    const std::size_t t = static_cast<std::size_t>(grid.series_length());
    SimilarityMatrix sim(n, Measure::pc);
    sim.series_length = static_cast<int>(t);

    // Center every series once; pairwise values are plain dot products.
    std::vector<double> centered(static_cast<std::size_t>(n) * t);
    std::vector<double> inv_norm(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const std::vector<double>& s = grid.cells[i].series;
        if (is_constant(s)) {
            sim.set_node_degenerate(i);
            continue;
        }
        double sum = 0.0;
        for (double v : s) sum += v;
        const double mean = sum / static_cast<double>(t);
        double* row = centered.data() + static_cast<std::size_t>(i) * t;
        for (std::size_t k = 0; k < t; ++k) row[k] = s[k] - mean;
        inv_norm[i] = 1.0 / std::sqrt(kernels::dot(row, row, t));
    }

#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i) {
        if (sim.node_degenerate(i)) continue;
        const double* ri = centered.data() + static_cast<std::size_t>(i) * t;
        for (int j = i + 1; j < n; ++j) {
            if (sim.node_degenerate(j)) continue;
            const double* rj = centered.data() + static_cast<std::size_t>(j) * t;
            const double r = kernels::dot(ri, rj, t) * inv_norm[i] * inv_norm[j];
            sim.set(i, j, std::clamp(r, -1.0, 1.0));
        }
    }
    return sim;
}

SimilarityMatrix mi_matrix(const GridSeries& grid, int bins, MiNormalization norm) {
    const int n = grid.cell_count();
    const std::size_t t = static_cast<std::size_t>(grid.series_length());
    SimilarityMatrix sim(n, Measure::mi);
    sim.series_length = static_cast<int>(t);
    sim.mi_bins = bins;
    sim.mi_normalization = norm;

    // Quantize every series once; marginals are shared across all pairs.
    std::vector<std::uint8_t> binned(static_cast<std::size_t>(n) * t);
    std::vector<std::uint32_t> marginals(static_cast<std::size_t>(n) * bins, 0u);
    for (int i = 0; i < n; ++i) {
        const std::vector<double>& s = grid.cells[i].series;
        if (is_constant(s)) {
            sim.set_node_degenerate(i);
            continue;
        }
        std::vector<std::uint8_t> b;
        bin_series(s, bins, b);
        std::copy(b.begin(), b.end(), binned.begin() + static_cast<std::size_t>(i) * t);
        marginal_counts(b, bins, marginals.data() + static_cast<std::size_t>(i) * bins);
    }

    const double log2_bins = std::log2(static_cast<double>(bins));
#pragma omp parallel
    {
        // Per-thread joint table, reset by mi_consume_counts after each pair.
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(bins) * bins, 0u);
#pragma omp for schedule(dynamic, 4)
        for (int i = 0; i < n; ++i) {
            if (sim.node_degenerate(i)) continue;
            const std::uint8_t* bi = binned.data() + static_cast<std::size_t>(i) * t;
            for (int j = i + 1; j < n; ++j) {
                if (sim.node_degenerate(j)) continue;
                const std::uint8_t* bj = binned.data() + static_cast<std::size_t>(j) * t;
                kernels::joint_histogram(bi, bj, t, bins, counts.data());
                double mi = mi_consume_counts(
                    bi, bj, t, bins, counts.data(),
                    marginals.data() + static_cast<std::size_t>(i) * bins,
                    marginals.data() + static_cast<std::size_t>(j) * bins);
                if (norm == MiNormalization::max_entropy) mi /= log2_bins;
                sim.set(i, j, mi);
            }
        }
    }
    return sim;
}

} // namespace

SimilarityMatrix similarity_matrix(const GridSeries& grid, Measure measure, int mi_bins,
                                   MiNormalization norm) {
    grid.validate();
    if (measure == Measure::pc) return pearson_matrix(grid);
    const int bins = mi_bins > 0 ? mi_bins : sturges_bins(grid.series_length());
    check_bins(bins);
    return mi_matrix(grid, bins, norm);
}

void save_similarity(const SimilarityMatrix& sim, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw InputError("cannot write similarity file: " + csv_path.string());
    out << "i,j,weight\n";
    char buf[64];
    for (int i = 0; i < sim.size(); ++i) {
        for (int j = i + 1; j < sim.size(); ++j) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, sim.at(i, j));
            (void)ec;
            out << i << ',' << j << ',';
            out.write(buf, ptr - buf);
            out << "\n";
        }
    }

    nlohmann::json side;
    side["measure"] = measure_name(sim.measure());
    side["n"] = sim.size();
    side["t"] = sim.series_length;
    side["degenerate_nodes"] = nlohmann::json::array();
    for (int i = 0; i < sim.size(); ++i)
        if (sim.node_degenerate(i)) side["degenerate_nodes"].push_back(i);
    if (sim.measure() == Measure::mi) {
        side["bins"] = sim.mi_bins;
        side["normalization"] = normalization_name(sim.mi_normalization);
    }
    std::ofstream sidecar(csv_path.string() + ".json");
    if (!sidecar) throw InputError("cannot write similarity sidecar: " + csv_path.string() + ".json");
    sidecar << side.dump(2) << "\n";
}

SimilarityMatrix load_similarity(const std::filesystem::path& csv_path) {
    const std::filesystem::path side_path = csv_path.string() + ".json";
    std::ifstream side_in(side_path);
    if (!side_in) throw InputError("cannot open similarity sidecar: " + side_path.string());
    nlohmann::json side;
    try {
        side_in >> side;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(side_path.string() + ": invalid JSON: " + std::string(e.what()));
    }
    const int n = side.at("n").get<int>();
    SimilarityMatrix sim(n, parse_measure(side.at("measure").get<std::string>()));
    sim.series_length = side.value("t", 0);
    if (sim.measure() == Measure::mi) {
        sim.mi_bins = side.value("bins", 0);
        sim.mi_normalization = parse_normalization(side.value("normalization", "none"));
    }
    for (const auto& id : side.value("degenerate_nodes", nlohmann::json::array()))
        sim.set_node_degenerate(id.get<int>());

    std::ifstream in(csv_path);
    if (!in) throw InputError("cannot open similarity file: " + csv_path.string());
    std::string line;
    if (!std::getline(in, line) || (line != "i,j,weight" && line != "i,j,weight\r"))
        throw InputError(csv_path.filename().string() + ":1: expected header i,j,weight");
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        int i = 0, j = 0;
        double w = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(p, end, i);
        if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',')
            throw InputError(csv_path.filename().string() + ":" + std::to_string(row) + ": bad row");
        auto r2 = std::from_chars(r1.ptr + 1, end, j);
        if (r2.ec != std::errc() || r2.ptr == end || *r2.ptr != ',')
            throw InputError(csv_path.filename().string() + ":" + std::to_string(row) + ": bad row");
        auto r3 = std::from_chars(r2.ptr + 1, end, w);
        if (r3.ec != std::errc() || r3.ptr != end)
            throw InputError(csv_path.filename().string() + ":" + std::to_string(row) + ": bad weight");
        if (i < 0 || j < 0 || i >= n || j >= n || i >= j)
            throw InputError(csv_path.filename().string() + ":" + std::to_string(row) +
                             ": node pair out of range");
        sim.set(i, j, w);
    }
    return sim;
}

} // namespace geonet
