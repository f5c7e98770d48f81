#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "geonet/grid.hpp"

namespace geonet {

enum class Measure { pc, mi };
enum class MiNormalization { none, max_entropy };

const char* measure_name(Measure m);
Measure parse_measure(const std::string& s);
const char* normalization_name(MiNormalization n);
MiNormalization parse_normalization(const std::string& s);

// Pearson correlation of two equal-length series. A zero-variance input
// yields 0 and sets *degenerate instead of failing: masked rain grids
// legitimately contain dry cells.
double pearson(std::span<const double> x, std::span<const double> y,
               bool* degenerate = nullptr);

// Plug-in mutual information on an equal-width 2-D histogram over
// [min(x), max(x)] x [min(y), max(y)], base-2 logarithm. Empty joint cells
// contribute nothing. With max_entropy normalization the value is divided
// by log2(bins), mapping it into [0, 1]. Zero-range input yields 0 and
// sets *degenerate.
double mutual_information(std::span<const double> x, std::span<const double> y,
                          int bins,
                          MiNormalization norm = MiNormalization::max_entropy,
                          bool* degenerate = nullptr);

// Sturges' rule: ceil(log2(t)) + 1.
int sturges_bins(int t);

// Symmetric pairwise similarity weights, diagonal fixed at 0.
class SimilarityMatrix {
public:
    SimilarityMatrix(int n, Measure measure);

    int size() const { return n_; }
    Measure measure() const { return measure_; }

    double at(int i, int j) const { return values_[idx(i, j)]; }
    void set(int i, int j, double v) {
        values_[idx(i, j)] = v;
        values_[idx(j, i)] = v;
    }

    bool node_degenerate(int i) const { return degenerate_[i] != 0; }
    void set_node_degenerate(int i) { degenerate_[i] = 1; }
    bool pair_degenerate(int i, int j) const {
        return degenerate_[i] != 0 || degenerate_[j] != 0;
    }
    int degenerate_node_count() const;

    int mi_bins = 0;                                          // MI only
    MiNormalization mi_normalization = MiNormalization::none; // MI only
    int series_length = 0; // T of the source grid, recorded for the sidecar

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * n_ + j;
    }
    int n_;
    Measure measure_;
    std::vector<double> values_;
    std::vector<std::uint8_t> degenerate_;
};

// All pairwise similarities of the grid's cell series. mi_bins = 0 picks
// Sturges' rule. Deterministic and independent of thread count.
SimilarityMatrix similarity_matrix(const GridSeries& grid, Measure measure,
                                   int mi_bins = 0,
                                   MiNormalization norm = MiNormalization::max_entropy);

// CSV `i,j,weight` for i < j plus a JSON sidecar (same path with .json
// appended) holding measure, bins, normalization, n, t and the degenerate
// node list.
void save_similarity(const SimilarityMatrix& sim, const std::filesystem::path& csv_path);
SimilarityMatrix load_similarity(const std::filesystem::path& csv_path);

} // namespace geonet
