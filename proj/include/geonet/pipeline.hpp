#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geonet/similarity.hpp"

namespace geonet {

// One JSON document drives a full run: ingest, both similarity measures,
// the four networks (GT/BB x PC/MI), two degree-matched ensembles, metrics
// and the geographic analysis.
struct PipelineConfig {
    std::string grid_path;
    GridFormat grid_format = GridFormat::csv;
    std::optional<std::string> mask_path;
    double min_rate_mm_h = 1.0;

    int mi_bins = 0; // 0 = Sturges
    MiNormalization mi_normalization = MiNormalization::max_entropy;

    enum class ThresholdMode { scan, fixed };
    ThresholdMode threshold_mode = ThresholdMode::scan;
    double tau_pc = 0.0, tau_mi = 0.0; // fixed mode only
    bool inclusive_threshold = false;

    enum class BackboneMode { match_gt, alpha, target_edges };
    BackboneMode backbone_mode = BackboneMode::match_gt;
    double alpha = 0.05;
    long backbone_target_edges = 0;

    long samples = 10000;
    std::uint64_t seed = 42;
    int histogram_bins = 20;

    std::string out_dir;
    bool no_intermediates = false;

    static PipelineConfig from_json_file(const std::filesystem::path& path);
    void validate() const;
};

struct ManifestEntry {
    std::string path; // relative to the output directory
    std::uint64_t bytes = 0;
    std::string hash; // FNV-1a 64, hex
};

struct RunManifest {
    std::vector<ManifestEntry> files;
    std::filesystem::path manifest_path;
};

// Runs every stage and writes manifest.json. Identical config and seed
// produce byte-identical outputs. Any stage failure removes the files
// written so far and rethrows with the stage name attached.
RunManifest run_pipeline(const PipelineConfig& cfg);

} // namespace geonet
