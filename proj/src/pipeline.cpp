#include "geonet/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "geonet/errors.hpp"
#include "geonet/geoanalysis.hpp"
#include "geonet/io.hpp"
#include "geonet/metrics.hpp"
#include "geonet/netbuild.hpp"
#include "geonet/nullmodels.hpp"

namespace geonet {

namespace {

PipelineConfig::ThresholdMode parse_threshold_mode(const std::string& s) {
    if (s == "scan") return PipelineConfig::ThresholdMode::scan;
    if (s == "fixed") return PipelineConfig::ThresholdMode::fixed;
    throw InputError("config: threshold.mode must be 'scan' or 'fixed', got '" + s + "'");
}

PipelineConfig::BackboneMode parse_backbone_mode(const std::string& s) {
    if (s == "match_gt") return PipelineConfig::BackboneMode::match_gt;
    if (s == "alpha") return PipelineConfig::BackboneMode::alpha;
    if (s == "target_edges") return PipelineConfig::BackboneMode::target_edges;
    throw InputError("config: backbone.mode must be 'match_gt', 'alpha' or 'target_edges'");
}

} // namespace

PipelineConfig PipelineConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": invalid JSON: " + std::string(e.what()));
    }

    PipelineConfig cfg;
    try {
        cfg.grid_path = doc.at("grid").get<std::string>();
        cfg.grid_format =
            doc.value("grid_format", std::string("csv")) == "binary" ? GridFormat::binary
                                                                     : GridFormat::csv;
        if (doc.contains("mask") && !doc["mask"].is_null())
            cfg.mask_path = doc["mask"].get<std::string>();
        cfg.min_rate_mm_h = doc.value("min_rate_mm_h", 1.0);

        if (doc.contains("mi")) {
            cfg.mi_bins = doc["mi"].value("bins", 0);
            cfg.mi_normalization =
                parse_normalization(doc["mi"].value("normalization", std::string("max_entropy")));
        }

        if (doc.contains("threshold")) {
            const auto& th = doc["threshold"];
            cfg.threshold_mode = parse_threshold_mode(th.value("mode", std::string("scan")));
            cfg.inclusive_threshold = th.value("inclusive", false);
            if (cfg.threshold_mode == ThresholdMode::fixed) {
                if (!th.contains("tau_pc") || !th.contains("tau_mi"))
                    throw InputError("config: fixed threshold mode needs tau_pc and tau_mi");
                cfg.tau_pc = th["tau_pc"].get<double>();
                cfg.tau_mi = th["tau_mi"].get<double>();
            }
        }

        if (doc.contains("backbone")) {
            const auto& bb = doc["backbone"];
            cfg.backbone_mode = parse_backbone_mode(bb.value("mode", std::string("match_gt")));
            if (cfg.backbone_mode == BackboneMode::alpha) {
                if (!bb.contains("alpha")) throw InputError("config: backbone alpha mode needs alpha");
                cfg.alpha = bb["alpha"].get<double>();
            }
            if (cfg.backbone_mode == BackboneMode::target_edges) {
                if (!bb.contains("target_edges"))
                    throw InputError("config: backbone target_edges mode needs target_edges");
                cfg.backbone_target_edges = bb["target_edges"].get<long>();
            }
        }

        if (doc.contains("nullmodel")) {
            cfg.samples = doc["nullmodel"].value("samples", 10000L);
            cfg.seed = doc["nullmodel"].value("seed", static_cast<std::uint64_t>(42));
        }
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        cfg.histogram_bins = doc.value("histogram_bins", 20);
        cfg.out_dir = doc.value("out", std::string());
        cfg.no_intermediates = doc.value("no_intermediates", false);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": bad config value: " + std::string(e.what()));
    }
    return cfg;
}

void PipelineConfig::validate() const {
    if (grid_path.empty()) throw InputError("config: grid path is required");
    if (out_dir.empty()) throw InputError("config: output directory is required");
    if (samples < 1) throw InputError("config: nullmodel.samples must be at least 1");
    if (histogram_bins < 1) throw InputError("config: histogram_bins must be at least 1");
    if (backbone_mode == BackboneMode::alpha && !(alpha > 0.0 && alpha < 1.0))
        throw InputError("config: backbone alpha must be in (0, 1)");
    if (backbone_mode == BackboneMode::target_edges && backbone_target_edges < 0)
        throw InputError("config: backbone target_edges must be non-negative");
}

namespace {

nlohmann::json config_to_json(const PipelineConfig& cfg) {
    nlohmann::json doc;
    doc["grid"] = cfg.grid_path;
    doc["grid_format"] = cfg.grid_format == GridFormat::binary ? "binary" : "csv";
    doc["mask"] = cfg.mask_path ? nlohmann::json(*cfg.mask_path) : nlohmann::json();
    doc["min_rate_mm_h"] = cfg.min_rate_mm_h;
    doc["mi"] = {{"bins", cfg.mi_bins},
                 {"normalization", normalization_name(cfg.mi_normalization)}};
    nlohmann::json th;
    th["mode"] = cfg.threshold_mode == PipelineConfig::ThresholdMode::scan ? "scan" : "fixed";
    th["inclusive"] = cfg.inclusive_threshold;
    if (cfg.threshold_mode == PipelineConfig::ThresholdMode::fixed) {
        th["tau_pc"] = cfg.tau_pc;
        th["tau_mi"] = cfg.tau_mi;
    }
    doc["threshold"] = th;
    nlohmann::json bb;
    switch (cfg.backbone_mode) {
    case PipelineConfig::BackboneMode::match_gt: bb["mode"] = "match_gt"; break;
    case PipelineConfig::BackboneMode::alpha:
        bb["mode"] = "alpha";
        bb["alpha"] = cfg.alpha;
        break;
    case PipelineConfig::BackboneMode::target_edges:
        bb["mode"] = "target_edges";
        bb["target_edges"] = cfg.backbone_target_edges;
        break;
    }
    doc["backbone"] = bb;
    doc["nullmodel"] = {{"samples", cfg.samples}, {"seed", cfg.seed}};
    doc["histogram_bins"] = cfg.histogram_bins;
    doc["no_intermediates"] = cfg.no_intermediates;
    return doc;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Tracks everything written so a failing stage can clean up after itself.
class Workspace {
public:
    explicit Workspace(std::filesystem::path dir, bool keep_intermediates)
        : dir_(std::move(dir)), keep_intermediates_(keep_intermediates) {
        std::filesystem::create_directories(dir_);
    }

    std::filesystem::path to(const std::string& rel) const { return dir_ / rel; }

    void record(const std::string& rel, bool intermediate = false) {
        if (intermediate && !keep_intermediates_) {
            std::filesystem::remove(dir_ / rel);
            return;
        }
        written_.push_back(rel);
    }

    void write(const std::string& rel, const std::function<void(const std::filesystem::path&)>& fn,
               bool intermediate = false) {
        if (intermediate && !keep_intermediates_) return;
        fn(dir_ / rel);
        written_.push_back(rel);
    }

    void discard_all() {
        for (const std::string& rel : written_) {
            std::error_code ec;
            std::filesystem::remove(dir_ / rel, ec);
        }
        written_.clear();
    }

    const std::vector<std::string>& written() const { return written_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    bool keep_intermediates_;
    std::vector<std::string> written_;
};

// Per-network exports: edge list, GeoJSON, weight histogram, scatter,
// regression, edge lengths. Degenerate graphs still produce every file so
// the artifact set has a fixed shape.
void export_network(Workspace& ws, const GeoGraph& g, int hist_bins) {
    const std::string& label = g.label;
    ws.write(label + "_edges.csv", [&](const auto& p) { save_edges_csv(g, p); });
    ws.write(label + ".geojson", [&](const auto& p) { save_geojson(g, p); });

    ws.write(label + "_weight_hist.csv", [&](const auto& p) {
        if (g.edges.empty())
            save_histogram_csv(Histogram{}, p);
        else
            save_histogram_csv(weight_histogram(g, hist_bins), p);
    });
    ws.write(label + "_edge_length.json", [&](const auto& p) {
        if (g.edges.empty())
            save_edge_length_json(EdgeLengthStats{}, p);
        else
            save_edge_length_json(edge_length_stats(g, hist_bins), p);
    });

    DistancePairSet pairs;
    if (!g.edges.empty()) pairs = distance_pairs(g);
    ws.write(label + "_scatter.csv", [&](const auto& p) { save_scatter_csv(pairs, p); });
    ws.write(label + "_regression.json", [&](const auto& p) {
        try {
            save_regression_json(regress_topo_on_geo(pairs), p);
        } catch (const Error& e) {
            nlohmann::json doc = {{"defined", false}, {"reason", e.what()}};
            std::ofstream out(p);
            out << doc.dump(2) << "\n";
        }
    });
}

struct MeasureArtifacts {
    GeoGraph gt, bb, cm_sample;
    EnsembleReport ensemble;
};

[[noreturn]] void rethrow_with_stage(const std::string& stage) {
    try {
        throw;
    } catch (const InputError& e) {
        throw InputError("stage " + stage + ": " + e.what());
    } catch (const ComputeError& e) {
        throw ComputeError("stage " + stage + ": " + e.what());
    } catch (const std::exception& e) {
        throw ComputeError("stage " + stage + ": " + e.what());
    }
}

} // namespace

RunManifest run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    Workspace ws(cfg.out_dir, !cfg.no_intermediates);

    {
        // --- ingest ------------------------------------------------------
        GridSeries grid;
        std::vector<GeoNode> nodes;
        try {
            grid = load_grid(cfg.grid_path, cfg.grid_format);
            if (cfg.mask_path) {
                grid = apply_mask_and_filter(grid, load_mask(*cfg.mask_path), cfg.min_rate_mm_h);
            } else {
                std::vector<int> all(static_cast<std::size_t>(grid.cell_count()));
                for (int k = 0; k < grid.cell_count(); ++k) all[static_cast<std::size_t>(k)] = k;
                grid = apply_mask_and_filter(grid, RegionMask::from_ids(all), cfg.min_rate_mm_h);
            }
            nodes = node_table(grid);
            ws.write("grid_filtered.csv",
                     [&](const auto& p) { save_grid(grid, p, GridFormat::csv); },
                     /*intermediate=*/true);
            ws.write("nodes.csv", [&](const auto& p) { save_nodes_csv(nodes, p); });
        } catch (...) {
            ws.discard_all();
            rethrow_with_stage("ingest");
        }

        std::vector<TableRow> table;
        MeasureArtifacts pc, mi;

        for (Measure measure : {Measure::pc, Measure::mi}) {
            const std::string prefix = measure == Measure::pc ? "pc" : "mi";
            MeasureArtifacts& art = measure == Measure::pc ? pc : mi;

            // --- similarity ----------------------------------------------
            SimilarityMatrix sim(1, measure);
            try {
                sim = similarity_matrix(grid, measure, cfg.mi_bins, cfg.mi_normalization);
                ws.write("sim_" + prefix + ".csv",
                         [&](const auto& p) { save_similarity(sim, p); },
                         /*intermediate=*/true);
                ws.record("sim_" + prefix + ".csv.json", /*intermediate=*/true);
            } catch (...) {
                ws.discard_all();
                rethrow_with_stage("similarity[" + prefix + "]");
            }

            // --- network construction ------------------------------------
            try {
                double tau = 0.0;
                if (cfg.threshold_mode == PipelineConfig::ThresholdMode::fixed) {
                    tau = measure == Measure::pc ? cfg.tau_pc : cfg.tau_mi;
                } else {
                    const std::vector<double> taus = default_threshold_candidates(sim);
                    const ThresholdScan scan =
                        scan_max_diameter_threshold(sim, nodes, taus, cfg.inclusive_threshold);
                    tau = scan.chosen_tau;
                    ws.write(prefix + "GT_threshold_scan.json", [&](const auto& p) {
                        nlohmann::json doc = {{"chosen_tau", scan.chosen_tau},
                                              {"chosen_index", scan.chosen_index},
                                              {"taus", scan.taus},
                                              {"diameters", scan.diameters}};
                        std::ofstream out(p);
                        out << doc.dump(2) << "\n";
                    });
                }
                art.gt = threshold_graph(sim, nodes, tau, cfg.inclusive_threshold, prefix + "GT");

                double alpha = cfg.alpha;
                if (cfg.backbone_mode != PipelineConfig::BackboneMode::alpha) {
                    const long target = cfg.backbone_mode == PipelineConfig::BackboneMode::match_gt
                                            ? art.gt.edge_count()
                                            : cfg.backbone_target_edges;
                    const BackboneCalibration cal = calibrate_alpha(sim, target);
                    alpha = cal.alpha;
                    ws.write(prefix + "BB_calibration.json", [&](const auto& p) {
                        nlohmann::json doc = {{"alpha", cal.alpha},
                                              {"target_edges", cal.target_edges},
                                              {"achieved_edges", cal.achieved_edges}};
                        std::ofstream out(p);
                        out << doc.dump(2) << "\n";
                    });
                }
                art.bb = backbone_graph(sim, nodes, alpha, prefix + "BB");
            } catch (...) {
                ws.discard_all();
                rethrow_with_stage("netbuild[" + prefix + "]");
            }

            // --- null model ----------------------------------------------
            try {
                art.ensemble = ensemble_metrics(art.gt, cfg.samples, cfg.seed);
                art.cm_sample = ensemble_sample(art.gt, cfg.seed, 0, prefix + "CM");
                ws.write(prefix + "CM_ensemble.json", [&](const auto& p) {
                    save_ensemble_json(art.ensemble, prefix + "CM", p);
                });
            } catch (...) {
                ws.discard_all();
                rethrow_with_stage("nullmodel[" + prefix + "]");
            }
        }

        // --- metrics ------------------------------------------------------
        try {
            for (const MeasureArtifacts* art : {&pc, &mi}) {
                for (const GeoGraph* g : {&art->gt, &art->bb}) {
                    const MetricsReport report = full_report(*g);
                    ws.write("metrics_" + g->label + ".json",
                             [&](const auto& p) { save_metrics_json(report, p); });
                    table.push_back(table_row(report));
                }
                TableRow cm_row =
                    table_row(art->ensemble, art == &pc ? "pcCM" : "miCM");
                cm_row.l_edges = art->gt.edge_count();
                // CM rows go right after their GT/BB pair.
                table.insert(table.begin() + (art == &pc ? 2 : 5), cm_row);
            }
            ws.write("metrics_table.csv", [&](const auto& p) { save_table_csv(table, p); });
        } catch (...) {
            ws.discard_all();
            rethrow_with_stage("metrics");
        }

        // --- geographic analysis ------------------------------------------
        try {
            for (const MeasureArtifacts* art : {&pc, &mi}) {
                export_network(ws, art->gt, cfg.histogram_bins);
                export_network(ws, art->bb, cfg.histogram_bins);
                export_network(ws, art->cm_sample, cfg.histogram_bins);
            }
            const SharedEdges pc_shared = shared_edges(pc.gt, pc.bb);
            const SharedEdges mi_shared = shared_edges(mi.gt, mi.bb);
            const nlohmann::json shared_report = {{"pc",
                              {{"count", pc_shared.count},
                               {"fraction_of_gt", pc_shared.fraction_of_first}}},
                             {"mi",
                              {{"count", mi_shared.count},
                               {"fraction_of_gt", mi_shared.fraction_of_first}}}};
            ws.write("shared_edges.json", [&](const auto& p) {
                std::ofstream out(p);
                out << shared_report.dump(2) << "\n";
            });
        } catch (...) {
            ws.discard_all();
            rethrow_with_stage("geoanalysis");
        }

        // --- manifest ------------------------------------------------------
        RunManifest manifest;
        std::vector<std::string> files = ws.written();
        std::sort(files.begin(), files.end());
        for (const std::string& rel : files) {
            const std::filesystem::path p = ws.to(rel);
            manifest.files.push_back(
                {rel, std::filesystem::file_size(p), hash_hex(file_hash(p))});
        }
        nlohmann::json doc;
        doc["seed"] = cfg.seed;
        doc["config"] = config_to_json(cfg);
        doc["files"] = nlohmann::json::array();
        for (const ManifestEntry& e : manifest.files)
            doc["files"].push_back({{"path", e.path}, {"bytes", e.bytes}, {"hash", e.hash}});
        manifest.manifest_path = ws.to("manifest.json");
        std::ofstream out(manifest.manifest_path);
        if (!out) throw InputError("cannot write manifest: " + manifest.manifest_path.string());
        out << doc.dump(2) << "\n";
        return manifest;
    }
}

} // namespace geonet
