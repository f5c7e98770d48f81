// geonet: geographical networks from gridded time series.
//
// Subcommands cover the pipeline stages individually (ingest, similarity,
// build, nullmodel, metrics, geo), a synthetic fixture generator (synth),
// and the config-driven end-to-end run (pipeline).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geonet/errors.hpp"
#include "geonet/geoanalysis.hpp"
#include "geonet/io.hpp"
#include "geonet/kernels.hpp"
#include "geonet/metrics.hpp"
#include "geonet/netbuild.hpp"
#include "geonet/nullmodels.hpp"
#include "geonet/pipeline.hpp"
#include "geonet/similarity.hpp"
#include "geonet/synthetic.hpp"

namespace {

using namespace geonet;

GridFormat parse_grid_format(const std::string& s) {
    if (s == "csv") return GridFormat::csv;
    if (s == "binary") return GridFormat::binary;
    throw InputError("unknown grid format '" + s + "' (expected csv or binary)");
}

void write_json(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << doc.dump(2) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"geographical networks from gridded time series"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = auto)")->capture_default_str();

    // --- synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic grid fixture");
    SyntheticSpec spec;
    std::string synth_out;
    synth->add_option("--out", synth_out, "output grid CSV")->required();
    synth->add_option("--width", spec.width, "grid width in cells")->capture_default_str();
    synth->add_option("--height", spec.height, "grid height in cells")->capture_default_str();
    synth->add_option("--regions", spec.regions, "number of correlated regions")
        ->capture_default_str();
    synth->add_option("--rho", spec.intra_correlation, "intra-region correlation in [0,1]")
        ->capture_default_str();
    synth->add_option("--timesteps", spec.timesteps, "series length")->capture_default_str();
    synth->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
    synth->add_option("--length-scale", spec.length_scale_km, "local field length scale, km")
        ->capture_default_str();

    // --- ingest -------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "load, mask and filter a grid");
    std::string in_grid, in_mask, in_format = "csv", ingest_out, ingest_nodes;
    double min_rate = 1.0;
    ingest->add_option("--grid", in_grid, "input grid file")->required();
    ingest->add_option("--format", in_format, "grid format: csv|binary")->capture_default_str();
    ingest->add_option("--mask", in_mask, "GeoJSON polygon or id-per-line mask file");
    ingest->add_option("--min-rate", min_rate, "rain-rate floor in mm/h; samples at or below it become 0")
        ->capture_default_str();
    ingest->add_option("--out", ingest_out, "filtered grid CSV")->required();
    ingest->add_option("--nodes", ingest_nodes, "node table CSV");

    // --- similarity ---------------------------------------------------------
    auto* simcmd = app.add_subcommand("similarity", "pairwise similarity matrix");
    std::string sim_grid, sim_measure = "pc", sim_norm = "max_entropy", sim_out;
    int sim_bins = 0;
    simcmd->add_option("--grid", sim_grid, "filtered grid CSV")->required();
    simcmd->add_option("--measure", sim_measure, "pc|mi")->capture_default_str();
    simcmd->add_option("--bins", sim_bins, "MI bins (0 = Sturges)")->capture_default_str();
    simcmd->add_option("--normalization", sim_norm, "MI normalization: none|max_entropy")
        ->capture_default_str();
    simcmd->add_option("--out", sim_out, "similarity CSV (sidecar written alongside)")->required();

    // --- build ----------------------------------------------------------------
    auto* build = app.add_subcommand("build", "construct a network from a similarity matrix");
    std::string b_sim, b_nodes, b_criterion = "gt", b_out, b_geojson, b_label, b_scan_out;
    std::optional<double> b_tau, b_alpha;
    std::optional<long> b_target;
    bool b_scan = false, b_inclusive = false;
    build->add_option("--sim", b_sim, "similarity CSV")->required();
    build->add_option("--nodes", b_nodes, "node table CSV")->required();
    build->add_option("--criterion", b_criterion, "gt|bb")->capture_default_str();
    build->add_option("--tau", b_tau, "global threshold (gt)");
    build->add_flag("--scan", b_scan, "pick tau by maximum giant-component diameter (gt)");
    build->add_flag("--inclusive", b_inclusive, "keep weights equal to tau as well");
    build->add_option("--alpha", b_alpha, "significance level (bb)");
    build->add_option("--target-edges", b_target, "calibrate alpha to this edge count (bb)");
    build->add_option("--scan-out", b_scan_out, "write the threshold scan as JSON");
    build->add_option("--label", b_label, "network label");
    build->add_option("--out", b_out, "edge list CSV")->required();
    build->add_option("--geojson", b_geojson, "also write a GeoJSON FeatureCollection");

    // --- nullmodel --------------------------------------------------------------
    auto* nullm = app.add_subcommand("nullmodel", "degree-matched ensemble report");
    std::string n_edges, n_nodes, n_out, n_sample_out;
    long n_samples = 10000;
    std::uint64_t n_seed = 42;
    long n_sample_index = 0;
    nullm->add_option("--graph", n_edges, "edge list CSV")->required();
    nullm->add_option("--nodes", n_nodes, "node table CSV")->required();
    nullm->add_option("--samples", n_samples, "ensemble size")->capture_default_str();
    nullm->add_option("--seed", n_seed, "RNG seed")->capture_default_str();
    nullm->add_option("--out", n_out, "ensemble report JSON")->required();
    nullm->add_option("--sample-out", n_sample_out, "write one simplified sample as edge CSV");
    nullm->add_option("--sample-index", n_sample_index, "which sample to export")
        ->capture_default_str();

    // --- metrics ---------------------------------------------------------------
    auto* met = app.add_subcommand("metrics", "topological metrics of a network");
    std::string m_edges, m_nodes, m_out, m_csv, m_label;
    met->add_option("--graph", m_edges, "edge list CSV")->required();
    met->add_option("--nodes", m_nodes, "node table CSV")->required();
    met->add_option("--label", m_label, "network label");
    met->add_option("--out", m_out, "metrics JSON")->required();
    met->add_option("--csv", m_csv, "also append a one-row summary table CSV");

    // --- geo --------------------------------------------------------------------
    auto* geo = app.add_subcommand("geo", "topological vs geographical analysis");
    std::string g_edges, g_nodes, g_outdir, g_label;
    int g_bins = 20;
    geo->add_option("--graph", g_edges, "edge list CSV")->required();
    geo->add_option("--nodes", g_nodes, "node table CSV")->required();
    geo->add_option("--label", g_label, "network label");
    geo->add_option("--bins", g_bins, "histogram bins")->capture_default_str();
    geo->add_option("--out", g_outdir, "output directory")->required();

    // --- pipeline ------------------------------------------------------------------
    auto* pipe = app.add_subcommand("pipeline", "config-driven end-to-end run");
    std::string p_config;
    std::optional<std::uint64_t> p_seed;
    std::optional<std::string> p_out;
    std::optional<long> p_samples;
    bool p_no_intermediates = false;
    pipe->add_option("--config", p_config, "pipeline config JSON")->required();
    pipe->add_option("--seed", p_seed, "override the config seed");
    pipe->add_option("--out", p_out, "override the output directory");
    pipe->add_option("--samples", p_samples, "override the ensemble size");
    pipe->add_flag("--no-intermediates", p_no_intermediates,
                   "skip similarity matrices and the filtered grid");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    if (*synth) {
        const GridSeries grid = generate_synthetic(spec);
        save_grid(grid, synth_out, GridFormat::csv);
        std::cout << "wrote " << synth_out << " (" << grid.cell_count() << " cells, T="
                  << grid.series_length() << ")\n";
        return 0;
    }

    if (*ingest) {
        GridSeries grid = load_grid(in_grid, parse_grid_format(in_format));
        RegionMask mask = [&] {
            if (!in_mask.empty()) return load_mask(in_mask);
            std::vector<int> all(static_cast<std::size_t>(grid.cell_count()));
            for (int k = 0; k < grid.cell_count(); ++k) all[static_cast<std::size_t>(k)] = k;
            return RegionMask::from_ids(all);
        }();
        grid = apply_mask_and_filter(grid, mask, min_rate);
        save_grid(grid, ingest_out, GridFormat::csv);
        if (!ingest_nodes.empty()) save_nodes_csv(node_table(grid), ingest_nodes);
        const auto dry = constant_cell_ids(grid);
        std::cout << "kept " << grid.cell_count() << " cells, T=" << grid.series_length()
                  << ", constant series: " << dry.size() << "\n";
        return 0;
    }

    if (*simcmd) {
        const GridSeries grid = load_grid(sim_grid, GridFormat::csv);
        const SimilarityMatrix sim = similarity_matrix(
            grid, parse_measure(sim_measure), sim_bins, parse_normalization(sim_norm));
        save_similarity(sim, sim_out);
        std::cout << "wrote " << sim_out << " (n=" << sim.size() << ", measure "
                  << measure_name(sim.measure()) << ", kernels "
                  << kernels::backend_name(kernels::active_backend()) << ")\n";
        return 0;
    }

    if (*build) {
        const SimilarityMatrix sim = load_similarity(b_sim);
        const std::vector<GeoNode> nodes = load_nodes_csv(b_nodes);
        GeoGraph g;
        if (b_criterion == "gt") {
            if (b_scan == b_tau.has_value())
                throw InputError("gt needs exactly one of --tau or --scan");
            double tau = b_tau.value_or(0.0);
            if (b_scan) {
                const std::vector<double> taus = default_threshold_candidates(sim);
                const ThresholdScan scan =
                    scan_max_diameter_threshold(sim, nodes, taus, b_inclusive);
                tau = scan.chosen_tau;
                std::cout << "scan chose tau=" << format_double(tau) << "\n";
                if (!b_scan_out.empty()) {
                    write_json({{"chosen_tau", scan.chosen_tau},
                                {"chosen_index", scan.chosen_index},
                                {"taus", scan.taus},
                                {"diameters", scan.diameters}},
                               b_scan_out);
                }
            }
            g = threshold_graph(sim, nodes, tau, b_inclusive,
                                b_label.empty() ? "gt" : b_label);
        } else if (b_criterion == "bb") {
            if (b_alpha.has_value() == b_target.has_value())
                throw InputError("bb needs exactly one of --alpha or --target-edges");
            double alpha = b_alpha.value_or(0.0);
            if (b_target) {
                const BackboneCalibration cal = calibrate_alpha(sim, *b_target);
                alpha = cal.alpha;
                std::cout << "calibrated alpha=" << format_double(alpha) << " achieving "
                          << cal.achieved_edges << " edges (target " << cal.target_edges
                          << ")\n";
            }
            g = backbone_graph(sim, nodes, alpha, b_label.empty() ? "bb" : b_label);
        } else {
            throw InputError("unknown criterion '" + b_criterion + "' (expected gt or bb)");
        }
        save_edges_csv(g, b_out);
        if (!b_geojson.empty()) save_geojson(g, b_geojson);
        std::cout << "wrote " << b_out << " (" << g.edge_count() << " edges on "
                  << g.node_count() << " nodes)\n";
        return 0;
    }

    if (*nullm) {
        const GeoGraph g = load_graph(n_edges, n_nodes);
        const EnsembleReport report = ensemble_metrics(g, n_samples, n_seed);
        save_ensemble_json(report, g.label, n_out);
        if (!n_sample_out.empty())
            save_edges_csv(ensemble_sample(g, n_seed, n_sample_index), n_sample_out);
        std::cout << "ensemble of " << report.samples << ": mean_l="
                  << format_double(report.mean_l) << " mean_c=" << format_double(report.mean_c)
                  << " mean_D=" << format_double(report.mean_diameter) << "\n";
        return 0;
    }

    if (*met) {
        GeoGraph g = load_graph(m_edges, m_nodes, m_label);
        const MetricsReport report = full_report(g);
        save_metrics_json(report, m_out);
        if (!m_csv.empty()) {
            const TableRow row = table_row(report);
            save_table_csv({&row, 1}, m_csv);
        }
        std::cout << "n=" << report.n << " L=" << report.l_edges << " NC="
                  << report.num_components << " GC=" << report.giant_component_size << " ST="
                  << report.singletons << "\n";
        return 0;
    }

    if (*geo) {
        const GeoGraph g = load_graph(g_edges, g_nodes, g_label);
        std::filesystem::create_directories(g_outdir);
        const std::filesystem::path dir(g_outdir);
        const DistancePairSet pairs = distance_pairs(g);
        save_scatter_csv(pairs, dir / "scatter.csv");
        save_regression_json(regress_topo_on_geo(pairs), dir / "regression.json");
        const EdgeLengthStats stats = edge_length_stats(g, g_bins);
        save_edge_length_json(stats, dir / "edge_length.json");
        save_histogram_csv(stats.histogram, dir / "edge_length_hist.csv");
        save_histogram_csv(weight_histogram(g, g_bins), dir / "weight_hist.csv");
        std::cout << "wrote scatter/regression/edge-length/weight-hist under " << g_outdir
                  << "\n";
        return 0;
    }

    if (*pipe) {
        PipelineConfig cfg = PipelineConfig::from_json_file(p_config);
        if (p_seed) cfg.seed = *p_seed;
        if (p_out) cfg.out_dir = *p_out;
        if (p_samples) cfg.samples = *p_samples;
        if (p_no_intermediates) cfg.no_intermediates = true;
        const RunManifest manifest = run_pipeline(cfg);
        std::cout << "wrote " << manifest.files.size() << " artifacts; manifest at "
                  << manifest.manifest_path.string() << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const geonet::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const geonet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
