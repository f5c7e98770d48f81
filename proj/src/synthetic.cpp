#include "geonet/synthetic.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "geonet/errors.hpp"

namespace geonet {

namespace {

// In-place Cholesky of a symmetric positive-definite matrix (row-major).
void cholesky(std::vector<double>& m, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= m[static_cast<std::size_t>(i) * n + k] * m[static_cast<std::size_t>(j) * n + k];
            if (i == j) {
                if (s <= 0.0) throw ComputeError("synthetic covariance is not positive definite");
                m[static_cast<std::size_t>(i) * n + j] = std::sqrt(s);
            } else {
                m[static_cast<std::size_t>(i) * n + j] = s / m[static_cast<std::size_t>(j) * n + j];
            }
        }
        for (int j = i + 1; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = 0.0;
    }
}

} // namespace

GridSeries generate_synthetic(const SyntheticSpec& spec) {
    if (spec.width < 2 || spec.height < 2)
        throw InputError("synthetic grid must be at least 2x2");
    if (spec.timesteps < 8) throw InputError("synthetic series length must be at least 8");
    if (spec.regions < 1 || spec.regions > spec.width)
        throw InputError("region count must be in [1, width]");
    if (spec.intra_correlation < 0.0 || spec.intra_correlation > 1.0)
        throw InputError("intra-region correlation must be in [0, 1]");
    if (spec.length_scale_km <= 0.0) throw InputError("length scale must be positive");

    const int n = spec.width * spec.height;
    GridSeries grid;
    grid.units = Units::mm_per_hour;
    grid.time_step_minutes = 10.0;
    grid.cells.resize(static_cast<std::size_t>(n));

    constexpr double lat0 = -23.6, lon0 = -46.6;
    const double km_per_deg = 111.32;
    std::vector<int> region_of(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> region_cells(static_cast<std::size_t>(spec.regions));
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const int id = y * spec.width + x;
            GridCell& c = grid.cells[static_cast<std::size_t>(id)];
            c.id = id;
            c.x_km = x;
            c.y_km = y;
            c.lat = lat0 + y / km_per_deg;
            c.lon = lon0 + x / (km_per_deg * std::cos(lat0 * M_PI / 180.0));
            c.series.assign(static_cast<std::size_t>(spec.timesteps), 0.0);
            const int r = std::min(spec.regions - 1, x * spec.regions / spec.width);
            region_of[static_cast<std::size_t>(id)] = r;
            region_cells[static_cast<std::size_t>(r)].push_back(id);
        }
    }

    // Per-region Cholesky factor of the squared-exponential local field.
    std::vector<std::vector<double>> factors(static_cast<std::size_t>(spec.regions));
    for (int r = 0; r < spec.regions; ++r) {
        const auto& cells = region_cells[static_cast<std::size_t>(r)];
        const int m = static_cast<int>(cells.size());
        std::vector<double> cov(static_cast<std::size_t>(m) * m);
        for (int a = 0; a < m; ++a) {
            const GridCell& ca = grid.cells[static_cast<std::size_t>(cells[a])];
            for (int b = 0; b < m; ++b) {
                const GridCell& cb = grid.cells[static_cast<std::size_t>(cells[b])];
                const double dx = ca.x_km - cb.x_km, dy = ca.y_km - cb.y_km;
                const double d2 = dx * dx + dy * dy;
                cov[static_cast<std::size_t>(a) * m + b] =
                    std::exp(-d2 / (2.0 * spec.length_scale_km * spec.length_scale_km)) +
                    (a == b ? 1e-9 : 0.0);
            }
        }
        cholesky(cov, m);
        factors[static_cast<std::size_t>(r)] = std::move(cov);
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double w_signal = std::sqrt(spec.intra_correlation);
    const double w_local = std::sqrt(1.0 - spec.intra_correlation);

    std::vector<double> z(static_cast<std::size_t>(spec.regions));
    std::vector<double> g, local;
    for (int t = 0; t < spec.timesteps; ++t) {
        for (int r = 0; r < spec.regions; ++r) z[static_cast<std::size_t>(r)] = gauss(rng);
        for (int r = 0; r < spec.regions; ++r) {
            const auto& cells = region_cells[static_cast<std::size_t>(r)];
            const int m = static_cast<int>(cells.size());
            g.resize(static_cast<std::size_t>(m));
            local.assign(static_cast<std::size_t>(m), 0.0);
            for (int k = 0; k < m; ++k) g[static_cast<std::size_t>(k)] = gauss(rng);
            const std::vector<double>& chol = factors[static_cast<std::size_t>(r)];
            for (int a = 0; a < m; ++a)
                for (int b = 0; b <= a; ++b)
                    local[static_cast<std::size_t>(a)] +=
                        chol[static_cast<std::size_t>(a) * m + b] * g[static_cast<std::size_t>(b)];
            for (int k = 0; k < m; ++k) {
                const double v = w_signal * z[static_cast<std::size_t>(r)] +
                                 w_local * local[static_cast<std::size_t>(k)];
                grid.cells[static_cast<std::size_t>(cells[static_cast<std::size_t>(k)])]
                    .series[static_cast<std::size_t>(t)] = spec.base_rate + spec.amplitude * v;
            }
        }
    }
    grid.validate();
    return grid;
}

} // namespace geonet
