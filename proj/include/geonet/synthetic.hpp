#pragma once

#include <cstdint>

#include "geonet/grid.hpp"

namespace geonet {

// Test/demo fixture generator. Cells are grouped into vertical-band regions;
// each region mixes a shared latent signal with a spatially smooth local
// field, so similarity is high inside a region, decays with distance, and
// vanishes across regions.
struct SyntheticSpec {
    int width = 5;   // cells, 1 km spacing
    int height = 5;
    int regions = 2;
    double intra_correlation = 0.9; // [0, 1]: variance share of the regional signal
    int timesteps = 64;             // >= 8
    std::uint64_t seed = 1;
    double length_scale_km = 3.0;   // decay of the local field's correlation
    double base_rate = 50.0;        // offset keeping values above rain-rate filters
    double amplitude = 5.0;
};

GridSeries generate_synthetic(const SyntheticSpec& spec);

} // namespace geonet
