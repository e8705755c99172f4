#pragma once

#include <cstdint>
#include <span>

#include "projwarp/image.hpp"
#include "projwarp/samplers.hpp"
#include "projwarp/stats.hpp"

namespace projwarp {

// homography maps source plane coordinates to output plane coordinates;
// the backward map used per pixel is derived internally by inversion.
struct WarpRequest {
    ImageBuffer source;
    Homography homography;
    int out_width = 0;
    int out_height = 0;
    SamplerConfig sampler;
    int threads = 1;  // <= 0 selects hardware concurrency
};

struct WarpResult {
    ImageBuffer image;
    TapStats stats;
};

// Full inverse-mapping warp: choose sample points per the sampler, back-
// project through the scanline decomposition, interpolate, combine, and
// quantize once at pixel write. Rows may be partitioned across workers;
// output bits are identical at any worker count.
WarpResult warp(const WarpRequest& req);

// Brute-force resampler used as a test oracle: 32x32-grid supersampling
// with bilinear interpolation, evaluated by direct matrix projection.
// Never benchmarked.
ImageBuffer reference_resample(const ImageBuffer& src, const Homography& h,
                               int out_width, int out_height);

struct ChainResult {
    ImageBuffer image;
    TapStats stats;
};

// Sequential warps, re-quantizing to 8 bits between stages. Intermediate
// extents are the axis-aligned bounding box of the mapped source corners,
// clamped to 4x the source linear size; the final extent equals the source.
ChainResult warp_chain(const ImageBuffer& src, std::span<const Homography> factors,
                       const SamplerConfig& cfg, int threads = 1);

// Round half away from zero, clamp to [0, 255].
std::uint8_t quantize_intensity(double v);

}  // namespace projwarp
