#pragma once

#include <cstdint>
#include <string>

#include "projwarp/geometry.hpp"
#include "projwarp/kernels.hpp"
#include "projwarp/pyramids.hpp"

namespace projwarp {

enum class SamplerKind { point, supersample, mip, rip, fast };

struct SamplerConfig {
    SamplerKind kind = SamplerKind::point;
    int grid = 7;                    // supersampling: grid x grid positions
    int max_samples = 16;            // FAST cap
    std::uint64_t jitter_seed = 0;   // FAST stratified jitter
    KernelId kernel;
    int lut_bins = 0;                // 0 = exact kernel evaluation
};

// Local backward-map stretching at an output point. rho_x/rho_y are the
// Jacobian column norms; the major axis is axis-aligned in output space.
struct FootprintEstimate {
    JacobianEstimate jac;
    double rho_x = 1, rho_y = 1;
    double scale = 1;        // max(rho_x, rho_y)
    double minor_scale = 1;  // min(rho_x, rho_y)
    Vec2 major_axis{1, 0};
};

FootprintEstimate footprint(const ScanlineDecomposition& d, double x, double y);

// The five per-pixel strategies. (x, y) is the output pixel center; each
// returns the pre-quantization intensity and bumps the structure-sample
// counter by its per-method amount (1, grid^2, 2, 4, N).
double sample_point(const ImageBuffer& src, const ScanlineDecomposition& d,
                    double x, double y, const KernelEval& k, TapStats* stats = nullptr);
double sample_supersample(const ImageBuffer& src, const ScanlineDecomposition& d,
                          double x, double y, int grid, const KernelEval& k,
                          TapStats* stats = nullptr);
double sample_mipmap_prefiltered(const MipPyramid& p, const ScanlineDecomposition& d,
                                 double x, double y, const KernelEval& k,
                                 TapStats* stats = nullptr);
double sample_ripmap_prefiltered(const RipMap& r, const ScanlineDecomposition& d,
                                 double x, double y, const KernelEval& k,
                                 TapStats* stats = nullptr);
double sample_fast(const MipPyramid& p, const ScanlineDecomposition& d,
                   double x, double y, int max_samples, std::uint64_t jitter_seed,
                   const KernelEval& k, TapStats* stats = nullptr);

// Tokens: point | super:<n> | mip | rip | fast:<n>[:seed]
SamplerConfig parse_sampler_token(const std::string& token);
std::string sampler_token(const SamplerConfig& c);

}  // namespace projwarp
