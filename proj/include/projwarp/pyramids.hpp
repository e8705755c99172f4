#pragma once

#include <vector>

#include "projwarp/image.hpp"
#include "projwarp/kernels.hpp"

namespace projwarp {

// Isotropic chain: level k+1 is the 2x2 box mean of level k, re-quantized
// to 8 bits per level. The chain ends when the largest dimension reaches 1.
struct MipPyramid {
    std::vector<ImageBuffer> levels;

    int max_level() const { return int(levels.size()) - 1; }
};

// Per-axis grid: entry (kx, ky) is the source reduced kx times horizontally
// and ky times vertically.
struct RipMap {
    int levels_x = 0;
    int levels_y = 0;
    std::vector<ImageBuffer> grid;  // row-major, ky * levels_x + kx

    const ImageBuffer& entry(int kx, int ky) const {
        return grid[std::size_t(ky) * levels_x + kx];
    }
    ImageBuffer& entry(int kx, int ky) {
        return grid[std::size_t(ky) * levels_x + kx];
    }
};

MipPyramid build_mipmap(const ImageBuffer& img);
RipMap build_ripmap(const ImageBuffer& img);

// Pixel centers stay aligned across levels: level-k coordinate of a level-0
// coordinate c is (c + 0.5) / 2^k - 0.5.
double level_coord(double c, int level);

// Linear blend between the two nearest levels at a real level index.
double sample_mip(const MipPyramid& p, double u, double v, double level,
                  const KernelEval& k, TapStats* stats = nullptr);

// Bilinear blend over the four surrounding grid entries.
double sample_rip(const RipMap& r, double u, double v, double lx, double ly,
                  const KernelEval& k, TapStats* stats = nullptr);

}  // namespace projwarp
