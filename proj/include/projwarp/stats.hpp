#pragma once

#include <cstdint>

namespace projwarp {

// Instrumentation counters for the complexity contracts.
//
// interpolation_taps counts logical pixel reads per interpolated point
// (clamped duplicates count separately). structure_samples follows the
// per-method accounting: 1 for point, n^2 for supersampling, 2 for mip
// (two blended levels), 4 for rip (four grid entries), N for FAST (number
// of jittered positions). multiplications counts multiply ops actually
// executed in the mapping/interpolation/blend inner loops.
struct TapStats {
    std::uint64_t pixels_processed = 0;
    std::uint64_t interpolation_taps = 0;
    std::uint64_t structure_samples = 0;
    std::uint64_t multiplications = 0;
    double pyramid_build_seconds = 0.0;

    void merge(const TapStats& o) {
        pixels_processed += o.pixels_processed;
        interpolation_taps += o.interpolation_taps;
        structure_samples += o.structure_samples;
        multiplications += o.multiplications;
        pyramid_build_seconds += o.pyramid_build_seconds;
    }
};

}  // namespace projwarp
