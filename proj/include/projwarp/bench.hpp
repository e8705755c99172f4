#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "projwarp/engine.hpp"

namespace projwarp {

// 10*log10(K*L*(max S)^2 / sum (J-S)^2), reference S second. Identical
// images return +infinity; an all-zero reference is a degeneracy error.
double psnr(const ImageBuffer& test, const ImageBuffer& reference);

struct MethodSpec {
    SamplerConfig sampler;
};

// "all" expands to the 5x5 sampler/kernel grid; otherwise a comma-separated
// list of <sampler>+<kernel> pairs, e.g. "point+bilinear,fast:16+bicubic".
std::vector<MethodSpec> parse_methods(const std::string& spec);

// "<n>" expands to seeds 1..n; otherwise a comma-separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& spec);

struct BenchConfig {
    std::string corpus_dir;
    std::vector<std::uint64_t> seeds;
    std::vector<MethodSpec> methods;
    int repetitions = 3;
    std::string format = "csv";  // csv | json
    int crop = 0;                // center-crop corpus images to crop x crop (0 = full)
    int threads = 1;
};

struct BenchRow {
    std::string sampler;
    std::string kernel;
    double time_s = 0;            // median over repetitions, mean over corpus x seeds
    double psnr_db = 0;
    bool psnr_infinite = false;
    double taps_per_pixel = 0;
    double samples_per_pixel = 0;
    double pyramid_build_s = 0;   // reported separately from time_s
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

// Composed-triple protocol: for each (image, seed, method) build the triple,
// run the warp chain, measure PSNR against the original and the chain wall
// time (pyramid construction excluded and reported separately).
BenchReport run_benchmark(const BenchConfig& cfg);

// CSV: sampler,kernel,time_s,psnr_db,taps_per_pixel,samples_per_pixel,
// pyramid_build_s. JSON mirrors; infinite PSNR serializes as "inf" / null.
// Rows are ordered sampler-major, kernel-minor.
std::string emit_report(const BenchReport& r, const std::string& format);

}  // namespace projwarp
