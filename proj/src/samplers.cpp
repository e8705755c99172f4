#include "projwarp/samplers.hpp"

#include <cmath>
#include <cstdio>

#include "projwarp/errors.hpp"

namespace projwarp {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based jitter in [0, 1): depends only on (seed, pixel, stratum).
double jitter01(std::uint64_t seed, std::int64_t px, std::int64_t py, int stratum) {
    std::uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dull);
    h = mix64(h ^ std::uint64_t(px));
    h = mix64(h ^ std::uint64_t(py));
    h = mix64(h ^ std::uint64_t(stratum));
    return double(h >> 11) * 0x1.0p-53;
}

double pyramid_level(double rho) {
    // Pre-filtering applies to minification only; magnification stays at 0.
    return rho > 1.0 ? std::log2(rho) : 0.0;
}

}  // namespace

FootprintEstimate footprint(const ScanlineDecomposition& d, double x, double y) {
    FootprintEstimate fp;
    fp.jac = d.jacobian(x, y);
    fp.rho_x = std::hypot(fp.jac.du_dx, fp.jac.dv_dx);
    fp.rho_y = std::hypot(fp.jac.du_dy, fp.jac.dv_dy);
    if (fp.rho_x >= fp.rho_y) {
        fp.scale = fp.rho_x;
        fp.minor_scale = fp.rho_y;
        fp.major_axis = {1, 0};
    } else {
        fp.scale = fp.rho_y;
        fp.minor_scale = fp.rho_x;
        fp.major_axis = {0, 1};
    }
    return fp;
}

double sample_point(const ImageBuffer& src, const ScanlineDecomposition& d, double x,
                    double y, const KernelEval& k, TapStats* stats) {
    Vec2 uv = d.map(x, y);
    if (stats) {
        stats->structure_samples += 1;
        stats->multiplications += 2;
    }
    return interpolate2d(src, k, uv.x, uv.y, stats);
}

double sample_supersample(const ImageBuffer& src, const ScanlineDecomposition& d, double x,
                          double y, int grid, const KernelEval& k, TapStats* stats) {
    if (grid < 1) throw usage_error("supersampling grid must be at least 1");
    double acc = 0.0;
    for (int j = 0; j < grid; ++j) {
        double dy = (j + 0.5) / grid - 0.5;
        for (int i = 0; i < grid; ++i) {
            double dx = (i + 0.5) / grid - 0.5;
            Vec2 uv = d.map(x + dx, y + dy);
            if (stats) stats->multiplications += (grid == 1) ? 2 : 8;
            acc += interpolate2d(src, k, uv.x, uv.y, stats);
        }
    }
    if (stats) stats->structure_samples += std::uint64_t(grid) * grid;
    return acc / (double(grid) * grid);
}

double sample_mipmap_prefiltered(const MipPyramid& p, const ScanlineDecomposition& d,
                                 double x, double y, const KernelEval& k, TapStats* stats) {
    FootprintEstimate fp = footprint(d, x, y);
    double level = pyramid_level(fp.scale);
    Vec2 uv = d.map(x, y);
    if (stats) {
        stats->structure_samples += 2;
        stats->multiplications += 7;  // mapping + derivative/rescale bookkeeping
    }
    return sample_mip(p, uv.x, uv.y, level, k, stats);
}

double sample_ripmap_prefiltered(const RipMap& r, const ScanlineDecomposition& d, double x,
                                 double y, const KernelEval& k, TapStats* stats) {
    FootprintEstimate fp = footprint(d, x, y);
    double lx = pyramid_level(fp.rho_x);
    double ly = pyramid_level(fp.rho_y);
    Vec2 uv = d.map(x, y);
    if (stats) {
        stats->structure_samples += 4;
        stats->multiplications += 7;
    }
    return sample_rip(r, uv.x, uv.y, lx, ly, k, stats);
}

double sample_fast(const MipPyramid& p, const ScanlineDecomposition& d, double x, double y,
                   int max_samples, std::uint64_t jitter_seed, const KernelEval& k,
                   TapStats* stats) {
    if (max_samples < 1) throw usage_error("FAST sample cap must be at least 1");
    FootprintEstimate fp = footprint(d, x, y);
    double level = pyramid_level(fp.minor_scale);
    double ratio = fp.scale / std::max(fp.minor_scale, 1e-9);
    int n = std::max(1, std::min(max_samples, int(std::ceil(ratio))));
    if (stats) {
        stats->structure_samples += std::uint64_t(n);
        stats->multiplications += 7;
    }
    if (n == 1) {
        Vec2 uv = d.map(x, y);
        return sample_mip(p, uv.x, uv.y, level, k, stats);
    }
    // Stratified jitter along the major anisotropy axis across the pixel.
    auto px = std::int64_t(std::llround(x));
    auto py = std::int64_t(std::llround(y));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = (i + jitter01(jitter_seed, px, py, i)) / n - 0.5;
        Vec2 uv = d.map(x + t * fp.major_axis.x, y + t * fp.major_axis.y);
        if (stats) stats->multiplications += 8;
        acc += sample_mip(p, uv.x, uv.y, level, k, stats);
    }
    return acc / n;
}

SamplerConfig parse_sampler_token(const std::string& token) {
    SamplerConfig c;
    auto parse_int = [&](const std::string& text, const char* what) {
        try {
            std::size_t used = 0;
            int v = std::stoi(text, &used);
            if (used != text.size() || v < 1) throw usage_error(std::string("bad ") + what);
            return v;
        } catch (const std::logic_error&) {
            throw usage_error(std::string("bad ") + what + " in sampler token: " + token);
        }
    };
    if (token == "point") {
        c.kind = SamplerKind::point;
    } else if (token == "mip") {
        c.kind = SamplerKind::mip;
    } else if (token == "rip") {
        c.kind = SamplerKind::rip;
    } else if (token.rfind("super", 0) == 0) {
        c.kind = SamplerKind::supersample;
        if (token.size() > 5) {
            if (token[5] != ':') throw usage_error("bad sampler token: " + token);
            c.grid = parse_int(token.substr(6), "supersampling grid");
        }
    } else if (token.rfind("fast", 0) == 0) {
        c.kind = SamplerKind::fast;
        if (token.size() > 4) {
            if (token[4] != ':') throw usage_error("bad sampler token: " + token);
            std::string rest = token.substr(5);
            auto colon = rest.find(':');
            c.max_samples = parse_int(rest.substr(0, colon), "FAST sample cap");
            if (colon != std::string::npos) {
                try {
                    std::size_t used = 0;
                    c.jitter_seed = std::stoull(rest.substr(colon + 1), &used);
                    if (used != rest.size() - colon - 1) {
                        throw usage_error("bad FAST seed: " + token);
                    }
                } catch (const std::logic_error&) {
                    throw usage_error("bad FAST seed: " + token);
                }
            }
        }
    } else {
        throw usage_error("unknown sampler token: " + token);
    }
    return c;
}

std::string sampler_token(const SamplerConfig& c) {
    char buf[64];
    switch (c.kind) {
        case SamplerKind::point: return "point";
        case SamplerKind::mip: return "mip";
        case SamplerKind::rip: return "rip";
        case SamplerKind::supersample:
            std::snprintf(buf, sizeof(buf), "super:%d", c.grid);
            return buf;
        case SamplerKind::fast:
            if (c.jitter_seed == 0) {
                std::snprintf(buf, sizeof(buf), "fast:%d", c.max_samples);
            } else {
                std::snprintf(buf, sizeof(buf), "fast:%d:%llu", c.max_samples,
                              (unsigned long long)c.jitter_seed);
            }
            return buf;
    }
    return "?";
}

}  // namespace projwarp
