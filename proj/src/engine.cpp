#include "projwarp/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "projwarp/errors.hpp"

namespace projwarp {

std::uint8_t quantize_intensity(double v) {
    long r = std::lround(v);  // half away from zero
    return std::uint8_t(std::clamp(r, 0L, 255L));
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PreparedWarp {
    ScanlineDecomposition decomp;
    std::optional<MipPyramid> mip;
    std::optional<RipMap> rip;
    std::optional<KernelLUT> lut;
    KernelEval kernel;
};

double sample_dispatch(const ImageBuffer& src, const PreparedWarp& w,
                       const SamplerConfig& cfg, double x, double y, TapStats* stats) {
    switch (cfg.kind) {
        case SamplerKind::point:
            return sample_point(src, w.decomp, x, y, w.kernel, stats);
        case SamplerKind::supersample:
            return sample_supersample(src, w.decomp, x, y, cfg.grid, w.kernel, stats);
        case SamplerKind::mip:
            return sample_mipmap_prefiltered(*w.mip, w.decomp, x, y, w.kernel, stats);
        case SamplerKind::rip:
            return sample_ripmap_prefiltered(*w.rip, w.decomp, x, y, w.kernel, stats);
        case SamplerKind::fast:
            return sample_fast(*w.mip, w.decomp, x, y, cfg.max_samples, cfg.jitter_seed,
                               w.kernel, stats);
    }
    return 0.0;
}

}  // namespace

WarpResult warp(const WarpRequest& req) {
    if (req.out_width <= 0 || req.out_height <= 0) {
        throw usage_error("warp output extent must be positive");
    }
    if (req.source.empty()) {
        throw usage_error("warp source image is empty");
    }

    PreparedWarp w{ScanlineDecomposition(req.homography, req.out_width, req.out_height),
                   std::nullopt, std::nullopt, std::nullopt,
                   KernelEval{req.sampler.kernel, nullptr}};

    TapStats stats;
    if (req.sampler.kind == SamplerKind::mip || req.sampler.kind == SamplerKind::fast) {
        auto t0 = std::chrono::steady_clock::now();
        w.mip = build_mipmap(req.source);
        stats.pyramid_build_seconds += seconds_since(t0);
    } else if (req.sampler.kind == SamplerKind::rip) {
        auto t0 = std::chrono::steady_clock::now();
        w.rip = build_ripmap(req.source);
        stats.pyramid_build_seconds += seconds_since(t0);
    }
    if (req.sampler.lut_bins > 0) {
        w.lut.emplace(req.sampler.kernel, req.sampler.lut_bins);
        w.kernel.lut = &*w.lut;
    }

    ImageBuffer out(req.out_width, req.out_height);
    int threads = req.threads;
    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, req.out_height);

    auto run_rows = [&](int y_begin, int y_end, TapStats& local) {
        for (int y = y_begin; y < y_end; ++y) {
            for (int x = 0; x < req.out_width; ++x) {
                double v = sample_dispatch(req.source, w, req.sampler, x, y, &local);
                out(x, y) = quantize_intensity(v);
                local.pixels_processed += 1;
            }
        }
    };

    if (threads == 1) {
        run_rows(0, req.out_height, stats);
    } else {
        std::vector<TapStats> locals;
        locals.resize(std::size_t(threads));
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(threads));
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (int t = 0; t < threads; ++t) {
            int y0 = int(std::int64_t(req.out_height) * t / threads);
            int y1 = int(std::int64_t(req.out_height) * (t + 1) / threads);
            pool.emplace_back([&, t, y0, y1] {
                try {
                    run_rows(y0, y1, locals[std::size_t(t)]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
        for (const auto& l : locals) stats.merge(l);
    }

    return {std::move(out), stats};
}

ImageBuffer reference_resample(const ImageBuffer& src, const Homography& h, int out_width,
                               int out_height) {
    if (out_width <= 0 || out_height <= 0) {
        throw usage_error("reference output extent must be positive");
    }
    const Homography back = invert(h);
    constexpr int kGrid = 32;

    // Deliberately direct: plain matrix projection plus a local bilinear
    // fetch, independent of the scanline/kernel machinery it cross-checks.
    auto bilinear = [&](double u, double v) {
        int x0 = int(std::floor(u));
        int y0 = int(std::floor(v));
        double fu = u - x0;
        double fv = v - y0;
        double a = src.clamped(x0, y0);
        double b = src.clamped(x0 + 1, y0);
        double c = src.clamped(x0, y0 + 1);
        double d = src.clamped(x0 + 1, y0 + 1);
        return (a * (1 - fu) + b * fu) * (1 - fv) + (c * (1 - fu) + d * fu) * fv;
    };

    ImageBuffer out(out_width, out_height);
    for (int y = 0; y < out_height; ++y) {
        for (int x = 0; x < out_width; ++x) {
            double acc = 0.0;
            for (int j = 0; j < kGrid; ++j) {
                double sy = y + (j + 0.5) / kGrid - 0.5;
                for (int i = 0; i < kGrid; ++i) {
                    double sx = x + (i + 0.5) / kGrid - 0.5;
                    Vec2 uv = project(back, sx, sy);
                    acc += bilinear(uv.x, uv.y);
                }
            }
            out(x, y) = quantize_intensity(acc / (double(kGrid) * kGrid));
        }
    }
    return out;
}

ChainResult warp_chain(const ImageBuffer& src, std::span<const Homography> factors,
                       const SamplerConfig& cfg, int threads) {
    if (src.empty()) throw usage_error("warp chain source image is empty");
    if (factors.empty()) throw usage_error("warp chain needs at least one factor");

    ImageBuffer current = src;
    TapStats total;
    Vec2 origin{0, 0};  // plane coordinate of the current raster's pixel (0, 0)

    for (std::size_t i = 0; i < factors.size(); ++i) {
        const bool last = (i + 1 == factors.size());
        Homography plane_map = compose(Homography::translation(origin.x, origin.y),
                                       factors[i]);
        int out_w, out_h;
        Vec2 next_origin{0, 0};
        if (last) {
            out_w = src.width();
            out_h = src.height();
        } else {
            // Projective maps keep edges straight, so the mapped quad's
            // bounding box is the bounding box of the mapped corners.
            double x0 = -0.5, x1 = current.width() - 0.5;
            double y0 = -0.5, y1 = current.height() - 0.5;
            Vec2 c0 = project(plane_map, x0, y0);
            Vec2 c1 = project(plane_map, x1, y0);
            Vec2 c2 = project(plane_map, x1, y1);
            Vec2 c3 = project(plane_map, x0, y1);
            double minx = std::min({c0.x, c1.x, c2.x, c3.x});
            double maxx = std::max({c0.x, c1.x, c2.x, c3.x});
            double miny = std::min({c0.y, c1.y, c2.y, c3.y});
            double maxy = std::max({c0.y, c1.y, c2.y, c3.y});
            out_w = std::clamp(int(std::ceil(maxx - minx)), 1, 4 * src.width());
            out_h = std::clamp(int(std::ceil(maxy - miny)), 1, 4 * src.height());
            next_origin = {minx + 0.5, miny + 0.5};
        }
        Homography stage = compose(plane_map,
                                   Homography::translation(-next_origin.x, -next_origin.y));
        WarpRequest req{std::move(current), stage, out_w, out_h, cfg, threads};
        WarpResult res = warp(req);
        current = std::move(res.image);
        total.merge(res.stats);
        origin = next_origin;
    }
    return {std::move(current), total};
}

}  // namespace projwarp
