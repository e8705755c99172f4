#include "projwarp/pyramids.hpp"

#include <algorithm>
#include <cmath>

#include "projwarp/errors.hpp"

namespace projwarp {

namespace {

std::uint8_t round_u8(double v) {
    long r = std::lround(v);  // half away from zero
    return std::uint8_t(std::clamp(r, 0L, 255L));
}

// 2:1 box reduction along x; odd trailing edge keeps the lone pixel.
ImageBuffer halve_x(const ImageBuffer& in) {
    int nw = (in.width() + 1) / 2;
    ImageBuffer out(nw, in.height());
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < nw; ++x) {
            int x0 = 2 * x;
            int x1 = std::min(2 * x + 1, in.width() - 1);
            double sum = in(x0, y);
            int cnt = 1;
            if (x1 != x0) {
                sum += in(x1, y);
                cnt = 2;
            }
            out(x, y) = round_u8(sum / cnt);
        }
    }
    return out;
}

ImageBuffer halve_y(const ImageBuffer& in) {
    int nh = (in.height() + 1) / 2;
    ImageBuffer out(in.width(), nh);
    for (int y = 0; y < nh; ++y) {
        int y0 = 2 * y;
        int y1 = std::min(2 * y + 1, in.height() - 1);
        for (int x = 0; x < in.width(); ++x) {
            double sum = in(x, y0);
            int cnt = 1;
            if (y1 != y0) {
                sum += in(x, y1);
                cnt = 2;
            }
            out(x, y) = round_u8(sum / cnt);
        }
    }
    return out;
}

// 2x2 box mean with partial boxes on odd trailing edges.
ImageBuffer box_downscale(const ImageBuffer& in) {
    int nw = (in.width() + 1) / 2;
    int nh = (in.height() + 1) / 2;
    ImageBuffer out(nw, nh);
    for (int y = 0; y < nh; ++y) {
        int y0 = 2 * y;
        int y1 = std::min(2 * y + 1, in.height() - 1);
        for (int x = 0; x < nw; ++x) {
            int x0 = 2 * x;
            int x1 = std::min(2 * x + 1, in.width() - 1);
            double sum = 0;
            int cnt = 0;
            for (int yy = y0; yy <= y1; ++yy) {
                for (int xx = x0; xx <= x1; ++xx) {
                    sum += in(xx, yy);
                    ++cnt;
                }
            }
            out(x, y) = round_u8(sum / cnt);
        }
    }
    return out;
}

int chain_length(int extent) {
    int n = 1;
    while (extent > 1) {
        extent = (extent + 1) / 2;
        ++n;
    }
    return n;
}

}  // namespace

MipPyramid build_mipmap(const ImageBuffer& img) {
    if (img.empty()) throw usage_error("cannot build a pyramid from an empty image");
    MipPyramid p;
    p.levels.push_back(img);
    while (std::max(p.levels.back().width(), p.levels.back().height()) > 1) {
        p.levels.push_back(box_downscale(p.levels.back()));
    }
    return p;
}

RipMap build_ripmap(const ImageBuffer& img) {
    if (img.empty()) throw usage_error("cannot build a rip-map from an empty image");
    RipMap r;
    r.levels_x = chain_length(img.width());
    r.levels_y = chain_length(img.height());
    r.grid.resize(std::size_t(r.levels_x) * r.levels_y);
    r.entry(0, 0) = img;
    for (int kx = 1; kx < r.levels_x; ++kx) {
        r.entry(kx, 0) = halve_x(r.entry(kx - 1, 0));
    }
    for (int ky = 1; ky < r.levels_y; ++ky) {
        for (int kx = 0; kx < r.levels_x; ++kx) {
            r.entry(kx, ky) = halve_y(r.entry(kx, ky - 1));
        }
    }
    return r;
}

double level_coord(double c, int level) {
    if (level == 0) return c;  // avoid the +0.5/-0.5 round trip rounding
    return std::ldexp(c + 0.5, -level) - 0.5;
}

double sample_mip(const MipPyramid& p, double u, double v, double level, const KernelEval& k,
                  TapStats* stats) {
    double max_level = double(p.max_level());
    level = std::clamp(level, 0.0, max_level);
    int l0 = int(std::floor(level));
    int l1 = std::min(l0 + 1, p.max_level());
    double f = level - l0;
    double a = interpolate2d(p.levels[std::size_t(l0)], k, level_coord(u, l0),
                             level_coord(v, l0), stats);
    double b = interpolate2d(p.levels[std::size_t(l1)], k, level_coord(u, l1),
                             level_coord(v, l1), stats);
    if (stats) stats->multiplications += 1;
    return a + f * (b - a);
}

double sample_rip(const RipMap& r, double u, double v, double lx, double ly,
                  const KernelEval& k, TapStats* stats) {
    lx = std::clamp(lx, 0.0, double(r.levels_x - 1));
    ly = std::clamp(ly, 0.0, double(r.levels_y - 1));
    int kx0 = int(std::floor(lx));
    int kx1 = std::min(kx0 + 1, r.levels_x - 1);
    int ky0 = int(std::floor(ly));
    int ky1 = std::min(ky0 + 1, r.levels_y - 1);
    double fx = lx - kx0;
    double fy = ly - ky0;

    auto at = [&](int kx, int ky) {
        return interpolate2d(r.entry(kx, ky), k, level_coord(u, kx), level_coord(v, ky),
                             stats);
    };
    double v00 = at(kx0, ky0);
    double v10 = at(kx1, ky0);
    double v01 = at(kx0, ky1);
    double v11 = at(kx1, ky1);
    double row0 = v00 + fx * (v10 - v00);
    double row1 = v01 + fx * (v11 - v01);
    if (stats) stats->multiplications += 3;
    return row0 + fy * (row1 - row0);
}

}  // namespace projwarp
