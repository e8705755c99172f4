#include "projwarp/kernels.hpp"

#include <cmath>
#include <cstdio>

#include "projwarp/errors.hpp"

namespace projwarp {

double support_radius(KernelId k) {
    switch (k.kind) {
        case KernelKind::nearest: return 0.5;
        case KernelKind::bilinear: return 1.0;
        case KernelKind::bicubic: return 2.0;
        case KernelKind::bspline: return 2.0;
        case KernelKind::hermite: return 3.0;
    }
    return 0.0;
}

int taps_per_axis(KernelId k) {
    switch (k.kind) {
        case KernelKind::nearest: return 1;
        case KernelKind::bilinear: return 2;
        case KernelKind::bicubic: return 4;
        case KernelKind::bspline: return 4;
        case KernelKind::hermite: return 6;
    }
    return 0;
}

bool is_interpolating(KernelId k) { return k.kind != KernelKind::bspline; }

double eval_kernel(KernelId k, double s) {
    switch (k.kind) {
        case KernelKind::nearest:
            // Half-open box: the tie at +0.5 belongs to the next pixel, which
            // rounds half up and keeps the weights a partition of unity.
            return (s >= -0.5 && s < 0.5) ? 1.0 : 0.0;
        case KernelKind::bilinear: {
            s = std::abs(s);
            return s < 1.0 ? 1.0 - s : 0.0;
        }
        case KernelKind::bicubic: {
            s = std::abs(s);
            double a = k.alpha;
            if (s < 1.0) return ((a + 2.0) * s - (a + 3.0)) * s * s + 1.0;
            if (s < 2.0) return (((a * s - 5.0 * a) * s + 8.0 * a) * s) - 4.0 * a;
            return 0.0;
        }
        case KernelKind::bspline: {
            s = std::abs(s);
            if (s < 1.0) return (0.5 * s - 1.0) * s * s + 2.0 / 3.0;
            if (s < 2.0) {
                double c = 2.0 - s;
                return c * c * c / 6.0;
            }
            return 0.0;
        }
        case KernelKind::hermite: {
            // Equivalent stationary 6-tap kernel of cubic Hermite
            // interpolation with the 4-point central derivative.
            s = std::abs(s);
            if (s < 1.0) return ((4.0 / 3.0) * s - 7.0 / 3.0) * s * s + 1.0;
            if (s < 2.0) {
                double t = s - 1.0;
                return (((-7.0 / 12.0) * t + 5.0 / 4.0) * t - 2.0 / 3.0) * t;
            }
            if (s < 3.0) {
                double t = s - 2.0;
                double u = t - 1.0;
                return t * u * u / 12.0;
            }
            return 0.0;
        }
    }
    return 0.0;
}

KernelLUT::KernelLUT(KernelId id, int bins_per_unit) : id_(id), bins_per_unit_(bins_per_unit) {
    if (bins_per_unit < 1) throw usage_error("LUT resolution must be at least 1 bin per unit");
    support_ = support_radius(id);
    auto bins = std::size_t(std::llround(2.0 * support_ * bins_per_unit));
    table_.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        double s = -support_ + (double(i) + 0.5) / bins_per_unit;
        table_[i] = eval_kernel(id, s);
    }
}

KernelLUT build_lut(KernelId id, int bins_per_unit) { return KernelLUT(id, bins_per_unit); }

double interpolate2d(const ImageBuffer& img, const KernelEval& k, double u, double v,
                     TapStats* stats) {
    if (k.id.kind == KernelKind::nearest) {
        int ix = int(std::floor(u + 0.5));
        int iy = int(std::floor(v + 0.5));
        if (stats) stats->interpolation_taps += 1;
        return img.clamped(ix, iy);
    }

    int n = taps_per_axis(k.id);
    int ix0 = int(std::floor(u)) - n / 2 + 1;
    int iy0 = int(std::floor(v)) - n / 2 + 1;

    double wx[6], wy[6];
    for (int i = 0; i < n; ++i) {
        wx[i] = k.weight(u - (ix0 + i));
        wy[i] = k.weight(v - (iy0 + i));
    }

    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double row = 0.0;
        for (int i = 0; i < n; ++i) {
            row += wx[i] * img.clamped(ix0 + i, iy0 + j);
        }
        acc += wy[j] * row;
    }
    if (stats) {
        stats->interpolation_taps += std::uint64_t(n) * n;
        stats->multiplications += std::uint64_t(n) * n + n;
    }
    return acc;
}

KernelId parse_kernel_token(const std::string& token) {
    KernelId k;
    if (token == "nearest") {
        k.kind = KernelKind::nearest;
    } else if (token == "bilinear") {
        k.kind = KernelKind::bilinear;
    } else if (token == "bspline") {
        k.kind = KernelKind::bspline;
    } else if (token == "hermite") {
        k.kind = KernelKind::hermite;
    } else if (token.rfind("bicubic", 0) == 0) {
        k.kind = KernelKind::bicubic;
        if (token.size() > 7) {
            if (token[7] != ':') throw usage_error("bad kernel token: " + token);
            try {
                std::size_t used = 0;
                k.alpha = std::stod(token.substr(8), &used);
                if (used != token.size() - 8) throw usage_error("bad bicubic alpha: " + token);
            } catch (const std::logic_error&) {
                throw usage_error("bad bicubic alpha: " + token);
            }
            if (!std::isfinite(k.alpha)) throw usage_error("bicubic alpha must be finite");
        }
    } else {
        throw usage_error("unknown kernel token: " + token);
    }
    return k;
}

std::string kernel_token(KernelId k) {
    switch (k.kind) {
        case KernelKind::nearest: return "nearest";
        case KernelKind::bilinear: return "bilinear";
        case KernelKind::bspline: return "bspline";
        case KernelKind::hermite: return "hermite";
        case KernelKind::bicubic: {
            if (k.alpha == -0.5) return "bicubic";
            char buf[48];
            std::snprintf(buf, sizeof(buf), "bicubic:%g", k.alpha);
            return buf;
        }
    }
    return "?";
}

}  // namespace projwarp
