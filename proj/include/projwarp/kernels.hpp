#pragma once

#include <string>
#include <vector>

#include "projwarp/image.hpp"
#include "projwarp/stats.hpp"

namespace projwarp {

enum class KernelKind { nearest, bilinear, bicubic, bspline, hermite };

struct KernelId {
    KernelKind kind = KernelKind::bilinear;
    double alpha = -0.5;  // bicubic free parameter
};

// Support radii are 0.5, 1, 2, 2, 3, giving 1, 2, 4, 4, 6 taps per axis.
double support_radius(KernelId k);
int taps_per_axis(KernelId k);

// Every kernel except the cubic B-spline reproduces samples exactly.
bool is_interpolating(KernelId k);

double eval_kernel(KernelId k, double s);

// Piecewise-constant kernel approximation sampled at bin centers over
// [-support, +support]; lookup is nearest-bin.
class KernelLUT {
public:
    KernelLUT(KernelId id, int bins_per_unit);

    double lookup(double s) const {
        int idx = int((s + support_) * bins_per_unit_);
        if (s + support_ < 0 || idx < 0 || idx >= int(table_.size())) return 0.0;
        return table_[std::size_t(idx)];
    }

    KernelId id() const { return id_; }
    int bins_per_unit() const { return bins_per_unit_; }
    const std::vector<double>& table() const { return table_; }

private:
    KernelId id_;
    int bins_per_unit_ = 0;
    double support_ = 0;
    std::vector<double> table_;
};

KernelLUT build_lut(KernelId id, int bins_per_unit);

// Exact evaluation or LUT lookup behind one call.
struct KernelEval {
    KernelId id;
    const KernelLUT* lut = nullptr;

    double weight(double s) const { return lut ? lut->lookup(s) : eval_kernel(id, s); }
};

// Separable kernel sum over the support window with clamp-to-edge taps.
// The result is not clamped to [0, 255]; quantization happens at pixel write.
double interpolate2d(const ImageBuffer& img, const KernelEval& k, double u, double v,
                     TapStats* stats = nullptr);

// Tokens: nearest | bilinear | bicubic[:alpha] | bspline | hermite
KernelId parse_kernel_token(const std::string& token);
std::string kernel_token(KernelId k);

}  // namespace projwarp
