#include "projwarp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>

#include "projwarp/errors.hpp"

namespace projwarp {

namespace {

double inf_norm(const Homography& h) {
    double n = 0;
    for (double v : h.m) n = std::max(n, std::abs(v));
    return n;
}

double det3(const Homography& h) {
    return h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) -
           h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
           h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0));
}

}  // namespace

Homography Homography::scaling(double sx, double sy) {
    Homography h;
    h(0, 0) = sx;
    h(1, 1) = sy;
    return h;
}

Homography Homography::translation(double tx, double ty) {
    Homography h;
    h(0, 2) = tx;
    h(1, 2) = ty;
    return h;
}

Homography canonicalized(Homography h) {
    double t33 = h(2, 2);
    if (std::abs(t33) > kHorizonTol) {
        for (double& v : h.m) v /= t33;
        h(2, 2) = 1.0;  // kill residual rounding in the pivot itself
    }
    return h;
}

Homography invert(const Homography& h) {
    double det = det3(h);
    double norm = inf_norm(h);
    if (std::abs(det) <= 1e-12 * norm * norm * norm) {
        throw numeric_error("singular matrix: determinant vanishes relative to norm");
    }
    Homography r;
    r(0, 0) = (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) / det;
    r(0, 1) = (h(0, 2) * h(2, 1) - h(0, 1) * h(2, 2)) / det;
    r(0, 2) = (h(0, 1) * h(1, 2) - h(0, 2) * h(1, 1)) / det;
    r(1, 0) = (h(1, 2) * h(2, 0) - h(1, 0) * h(2, 2)) / det;
    r(1, 1) = (h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0)) / det;
    r(1, 2) = (h(0, 2) * h(1, 0) - h(0, 0) * h(1, 2)) / det;
    r(2, 0) = (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0)) / det;
    r(2, 1) = (h(0, 1) * h(2, 0) - h(0, 0) * h(2, 1)) / det;
    r(2, 2) = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)) / det;
    return canonicalized(r);
}

Homography compose(const Homography& a, const Homography& b) {
    // Column-vector convention: applying a then b is the product B*A.
    Homography r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += b(i, k) * a(k, j);
            r(i, j) = s;
        }
    }
    return canonicalized(r);
}

Vec2 project(const Homography& h, double x, double y) {
    double den = h(2, 0) * x + h(2, 1) * y + h(2, 2);
    if (std::abs(den) < kHorizonTol) {
        throw numeric_error("projection denominator on the horizon");
    }
    return {(h(0, 0) * x + h(0, 1) * y + h(0, 2)) / den,
            (h(1, 0) * x + h(1, 1) * y + h(1, 2)) / den};
}

Homography parse_matrix(const std::string& text) {
    std::istringstream in(text);
    Homography h;
    for (int i = 0; i < 9; ++i) {
        if (!(in >> h.m[std::size_t(i)])) {
            throw data_error("matrix text must hold 9 whitespace-separated reals");
        }
    }
    std::string extra;
    if (in >> extra) {
        throw data_error("matrix text has trailing content after 9 values");
    }
    return canonicalized(h);
}

std::string format_matrix(const Homography& h) {
    Homography c = canonicalized(h);
    std::string out;
    char buf[64];
    for (int r = 0; r < 3; ++r) {
        for (int col = 0; col < 3; ++col) {
            std::snprintf(buf, sizeof(buf), "%.17g", c(r, col));
            out += buf;
            out += (col == 2) ? '\n' : ' ';
        }
    }
    return out;
}

ScanlineDecomposition::ScanlineDecomposition(const Homography& forward, int out_width,
                                             int out_height)
    : p_(invert(forward)), width_(out_width), height_(out_height) {
    if (out_width <= 0 || out_height <= 0) {
        throw usage_error("output extent must be positive");
    }
    for (int i = 0; i < 3; ++i) {
        f_[std::size_t(i)].resize(std::size_t(width_));
        g_[std::size_t(i)].resize(std::size_t(height_));
        for (int x = 0; x < width_; ++x) f_[std::size_t(i)][std::size_t(x)] = p_(i, 0) * x;
        for (int y = 0; y < height_; ++y)
            g_[std::size_t(i)][std::size_t(y)] = p_(i, 1) * y + p_(i, 2);
    }
    // The denominator is a plane over (x, y), so its extrema over the raster
    // span sit at the corners.
    double x0 = -0.5, x1 = width_ - 0.5, y0 = -0.5, y1 = height_ - 0.5;
    double c00 = p_(2, 0) * x0 + p_(2, 1) * y0 + p_(2, 2);
    double c10 = p_(2, 0) * x1 + p_(2, 1) * y0 + p_(2, 2);
    double c01 = p_(2, 0) * x0 + p_(2, 1) * y1 + p_(2, 2);
    double c11 = p_(2, 0) * x1 + p_(2, 1) * y1 + p_(2, 2);
    double lo = std::min({c00, c10, c01, c11});
    double hi = std::max({c00, c10, c01, c11});
    if (lo <= kHorizonTol && hi >= -kHorizonTol) {
        throw numeric_error("horizon crosses the output raster");
    }
}

Vec2 ScanlineDecomposition::map_grid(int x, int y) const {
    auto xi = std::size_t(x);
    auto yi = std::size_t(y);
    double q = 1.0 / (f_[2][xi] + g_[2][yi]);
    return {q * (f_[0][xi] + g_[0][yi]), q * (f_[1][xi] + g_[1][yi])};
}

Vec2 ScanlineDecomposition::map_real(double x, double y) const {
    double den = p_(2, 0) * x + p_(2, 1) * y + p_(2, 2);
    if (std::abs(den) < kHorizonTol) {
        throw numeric_error("sample point on the horizon");
    }
    double q = 1.0 / den;
    return {q * (p_(0, 0) * x + p_(0, 1) * y + p_(0, 2)),
            q * (p_(1, 0) * x + p_(1, 1) * y + p_(1, 2))};
}

Vec2 ScanlineDecomposition::map(double x, double y) const {
    if (x < -1.5 || x > width_ + 0.5 || y < -1.5 || y > height_ + 0.5) {
        throw numeric_error("map point outside the decomposed extent");
    }
    double fx = std::floor(x);
    double fy = std::floor(y);
    if (fx == x && fy == y && x >= 0 && x < width_ && y >= 0 && y < height_) {
        return map_grid(int(fx), int(fy));
    }
    return map_real(x, y);
}

JacobianEstimate ScanlineDecomposition::jacobian(double x, double y) const {
    double den = p_(2, 0) * x + p_(2, 1) * y + p_(2, 2);
    if (std::abs(den) < kHorizonTol) {
        throw numeric_error("jacobian denominator on the horizon");
    }
    double nu = p_(0, 0) * x + p_(0, 1) * y + p_(0, 2);
    double nv = p_(1, 0) * x + p_(1, 1) * y + p_(1, 2);
    double q2 = 1.0 / (den * den);
    JacobianEstimate j;
    j.du_dx = (p_(0, 0) * den - nu * p_(2, 0)) * q2;
    j.du_dy = (p_(0, 1) * den - nu * p_(2, 1)) * q2;
    j.dv_dx = (p_(1, 0) * den - nv * p_(2, 0)) * q2;
    j.dv_dy = (p_(1, 1) * den - nv * p_(2, 1)) * q2;
    return j;
}

namespace {

// Forward Jacobian of h at (x, y), quotient rule on the matrix entries.
JacobianEstimate forward_jacobian(const Homography& h, double x, double y) {
    double den = h(2, 0) * x + h(2, 1) * y + h(2, 2);
    double nu = h(0, 0) * x + h(0, 1) * y + h(0, 2);
    double nv = h(1, 0) * x + h(1, 1) * y + h(1, 2);
    double q2 = 1.0 / (den * den);
    JacobianEstimate j;
    j.du_dx = (h(0, 0) * den - nu * h(2, 0)) * q2;
    j.du_dy = (h(0, 1) * den - nu * h(2, 1)) * q2;
    j.dv_dx = (h(1, 0) * den - nv * h(2, 0)) * q2;
    j.dv_dy = (h(1, 1) * den - nv * h(2, 1)) * q2;
    return j;
}

struct Box {
    double x0, y0, x1, y1;
};

// Scale factors within [1/4, 4] and denominator clear of zero over the box.
// On success fills the mapped axis-aligned bounding box.
bool admissible_over(const Homography& h, const Box& b, Box* mapped) {
    constexpr double kDenMargin = 0.1;
    constexpr double kScaleLo = 0.25;
    constexpr double kScaleHi = 4.0;
    constexpr int kGrid = 7;

    double minx = 0, miny = 0, maxx = 0, maxy = 0;
    bool first = true;
    for (int iy = 0; iy < kGrid; ++iy) {
        for (int ix = 0; ix < kGrid; ++ix) {
            double x = b.x0 + (b.x1 - b.x0) * ix / (kGrid - 1);
            double y = b.y0 + (b.y1 - b.y0) * iy / (kGrid - 1);
            double den = h(2, 0) * x + h(2, 1) * y + h(2, 2);
            if (std::abs(den) < kDenMargin) return false;
            JacobianEstimate j = forward_jacobian(h, x, y);
            double rx = std::hypot(j.du_dx, j.dv_dx);
            double ry = std::hypot(j.du_dy, j.dv_dy);
            if (!(rx >= kScaleLo && rx <= kScaleHi && ry >= kScaleLo && ry <= kScaleHi)) {
                return false;
            }
            if (ix == 0 || ix == kGrid - 1 || iy == 0 || iy == kGrid - 1) {
                Vec2 p{(h(0, 0) * x + h(0, 1) * y + h(0, 2)) / den,
                       (h(1, 0) * x + h(1, 1) * y + h(1, 2)) / den};
                if (first) {
                    minx = maxx = p.x;
                    miny = maxy = p.y;
                    first = false;
                } else {
                    minx = std::min(minx, p.x);
                    maxx = std::max(maxx, p.x);
                    miny = std::min(miny, p.y);
                    maxy = std::max(maxy, p.y);
                }
            }
        }
    }
    if (mapped) *mapped = {minx, miny, maxx, maxy};
    return true;
}

std::optional<Homography> homography_from_corners(const std::array<Vec2, 4>& src,
                                                  const std::array<Vec2, 4>& dst) {
    // DLT for exactly four correspondences: 8 unknowns, t33 fixed to 1.
    double a[8][9] = {};
    for (int i = 0; i < 4; ++i) {
        double u = src[std::size_t(i)].x, v = src[std::size_t(i)].y;
        double x = dst[std::size_t(i)].x, y = dst[std::size_t(i)].y;
        double* r0 = a[i * 2];
        double* r1 = a[i * 2 + 1];
        r0[0] = u; r0[1] = v; r0[2] = 1; r0[6] = -u * x; r0[7] = -v * x; r0[8] = x;
        r1[3] = u; r1[4] = v; r1[5] = 1; r1[6] = -u * y; r1[7] = -v * y; r1[8] = y;
    }
    // Gaussian elimination with partial pivoting on the 8x9 system.
    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-10) return std::nullopt;
        if (piv != col) std::swap_ranges(a[piv], a[piv] + 9, a[col]);
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Homography h;
    for (int i = 0; i < 8; ++i) h.m[std::size_t(i)] = a[i][8] / a[i][i];
    h.m[8] = 1.0;
    return h;
}

}  // namespace

std::array<Homography, 3> random_composed_triple(std::uint64_t seed, int width, int height) {
    if (width <= 0 || height <= 0) throw usage_error("extent must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> perturb(-0.2, 0.2);

    const Box raster{-0.5, -0.5, width - 0.5, height - 0.5};
    const std::array<Vec2, 4> corners{{{raster.x0, raster.y0},
                                       {raster.x1, raster.y0},
                                       {raster.x1, raster.y1},
                                       {raster.x0, raster.y1}}};

    auto random_factor = [&]() -> std::optional<Homography> {
        std::array<Vec2, 4> dst;
        for (int i = 0; i < 4; ++i) {
            dst[std::size_t(i)] = {corners[std::size_t(i)].x + perturb(rng) * width,
                                   corners[std::size_t(i)].y + perturb(rng) * height};
        }
        return homography_from_corners(corners, dst);
    };

    constexpr int kMaxAttempts = 1000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        auto h1 = random_factor();
        auto h2 = random_factor();
        if (!h1 || !h2) continue;
        Homography h3;
        try {
            h3 = invert(compose(*h1, *h2));
        } catch (const numeric_error&) {
            continue;
        }
        Box b1, b2, b3;
        if (!admissible_over(*h1, raster, &b1)) continue;
        if (!admissible_over(*h2, b1, &b2)) continue;
        if (!admissible_over(h3, b2, &b3)) continue;
        return {*h1, *h2, h3};
    }
    throw numeric_error("no admissible composed triple found for this seed/extent");
}

}  // namespace projwarp
