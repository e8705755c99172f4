#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace projwarp {

// Denominators with magnitude at or below this are treated as on the horizon.
inline constexpr double kHorizonTol = 1e-12;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Plane-projective transform. Stored row-major; canonical form has
// t33 == 1 whenever |t33| exceeds the horizon tolerance.
struct Homography {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int r, int c) const { return m[std::size_t(r) * 3 + c]; }
    double& operator()(int r, int c) { return m[std::size_t(r) * 3 + c]; }

    static Homography identity() { return {}; }
    static Homography scaling(double sx, double sy);
    static Homography translation(double tx, double ty);
};

Homography canonicalized(Homography h);

// Throws numeric_error when |det| is below 1e-12 relative to the matrix norm.
Homography invert(const Homography& h);

// Apply a first, then b. Result is canonicalized.
Homography compose(const Homography& a, const Homography& b);

// Apply the rational map to (x, y). Throws numeric_error on the horizon.
Vec2 project(const Homography& h, double x, double y);

// 9 whitespace-separated reals, row-major. Written canonicalized.
Homography parse_matrix(const std::string& text);
std::string format_matrix(const Homography& h);

// Partial derivatives of input coordinates w.r.t. output coordinates.
struct JacobianEstimate {
    double du_dx = 0, du_dy = 0;
    double dv_dx = 0, dv_dy = 0;
};

// Backward projection P = forward^-1 factored into per-axis linear forms
// f_i(x) = p_i1*x and g_i(y) = p_i2*y + p_i3, tabulated over the output
// raster so a grid point costs 2 multiplications and 1 division.
class ScanlineDecomposition {
public:
    ScanlineDecomposition(const Homography& forward, int out_width, int out_height);

    int width() const { return width_; }
    int height() const { return height_; }
    const Homography& backward() const { return p_; }

    // Table path; requires 0 <= x < width, 0 <= y < height.
    Vec2 map_grid(int x, int y) const;

    // Integer arguments in range take the table path; sub-pixel arguments
    // re-evaluate the linear forms at the real coordinates.
    Vec2 map(double x, double y) const;

    // Analytic derivatives of the rational backward map (quotient rule).
    JacobianEstimate jacobian(double x, double y) const;

private:
    Vec2 map_real(double x, double y) const;

    Homography p_;
    int width_ = 0;
    int height_ = 0;
    std::array<std::vector<double>, 3> f_;  // f_[i][x] = p(i,0) * x
    std::array<std::vector<double>, 3> g_;  // g_[i][y] = p(i,1) * y + p(i,2)
};

// Deterministic triple whose composition is the identity. Each factor keeps
// the raster clear of the horizon and its local scale change within [1/4, 4].
std::array<Homography, 3> random_composed_triple(std::uint64_t seed, int width, int height);

}  // namespace projwarp
