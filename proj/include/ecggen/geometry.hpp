#pragma once

#include <array>
#include <vector>

#include "ecggen/raster.hpp"

namespace ecggen {

/// Row-major 3x3 homogeneous transform.
struct Matrix3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double& at(int r, int c) { return m[r * 3 + c]; }
    double at(int r, int c) const { return m[r * 3 + c]; }

    static Matrix3 identity() { return {}; }
    static Matrix3 translate(double tx, double ty);
    static Matrix3 scale(double sx, double sy);
    static Matrix3 rotate(double radians);
    static Matrix3 shear(double shx, double shy);

    Matrix3 operator*(const Matrix3& rhs) const;
    double det() const;
    Matrix3 inverse() const; // throws on singular matrix
    bool is_affine(double eps = 1e-12) const;

    bool operator==(const Matrix3&) const = default;
};

/// Homography from 4 source corners to 4 destination corners
/// (8-unknown linear system with the bottom-right entry fixed to 1).
Matrix3 projective_from_corners(const std::array<PointF, 4>& src, const std::array<PointF, 4>& dst);

/// Homogeneous transform with perspective divide; throws if a point maps
/// to infinity (w' == 0).
std::vector<PointF> transform_points(const std::vector<PointF>& pts, const Matrix3& M);
PointF transform_point(PointF p, const Matrix3& M);

/// Inverse-mapped warp with bilinear interpolation; samples outside the
/// source are filled with `fill`. Output keeps the source dimensions.
RasterImage warp_image(const RasterImage& img, const Matrix3& M, Rgb fill);

} // namespace ecggen
