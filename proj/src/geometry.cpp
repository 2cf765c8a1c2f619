#include "ecggen/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ecggen {

Matrix3 Matrix3::translate(double tx, double ty) {
    Matrix3 r;
    r.at(0, 2) = tx;
    r.at(1, 2) = ty;
    return r;
}

Matrix3 Matrix3::scale(double sx, double sy) {
    Matrix3 r;
    r.at(0, 0) = sx;
    r.at(1, 1) = sy;
    return r;
}

Matrix3 Matrix3::rotate(double radians) {
    Matrix3 r;
    const double c = std::cos(radians), s = std::sin(radians);
    r.at(0, 0) = c;
    r.at(0, 1) = -s;
    r.at(1, 0) = s;
    r.at(1, 1) = c;
    return r;
}

Matrix3 Matrix3::shear(double shx, double shy) {
    Matrix3 r;
    r.at(0, 1) = shx;
    r.at(1, 0) = shy;
    return r;
}

Matrix3 Matrix3::operator*(const Matrix3& rhs) const {
    Matrix3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += at(r, k) * rhs.at(k, c);
            out.at(r, c) = s;
        }
    return out;
}

double Matrix3::det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Matrix3 Matrix3::inverse() const {
    const double d = det();
    if (std::abs(d) <= 1e-12) throw std::runtime_error("Matrix3::inverse: singular matrix");
    const double inv = 1.0 / d;
    Matrix3 r;
    r.m[0] = (m[4] * m[8] - m[5] * m[7]) * inv;
    r.m[1] = (m[2] * m[7] - m[1] * m[8]) * inv;
    r.m[2] = (m[1] * m[5] - m[2] * m[4]) * inv;
    r.m[3] = (m[5] * m[6] - m[3] * m[8]) * inv;
    r.m[4] = (m[0] * m[8] - m[2] * m[6]) * inv;
    r.m[5] = (m[2] * m[3] - m[0] * m[5]) * inv;
    r.m[6] = (m[3] * m[7] - m[4] * m[6]) * inv;
    r.m[7] = (m[1] * m[6] - m[0] * m[7]) * inv;
    r.m[8] = (m[0] * m[4] - m[1] * m[3]) * inv;
    return r;
}

bool Matrix3::is_affine(double eps) const {
    return std::abs(m[6]) < eps && std::abs(m[7]) < eps && std::abs(m[8] - 1.0) < eps;
}

namespace {

// Gaussian elimination with partial pivoting on an n x (n+1) augmented system.
void solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& x) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12)
            throw std::runtime_error("projective_from_corners: degenerate corner configuration");
        std::swap(a[col], a[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    x.resize(n);
    for (int r = 0; r < n; ++r) x[r] = a[r][n] / a[r][r];
}

} // namespace

Matrix3 projective_from_corners(const std::array<PointF, 4>& src, const std::array<PointF, 4>& dst) {
    std::vector<std::vector<double>> a(8, std::vector<double>(9, 0.0));
    for (int i = 0; i < 4; ++i) {
        const double x = src[i].x, y = src[i].y;
        const double u = dst[i].x, v = dst[i].y;
        a[2 * i] = {x, y, 1, 0, 0, 0, -u * x, -u * y, u};
        a[2 * i + 1] = {0, 0, 0, x, y, 1, -v * x, -v * y, v};
    }
    std::vector<double> h;
    solve_linear(a, h);
    Matrix3 M;
    for (int i = 0; i < 8; ++i) M.m[i] = h[i];
    M.m[8] = 1.0;
    if (std::abs(M.det()) <= 1e-12)
        throw std::runtime_error("projective_from_corners: singular homography");
    return M;
}

PointF transform_point(PointF p, const Matrix3& M) {
    const double w = M.m[6] * p.x + M.m[7] * p.y + M.m[8];
    if (w == 0.0) {
        throw std::runtime_error("transform_point: point (" + std::to_string(p.x) + ", " +
                                 std::to_string(p.y) + ") maps to infinity");
    }
    return {(M.m[0] * p.x + M.m[1] * p.y + M.m[2]) / w,
            (M.m[3] * p.x + M.m[4] * p.y + M.m[5]) / w};
}

std::vector<PointF> transform_points(const std::vector<PointF>& pts, const Matrix3& M) {
    std::vector<PointF> out;
    out.reserve(pts.size());
    for (const PointF& p : pts) out.push_back(transform_point(p, M));
    return out;
}

RasterImage warp_image(const RasterImage& img, const Matrix3& M, Rgb fill) {
    const Matrix3 inv = M.inverse();
    RasterImage out(img.width, img.height, fill);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const double w = inv.m[6] * x + inv.m[7] * y + inv.m[8];
            if (w == 0.0) continue;
            const double sx = (inv.m[0] * x + inv.m[1] * y + inv.m[2]) / w;
            const double sy = (inv.m[3] * x + inv.m[4] * y + inv.m[5]) / w;
            if (sx < 0.0 || sy < 0.0 || sx > img.width - 1.0 || sy > img.height - 1.0) continue;
            const int x0 = static_cast<int>(sx);
            const int y0 = static_cast<int>(sy);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const int y1 = std::min(y0 + 1, img.height - 1);
            const double fx = sx - x0, fy = sy - y0;
            const Rgb c00 = img.get(x0, y0), c10 = img.get(x1, y0);
            const Rgb c01 = img.get(x0, y1), c11 = img.get(x1, y1);
            auto blend = [&](std::uint8_t a0, std::uint8_t b0, std::uint8_t a1, std::uint8_t b1) {
                const double top = a0 + fx * (b0 - a0);
                const double bot = a1 + fx * (b1 - a1);
                return static_cast<std::uint8_t>(std::lround(std::clamp(top + fy * (bot - top), 0.0, 255.0)));
            };
            out.set(x, y, {blend(c00.r, c10.r, c01.r, c11.r), blend(c00.g, c10.g, c01.g, c11.g),
                           blend(c00.b, c10.b, c01.b, c11.b)});
        }
    }
    return out;
}

} // namespace ecggen
