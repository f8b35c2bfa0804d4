#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqlc {

// Small fixed-storage vector with runtime dimension d in {2,3}.
// 2D vectors are zero-padded in the third component so the Levi-Civita
// algebra can run on one code path.
struct Vec {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    int d = 2;

    Vec() = default;
    Vec(double x, double y) : v{x, y, 0.0}, d(2) {}
    Vec(double x, double y, double z) : v{x, y, z}, d(3) {}

    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    double norm() const { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

    Vec operator+(const Vec& o) const { return with_dim({v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}, d); }
    Vec operator-(const Vec& o) const { return with_dim({v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}, d); }
    Vec operator*(double s) const { return with_dim({v[0] * s, v[1] * s, v[2] * s}, d); }

    static Vec with_dim(std::array<double, 3> a, int d) {
        Vec r;
        r.v = a;
        r.d = d;
        return r;
    }
};

inline double dot(const Vec& a, const Vec& b) { return a.v[0] * b.v[0] + a.v[1] * b.v[1] + a.v[2] * b.v[2]; }

// Cross product on the padded 3-vector representation.
inline Vec cross(const Vec& a, const Vec& b) {
    return Vec::with_dim({a.v[1] * b.v[2] - a.v[2] * b.v[1],
                          a.v[2] * b.v[0] - a.v[0] * b.v[2],
                          a.v[0] * b.v[1] - a.v[1] * b.v[0]},
                         3);
}

// Dense d x d matrix, d in {2,3}, stored as 3x3 with zero padding.
struct Mat {
    std::array<std::array<double, 3>, 3> a{};
    int d = 2;

    Mat() = default;
    explicit Mat(int dim) : d(dim) {
        if (dim != 2 && dim != 3) throw std::invalid_argument("Mat: dimension must be 2 or 3");
    }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    static Mat zero(int d) { return Mat(d); }

    static Mat identity(int d) {
        Mat m(d);
        for (int i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    Mat operator+(const Mat& o) const {
        Mat r(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = a[i][j] + o.a[i][j];
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = a[i][j] - o.a[i][j];
        return r;
    }
    Mat operator*(double s) const {
        Mat r(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = a[i][j] * s;
        return r;
    }
    Mat& operator+=(const Mat& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i][j] += o.a[i][j];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i][j] -= o.a[i][j];
        return *this;
    }

    Mat transpose() const {
        Mat r(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = a[j][i];
        return r;
    }

    double trace() const { return a[0][0] + a[1][1] + a[2][2]; }

    double frob() const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += a[i][j] * a[i][j];
        return std::sqrt(s);
    }

    Mat sym() const {
        Mat r(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = 0.5 * (a[i][j] + a[j][i]);
        return r;
    }
    Mat antisym() const {
        Mat r(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = 0.5 * (a[i][j] - a[j][i]);
        return r;
    }
};

inline Mat operator*(double s, const Mat& m) { return m * s; }
inline Vec operator*(double s, const Vec& v) { return v * s; }

inline Mat mul(const Mat& x, const Mat& y) {
    Mat r(x.d);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += x.a[i][k] * y.a[k][j];
            r.a[i][j] = s;
        }
    return r;
}

inline Vec mul(const Mat& x, const Vec& y) {
    Vec r;
    r.d = x.d;
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += x.a[i][k] * y.v[k];
        r.v[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

// Tr(X Y), the trace of the matrix product (not the Frobenius pairing).
inline double trace_prod(const Mat& x, const Mat& y) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) s += x.a[i][k] * y.a[k][i];
    return s;
}

// Frobenius pairing X : Y = sum_ij X_ij Y_ij.
inline double contract(const Mat& x, const Mat& y) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += x.a[i][j] * y.a[i][j];
    return s;
}

inline Mat outer(const Vec& x, const Vec& y, int d) {
    Mat r(d);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.a[i][j] = x.v[i] * y.v[j];
    return r;
}

// Symmetric traceless order parameter. Symmetry is exact by construction
// (the upper triangle is mirrored); the trace is removed on build.
struct QTensor {
    Mat m;

    QTensor() : m(2) {}
    explicit QTensor(int d) : m(d) {}

    int dim() const { return m.d; }
    double operator()(int i, int j) const { return m(i, j); }
    const Mat& mat() const { return m; }

    double norm() const { return m.frob(); }

    // Builds from an arbitrary matrix: symmetrize, then remove the trace.
    static QTensor project(const Mat& x) {
        QTensor q(x.d);
        Mat s = x.sym();
        double tr = s.trace() / x.d;
        for (int i = 0; i < x.d; ++i)
            for (int j = 0; j < x.d; ++j) q.m(i, j) = s(i, j) - (i == j ? tr : 0.0);
        return q;
    }

    // Builds from a matrix already known to be symmetric traceless;
    // symmetry is enforced exactly, the trace is checked, not altered.
    static QTensor from_symmetric(const Mat& x) {
        QTensor q(x.d);
        for (int i = 0; i < x.d; ++i) {
            q.m(i, i) = x(i, i);
            for (int j = i + 1; j < x.d; ++j) {
                double v = 0.5 * (x(i, j) + x(j, i));
                q.m(i, j) = v;
                q.m(j, i) = v;
            }
        }
        return q;
    }

    // 2D symmetric traceless tensor [[q1, q2], [q2, -q1]].
    static QTensor plane(double q1, double q2) {
        QTensor q(2);
        q.m(0, 0) = q1;
        q.m(1, 1) = -q1;
        q.m(0, 1) = q2;
        q.m(1, 0) = q2;
        return q;
    }

    // Embeds a 2D tensor into 3D with zero third row and column.
    QTensor padded3() const {
        QTensor q(3);
        q.m.a = m.a;
        q.m.d = 3;
        return q;
    }

    QTensor operator+(const QTensor& o) const { return wrap(m + o.m); }
    QTensor operator-(const QTensor& o) const { return wrap(m - o.m); }
    QTensor operator*(double s) const { return wrap(m * s); }

  private:
    static QTensor wrap(const Mat& x) {
        QTensor q(x.d);
        q.m = x;
        return q;
    }
};

inline double contract(const QTensor& x, const QTensor& y) { return contract(x.mat(), y.mat()); }

// Gradient of a Q-tensor field: grad[j] = d_j Q, the derivative along
// coordinate j. Third slot stays zero in 2D.
using QGrad = std::array<Mat, 3>;

inline double levi_civita(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0.0;
    if ((i == 0 && j == 1 && k == 2) || (i == 1 && j == 2 && k == 0) || (i == 2 && j == 0 && k == 1)) return 1.0;
    return -1.0;
}

}  // namespace sqlc
