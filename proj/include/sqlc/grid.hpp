#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sqlc {

using Field = std::vector<double>;

// Uniform periodic grid on the box (-L, L)^2 with N points per side.
// Fields are stored row-major with x fastest: f[iy * N + ix],
// grid nodes x_i = -L + i h, h = 2L/N (the +L edge is the wrapped node 0).
struct Grid {
    int N = 0;
    double L = 0.0;
    double h = 0.0;

    Grid() = default;
    Grid(int n, double half_length) : N(n), L(half_length), h(2.0 * half_length / n) {
        if (n < 4 || n % 2 != 0) throw std::invalid_argument("Grid: N must be even and at least 4");
        if (half_length <= 0.0) throw std::invalid_argument("Grid: L must be positive");
    }

    std::size_t size() const { return static_cast<std::size_t>(N) * static_cast<std::size_t>(N); }
    std::size_t idx(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(N) + static_cast<std::size_t>(ix);
    }
    double x(int i) const { return -L + h * i; }
    double y(int i) const { return -L + h * i; }
    double cell_area() const { return h * h; }
    double box_area() const { return 4.0 * L * L; }

    Field make_field() const { return Field(size(), 0.0); }

    bool same_layout(const Grid& o) const { return N == o.N && L == o.L; }
};

}  // namespace sqlc
