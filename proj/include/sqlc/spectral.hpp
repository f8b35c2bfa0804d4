#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "sqlc/grid.hpp"

namespace sqlc {

using Spec = std::vector<std::complex<double>>;

// Fourier workspace for one grid: plans are created once and reused.
// All operators act on 2L-periodic data; inverse transforms carry the 1/N^2
// normalization. One instance is owned by one simulation; calls are not
// thread safe.
class Spectral {
  public:
    explicit Spectral(const Grid& g);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    const Grid& grid() const { return g_; }
    std::size_t spec_size() const { return static_cast<std::size_t>(g_.N) * (static_cast<std::size_t>(g_.N) / 2 + 1); }
    Spec make_spec() const { return Spec(spec_size(), {0.0, 0.0}); }

    void forward(const Field& in, Spec& out) const;
    void inverse(const Spec& in, Field& out) const;

    // Spectral derivatives; the Nyquist mode of odd derivatives is zeroed.
    void deriv_x(const Spec& in, Spec& out) const;
    void deriv_y(const Spec& in, Spec& out) const;
    void laplacian(const Spec& in, Spec& out) const;

    // Convenience physical-space wrappers.
    void deriv_x(const Field& in, Field& out) const;
    void deriv_y(const Field& in, Field& out) const;
    void laplacian(const Field& in, Field& out) const;

    // (1 - coef Lap)^{-1}, in place on the spectrum.
    void helmholtz_invert(Spec& s, double coef) const;

    // Lap^{-1} with zero-mean result (the k = 0 mode is set to zero).
    void poisson_invert(Spec& s) const;

    // Removes the divergence part of (ux, uy) in place; the k = 0 mode is
    // untouched. If p_spec is non-null it receives the scalar q with
    // grad q = removed part, so the projection pressure is q * rho / dt.
    void project_div_free(Field& ux, Field& uy, Spec* p_spec = nullptr) const;

    // Zeroes all modes with |k| above the 2/3 antialiasing radius.
    void dealias(Spec& s) const;

    double max_divergence(const Field& ux, const Field& uy) const;

    // Fixed-order sums, independent of any threading of callers.
    static double mean(const Field& f);
    static double max_abs(const Field& f);

    double kx(int col) const { return kx_[static_cast<std::size_t>(col)]; }
    double ky(int row) const { return ky_[static_cast<std::size_t>(row)]; }

  private:
    Grid g_;
    std::vector<double> kx_, ky_;  // kx over r2c columns, ky over rows
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

}  // namespace sqlc
