#include "sqlc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>

namespace sqlc {

struct Spectral::Plans {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    ~Plans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real) fftw_free(real);
        if (cplx) fftw_free(cplx);
    }
};

Spectral::Spectral(const Grid& g) : g_(g), plans_(std::make_unique<Plans>()) {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    plans_->real = fftw_alloc_real(static_cast<std::size_t>(n) * n);
    plans_->cplx = fftw_alloc_complex(static_cast<std::size_t>(n) * nc);
    // rows index y, columns index x; r2c keeps the non-negative kx half
    plans_->fwd = fftw_plan_dft_r2c_2d(n, n, plans_->real, plans_->cplx, FFTW_ESTIMATE);
    plans_->bwd = fftw_plan_dft_c2r_2d(n, n, plans_->cplx, plans_->real, FFTW_ESTIMATE);

    const double k0 = std::numbers::pi / g_.L;  // fundamental for period 2L
    kx_.resize(static_cast<std::size_t>(nc));
    for (int m = 0; m < nc; ++m) kx_[static_cast<std::size_t>(m)] = k0 * m;
    ky_.resize(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) ky_[static_cast<std::size_t>(m)] = k0 * (m <= n / 2 ? m : m - n);
}

Spectral::~Spectral() = default;

void Spectral::forward(const Field& in, Spec& out) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    out.resize(spec_size());
    std::memcpy(plans_->real, in.data(), sizeof(double) * g_.size());
    fftw_execute(plans_->fwd);
    std::memcpy(out.data(), plans_->cplx, sizeof(fftw_complex) * static_cast<std::size_t>(n) * nc);
}

void Spectral::inverse(const Spec& in, Field& out) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    out.resize(g_.size());
    std::memcpy(plans_->cplx, in.data(), sizeof(fftw_complex) * static_cast<std::size_t>(n) * nc);
    fftw_execute(plans_->bwd);
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (std::size_t i = 0; i < g_.size(); ++i) out[i] = plans_->real[i] * scale;
}

void Spectral::deriv_x(const Spec& in, Spec& out) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    out.resize(spec_size());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < nc; ++c) {
            std::size_t i = static_cast<std::size_t>(r) * nc + c;
            double k = (c == n / 2) ? 0.0 : kx_[static_cast<std::size_t>(c)];
            out[i] = std::complex<double>(0.0, k) * in[i];
        }
}

void Spectral::deriv_y(const Spec& in, Spec& out) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    out.resize(spec_size());
    for (int r = 0; r < n; ++r) {
        double k = (r == n / 2) ? 0.0 : ky_[static_cast<std::size_t>(r)];
        for (int c = 0; c < nc; ++c) {
            std::size_t i = static_cast<std::size_t>(r) * nc + c;
            out[i] = std::complex<double>(0.0, k) * in[i];
        }
    }
}

void Spectral::laplacian(const Spec& in, Spec& out) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    out.resize(spec_size());
    for (int r = 0; r < n; ++r) {
        double ky2 = ky_[static_cast<std::size_t>(r)] * ky_[static_cast<std::size_t>(r)];
        for (int c = 0; c < nc; ++c) {
            std::size_t i = static_cast<std::size_t>(r) * nc + c;
            double k2 = kx_[static_cast<std::size_t>(c)] * kx_[static_cast<std::size_t>(c)] + ky2;
            out[i] = -k2 * in[i];
        }
    }
}

void Spectral::deriv_x(const Field& in, Field& out) const {
    Spec s = make_spec(), d = make_spec();
    forward(in, s);
    deriv_x(s, d);
    inverse(d, out);
}

void Spectral::deriv_y(const Field& in, Field& out) const {
    Spec s = make_spec(), d = make_spec();
    forward(in, s);
    deriv_y(s, d);
    inverse(d, out);
}

void Spectral::laplacian(const Field& in, Field& out) const {
    Spec s = make_spec(), d = make_spec();
    forward(in, s);
    laplacian(s, d);
    inverse(d, out);
}

void Spectral::helmholtz_invert(Spec& s, double coef) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    for (int r = 0; r < n; ++r) {
        double ky2 = ky_[static_cast<std::size_t>(r)] * ky_[static_cast<std::size_t>(r)];
        for (int c = 0; c < nc; ++c) {
            std::size_t i = static_cast<std::size_t>(r) * nc + c;
            double k2 = kx_[static_cast<std::size_t>(c)] * kx_[static_cast<std::size_t>(c)] + ky2;
            s[i] /= (1.0 + coef * k2);
        }
    }
}

void Spectral::poisson_invert(Spec& s) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    for (int r = 0; r < n; ++r) {
        double ky2 = ky_[static_cast<std::size_t>(r)] * ky_[static_cast<std::size_t>(r)];
        for (int c = 0; c < nc; ++c) {
            std::size_t i = static_cast<std::size_t>(r) * nc + c;
            double k2 = kx_[static_cast<std::size_t>(c)] * kx_[static_cast<std::size_t>(c)] + ky2;
            s[i] = (k2 == 0.0) ? 0.0 : s[i] / (-k2);
        }
    }
}

void Spectral::project_div_free(Field& ux, Field& uy, Spec* p_spec) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    Spec sx = make_spec(), sy = make_spec();
    forward(ux, sx);
    forward(uy, sy);
    if (p_spec) p_spec->assign(spec_size(), {0.0, 0.0});
    for (int r = 0; r < n; ++r) {
        double ky = (r == n / 2) ? 0.0 : ky_[static_cast<std::size_t>(r)];
        for (int c = 0; c < nc; ++c) {
            double kx = (c == n / 2) ? 0.0 : kx_[static_cast<std::size_t>(c)];
            double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;
            std::size_t i = static_cast<std::size_t>(r) * nc + c;
            std::complex<double> div = kx * sx[i] + ky * sy[i];  // (k . u), times i implied
            std::complex<double> along = div / k2;
            sx[i] -= kx * along;
            sy[i] -= ky * along;
            // removed part = k (k.u)/k2; its potential q satisfies i k q = removed
            if (p_spec) (*p_spec)[i] = std::complex<double>(0.0, -1.0) * along;
        }
    }
    inverse(sx, ux);
    inverse(sy, uy);
}

void Spectral::dealias(Spec& s) const {
    const int n = g_.N;
    const int nc = n / 2 + 1;
    const double kcut = (2.0 / 3.0) * kx_[static_cast<std::size_t>(n / 2)];
    for (int r = 0; r < n; ++r) {
        double ky = ky_[static_cast<std::size_t>(r)];
        for (int c = 0; c < nc; ++c) {
            double kx = kx_[static_cast<std::size_t>(c)];
            if (std::abs(kx) > kcut || std::abs(ky) > kcut) s[static_cast<std::size_t>(r) * nc + c] = 0.0;
        }
    }
}

double Spectral::max_divergence(const Field& ux, const Field& uy) const {
    Field dx, dy;
    deriv_x(ux, dx);
    deriv_y(uy, dy);
    double m = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) m = std::max(m, std::abs(dx[i] + dy[i]));
    return m;
}

double Spectral::mean(const Field& f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s / static_cast<double>(f.size());
}

double Spectral::max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace sqlc
