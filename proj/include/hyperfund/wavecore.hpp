#ifndef HYPERFUND_WAVECORE_HPP
#define HYPERFUND_WAVECORE_HPP

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "hyperfund/errors.hpp"
#include "hyperfund/field.hpp"
#include "hyperfund/profile.hpp"

// Constant-coefficient wave equation layer: the first-datum Cauchy solution
// w(x, r; b) in one and three space dimensions, plus an independent leapfrog
// oracle used only for cross-checks.

namespace hyperfund::wavecore {

/// Space-time source f(x, t); dim is the spatial dimension of x.
struct SourceFamily {
    std::function<double(std::span<const double>, double)> f;
    bool smooth = true;
    int dim = 1;

    static SourceFamily from_1d(std::function<double(double, double)> g,
                                bool smooth = true) {
        SourceFamily s;
        s.f = [g = std::move(g)](std::span<const double> x, double t) {
            return g(x[0], t);
        };
        s.smooth = smooth;
        s.dim = 1;
        return s;
    }

    static SourceFamily constant(double value, int dim = 1) {
        SourceFamily s;
        s.f = [value](std::span<const double>, double) { return value; };
        s.dim = dim;
        return s;
    }

    double operator()(std::span<const double> x, double t) const { return f(x, t); }
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// Mean of y -> g(x + rho * omega) over the unit sphere about x, by a
// Gauss-Legendre (polar) x trapezoid (azimuthal) product rule.
template <class G>
double sphere_mean(G&& g, std::span<const double> x, double rho,
                   int n_polar = 24, int n_azimuth = 48) {
    static thread_local std::vector<double> mu, wmu;
    static thread_local int cached_n = 0;
    if (cached_n != n_polar) {
        gauss_legendre(n_polar, mu, wmu);
        cached_n = n_polar;
    }
    double sum = 0.0;
    for (int i = 0; i < n_polar; ++i) {
        const double c = mu[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        double ring = 0.0;
        for (int j = 0; j < n_azimuth; ++j) {
            const double ph = 2.0 * M_PI * j / n_azimuth;
            const double y[3] = {x[0] + rho * s * std::cos(ph),
                                 x[1] + rho * s * std::sin(ph),
                                 x[2] + rho * c};
            ring += g(std::span<const double>(y, 3));
        }
        sum += wmu[i] * ring / n_azimuth;
    }
    return 0.5 * sum;
}

} // namespace detail

/// First-datum wave solution w(x, r; b) with datum f(., b):
/// n = 1 d'Alembert, n = 3 spherical means (Kirchhoff form
/// w = M_f(x,r) + r d/dr M_f(x,r), the radial derivative taken along rays).
inline double wave_source_family(const SourceFamily& src,
                                 std::span<const double> x, double r, double b) {
    if (r < 0.0) throw DomainError("wave_source_family: r must be nonnegative");
    if (src.dim == 1) {
        const double xl[1] = {x[0] - r};
        const double xr[1] = {x[0] + r};
        return 0.5 * (src.f(std::span<const double>(xl, 1), b) +
                      src.f(std::span<const double>(xr, 1), b));
    }
    if (src.dim != 3)
        throw UnsupportedDimension("wave_source_family: only n in {1,3}");
    if (r < 1e-12) {
        return src.f(x, b);
    }
    auto g = [&](std::span<const double> y) { return src.f(y, b); };
    const double mean = detail::sphere_mean(g, x, r);
    // 4th-order central difference of the spherical mean in the radius
    const double h = std::max(1e-3, 1e-3 * r);
    auto mean_at = [&](double rho) {
        return detail::sphere_mean(g, x, std::abs(rho));
    };
    const double dmean = (-mean_at(r + 2 * h) + 8 * mean_at(r + h) -
                          8 * mean_at(r - h) + mean_at(r - 2 * h)) /
                         (12 * h);
    return mean + r * dmean;
}

/// d'Alembert with a Profile first datum (n = 1); the Profile layer raises
/// SingularEvaluation if x +- s lands on an unbounded singular point.
using hyperfund::dalembert_first_datum;

struct FdGrid {
    double x_min = -1.0, x_max = 1.0;
    int nx = 201;
    double t_end = 1.0;
    double dt = 0.0; // 0: use 0.5 * dx
};

/// Leapfrog solution of u_tt = u_xx + f with u(.,0) = phi0, u_t(.,0) = phi1.
/// Zero Dirichlet boundaries; callers pad the domain so the boundary stays
/// causally disconnected from the probe window. Oracle use only.
inline SolutionField fd_wave_oracle(const Profile& phi0, const Profile& phi1,
                                    const SourceFamily* src, const FdGrid& grid) {
    const int nx = grid.nx;
    const double dx = (grid.x_max - grid.x_min) / (nx - 1);
    const double dt = grid.dt > 0.0 ? grid.dt : 0.5 * dx;
    if (dt > dx + 1e-15)
        throw CflViolation("fd_wave_oracle: dt must not exceed dx");
    const int nt = static_cast<int>(std::ceil(grid.t_end / dt + 0.5)) + 1;

    SolutionField out;
    out.family = kernels::OperatorFamily::klein_gordon(0.0); // pure wave
    out.provenance = Provenance::Oracle;
    out.grid_x.resize(nx);
    for (int i = 0; i < nx; ++i) out.grid_x[i] = grid.x_min + i * dx;
    out.grid_t.resize(nt);
    for (int k = 0; k < nt; ++k) out.grid_t[k] = k * dt;
    out.values.assign(static_cast<std::size_t>(nt) * nx, 0.0);

    auto value_of = [&](const SourceFamily* s, double x, double t) {
        if (!s) return 0.0;
        const double xv[1] = {x};
        return s->f(std::span<const double>(xv, 1), t);
    };

    std::vector<double> um(nx), uc(nx), un(nx);
    for (int i = 0; i < nx; ++i) um[i] = phi0(out.grid_x[i]);
    const double lam2 = (dt / dx) * (dt / dx);
    // second-order start using the discrete Laplacian of the first datum
    for (int i = 1; i + 1 < nx; ++i) {
        const double lap = um[i - 1] - 2.0 * um[i] + um[i + 1];
        uc[i] = um[i] + dt * phi1(out.grid_x[i]) + 0.5 * lam2 * lap +
                0.5 * dt * dt * value_of(src, out.grid_x[i], 0.0);
    }
    uc[0] = uc[nx - 1] = 0.0;
    for (int i = 0; i < nx; ++i) {
        out.values[i] = um[i];
        out.values[nx + i] = uc[i];
    }
    for (int k = 1; k + 1 < nt; ++k) {
        const double t = out.grid_t[k];
        for (int i = 1; i + 1 < nx; ++i) {
            const double lap = uc[i - 1] - 2.0 * uc[i] + uc[i + 1];
            un[i] = 2.0 * uc[i] - um[i] + lam2 * lap +
                    dt * dt * value_of(src, out.grid_x[i], t);
        }
        un[0] = un[nx - 1] = 0.0;
        std::copy(un.begin(), un.end(),
                  out.values.begin() + static_cast<std::size_t>(k + 1) * nx);
        std::swap(um, uc);
        std::swap(uc, un);
    }
    return out;
}

} // namespace hyperfund::wavecore

#endif
