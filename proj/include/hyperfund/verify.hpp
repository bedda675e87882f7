#ifndef HYPERFUND_VERIFY_HPP
#define HYPERFUND_VERIFY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyperfund/errors.hpp"
#include "hyperfund/field.hpp"
#include "hyperfund/kernels.hpp"
#include "hyperfund/quadrature.hpp"
#include "hyperfund/wavecore.hpp"

// Independent validation layer: the Wronskian-ratio identity satisfied by
// every transform kernel, PDE residuals by centered differences on
// re-evaluated stencils, and a variable-coefficient leapfrog oracle.

namespace hyperfund::verify {

using kernels::OperatorFamily;
using quad::QuadratureSpec;
using wavecore::SourceFamily;

struct ODECoefficients {
    std::function<double(double)> b_coef;
    std::function<double(double)> c_coef;

    static ODECoefficients constant(double b, double c) {
        return {[b](double) { return b; }, [c](double) { return c; }};
    }
    static ODECoefficients for_family(const OperatorFamily& fam) {
        return constant(0.0, fam.ode_c());
    }
};

/// Two linearly independent solutions of V'' + b(t)V' + c(t)V = 0 with
/// V1(0) = 1 = V2'(0), V1'(0) = 0 = V2(0), as dense-output interpolants.
class ODEPair {
public:
    ODEPair(std::vector<double> ts, std::vector<std::array<double, 4>> ys,
            std::vector<std::array<double, 4>> fs)
        : ts_(std::move(ts)), ys_(std::move(ys)), fs_(std::move(fs)) {}

    double v1(double t) const { return component(t, 0); }
    double v1p(double t) const { return component(t, 1); }
    double v2(double t) const { return component(t, 2); }
    double v2p(double t) const { return component(t, 3); }

    double wronskian(double b) const {
        return v1(b) * v2p(b) - v1p(b) * v2(b);
    }
    /// (V1(b) V2(t) - V1(t) V2(b)) / W(b): the identity's right-hand side.
    double ratio(double t, double b) const {
        return (v1(b) * v2(t) - v1(t) * v2(b)) / wronskian(b);
    }
    double t_end() const { return ts_.back(); }

private:
    double component(double t, int c) const {
        if (t < ts_.front() - 1e-12 || t > ts_.back() + 1e-12)
            throw DomainError("ODEPair: evaluation outside the solve window");
        t = std::clamp(t, ts_.front(), ts_.back());
        auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        std::size_t i = (it == ts_.begin()) ? 0 : (it - ts_.begin() - 1);
        if (i + 1 >= ts_.size()) i = ts_.size() - 2;
        const double h = ts_[i + 1] - ts_[i];
        const double u = (t - ts_[i]) / h;
        // cubic Hermite in u
        const double y0 = ys_[i][c], y1 = ys_[i + 1][c];
        const double d0 = fs_[i][c] * h, d1 = fs_[i + 1][c] * h;
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * d0 +
               (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * d1;
    }

    std::vector<double> ts_;
    std::vector<std::array<double, 4>> ys_;
    std::vector<std::array<double, 4>> fs_;
};

namespace detail {

using State = std::array<double, 4>;

inline State ode_rhs(const ODECoefficients& coefs, double t, const State& y) {
    const double b = coefs.b_coef(t);
    const double c = coefs.c_coef(t);
    return {y[1], -b * y[1] - c * y[0], y[3], -b * y[3] - c * y[2]};
}

} // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of the V1/V2 system with dense
/// output. The step ceiling keeps the Hermite interpolant at the requested
/// tolerance.
inline ODEPair ode_pair_solve(const ODECoefficients& coefs, double t_end,
                              double tol = 1e-10) {
    if (!(t_end > 0.0)) throw DomainError("ode_pair_solve: window must be (0,T]");
    using detail::State;
    auto axpy = [](const State& y, double h, const State& k) {
        State r;
        for (int i = 0; i < 4; ++i) r[i] = y[i] + h * k[i];
        return r;
    };

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const double h_max = std::min(0.01, t_end / 8.0);
    const double h_min = 1e-14 * t_end;

    std::vector<double> ts{0.0};
    std::vector<State> ys{{1.0, 0.0, 0.0, 1.0}};
    std::vector<State> fs{detail::ode_rhs(coefs, 0.0, ys[0])};

    double t = 0.0;
    State y = ys[0];
    State k1 = fs[0];
    double h = h_max;
    while (t < t_end) {
        h = std::min(h, t_end - t);
        const State k2 = detail::ode_rhs(coefs, t + c2 * h, axpy(y, h * a21, k1));
        State tmp;
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = detail::ode_rhs(coefs, t + c3 * h, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = detail::ode_rhs(coefs, t + c4 * h, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                 a54 * k4[i]);
        const State k5 = detail::ode_rhs(coefs, t + c5 * h, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                 a64 * k4[i] + a65 * k5[i]);
        const State k6 = detail::ode_rhs(coefs, t + h, tmp);
        State y_new;
        for (int i = 0; i < 4; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                   b5 * k5[i] + b6 * k6[i]);
        const State k7 = detail::ode_rhs(coefs, t + h, y_new);
        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                   e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = 1.0 + std::abs(y[i]) + std::abs(y_new[i]);
            err = std::max(err, std::abs(ei) / scale);
        }
        if (err <= tol) {
            t += h;
            y = y_new;
            k1 = k7; // first-same-as-last
            ts.push_back(t);
            ys.push_back(y);
            fs.push_back(k7);
        }
        const double factor =
            err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::min(h, h_max);
        if (h < h_min)
            throw IntegrationFailure("ode_pair_solve: step size underflow");
    }
    return ODEPair(std::move(ts), std::move(ys), std::move(fs));
}

/// Residuals of an identity or PDE check, norm-aggregated.
struct ResidualReport {
    std::string family;
    std::string check;
    double max_abs = 0.0;
    double l2 = 0.0;
    double tolerance_used = 0.0;
    long nodes = 0;
    // optional per-point records: (coordinate pair, residual)
    std::vector<std::array<double, 3>> per_point;

    bool pass() const { return max_abs <= tolerance_used; }
    std::string verdict() const { return pass() ? "pass" : "fail"; }

    void add(double u, double v, double residual) {
        max_abs = std::max(max_abs, std::abs(residual));
        l2 += residual * residual;
        ++nodes;
        per_point.push_back({u, v, residual});
    }
    void finalize() { l2 = std::sqrt(l2 / std::max<long>(nodes, 1)); }
};

/// Kernel-integral side of the identity:
///   mult * int_0^{|phi(t)-phi(b)|} K(t;r,b) dr.
inline kernels::Complex kernel_line_integral(const OperatorFamily& fam,
                                             double t, double b,
                                             const QuadratureSpec& spec) {
    const double radius = std::abs(fam.phi(t) - fam.phi(b));
    if (radius == 0.0)
        throw ConeDegenerate("kernel_line_integral: degenerate cone");
    const double r_max = radius * (1.0 - 1e-15);
    if (fam.kernel_is_complex()) {
        auto f = [&](double r) {
            return kernels::kernel(fam, t, std::min(r, r_max), b);
        };
        return fam.multiplier() * quad::integrate(f, 0.0, radius, spec).value;
    }
    auto f = [&](double r) {
        return kernels::kernel(fam, t, std::min(r, r_max), b).real();
    };
    return {fam.multiplier() * quad::integrate(f, 0.0, radius, spec).value, 0.0};
}

/// Wronskian-ratio identity residual at a single (t, b):
/// kernel integral vs (V1(b)V2(t) - V1(t)V2(b)) / W(b).
inline ResidualReport identity_residual(const OperatorFamily& fam,
                                        const ODEPair& pair, double t, double b,
                                        const QuadratureSpec& spec,
                                        double tolerance = 1e-6) {
    if (!(t > b)) throw DomainError("identity_residual: requires t > b");
    ResidualReport report;
    report.family = fam.name();
    report.check = "wronskian-identity";
    report.tolerance_used = tolerance;
    const auto lhs = kernel_line_integral(fam, t, b, spec);
    const double rhs = pair.ratio(t, b);
    const double residual =
        std::max(std::abs(lhs.real() - rhs), std::abs(lhs.imag()));
    report.add(b, t, residual);
    report.finalize();
    return report;
}

/// Identity residuals over a (b, t) grid, 0 <= b < t <= t_max.
inline ResidualReport identity_residual_grid(const OperatorFamily& fam,
                                             double t_max, int n,
                                             const QuadratureSpec& spec,
                                             double tolerance = 1e-6) {
    ResidualReport report;
    report.family = fam.name();
    report.check = "wronskian-identity-grid";
    report.tolerance_used = tolerance;
    const auto pair =
        ode_pair_solve(ODECoefficients::for_family(fam), t_max, 1e-11);
    const double t_lo = (fam.time_min() == 0.0) ? 1e-3 : 0.0;
    for (int i = 0; i < n; ++i) {
        const double b = t_lo + (t_max - t_lo) * i / n;
        for (int j = 0; j < n; ++j) {
            const double t = b + (t_max - b) * (j + 1) / n;
            if (!(t > b)) continue;
            const auto lhs = kernel_line_integral(fam, t, b, spec);
            const double rhs = pair.ratio(t, b);
            report.add(b, t,
                       std::max(std::abs(lhs.real() - rhs), std::abs(lhs.imag())));
        }
    }
    report.finalize();
    return report;
}

/// Centered-difference residual of the family's defining equation applied to
/// a re-evaluated solution field. The stencil is re-evaluated through
/// field.evaluator (quadrature errors, not interpolation errors).
inline ResidualReport pde_residual(const SolutionField& field,
                                   const SourceFamily& src, double stencil_h,
                                   std::vector<double> probe_x = {},
                                   std::vector<double> probe_t = {},
                                   double tolerance = 1e-3) {
    ResidualReport report;
    report.family = field.family.name();
    report.check = "pde-residual";
    report.tolerance_used = tolerance;
    if (probe_x.empty())
        probe_x = {0.5 * (field.grid_x.front() + field.grid_x.back())};
    if (probe_t.empty())
        probe_t = {0.5 * (field.grid_t.front() + field.grid_t.back())};

    const double c = field.family.ode_c();
    auto operator_residual = [&](double x, double t, double u0, double u_tt,
                                 double u_xx, double u_t) {
        const double a2 = field.family.speed(t) * field.family.speed(t);
        double lhs = u_tt - a2 * u_xx + c * u0;
        if (field.edes_weighted) lhs += 2.0 * u_t / t;
        const double point[1] = {x};
        return lhs - src.f(std::span<const double>(point, 1), t);
    };

    if (field.evaluator) {
        // re-evaluate the solve on the stencil: quadrature error only
        const double h = stencil_h;
        const auto& u = field.evaluator;
        for (double t : probe_t) {
            for (double x : probe_x) {
                const double u0 = u(x, t);
                const double up = u(x, t + h), um = u(x, t - h);
                const double u_tt = (up - 2.0 * u0 + um) / (h * h);
                const double u_xx =
                    (u(x + h, t) - 2.0 * u0 + u(x - h, t)) / (h * h);
                const double u_t = (up - um) / (2.0 * h);
                report.add(x, t, operator_residual(x, t, u0, u_tt, u_xx, u_t));
            }
        }
        report.finalize();
        return report;
    }

    // stored-grid path: stencil on exact nodes at the grid's own spacing
    if (field.grid_x.size() < 3 || field.grid_t.size() < 3)
        throw InsufficientGrid("pde_residual: field too coarse and no evaluator");
    const double dx = field.grid_x[1] - field.grid_x[0];
    const double dt = field.grid_t[1] - field.grid_t[0];
    if (dx > stencil_h || dt > stencil_h)
        throw InsufficientGrid("pde_residual: node spacing exceeds stencil_h");
    auto nearest = [](const std::vector<double>& v, double x) {
        const auto it = std::lower_bound(v.begin(), v.end(), x);
        std::size_t i = it - v.begin();
        if (i > 0 && (i == v.size() || x - v[i - 1] < v[i] - x)) --i;
        return i;
    };
    for (double t : probe_t) {
        const std::size_t jt = nearest(field.grid_t, t);
        if (jt == 0 || jt + 1 >= field.grid_t.size())
            throw InsufficientGrid("pde_residual: probe at a time boundary");
        for (double x : probe_x) {
            const std::size_t jx = nearest(field.grid_x, x);
            if (jx == 0 || jx + 1 >= field.grid_x.size())
                throw InsufficientGrid("pde_residual: probe at a space boundary");
            const int it = static_cast<int>(jt), ix = static_cast<int>(jx);
            const double u0 = field.at(it, ix);
            const double u_tt =
                (field.at(it + 1, ix) - 2.0 * u0 + field.at(it - 1, ix)) /
                (dt * dt);
            const double u_xx =
                (field.at(it, ix + 1) - 2.0 * u0 + field.at(it, ix - 1)) /
                (dx * dx);
            const double u_t =
                (field.at(it + 1, ix) - field.at(it - 1, ix)) / (2.0 * dt);
            report.add(field.grid_x[jx], field.grid_t[jt],
                       operator_residual(field.grid_x[jx], field.grid_t[jt], u0,
                                         u_tt, u_xx, u_t));
        }
    }
    report.finalize();
    return report;
}

/// Leapfrog solution of u_tt = a(t)^2 u_xx - c u + f for the implemented
/// time-dependent-speed families; second order in dt and dx. Oracle use only.
inline SolutionField fd_variable_oracle(const OperatorFamily& fam,
                                        const Profile& phi0,
                                        const Profile& phi1,
                                        const SourceFamily* src,
                                        const wavecore::FdGrid& grid) {
    using kernels::FamilyTag;
    if (fam.tag == FamilyTag::EinsteinDeSitter)
        throw DomainError("fd_variable_oracle: singular-damping family unsupported");
    const int nx = grid.nx;
    const double dx = (grid.x_max - grid.x_min) / (nx - 1);
    double max_speed = 0.0;
    {
        const double t_lo = std::max(0.0, fam.time_min());
        for (int i = 0; i <= 64; ++i)
            max_speed = std::max(
                max_speed, fam.speed(t_lo + (grid.t_end - t_lo) * i / 64.0));
    }
    const double dt = grid.dt > 0.0 ? grid.dt : 0.5 * dx / std::max(1.0, max_speed);
    if (dt * max_speed > dx + 1e-15)
        throw CflViolation("fd_variable_oracle: dt exceeds dx / max speed");
    const long steps = static_cast<long>(std::ceil(grid.t_end / dt));
    if (steps > 40'000'000L)
        throw WindowTooLarge("fd_variable_oracle: CFL forces too many steps");

    const double c = fam.ode_c();
    SolutionField out;
    out.family = fam;
    out.provenance = Provenance::Oracle;
    out.grid_x.resize(nx);
    for (int i = 0; i < nx; ++i) out.grid_x[i] = grid.x_min + i * dx;
    const int nt = static_cast<int>(steps) + 1;
    out.grid_t.resize(nt);
    for (int k = 0; k < nt; ++k) out.grid_t[k] = k * dt;
    out.values.assign(static_cast<std::size_t>(nt) * nx, 0.0);

    auto source_at = [&](double x, double t) {
        if (!src) return 0.0;
        const double p[1] = {x};
        return src->f(std::span<const double>(p, 1), t);
    };

    std::vector<double> um(nx), uc(nx), un(nx);
    for (int i = 0; i < nx; ++i) um[i] = phi0(out.grid_x[i]);
    const double a0 = fam.speed(0.0);
    for (int i = 1; i + 1 < nx; ++i) {
        const double lap = (um[i - 1] - 2.0 * um[i] + um[i + 1]) / (dx * dx);
        uc[i] = um[i] + dt * phi1(out.grid_x[i]) +
                0.5 * dt * dt *
                    (a0 * a0 * lap - c * um[i] + source_at(out.grid_x[i], 0.0));
    }
    uc[0] = uc[nx - 1] = 0.0;
    for (int i = 0; i < nx; ++i) {
        out.values[i] = um[i];
        out.values[nx + i] = uc[i];
    }
    for (long k = 1; k < steps; ++k) {
        const double t = k * dt;
        const double a2 = fam.speed(t) * fam.speed(t);
        for (int i = 1; i + 1 < nx; ++i) {
            const double lap = (uc[i - 1] - 2.0 * uc[i] + uc[i + 1]) / (dx * dx);
            un[i] = 2.0 * uc[i] - um[i] +
                    dt * dt * (a2 * lap - c * uc[i] + source_at(out.grid_x[i], t));
        }
        un[0] = un[nx - 1] = 0.0;
        std::copy(un.begin(), un.end(),
                  out.values.begin() + static_cast<std::size_t>(k + 1) * nx);
        std::swap(um, uc);
        std::swap(uc, un);
    }
    return out;
}

} // namespace hyperfund::verify

#endif
