#ifndef HYPERFUND_TRANSFORM_HPP
#define HYPERFUND_TRANSFORM_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyperfund/errors.hpp"
#include "hyperfund/field.hpp"
#include "hyperfund/kernels.hpp"
#include "hyperfund/parallel.hpp"
#include "hyperfund/profile.hpp"
#include "hyperfund/quadrature.hpp"
#include "hyperfund/wavecore.hpp"

// The integral operator mapping a family of constant-coefficient wave
// solutions w(x, r; b) to a solution of the variable-coefficient equation:
//
//   u(x,t) = mult * int_{t0}^{t} db int_0^{|phi(t)-phi(b)|} K(t;r,b) w(x,r;b) dr
//
// plus the de Sitter Cauchy formula (huygensian term + K0/K1 integrals) and
// the Einstein-de Sitter weighted-data solution.

namespace hyperfund::transform {

using kernels::Complex;
using kernels::OperatorFamily;
using quad::QuadratureSpec;
using wavecore::SourceFamily;

/// Wave-solution evaluator (x, r, b) -> w(x, r; b).
using WaveEval = std::function<double(std::span<const double>, double, double)>;

/// Apply the transform at a single space-time point.
inline Complex apply_transform(const OperatorFamily& fam, const WaveEval& w,
                               std::span<const double> x, double t, double t0,
                               const QuadratureSpec& spec) {
    if (t <= t0) return Complex(0.0, 0.0);
    const double span_total = std::abs(fam.phi(t) - fam.phi(t0));
    if (span_total == 0.0)
        throw ConeDegenerate("apply_transform: phi(t) == phi(t0) with t > t0");

    QuadratureSpec inner = spec.tightened(0.1);
    inner.split_points.clear();
    inner.endpoint_mode = quad::EndpointMode::Plain;

    const double phi_t = fam.phi(t);
    const bool complex_kernel = fam.kernel_is_complex();

    // the quadrature layer owns the cone-boundary limit: keep the kernel
    // argument strictly inside when the abscissa rounds onto the boundary
    const auto clamp_in = [](double r, double radius) {
        return std::min(r, radius * (1.0 - 1e-15));
    };
    if (!complex_kernel) {
        auto outer_f = [&](double b) {
            const double radius = std::abs(phi_t - fam.phi(b));
            if (radius <= 0.0) return 0.0;
            auto inner_f = [&](double r) {
                return kernels::kernel(fam, t, clamp_in(r, radius), b).real() *
                       w(x, r, b);
            };
            return quad::integrate(inner_f, 0.0, radius, inner).value;
        };
        const auto res = quad::integrate(outer_f, t0, t, spec);
        return Complex(fam.multiplier() * res.value, 0.0);
    }
    auto outer_f = [&](double b) -> Complex {
        const double radius = std::abs(phi_t - fam.phi(b));
        if (radius <= 0.0) return Complex(0.0, 0.0);
        auto inner_f = [&](double r) -> Complex {
            return kernels::kernel(fam, t, clamp_in(r, radius), b) * w(x, r, b);
        };
        return quad::integrate(inner_f, 0.0, radius, inner).value;
    };
    const auto res = quad::integrate(outer_f, t0, t, spec);
    return fam.multiplier() * res.value;
}

/// Transform applied to the wave image of a source family.
inline Complex transform_of_source(const OperatorFamily& fam,
                                   const SourceFamily& src,
                                   std::span<const double> x, double t,
                                   double t0, const QuadratureSpec& spec) {
    WaveEval w = [&src](std::span<const double> xx, double r, double b) {
        return wavecore::wave_source_family(src, xx, r, b);
    };
    return apply_transform(fam, w, x, t, t0, spec);
}

/// Action of the forward fundamental solution emitted at time t0 on a spatial
/// profile (n = 1):
///   g(x,t) = mult * int_0^{|phi(t)-phi(t0)|} K(t;r,t0) v_phi(x,r) dr.
/// g vanishes at t = t0 and carries the unit initial kick g_t(x,t0+) = phi(x);
/// pairing g against a source in t0 recovers apply_transform.
inline Complex fundamental_action(const OperatorFamily& fam,
                                  const Profile& profile, double x, double t,
                                  double t0, const QuadratureSpec& spec) {
    if (t <= t0) return Complex(0.0, 0.0);
    const double radius = std::abs(fam.phi(t) - fam.phi(t0));
    if (radius == 0.0)
        throw ConeDegenerate("fundamental_action: phi(t) == phi(t0) with t > t0");
    const double r_max = radius * (1.0 - 1e-15);
    QuadratureSpec r_spec = spec;
    r_spec.split_points.clear();
    for (double p : profile.singular_points()) {
        const double r = std::abs(p - x);
        if (r > 0.0 && r < radius) r_spec.split_points.push_back(r);
    }
    if (fam.kernel_is_complex()) {
        auto f = [&](double r) {
            return kernels::kernel(fam, t, std::min(r, r_max), t0) *
                   dalembert_first_datum(profile, x, r);
        };
        return fam.multiplier() * quad::integrate(f, 0.0, radius, r_spec).value;
    }
    auto f = [&](double r) {
        return kernels::kernel(fam, t, std::min(r, r_max), t0).real() *
               dalembert_first_datum(profile, x, r);
    };
    return {fam.multiplier() * quad::integrate(f, 0.0, radius, r_spec).value,
            0.0};
}

/// Solve the source problem with vanishing data at t0 on a rectangular grid.
inline SolutionField solve_source_problem(const OperatorFamily& fam,
                                          const SourceFamily& src,
                                          const Grid& grid,
                                          const QuadratureSpec& spec,
                                          double t0 = 0.0, int threads = 1) {
    if (grid.t_min < fam.time_min() || t0 < fam.time_min())
        throw DomainError("solve_source_problem: grid outside family time domain");
    SolutionField field;
    field.family = fam;
    field.grid_x = grid.xs();
    field.grid_t = grid.ts();
    field.quad = spec;
    field.provenance = Provenance::Transform;
    field.values.assign(field.grid_x.size() * field.grid_t.size(), 0.0);
    if (fam.kernel_is_complex())
        field.values_imag.assign(field.values.size(), 0.0);

    const auto& xs = field.grid_x;
    const auto& ts = field.grid_t;
    parallel_for(xs.size() * ts.size(), threads, [&](std::size_t idx) {
        const int it = static_cast<int>(idx / xs.size());
        const int ix = static_cast<int>(idx % xs.size());
        double point[3] = {xs[ix], 0.0, 0.0};
        const auto u = transform_of_source(
            fam, src, std::span<const double>(point, src.dim), ts[it], t0, spec);
        field.values[idx] = u.real();
        if (!field.values_imag.empty()) field.values_imag[idx] = u.imag();
    });
    field.evaluator = [fam, src, spec, t0](double x, double t) {
        double point[3] = {x, 0.0, 0.0};
        return transform_of_source(fam, src,
                                   std::span<const double>(point, src.dim), t,
                                   t0, spec)
            .real();
    };
    return field;
}

namespace detail {

// Power-law data concentrate a large share of their integral mass within a
// machine epsilon of the pole, so the pole-adjacent pieces are integrated in
// the pole-centered variable sigma = |s - s0|: the singular factor is then
// sigma^{-a} exactly, and the tanh-sinh offsets stay representable.
template <class KernelFn>
double half_powerlaw_integral(double coef, double expo, double s0,
                              double phi_t, const KernelFn& kernel_at,
                              const QuadratureSpec& spec) {
    QuadratureSpec sigma_spec = spec;
    sigma_spec.split_points.clear();
    sigma_spec.endpoint_mode = quad::EndpointMode::SingularEndpointSubstitution;
    auto segment = [&](double lo, double hi, int dir) {
        if (!(hi > lo)) return 0.0;
        auto f = [&](double sigma) {
            const double s = std::clamp(s0 + dir * sigma, 0.0, 1.0);
            return std::pow(sigma, -expo) * kernel_at(phi_t * s);
        };
        return quad::integrate(f, lo, hi, sigma_spec).value;
    };
    double total;
    if (s0 >= 1.0)
        total = segment(s0 - 1.0, s0, -1);
    else if (s0 <= 0.0)
        total = segment(-s0, 1.0 - s0, +1);
    else
        total = segment(0.0, s0, -1) + segment(0.0, 1.0 - s0, +1);
    return coef * std::pow(phi_t, -expo) * total;
}

/// int_0^1 [prof(x + phi_t s) + prof(x - phi_t s)] K(phi_t s) ds with the
/// profile's nonsmooth abscissae mapped to s-space split points and power-law
/// poles handled in the pole-centered variable.
template <class KernelFn>
double profile_kernel_integral(const Profile& prof, double x, double phi_t,
                               const KernelFn& kernel_at,
                               const QuadratureSpec& spec) {
    if (prof.is_zero()) return 0.0;
    double total = 0.0;
    for (const int sign : {+1, -1}) {
        if (prof.kind() == Profile::Kind::PowerLaw) {
            const double s0 = -sign * x / phi_t;
            total += half_powerlaw_integral(prof.power_law_coefficient(),
                                            prof.power_law_exponent(), s0,
                                            phi_t, kernel_at, spec);
            continue;
        }
        std::vector<double> splits;
        for (double p : prof.singular_points()) {
            const double s = sign * (p - x) / phi_t;
            if (s > 0.0 && s < 1.0) splits.push_back(s);
        }
        QuadratureSpec s_spec = spec.with_splits(std::move(splits));
        if (prof.unbounded()) s_spec = s_spec.singular();
        auto f = [&](double s) {
            return prof(x + sign * phi_t * s) * kernel_at(phi_t * s);
        };
        total += quad::integrate(f, 0.0, 1.0, s_spec).value;
    }
    return total;
}

} // namespace detail

/// de Sitter Cauchy solution at one point:
///   u = e^{t/2} v_{phi0}(x, phi(t))
///       + 2 phi(t) int_0^1 v_{phi0}(x, phi(t)s) K0(phi(t)s, t) ds
///       + 2 phi(t) int_0^1 v_{phi1}(x, phi(t)s) K1(phi(t)s, t) ds
/// with phi(t) = 1 - e^{-t}.
inline double desitter_cauchy_point(const Profile& phi0, const Profile& phi1,
                                    double x, double t,
                                    const QuadratureSpec& spec) {
    if (t < 0.0) throw DomainError("desitter_cauchy_point: t must be >= 0");
    if (t == 0.0) return phi0(x);
    const double phi_t = 1.0 - std::exp(-t);
    const double huygens = std::exp(0.5 * t) * dalembert_first_datum(phi0, x, phi_t);

    auto k0 = [&](double z) { return kernels::detail::kernel_k0_closed(z, t); };
    auto k1 = [&](double z) { return kernels::kernel_k1_desitter(z, t); };
    const double tail =
        phi_t * (detail::profile_kernel_integral(phi0, x, phi_t, k0, spec) +
                 detail::profile_kernel_integral(phi1, x, phi_t, k1, spec));
    return huygens + tail;
}

/// Grid version of the de Sitter Cauchy solve (n = 1).
inline SolutionField solve_desitter_cauchy(const Profile& phi0,
                                           const Profile& phi1,
                                           const Grid& grid,
                                           const QuadratureSpec& spec,
                                           int threads = 1) {
    if (grid.t_min < 0.0)
        throw DomainError("solve_desitter_cauchy: t_min must be >= 0");
    SolutionField field;
    field.family = kernels::OperatorFamily::de_sitter();
    field.grid_x = grid.xs();
    field.grid_t = grid.ts();
    field.quad = spec;
    field.provenance = Provenance::Transform;
    field.values.assign(field.grid_x.size() * field.grid_t.size(), 0.0);
    const auto& xs = field.grid_x;
    const auto& ts = field.grid_t;
    parallel_for(xs.size() * ts.size(), threads, [&](std::size_t idx) {
        const int it = static_cast<int>(idx / xs.size());
        const int ix = static_cast<int>(idx % xs.size());
        field.values[idx] = desitter_cauchy_point(phi0, phi1, xs[ix], ts[it], spec);
    });
    field.evaluator = [phi0, phi1, spec](double x, double t) {
        return desitter_cauchy_point(phi0, phi1, x, t, spec);
    };
    return field;
}

/// Einstein-de Sitter weighted solution at one point:
///   psi(x,t) = 1/(18 t) int_0^t db  b  int_0^{3t^{1/3}-3b^{1/3}}
///              (9 t^{2/3} + 9 b^{2/3} - r^2) w(x,r;b) dr.
inline double edes_weighted_point(const SourceFamily& src,
                                  std::span<const double> x, double t,
                                  const QuadratureSpec& spec) {
    if (!(t > 0.0)) throw DomainError("edes_weighted_point: t must be positive");
    const double t13 = std::cbrt(t);
    QuadratureSpec inner = spec.tightened(0.1);
    inner.split_points.clear();
    auto outer_f = [&](double b) {
        const double radius = 3.0 * (t13 - std::cbrt(b));
        if (radius <= 0.0) return 0.0;
        const double tb = 9.0 * t13 * t13 + 9.0 * std::cbrt(b) * std::cbrt(b);
        auto inner_f = [&](double r) {
            return (tb - r * r) * wavecore::wave_source_family(src, x, r, b);
        };
        return b * quad::integrate(inner_f, 0.0, radius, inner).value;
    };
    return quad::integrate(outer_f, 0.0, t, spec).value / (18.0 * t);
}

/// Sampled check of the small-t growth hypothesis |f| <= C t^{eps-2};
/// returns a warning string when the samples violate it, empty otherwise.
inline std::string edes_growth_warning(const SourceFamily& src, double eps_hint) {
    const double probe[1] = {0.0};
    const auto xs = std::span<const double>(probe, 1);
    const double scale = 1.0 + std::abs(src.f(xs, 1.0));
    for (double ts : {1e-3, 1e-2, 1e-1}) {
        const double bound = 100.0 * scale * std::pow(ts, eps_hint - 2.0);
        if (std::abs(src.f(xs, ts)) > bound)
            return "source grows faster than t^(eps-2) near t = 0 (eps = " +
                   std::to_string(eps_hint) + ")";
    }
    return {};
}

/// Grid version of the weighted Einstein-de Sitter solve.
inline SolutionField solve_edes_weighted(const SourceFamily& src,
                                         const Grid& grid,
                                         const QuadratureSpec& spec,
                                         int threads = 1,
                                         double eps_hint = 1.0,
                                         std::string* warning = nullptr) {
    if (!(grid.t_min > 0.0))
        throw DomainError("solve_edes_weighted: grid must have t_min > 0");
    if (warning) *warning = edes_growth_warning(src, eps_hint);
    SolutionField field;
    field.family = kernels::OperatorFamily::einstein_de_sitter(1);
    field.grid_x = grid.xs();
    field.grid_t = grid.ts();
    field.quad = spec;
    field.provenance = Provenance::Transform;
    field.edes_weighted = true;
    field.values.assign(field.grid_x.size() * field.grid_t.size(), 0.0);
    const auto& xs = field.grid_x;
    const auto& ts = field.grid_t;
    parallel_for(xs.size() * ts.size(), threads, [&](std::size_t idx) {
        const int it = static_cast<int>(idx / xs.size());
        const int ix = static_cast<int>(idx % xs.size());
        double point[3] = {xs[ix], 0.0, 0.0};
        field.values[idx] = edes_weighted_point(
            src, std::span<const double>(point, src.dim), ts[it], spec);
    });
    field.evaluator = [src, spec](double x, double t) {
        double point[3] = {x, 0.0, 0.0};
        return edes_weighted_point(src, std::span<const double>(point, src.dim),
                                   t, spec);
    };
    return field;
}

/// Weighted-data limits t psi and d(t psi)/dt = t psi_t + psi at t_probe,
/// reported for the a-posteriori check of the weighted initial conditions.
struct WeightedLimits {
    double t_probe;
    double t_psi;
    double t_psi_t_plus_psi;
};

inline WeightedLimits edes_weighted_limits(const SourceFamily& src, double x,
                                           double t_probe,
                                           const QuadratureSpec& spec) {
    const double h = 0.5 * t_probe;
    double point[3] = {x, 0.0, 0.0};
    const auto xs = std::span<const double>(point, src.dim);
    const double lo = edes_weighted_point(src, xs, t_probe - h, spec);
    const double mid = edes_weighted_point(src, xs, t_probe, spec);
    const double hi = edes_weighted_point(src, xs, t_probe + h, spec);
    const double d_tpsi =
        ((t_probe + h) * hi - (t_probe - h) * lo) / (2.0 * h);
    return {t_probe, t_probe * mid, d_tpsi};
}

} // namespace hyperfund::transform

#endif
