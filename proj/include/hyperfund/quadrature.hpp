#ifndef HYPERFUND_QUADRATURE_HPP
#define HYPERFUND_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

#include "hyperfund/errors.hpp"

// Adaptive quadrature layer. Two engines behind one entry point:
//   - globally adaptive Gauss-Kronrod 7/15 (plain mode)
//   - tanh-sinh double-exponential rule (singular-endpoint-substitution mode),
//     which never evaluates at the interval endpoints and absorbs integrable
//     endpoint blow-ups (logarithmic or power-law).
// Interior nonsmooth abscissae are passed in as split points.

namespace hyperfund::quad {

enum class EndpointMode { Plain, SingularEndpointSubstitution };

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_depth = 48;
    EndpointMode endpoint_mode = EndpointMode::Plain;
    std::vector<double> split_points{};

    QuadratureSpec with_splits(std::vector<double> pts) const {
        QuadratureSpec s = *this;
        s.split_points = std::move(pts);
        return s;
    }
    QuadratureSpec tightened(double factor) const {
        QuadratureSpec s = *this;
        s.rel_tol *= factor;
        s.abs_tol *= factor;
        return s;
    }
    QuadratureSpec singular() const {
        QuadratureSpec s = *this;
        s.endpoint_mode = EndpointMode::SingularEndpointSubstitution;
        return s;
    }
};

template <class T>
struct QuadResultT {
    T value{};
    double est_error = 0.0;
    long evals = 0;
};

using QuadResult = QuadResultT<double>;

namespace detail {

// QUADPACK dqk15 abscissae/weights on [-1,1] (positive half).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class T, class F>
void gk15(F&& f, double a, double b, T& value, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T f_center = f(mid);
    T kron = kKronrodWeights[7] * f_center;
    T gauss = kGaussWeights[3] * f_center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const T fsum = f(mid - dx) + f(mid + dx);
        kron += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    value = kron * half;
    err = std::abs((kron - gauss) * half);
}

struct Piece {
    double a, b;
    double err;
    int depth;
    std::size_t idx; // index of stored value
    bool operator<(const Piece& o) const { return err < o.err; }
};

template <class T, class F>
QuadResultT<T> adaptive_gk(F&& f, double a, double b, double rel_tol,
                           double abs_tol, int max_depth) {
    QuadResultT<T> out;
    if (a == b) return out;
    std::vector<T> vals;
    std::priority_queue<Piece> heap;
    T v;
    double e;
    gk15<T>(f, a, b, v, e);
    out.evals += 15;
    vals.push_back(v);
    heap.push({a, b, e, 0, 0});
    T total = v;
    double total_err = e;
    const std::size_t max_pieces = 200000;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        Piece worst = heap.top();
        if (worst.depth >= max_depth || vals.size() >= max_pieces)
            throw QuadratureFailure("adaptive quadrature: tolerance not met at max depth");
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        T v1, v2;
        double e1, e2;
        gk15<T>(f, worst.a, mid, v1, e1);
        gk15<T>(f, mid, worst.b, v2, e2);
        out.evals += 30;
        total += v1 + v2 - vals[worst.idx];
        total_err += e1 + e2 - worst.err;
        vals[worst.idx] = v1;
        heap.push({worst.a, mid, e1, worst.depth + 1, worst.idx});
        vals.push_back(v2);
        heap.push({mid, worst.b, e2, worst.depth + 1, vals.size() - 1});
    }
    out.value = total;
    out.est_error = total_err;
    return out;
}

// tanh-sinh rule; f is invoked through offsets from the endpoints so that
// integrable endpoint singularities are sampled without precision loss.
template <class T, class F>
QuadResultT<T> tanh_sinh(F&& f, double a, double b, double rel_tol,
                         double abs_tol, int max_level) {
    QuadResultT<T> out;
    if (a == b) return out;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double tiny = 1e-305;

    // contribution of a node at parameter u. The two endpoint sides terminate
    // independently: a side whose offset can no longer move the abscissa off
    // the endpoint is dropped (its remaining weights are double-exponentially
    // small), while a side anchored at a singular endpoint keeps resolving
    // down to the denormal floor.
    auto eval_node = [&](double u, T& acc, bool& live_l, bool& live_r) {
        const double s = std::sinh(u);
        const double y = M_PI_2 * s;              // argument of tanh
        const double ey = std::exp(-2.0 * y);     // in (0,1] for y >= 0
        const double one_minus_x = 2.0 * ey / (1.0 + ey); // 1 - tanh(y)
        const double weight =
            M_PI_2 * std::cosh(u) * 4.0 * ey / ((1.0 + ey) * (1.0 + ey));
        const double off = half * one_minus_x;
        if (off < tiny || weight < 1e-300) {
            live_l = live_r = false;
            return;
        }
        if (live_l) {
            const double xl = a + off;
            if (xl == a) {
                live_l = false;
            } else {
                acc += weight * f(xl);
                ++out.evals;
            }
        }
        if (live_r) {
            const double xr = b - off;
            if (xr == b) {
                live_r = false;
            } else {
                acc += weight * f(xr);
                ++out.evals;
            }
        }
    };
    auto sweep = [&](double h, int j_start, int j_step, int j_end, T& acc) {
        bool live_l = true, live_r = true;
        for (int j = j_start; j < j_end && (live_l || live_r); j += j_step)
            eval_node(j * h, acc, live_l, live_r);
    };

    double h = 1.0;
    T center = f(mid);
    out.evals += 1;
    // level 0
    T sum = M_PI_2 * center;
    {
        T acc{};
        sweep(h, 1, 1, 80, acc);
        sum += acc;
    }
    T integral = sum * (h * half);
    double err = std::abs(integral);
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        T acc{};
        sweep(h, 1, 2, 160 << level, acc);
        sum = sum + acc;
        const T refined = sum * (h * half);
        err = std::abs(refined - integral);
        integral = refined;
        if (err <= std::max(abs_tol, rel_tol * std::abs(integral)) && level >= 3)
            break;
    }
    if (err > std::max(abs_tol, rel_tol * std::abs(integral)) * 10.0)
        throw QuadratureFailure("tanh-sinh quadrature: tolerance not met");
    out.value = integral;
    out.est_error = err;
    return out;
}

} // namespace detail

/// Integrate f over [a,b] honoring the requested split points and endpoint mode.
/// The value type is deduced from f (double or std::complex<double>).
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec)
    -> QuadResultT<decltype(f(0.0))> {
    using T = decltype(f(0.0));
    QuadResultT<T> out;
    if (a == b) return out;
    if (b < a) {
        out = integrate(f, b, a, spec);
        out.value = -out.value;
        return out;
    }
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double p : spec.split_points)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double total_len = b - a;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double frac = std::max((hi - lo) / total_len, 0.05);
        QuadResultT<T> piece;
        if (spec.endpoint_mode == EndpointMode::SingularEndpointSubstitution) {
            piece = detail::tanh_sinh<T>(f, lo, hi, spec.rel_tol,
                                         spec.abs_tol * frac,
                                         std::min(spec.max_depth, 11));
        } else {
            piece = detail::adaptive_gk<T>(f, lo, hi, spec.rel_tol,
                                           spec.abs_tol * frac, spec.max_depth);
        }
        out.value += piece.value;
        out.est_error += piece.est_error;
        out.evals += piece.evals;
    }
    return out;
}

} // namespace hyperfund::quad

#endif
