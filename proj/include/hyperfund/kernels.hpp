#ifndef HYPERFUND_KERNELS_HPP
#define HYPERFUND_KERNELS_HPP

#include <cmath>
#include <complex>
#include <string>

#include "hyperfund/errors.hpp"
#include "hyperfund/specfun.hpp"

// Operator families, their distance functions phi(t) and transform kernels
// K(t; r, b), including the de Sitter Cauchy kernels K0, K1 and the
// complex-exponent curved Klein-Gordon kernels.

namespace hyperfund::kernels {

using specfun::Complex;

enum class FamilyTag {
    KleinGordonReal,
    KleinGordonImag,
    Tricomi,
    DeSitterWave,
    AntiDeSitterWave,
    EinsteinDeSitter,
    DeSitterKG,
};

enum class MassSign { Large, Small };

struct OperatorFamily {
    FamilyTag tag = FamilyTag::DeSitterWave;
    double mass = 1.0;        // m for the flat Klein-Gordon pair
    double k = 1.0;           // Tricomi exponent parameter, l = 2k
    int m_int = 1;            // Einstein-de Sitter integer parameter
    double curved_mass = 1.0; // M for the curved Klein-Gordon kernels
    MassSign mass_sign = MassSign::Large;

    static OperatorFamily klein_gordon(double m) {
        return {FamilyTag::KleinGordonReal, m};
    }
    static OperatorFamily klein_gordon_imag(double m) {
        return {FamilyTag::KleinGordonImag, m};
    }
    static OperatorFamily tricomi(double k) {
        if (!(k > 0.0)) throw DomainError("tricomi: k must be positive");
        OperatorFamily f;
        f.tag = FamilyTag::Tricomi;
        f.k = k;
        return f;
    }
    static OperatorFamily de_sitter() { return {FamilyTag::DeSitterWave}; }
    static OperatorFamily anti_de_sitter() { return {FamilyTag::AntiDeSitterWave}; }
    static OperatorFamily einstein_de_sitter(int m) {
        if (m < 1) throw DomainError("einstein_de_sitter: m must be >= 1");
        OperatorFamily f;
        f.tag = FamilyTag::EinsteinDeSitter;
        f.m_int = m;
        return f;
    }
    static OperatorFamily de_sitter_kg(double M, MassSign sign) {
        if (M < 0.0) throw DomainError("de_sitter_kg: M must be nonnegative");
        OperatorFamily f;
        f.tag = FamilyTag::DeSitterKG;
        f.curved_mass = M;
        f.mass_sign = sign;
        return f;
    }

    /// Distance function phi(t) (antiderivative of the propagation speed).
    double phi(double t) const {
        switch (tag) {
            case FamilyTag::KleinGordonReal:
            case FamilyTag::KleinGordonImag:
                return t;
            case FamilyTag::Tricomi:
                if (t < 0.0) throw DomainError("phi: t must be nonnegative");
                return std::pow(t, k + 1.0) / (k + 1.0);
            case FamilyTag::DeSitterWave:
            case FamilyTag::DeSitterKG:
                return std::exp(-t);
            case FamilyTag::AntiDeSitterWave:
                return std::exp(t);
            case FamilyTag::EinsteinDeSitter: {
                if (t < 0.0) throw DomainError("phi: t must be nonnegative");
                const double p = 2.0 * m_int + 1.0;
                return p * std::pow(t, 1.0 / p);
            }
        }
        return 0.0;
    }

    /// Propagation speed |phi'(t)| of the operator d_t^2 - a(t)^2 Laplacian.
    double speed(double t) const {
        switch (tag) {
            case FamilyTag::KleinGordonReal:
            case FamilyTag::KleinGordonImag:
                return 1.0;
            case FamilyTag::Tricomi:
                return std::pow(std::abs(t), k);
            case FamilyTag::DeSitterWave:
            case FamilyTag::DeSitterKG:
                return std::exp(-t);
            case FamilyTag::AntiDeSitterWave:
                return std::exp(t);
            case FamilyTag::EinsteinDeSitter:
                return std::pow(t, -2.0 * m_int / (2.0 * m_int + 1.0));
        }
        return 1.0;
    }

    /// Leading multiplier of the integral transform for this family's kernel
    /// normalization (the flat Klein-Gordon and Einstein-de Sitter displays
    /// carry none; the hypergeometric families carry 2).
    double multiplier() const {
        switch (tag) {
            case FamilyTag::KleinGordonReal:
            case FamilyTag::KleinGordonImag:
            case FamilyTag::EinsteinDeSitter:
                return 1.0;
            default:
                return 2.0;
        }
    }

    bool kernel_is_complex() const {
        return tag == FamilyTag::DeSitterKG && mass_sign == MassSign::Large &&
               curved_mass > 0.0;
    }

    /// Lower end of the family's time domain (degenerate families live on t >= 0).
    double time_min() const {
        switch (tag) {
            case FamilyTag::Tricomi:
            case FamilyTag::EinsteinDeSitter:
                return 0.0;
            default:
                return -std::numeric_limits<double>::infinity();
        }
    }

    /// c(t) of the associated time ODE V'' + b(t) V' + c(t) V = 0
    /// (all families here have b(t) = 0).
    double ode_c() const {
        switch (tag) {
            case FamilyTag::KleinGordonReal:
                return mass * mass;
            case FamilyTag::KleinGordonImag:
                return -mass * mass;
            case FamilyTag::DeSitterKG:
                return mass_sign == MassSign::Large ? curved_mass * curved_mass
                                                    : -curved_mass * curved_mass;
            default:
                return 0.0;
        }
    }

    double tricomi_gamma() const { return k / (2.0 * k + 2.0); }
    double tricomi_ck() const {
        return std::pow(k + 1.0, -k / (k + 1.0)) * std::pow(2.0, -1.0 / (k + 1.0));
    }

    std::string name() const {
        switch (tag) {
            case FamilyTag::KleinGordonReal: return "klein-gordon";
            case FamilyTag::KleinGordonImag: return "klein-gordon-imag";
            case FamilyTag::Tricomi: return "tricomi";
            case FamilyTag::DeSitterWave: return "desitter";
            case FamilyTag::AntiDeSitterWave: return "anti-desitter";
            case FamilyTag::EinsteinDeSitter: return "edes";
            case FamilyTag::DeSitterKG: return "desitter-kg";
        }
        return "unknown";
    }
};

/// Distance function as a free operation.
inline double phi(const OperatorFamily& fam, double t) { return fam.phi(t); }

namespace detail {

struct ConeGeometry {
    double inside;   // (S - r)(S + r),  S = |phi(t) - phi(b)|
    double outside;  // (A - r)(A + r),  A = phi(t) + phi(b)
    double zeta;     // argument of the hypergeometric factor
    double one_minus_zeta;
};

inline ConeGeometry cone_geometry(double phi_t, double phi_b, double r) {
    const double S = std::abs(phi_t - phi_b);
    const double A = phi_t + phi_b;
    if (r < 0.0 || r >= S)
        throw ConeBoundary("kernel: r outside the open cone 0 <= r < |phi(t)-phi(b)|");
    ConeGeometry g;
    g.inside = (S - r) * (S + r);
    g.outside = (A - r) * (A + r);
    g.one_minus_zeta = 4.0 * phi_t * phi_b / g.outside;
    g.zeta = g.inside / g.outside;
    if (g.zeta > 1.0) g.zeta = 1.0;
    return g;
}

// F(gamma, gamma; 1; zeta) with the boundary limit when zeta rounds to 1
// (possible only when c - 2 gamma > 0, i.e. away from the logarithmic case).
inline double hyper_gg(double gamma, const ConeGeometry& g, double tol) {
    if (g.one_minus_zeta < 4.0 * specfun::detail::kEps)
        return specfun::gauss_2f1_limit_one(gamma, gamma, 1.0);
    if (g.zeta >= 1.0)
        return specfun::gauss_2f1_limit_one(gamma, gamma, 1.0);
    return specfun::gauss_2f1_real(gamma, gamma, 1.0, g.zeta, tol);
}

inline constexpr double kKernelTol = 1e-11;

} // namespace detail

/// Transform kernel K(t; r, b) for the family, on the open cone
/// 0 <= r < |phi(t) - phi(b)|. Real families return a zero imaginary part.
inline Complex kernel(const OperatorFamily& fam, double t, double r, double b) {
    using detail::kKernelTol;
    if (t == b) throw DomainError("kernel: t and b must differ");
    switch (fam.tag) {
        case FamilyTag::KleinGordonReal: {
            const double S = std::abs(t - b);
            if (r < 0.0 || r > S) throw ConeBoundary("kernel: r outside the cone");
            const double arg = std::sqrt((S - r) * (S + r));
            return Complex(specfun::bessel_j0(fam.mass * arg), 0.0);
        }
        case FamilyTag::KleinGordonImag: {
            const double S = std::abs(t - b);
            if (r < 0.0 || r > S) throw ConeBoundary("kernel: r outside the cone");
            const double arg = std::sqrt((S - r) * (S + r));
            return Complex(specfun::bessel_i0(fam.mass * arg), 0.0);
        }
        case FamilyTag::Tricomi: {
            const auto g = detail::cone_geometry(fam.phi(t), fam.phi(b), r);
            const double gamma = fam.tricomi_gamma();
            const double F = detail::hyper_gg(gamma, g, kKernelTol);
            return Complex(fam.tricomi_ck() * std::pow(g.outside, -gamma) * F, 0.0);
        }
        case FamilyTag::DeSitterWave: {
            const auto g = detail::cone_geometry(fam.phi(t), fam.phi(b), r);
            const double F =
                specfun::gauss_2f1_real(0.5, 0.5, 1.0, g.zeta, kKernelTol);
            return Complex(F / std::sqrt(g.outside), 0.0);
        }
        case FamilyTag::AntiDeSitterWave: {
            const auto g = detail::cone_geometry(fam.phi(t), fam.phi(b), r);
            const double F =
                specfun::gauss_2f1_real(0.5, 0.5, 1.0, g.zeta, kKernelTol);
            return Complex(F / std::sqrt(g.outside), 0.0);
        }
        case FamilyTag::EinsteinDeSitter: {
            // polynomial kernel: 2 c_k sum_n binom-square coefficients
            // (A^2-r^2)^{m-n} (B^2-r^2)^n; for m = 1 this is the
            // (9 t^{2/3} + 9 b^{2/3} - r^2)/18 display
            const int m = fam.m_int;
            const double p = 2.0 * m + 1.0;
            const double pt = p * std::pow(t, 1.0 / p);
            const double pb = p * std::pow(b, 1.0 / p);
            const double S = std::abs(pt - pb);
            if (r < 0.0 || r > S) throw ConeBoundary("kernel: r outside the cone");
            const double inside = (S - r) * (S + r);
            const double A = pt + pb;
            const double outside = (A - r) * (A + r);
            const double kk = -2.0 * m / p;
            const double ck = std::pow(kk + 1.0, -kk / (kk + 1.0)) *
                              std::pow(2.0, -1.0 / (kk + 1.0));
            double sum = 0.0;
            double coef = 1.0; // (m (m-1) ... (m+1-n) / n!)^2
            for (int n = 0; n <= m; ++n) {
                sum += coef * coef * std::pow(outside, m - n) * std::pow(inside, n);
                coef *= static_cast<double>(m - n) / (n + 1.0);
            }
            return Complex(2.0 * ck * sum, 0.0);
        }
        case FamilyTag::DeSitterKG: {
            const auto g = detail::cone_geometry(fam.phi(t), fam.phi(b), r);
            const double M = fam.curved_mass;
            if (M == 0.0) {
                const double F =
                    specfun::gauss_2f1_real(0.5, 0.5, 1.0, g.zeta, kKernelTol);
                return Complex(F / std::sqrt(g.outside), 0.0);
            }
            if (fam.mass_sign == MassSign::Small) {
                const double a = 0.5 - M;
                const double F =
                    specfun::gauss_2f1_real(a, a, 1.0, g.zeta, kKernelTol);
                return Complex(std::pow(4.0 * std::exp(-b - t), -M) *
                                   std::pow(g.outside, -0.5 + M) * F,
                               0.0);
            }
            const Complex a(0.5, M);
            const Complex F = specfun::gauss_2f1_complex(a, a, 1.0, g.zeta, kKernelTol);
            const double log4e = std::log(4.0) - b - t;   // ln(4 e^{-b-t})
            const Complex phase = std::exp(Complex(0.0, M * log4e));
            const Complex outer =
                std::exp(Complex(-0.5, -M) * std::log(g.outside));
            return phase * outer * F;
        }
    }
    return Complex(0.0, 0.0);
}

namespace detail {

// (F(1/2,1/2;1;z) - F(-1/2,1/2;1;z)) / z, analytic on [0,1); series for small
// z where the direct difference would cancel.
inline double hyper_half_diff_ratio(double z, double tol = 1e-12) {
    if (z < 0.25) {
        double sum = 0.0;
        double poch_n = 0.5;    // (1/2)_n starting n = 1
        double poch_nm1 = 1.0;  // (1/2)_{n-1}
        double fact2 = 1.0;     // (n!)^2
        double zp = 1.0;
        for (int n = 1; n < 60; ++n) {
            fact2 *= static_cast<double>(n) * n;
            const double term = poch_n * poch_nm1 * n / fact2 * zp;
            sum += term;
            if (std::abs(term) < tol * std::abs(sum)) break;
            poch_nm1 = poch_n;
            poch_n *= (0.5 + n);
            zp *= z;
        }
        return sum;
    }
    const double fp = specfun::gauss_2f1_real(0.5, 0.5, 1.0, z, tol);
    const double fm = specfun::gauss_2f1_real(-0.5, 0.5, 1.0, z, tol);
    return (fp - fm) / z;
}

} // namespace detail

namespace detail {

// K0 through its cancellation-free form, accepting the closed cone
// z in [0, 1 - e^{-t}] (the quadrature layer owns the boundary limit).
inline double kernel_k0_closed(double z, double t) {
    const double et = std::exp(-t);
    const double cone = 1.0 - et;
    const double D = (1.0 + et - z) * (1.0 + et + z);
    const double N = std::max(0.0, (cone - z) * (cone + z));
    const double zeta = std::min(1.0, N / D);
    const double G = hyper_half_diff_ratio(zeta);
    const double Fm = specfun::gauss_2f1_real(-0.5, 0.5, 1.0, zeta, 1e-12);
    return ((et - 1.0) * G / D - 0.5 * Fm) / std::sqrt(D);
}

} // namespace detail

/// de Sitter Cauchy kernel K0(z,t) = -[d/db E(z,t;0,b)]_{b=0}, written in the
/// cancellation-free form
///   K0 = [ (e^{-t}-1) G(zeta)/D - F(-1/2,1/2;1;zeta)/2 ] / sqrt(D),
/// G = (F(1/2,1/2;1;.) - F(-1/2,1/2;1;.))/zeta,  D = (1+e^{-t})^2 - z^2;
/// finite up to the cone boundary z -> 1 - e^{-t}.
inline double kernel_k0_desitter(double z, double t) {
    if (!(t > 0.0)) throw DomainError("kernel_k0_desitter: t must be positive");
    const double cone = 1.0 - std::exp(-t);
    if (z < 0.0 || z >= cone)
        throw ConeBoundary("kernel_k0_desitter: z outside [0, 1 - e^{-t})");
    return detail::kernel_k0_closed(z, t);
}

/// de Sitter Cauchy kernel K1(z,t) = E(z,t;0,0); finite on the closed cone.
inline double kernel_k1_desitter(double z, double t) {
    if (!(t > 0.0)) throw DomainError("kernel_k1_desitter: t must be positive");
    const double et = std::exp(-t);
    const double cone = 1.0 - et;
    if (z < 0.0 || z > cone)
        throw ConeBoundary("kernel_k1_desitter: z outside [0, 1 - e^{-t}]");
    const double D = (1.0 + et - z) * (1.0 + et + z);
    const double N = std::max(0.0, (cone - z) * (cone + z));
    const double F = specfun::gauss_2f1_real(0.5, 0.5, 1.0, N / D, 1e-12);
    return F / std::sqrt(D);
}

} // namespace hyperfund::kernels

#endif
