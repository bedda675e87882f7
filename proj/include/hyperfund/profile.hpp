#ifndef HYPERFUND_PROFILE_HPP
#define HYPERFUND_PROFILE_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "hyperfund/errors.hpp"

namespace hyperfund {

/// One-dimensional spatial datum with declared singular points.
///
/// Distributional data (Heaviside, |x|^{-a}) are evaluated in closed form;
/// the declared singular points feed the quadrature split machinery instead
/// of any mollification.
class Profile {
public:
    enum class Kind { Smooth, Heaviside, PowerLaw, Polynomial, Gaussian, Zero };

    static Profile zero() { return Profile(Kind::Zero); }

    static Profile smooth(std::function<double(double)> f,
                          std::vector<double> singular = {}) {
        Profile p(Kind::Smooth);
        p.fn_ = std::move(f);
        p.singular_ = std::move(singular);
        return p;
    }

    static Profile heaviside() {
        Profile p(Kind::Heaviside);
        p.singular_ = {0.0};
        return p;
    }

    /// C |x|^{-a} with a in (0,1); unbounded at the origin.
    static Profile power_law(double exponent, double coefficient = 1.0) {
        if (!(exponent > 0.0 && exponent < 1.0))
            throw DomainError("Profile::power_law: exponent must lie in (0,1)");
        Profile p(Kind::PowerLaw);
        p.a_ = exponent;
        p.coef_ = coefficient;
        p.singular_ = {0.0};
        return p;
    }

    /// Ascending coefficients: c0 + c1 x + c2 x^2 + ...
    static Profile polynomial(std::vector<double> coeffs) {
        Profile p(Kind::Polynomial);
        p.poly_ = std::move(coeffs);
        return p;
    }

    static Profile gaussian(double center, double width) {
        if (!(width > 0.0))
            throw DomainError("Profile::gaussian: width must be positive");
        Profile p(Kind::Gaussian);
        p.center_ = center;
        p.width_ = width;
        return p;
    }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::Smooth: return fn_(x);
            case Kind::Heaviside:
                return x > 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0);
            case Kind::PowerLaw:
                if (x == 0.0)
                    throw SingularEvaluation("power-law profile evaluated at its pole");
                return coef_ * std::pow(std::abs(x), -a_);
            case Kind::Polynomial: {
                double v = 0.0;
                for (auto it = poly_.rbegin(); it != poly_.rend(); ++it)
                    v = v * x + *it;
                return v;
            }
            case Kind::Gaussian: {
                const double u = (x - center_) / width_;
                return std::exp(-0.5 * u * u);
            }
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }
    const std::vector<double>& singular_points() const { return singular_; }
    bool unbounded() const {
        return kind_ == Kind::PowerLaw || unbounded_override_;
    }
    bool is_zero() const { return kind_ == Kind::Zero; }
    double power_law_exponent() const { return a_; }
    double power_law_coefficient() const { return coef_; }

    /// Profile translated by h: x -> p(x - h).
    Profile shifted(double h) const {
        Profile self = *this;
        std::vector<double> sp;
        for (double s : self.singular_) sp.push_back(s + h);
        Profile p(Kind::Smooth);
        p.fn_ = [self, h](double x) { return self(x - h); };
        p.singular_ = std::move(sp);
        p.unbounded_override_ = self.unbounded();
        return p;
    }

private:
    explicit Profile(Kind k) : kind_(k) {}

    Kind kind_;
    std::function<double(double)> fn_;
    std::vector<double> singular_;
    std::vector<double> poly_;
    double a_ = 0.0, coef_ = 1.0;
    double center_ = 0.0, width_ = 1.0;
    bool unbounded_override_ = false;
};

/// d'Alembert first-datum value 0.5 [p(x+s) + p(x-s)].
inline double dalembert_first_datum(const Profile& p, double x, double s) {
    return 0.5 * (p(x + s) + p(x - s));
}

} // namespace hyperfund

#endif
