#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "hyperfund/specfun.hpp"
#include "oracles.hpp"

using namespace hyperfund;
using specfun::Complex;
using Catch::Approx;

namespace {
double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}
} // namespace

TEST_CASE("gauss_2f1 trivial values") {
    CHECK(specfun::gauss_2f1_real(0.5, 0.5, 1.0, 0.0) == Approx(1.0).margin(0));
    // F(-1,-1;1;z) = 1 + z
    CHECK(specfun::gauss_2f1_real(-1.0, -1.0, 1.0, 0.3) ==
          Approx(1.3).epsilon(1e-15));
}

TEST_CASE("gauss_2f1 matches the extended-precision series oracle") {
    const double want = 1.180340599016096226; // F(1/2,1/2;1;0.5)
    CHECK(rel_err(specfun::gauss_2f1_real(0.5, 0.5, 1.0, 0.5, 1e-14), want) < 1e-13);
    CHECK(std::abs(specfun::gauss_2f1_real(0.5, 0.5, 1.0, 0.5, 1e-14) -
                   (double)oracles::hyp2f1_series_real(0.5L, 0.5L, 1.0L, 0.5L)) <
          1e-12);

    // complex parameters through the connection formula
    const Complex got =
        specfun::gauss_2f1_complex(Complex(0.5, 1.0), Complex(0.5, 1.0), 1.0, 0.9);
    const auto want_c =
        oracles::hyp2f1_series(oracles::cld(0.5L, 1.0L),
                               oracles::cld(0.5L, 1.0L), oracles::cld(1.0L), 0.9L);
    CHECK(std::abs(got - Complex((double)want_c.real(), (double)want_c.imag())) <
          1e-12);
    CHECK(got.real() == Approx(0.35369375243284857519).margin(1e-12));
    CHECK(got.imag() == Approx(-0.39380515174203159195).margin(1e-12));
}

TEST_CASE("gauss_2f1 pinned near-one values") {
    CHECK(rel_err(specfun::gauss_2f1_real(0.25, 0.25, 1.0, 0.8),
                  1.08246693115861563) < 1e-13);
    CHECK(rel_err(specfun::gauss_2f1_real(0.5, 0.5, 1.0, 0.99),
                  2.3527158167797426011) < 1e-13);
    CHECK(rel_err(specfun::gauss_2f1_real(-0.5, 0.5, 1.0, 0.97),
                  0.66205073385613681715) < 1e-13);
    // polynomial case stays on the terminating series for any z
    CHECK(rel_err(specfun::gauss_2f1_real(-1.5, -1.5, 1.0, 0.9),
                  3.1422374238331731126) < 1e-13);
}

TEST_CASE("gauss_2f1 domain errors") {
    CHECK_THROWS_AS(specfun::gauss_2f1({Complex(0.5), Complex(0.5), 1.0, 1.0}, 1e-10),
                    DomainError);
    CHECK_THROWS_AS(specfun::gauss_2f1({Complex(0.5), Complex(0.5), 1.0, -0.1}, 1e-10),
                    DomainError);
    CHECK_THROWS_AS(specfun::gauss_2f1({Complex(0.5), Complex(0.5), -2.0, 0.3}, 1e-10),
                    DomainError);
}

TEST_CASE("gauss_2f1 est_error contract") {
    const auto r = specfun::gauss_2f1({Complex(0.5), Complex(0.5), 1.0, 0.4}, 1e-10);
    CHECK(r.est_error <= 1e-10);
    CHECK(r.terms_used > 3);
    CHECK(r.value.imag() == 0.0);
}

TEST_CASE("gauss_2f1 random draws against the oracle (real)") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> par(-2.5, 2.5);
    std::uniform_real_distribution<double> cpar(0.5, 3.5);
    std::uniform_real_distribution<double> zpar(0.0, 0.95);
    for (int i = 0; i < 1000; ++i) {
        const double a = par(rng), b = par(rng), c = cpar(rng), z = zpar(rng);
        const auto got = specfun::gauss_2f1({Complex(a), Complex(b), c, z}, 1e-11);
        const long double want = oracles::hyp2f1_series_real(a, b, c, z);
        INFO("a=" << a << " b=" << b << " c=" << c << " z=" << z);
        CHECK(got.value.imag() == 0.0);
        CHECK(std::abs(got.value.real() - (double)want) <=
              1e-10 * std::max(1.0L, std::abs(want)));
    }
}

TEST_CASE("gauss_2f1 random draws against the oracle (complex)") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> mpar(0.05, 2.5);
    std::uniform_real_distribution<double> zpar(0.0, 0.95);
    for (int i = 0; i < 300; ++i) {
        const double M = mpar(rng), z = zpar(rng);
        const Complex a(0.5, M);
        const auto got = specfun::gauss_2f1({a, a, 1.0, z}, 1e-11);
        const auto want = oracles::hyp2f1_series(
            oracles::cld(0.5L, (long double)M), oracles::cld(0.5L, (long double)M),
            oracles::cld(1.0L), (long double)z);
        INFO("M=" << M << " z=" << z);
        CHECK(std::abs(got.value - Complex((double)want.real(), (double)want.imag())) <=
              1e-10 * (double)std::max(1.0L, std::abs(want)));
    }
}

TEST_CASE("gauss_2f1 symmetric in a and b") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> par(-2.0, 2.0);
    std::uniform_real_distribution<double> cpar(0.5, 3.0);
    std::uniform_real_distribution<double> zpar(0.0, 0.93);
    for (int i = 0; i < 1000; ++i) {
        const double a = par(rng), b = par(rng), c = cpar(rng), z = zpar(rng);
        const auto ab = specfun::gauss_2f1({Complex(a), Complex(b), c, z}, 1e-11);
        const auto ba = specfun::gauss_2f1({Complex(b), Complex(a), c, z}, 1e-11);
        CHECK(ab.value == ba.value); // canonical ordering makes this exact
    }
}

TEST_CASE("near-one continuation agrees with the raw series on the overlap") {
    // all in-scope parameter sets, z in [0.5, 0.9]
    const double gamma_sets[][3] = {
        {1.0 / 6, 1.0 / 6, 1.0},   // Tricomi k = 1/2
        {0.25, 0.25, 1.0},         // Tricomi k = 1
        {1.0 / 3, 1.0 / 3, 1.0},   // Tricomi k = 2
        {0.5, 0.5, 1.0},           // wave kernels (logarithmic case)
        {-0.5, 0.5, 1.0},          // K0 second factor (m = 1)
        {-0.5, -0.5, 1.0},         // small curved mass M = 1 (m = 2)
        {-1.5, -1.5, 1.0},         // small curved mass M = 2 (m = 4)
    };
    for (const auto& s : gamma_sets) {
        for (double z = 0.5; z <= 0.9001; z += 0.05) {
            const specfun::HypergeometricParams p{Complex(s[0]), Complex(s[1]),
                                                  s[2], z};
            const auto direct = specfun::gauss_2f1_series(p, 1e-13, 100000);
            const auto cont = specfun::gauss_2f1_near_one(p, 1e-13);
            INFO("a=" << s[0] << " b=" << s[1] << " z=" << z);
            CHECK(std::abs(direct.value - cont.value) <=
                  1e-9 * std::max(1.0, std::abs(direct.value)));
        }
    }
    // complex in-scope set
    for (double z = 0.5; z <= 0.9001; z += 0.1) {
        const specfun::HypergeometricParams p{Complex(0.5, 1.0), Complex(0.5, 1.0),
                                              1.0, z};
        const auto direct = specfun::gauss_2f1_series(p, 1e-13, 100000);
        const auto cont = specfun::gauss_2f1_near_one(p, 1e-13);
        CHECK(std::abs(direct.value - cont.value) <=
              1e-9 * std::max(1.0, std::abs(direct.value)));
    }
}

TEST_CASE("gauss_2f1 continuous across the evaluation-path switch") {
    // series below z = 0.5, connection formulas above
    const double sets[][2] = {{0.25, 0.25}, {0.5, 0.5},  {-0.5, 0.5},
                              {-0.5, -0.5}, {1.0 / 6, 1.0 / 6}};
    for (const auto& s : sets) {
        const double below =
            specfun::gauss_2f1_real(s[0], s[1], 1.0, 0.5 - 1e-9, 1e-13);
        const double above =
            specfun::gauss_2f1_real(s[0], s[1], 1.0, 0.5 + 1e-9, 1e-13);
        INFO("a=" << s[0] << " b=" << s[1]);
        CHECK(std::abs(above - below) < 1e-8); // slope ~ O(1) across the gap
    }
    const Complex a(0.5, 1.0);
    CHECK(std::abs(specfun::gauss_2f1_complex(a, a, 1.0, 0.5 - 1e-9, 1e-13) -
                   specfun::gauss_2f1_complex(a, a, 1.0, 0.5 + 1e-9, 1e-13)) <
          1e-8);
}

TEST_CASE("bessel J0 and I0 basics") {
    CHECK(specfun::bessel_j0(0.0) == 1.0);
    CHECK(specfun::bessel_i0(0.0) == 1.0);
    CHECK(specfun::bessel_i0(2.0) > specfun::bessel_i0(1.0));
    CHECK(std::abs(specfun::bessel_i0(1.0) - 1.2660658777520083356) < 1e-13);
}

TEST_CASE("bessel pinned values across both evaluation regimes") {
    const double pins[][3] = {
        {0.5, 0.93846980724081290423, 1.0634833707413235193},
        {1.0, 0.76519768655796655145, 1.2660658777520083356},
        {2.0, 0.22389077914123566805, 2.2795853023360672674},
        {5.0, -0.17759677131433830435, 27.239871823604446895},
        {10.0, -0.2459357644513483352, 2815.7166284662544715},
        {17.5, -0.10311039822868592217, 3825965.2494124127879},
        {18.5, 0.077164821422554699014, 10110921.506235734782},
        {30.0, -0.086367983581040211336, 781672297823.97748972},
        {50.0, 0.055812327669251815005, 2.9325537838493363267e+20},
    };
    for (const auto& p : pins) {
        CHECK(std::abs(specfun::bessel_j0(p[0]) - p[1]) < 1e-12);
        CHECK(std::abs(specfun::bessel_i0(p[0]) - p[2]) <
              1e-12 * std::abs(p[2]));
    }
}

TEST_CASE("bessel J0 against the integral-representation oracle") {
    for (double x = 0.0; x <= 50.0; x += 0.37) {
        const double want = (double)oracles::bessel_j0_integral(x);
        CHECK(std::abs(specfun::bessel_j0(x) - want) < 1e-12);
    }
    // first positive root (root of the oracle, then evaluated)
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (oracles::bessel_j0_integral(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    CHECK(root == Approx(2.4048255576957727686).margin(1e-12));
    CHECK(std::abs(specfun::bessel_j0(root)) < 1e-12);
}

TEST_CASE("bessel I0 against its oracle on [0, 30]") {
    for (double x = 0.0; x <= 30.0; x += 0.61) {
        const double want = (double)oracles::bessel_i0_integral(x);
        CHECK(std::abs(specfun::bessel_i0(x) - want) <
              1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("J0 and I0 satisfy their ODEs under finite differences") {
    // x y'' + y' + x y = 0 for J0;  x y'' + y' - x y = 0 for I0
    const double h = 1e-3;
    for (double x = 0.5; x <= 20.0; x += 0.83) {
        const double j2 = (specfun::bessel_j0(x + h) - 2 * specfun::bessel_j0(x) +
                           specfun::bessel_j0(x - h)) /
                          (h * h);
        const double j1 =
            (specfun::bessel_j0(x + h) - specfun::bessel_j0(x - h)) / (2 * h);
        CHECK(std::abs(x * j2 + j1 + x * specfun::bessel_j0(x)) < 5e-5);
    }
    for (double x = 0.5; x <= 10.0; x += 0.83) {
        const double i2 = (specfun::bessel_i0(x + h) - 2 * specfun::bessel_i0(x) +
                           specfun::bessel_i0(x - h)) /
                          (h * h);
        const double i1 =
            (specfun::bessel_i0(x + h) - specfun::bessel_i0(x - h)) / (2 * h);
        CHECK(std::abs(x * i2 + i1 - x * specfun::bessel_i0(x)) <
              5e-5 * specfun::bessel_i0(x));
    }
}

TEST_CASE("ln_gamma_complex pinned against high-precision references") {
    const double pins[][4] = {
        {1.0, 0.0, 0.0, 0.0},
        {0.5, 0.0, 0.57236494292470008707, 0.0},
        {-0.5, 0.0, 1.2655121234846453965, -3.1415926535897932385},
        {10.0, 0.0, 12.801827480081469611, 0.0},
        {-10.3, 0.0, -14.457515440024205021, -34.557519189487725623},
        {0.3, 0.2, 0.88940835057326672773, -0.62026100688248288415},
        {5.0, 3.0, 2.2442467170202177392, 4.7140895389049293906},
        {-4.2, 1.5, -6.1234803527249343826, -12.416945051998463956},
        {30.0, 40.0, 49.232808494070298819, 143.83479582266482462},
        {-20.0, -5.0, -55.601966734081335041, 49.251344061948089037},
        {49.0, 0.0, 140.6739236482342594, 0.0},
        {0.001, 0.0, 6.9071788853838536825, 0.0},
    };
    for (const auto& p : pins) {
        const Complex got = specfun::ln_gamma_complex(Complex(p[0], p[1]));
        const Complex want(p[2], p[3]);
        INFO("s = " << p[0] << " + " << p[1] << "i");
        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
    CHECK(std::abs(specfun::ln_gamma_complex(Complex(1.0, 0.0))) < 1e-14);
    CHECK(specfun::ln_gamma_complex(Complex(0.5, 0.0)).real() ==
          Approx(std::log(std::sqrt(M_PI))).epsilon(1e-13));
}

TEST_CASE("ln_gamma_complex poles and reflection self-check") {
    CHECK_THROWS_AS(specfun::ln_gamma_complex(Complex(0.0, 0.0)), PoleError);
    CHECK_THROWS_AS(specfun::ln_gamma_complex(Complex(-3.0, 0.0)), PoleError);
    // Gamma(s) Gamma(1-s) = pi / sin(pi s) at s = 0.3 + 0.2i
    const Complex s(0.3, 0.2);
    const Complex lhs = std::exp(specfun::ln_gamma_complex(s) +
                                 specfun::ln_gamma_complex(Complex(1.0) - s));
    const Complex rhs = M_PI / std::sin(M_PI * s);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("digamma pinned values and poles") {
    const double pins[][2] = {
        {0.5, -1.9635100260214234794}, {1.0, -0.57721566490153286061},
        {2.5, 0.70315664064524318723}, {-1.7, -1.4857174995110573587},
        {12.1, 2.4513143481743372605}, {0.01, -100.5608854578686745},
        {-0.3, 2.1133097796353987186},
    };
    for (const auto& p : pins)
        CHECK(std::abs(specfun::digamma(p[0]) - p[1]) <=
              1e-12 * std::max(1.0, std::abs(p[1])));
    CHECK_THROWS_AS(specfun::digamma(0.0), PoleError);
    CHECK_THROWS_AS(specfun::digamma(-4.0), PoleError);
}
