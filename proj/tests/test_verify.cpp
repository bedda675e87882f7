#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hyperfund/transform.hpp"
#include "hyperfund/verify.hpp"
#include "oracles.hpp"

using namespace hyperfund;
using kernels::MassSign;
using kernels::OperatorFamily;
using verify::ODECoefficients;
using wavecore::SourceFamily;
using Catch::Approx;

namespace {
quad::QuadratureSpec spec8() {
    quad::QuadratureSpec s;
    s.rel_tol = 1e-9;
    s.abs_tol = 1e-11;
    return s;
}
} // namespace

TEST_CASE("ode_pair_solve closed forms") {
    const auto free_pair = verify::ode_pair_solve(ODECoefficients::constant(0, 0), 3.0);
    CHECK(free_pair.v1(2.7) == Approx(1.0).margin(1e-10));
    CHECK(free_pair.v2(2.7) == Approx(2.7).margin(1e-10));

    const auto osc = verify::ode_pair_solve(ODECoefficients::constant(0, 1), 3.0);
    CHECK(osc.v1(M_PI / 2) == Approx(0.0).margin(1e-10));
    CHECK(osc.v2(M_PI / 2) == Approx(1.0).margin(1e-10));
    CHECK(osc.v1(1.3) == Approx(std::cos(1.3)).margin(1e-10));

    const auto hyp = verify::ode_pair_solve(ODECoefficients::constant(0, -1), 3.0);
    CHECK(hyp.v2(1.0) == Approx(1.1752011936438014).margin(1e-9));

    // damped oscillator: V'' + V' + V = 0 sanity via the Wronskian identity
    // W(t) = exp(-int b) = e^{-t}
    const auto damped =
        verify::ode_pair_solve(ODECoefficients::constant(1.0, 1.0), 2.0);
    CHECK(damped.wronskian(1.4) == Approx(std::exp(-1.4)).margin(1e-9));
}

TEST_CASE("ode_pair dense output is smooth between steps") {
    const auto osc = verify::ode_pair_solve(ODECoefficients::constant(0, 4.0), 2.0);
    for (double t = 0.0; t <= 2.0; t += 0.0137) {
        CHECK(osc.v1(t) == Approx(std::cos(2 * t)).margin(1e-9));
        CHECK(osc.v2(t) == Approx(0.5 * std::sin(2 * t)).margin(1e-9));
    }
    CHECK_THROWS_AS(osc.v1(2.5), DomainError);
}

TEST_CASE("Wronskian identity residuals at pinned points") {
    // Tricomi: V pair {1, t}, ratio t - b
    const auto tric = OperatorFamily::tricomi(1.0);
    const auto pair0 = verify::ode_pair_solve(ODECoefficients::for_family(tric), 3.0);
    auto rep = verify::identity_residual(tric, pair0, 2.0, 1.0, spec8());
    CHECK(rep.max_abs < 1e-6);
    CHECK(rep.pass());
    CHECK(verify::kernel_line_integral(tric, 2.0, 1.0, spec8()).real() ==
          Approx(1.0).margin(1e-8));

    const auto ds = OperatorFamily::de_sitter();
    CHECK(verify::kernel_line_integral(ds, 1.0, 0.0, spec8()).real() ==
          Approx(1.0).margin(1e-8));

    // flat Klein-Gordon line integral: int_0^s J0(sqrt(s^2-r^2)) dr = sin(s)
    const auto kg = OperatorFamily::klein_gordon(1.0);
    CHECK(verify::kernel_line_integral(kg, 1.0, 0.0, spec8()).real() ==
          Approx(std::sin(1.0)).margin(1e-9));
    CHECK(verify::kernel_line_integral(kg, 2.4, 0.9, spec8()).real() ==
          Approx(std::sin(1.5)).margin(1e-9));

    const auto large = OperatorFamily::de_sitter_kg(1.0, MassSign::Large);
    const auto lhs_large = verify::kernel_line_integral(large, 1.0, 0.0, spec8());
    CHECK(lhs_large.real() == Approx(std::sin(1.0)).margin(1e-8));
    CHECK(std::abs(lhs_large.imag()) < 1e-8);

    const auto small = OperatorFamily::de_sitter_kg(1.0, MassSign::Small);
    CHECK(verify::kernel_line_integral(small, 1.0, 0.0, spec8()).real() ==
          Approx(std::sinh(1.0)).margin(1e-8));
}

TEST_CASE("identity grid stays under tolerance for two spot families") {
    for (const auto& fam :
         {OperatorFamily::de_sitter(), OperatorFamily::tricomi(0.5)}) {
        const auto rep = verify::identity_residual_grid(fam, 3.0, 6, spec8(), 1e-6);
        INFO(fam.name() << " max " << rep.max_abs);
        CHECK(rep.pass());
        CHECK(rep.nodes > 20);
        CHECK(rep.l2 <= rep.max_abs);
    }
}

TEST_CASE("pde_residual on an exact quadratic field") {
    // u = t^2/2 solves u_tt - e^{-2t} u_xx = 1 for x-independent u
    SolutionField field;
    field.family = OperatorFamily::de_sitter();
    field.grid_x = {-1.0, 0.0, 1.0};
    field.grid_t = {0.2, 0.6, 1.0};
    field.values.assign(9, 0.0);
    field.evaluator = [](double, double t) { return 0.5 * t * t; };
    const auto one = SourceFamily::constant(1.0);
    auto rep = verify::pde_residual(field, one, 0.05, {0.0}, {0.6}, 1e-9);
    CHECK(rep.max_abs < 1e-10);
    CHECK(rep.pass());

    // negative control: a mismatched source shows up at its own magnitude
    const auto wrong = SourceFamily::constant(1.1);
    auto bad = verify::pde_residual(field, wrong, 0.05, {0.0}, {0.6}, 1e-9);
    CHECK(bad.max_abs == Approx(0.1).epsilon(1e-6));
    CHECK(!bad.pass());
}

TEST_CASE("pde_residual of a transform solution shrinks at second order") {
    const auto src = SourceFamily::from_1d(
        [](double x, double t) { return std::exp(-x * x) + 0.2 * t; });
    const auto ds = OperatorFamily::de_sitter();
    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-12;
    Grid grid;
    grid.x_min = -0.5;
    grid.x_max = 0.5;
    grid.nx = 2;
    grid.t_min = 0.0;
    grid.t_max = 1.0;
    grid.nt = 2;
    const auto field = transform::solve_source_problem(ds, src, grid, spec, 0.0, 2);
    const auto r1 = verify::pde_residual(field, src, 0.08, {0.1}, {0.6}, 1.0);
    const auto r2 = verify::pde_residual(field, src, 0.04, {0.1}, {0.6}, 1.0);
    INFO("r(0.08)=" << r1.max_abs << " r(0.04)=" << r2.max_abs);
    CHECK(r1.max_abs / r2.max_abs > 3.5);
    CHECK(r1.max_abs / r2.max_abs < 4.5);
}

TEST_CASE("pde_residual honors the weighted damping flag") {
    // psi = t^2/6 solves psi_tt + 2 psi_t / t = 1 (x-independent)
    SolutionField field;
    field.family = OperatorFamily::einstein_de_sitter(1);
    field.edes_weighted = true;
    field.grid_x = {0.0};
    field.grid_t = {1.0};
    field.values.assign(1, 0.0);
    field.evaluator = [](double, double t) { return t * t / 6.0; };
    const auto one = SourceFamily::constant(1.0);
    auto rep = verify::pde_residual(field, one, 0.05, {0.0}, {1.0}, 1e-8);
    CHECK(rep.max_abs < 1e-9);
}

TEST_CASE("pde_residual works on a stored oracle grid") {
    // the FD field carries no evaluator: the stencil runs on stored nodes
    const auto g = Profile::gaussian(0.0, 0.4);
    const auto zero = Profile::zero();
    wavecore::FdGrid grid;
    grid.x_min = -4.0;
    grid.x_max = 4.0;
    grid.nx = 1601;
    grid.t_end = 1.0;
    const auto ds = OperatorFamily::de_sitter();
    const auto sol = verify::fd_variable_oracle(ds, g, zero, nullptr, grid);
    const auto zero_src = SourceFamily::constant(0.0);
    const auto rep =
        verify::pde_residual(sol, zero_src, 0.01, {0.2, -0.3}, {0.5}, 1e-2);
    // discrete solution satisfies the continuous operator to O(dx^2)
    CHECK(rep.pass());
    CHECK(rep.max_abs < 5e-3);
}

TEST_CASE("pde_residual insufficient grid detection") {
    SolutionField field; // no evaluator, coarse grid
    field.family = OperatorFamily::de_sitter();
    field.grid_x = {0.0, 1.0};
    field.grid_t = {0.0, 1.0};
    field.values.assign(4, 0.0);
    const auto one = SourceFamily::constant(1.0);
    CHECK_THROWS_AS(verify::pde_residual(field, one, 0.05), InsufficientGrid);
}

TEST_CASE("fd_variable_oracle basics") {
    const auto zero = Profile::zero();
    wavecore::FdGrid grid;
    grid.x_min = -2.0;
    grid.x_max = 2.0;
    grid.nx = 201;
    grid.t_end = 1.0;
    const auto ds = OperatorFamily::de_sitter();
    const auto sol = verify::fd_variable_oracle(ds, zero, zero, nullptr, grid);
    for (double v : sol.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(
        verify::fd_variable_oracle(OperatorFamily::einstein_de_sitter(1), zero,
                                   zero, nullptr, grid),
        DomainError);
    wavecore::FdGrid bad = grid;
    bad.dt = 1.0;
    CHECK_THROWS_AS(verify::fd_variable_oracle(ds, zero, zero, nullptr, bad),
                    CflViolation);
}

TEST_CASE("fd_variable_oracle matches the de Sitter Cauchy formula") {
    const auto g = Profile::gaussian(0.0, 0.3);
    const auto zero = Profile::zero();
    wavecore::FdGrid grid;
    grid.x_min = -4.0;
    grid.x_max = 4.0;
    grid.nx = 801;
    grid.t_end = 1.5;
    const auto ds = OperatorFamily::de_sitter();
    const auto sol = verify::fd_variable_oracle(ds, g, zero, nullptr, grid);
    const int last = static_cast<int>(sol.grid_t.size()) - 1;
    const double t = sol.grid_t[last];
    double max_err = 0.0;
    for (int i = 0; i < grid.nx; i += 40) {
        const double x = sol.grid_x[i];
        if (std::abs(x) > 2.0) continue;
        const double want =
            transform::desitter_cauchy_point(g, zero, x, t, spec8());
        max_err = std::max(max_err, std::abs(sol.at(last, i) - want));
    }
    CHECK(max_err < 5e-4); // O(dx^2) at dx = 0.01
}

TEST_CASE("flat Klein-Gordon FD oracle against the spectral solution") {
    const auto g = Profile::gaussian(0.0, 0.35);
    const auto zero = Profile::zero();
    const auto kg = OperatorFamily::klein_gordon(1.0);
    oracles::SpectralKG spectral([&](double x) { return g(x); }, 6.0, 256);
    double errs[2];
    int idx = 0;
    for (int nx : {601, 1201}) {
        wavecore::FdGrid grid;
        grid.x_min = -6.0;
        grid.x_max = 6.0;
        grid.nx = nx;
        grid.t_end = 1.0;
        const auto sol = verify::fd_variable_oracle(kg, g, zero, nullptr, grid);
        const int last = static_cast<int>(sol.grid_t.size()) - 1;
        double err = 0.0;
        for (int i = 0; i < nx; i += 10) {
            const double x = sol.grid_x[i];
            if (std::abs(x) > 3.0) continue;
            err = std::max(err,
                           std::abs(sol.at(last, i) -
                                    spectral.eval(x, sol.grid_t[last], 1.0)));
        }
        errs[idx++] = err;
    }
    CHECK(errs[0] / errs[1] > 3.0); // second-order convergence
    CHECK(errs[1] < 2e-4);
}
