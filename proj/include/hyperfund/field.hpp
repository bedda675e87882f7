#ifndef HYPERFUND_FIELD_HPP
#define HYPERFUND_FIELD_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "hyperfund/errors.hpp"
#include "hyperfund/kernels.hpp"
#include "hyperfund/quadrature.hpp"

namespace hyperfund {

struct Grid {
    double x_min = 0.0, x_max = 1.0;
    int nx = 2;
    double t_min = 0.0, t_max = 1.0;
    int nt = 2;

    std::vector<double> xs() const {
        if (nx < 2) throw ConfigError("grid: nx must be >= 2");
        std::vector<double> v(nx);
        for (int i = 0; i < nx; ++i)
            v[i] = x_min + (x_max - x_min) * i / (nx - 1);
        return v;
    }
    std::vector<double> ts() const {
        if (nt < 2) throw ConfigError("grid: nt must be >= 2");
        std::vector<double> v(nt);
        for (int i = 0; i < nt; ++i)
            v[i] = t_min + (t_max - t_min) * i / (nt - 1);
        return v;
    }
};

enum class Provenance { Transform, Oracle, ClosedForm };

/// Solution values on a rectangular (x,t) grid plus provenance metadata.
/// Complex-kernel families carry the imaginary parts alongside so that the
/// realness of the assembled solution is a checked property.
struct SolutionField {
    kernels::OperatorFamily family;
    std::vector<double> grid_x;
    std::vector<double> grid_t;
    std::vector<double> values;      // row-major [it][ix]
    std::vector<double> values_imag; // empty unless the kernel is complex
    quad::QuadratureSpec quad;
    Provenance provenance = Provenance::Transform;
    bool edes_weighted = false; // field is the weighted-data psi, not u
    // optional re-evaluation hook (same path that filled `values`)
    std::function<double(double, double)> evaluator;

    std::size_t index(int it, int ix) const {
        return static_cast<std::size_t>(it) * grid_x.size() + ix;
    }
    double at(int it, int ix) const { return values[index(it, ix)]; }
    double& at(int it, int ix) { return values[index(it, ix)]; }

    double max_abs_imag() const {
        double m = 0.0;
        for (double v : values_imag) m = std::max(m, std::abs(v));
        return m;
    }
};

} // namespace hyperfund

#endif
