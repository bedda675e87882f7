#ifndef HYPERFUND_IO_HPP
#define HYPERFUND_IO_HPP

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hyperfund/field.hpp"
#include "hyperfund/tails.hpp"
#include "hyperfund/verify.hpp"

// Serialization of solution fields, residual reports and tail tables.
// CSV files open with a schema comment line so downstream plotting can pin
// the column layout; numbers are written with 17 significant digits for
// byte-reproducible reruns.

namespace hyperfund::io {

inline constexpr const char* kCsvSchemaVersion = "hyperfund-csv-v1";

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_solution_csv(std::ostream& os, const SolutionField& field,
                               const std::string& command) {
    os << "# " << kCsvSchemaVersion << " solution command=" << command
       << " family=" << field.family.name() << "\n";
    const bool complex = !field.values_imag.empty();
    os << (complex ? "x,t,u,u_imag\n" : "x,t,u\n");
    for (std::size_t it = 0; it < field.grid_t.size(); ++it) {
        for (std::size_t ix = 0; ix < field.grid_x.size(); ++ix) {
            const auto idx = field.index(static_cast<int>(it), static_cast<int>(ix));
            os << fmt(field.grid_x[ix]) << ',' << fmt(field.grid_t[it]) << ','
               << fmt(field.values[idx]);
            if (complex) os << ',' << fmt(field.values_imag[idx]);
            os << '\n';
        }
    }
}

inline void write_residual_csv(std::ostream& os,
                               const verify::ResidualReport& report) {
    os << "# " << kCsvSchemaVersion << " residual check=" << report.check
       << " family=" << report.family << "\n";
    os << "u,v,residual\n";
    for (const auto& row : report.per_point)
        os << fmt(row[0]) << ',' << fmt(row[1]) << ',' << fmt(row[2]) << '\n';
}

inline void write_tail_csv(std::ostream& os,
                           const std::vector<tails::TailDecomposition>& rows) {
    os << "# " << kCsvSchemaVersion << " tail\n";
    os << "x,t,u,huygensian,tail,ratio,bound,quotient\n";
    for (const auto& d : rows)
        os << fmt(d.x) << ',' << fmt(d.t) << ',' << fmt(d.u()) << ','
           << fmt(d.huygensian) << ',' << fmt(d.tail) << ',' << fmt(d.ratio)
           << ",nan,nan\n";
}

inline void write_tlin_csv(std::ostream& os,
                           const std::vector<tails::TLinSample>& rows) {
    os << "# " << kCsvSchemaVersion << " tail\n";
    os << "x,t,u,huygensian,tail,ratio,bound,quotient\n";
    for (const auto& s : rows)
        os << fmt(s.x) << ',' << fmt(s.t) << ",nan,nan," << fmt(s.tail)
           << ",nan," << fmt(s.envelope) << ',' << fmt(s.quotient) << '\n';
}

inline nlohmann::json quad_to_json(const quad::QuadratureSpec& spec) {
    return {
        {"rel_tol", spec.rel_tol},
        {"abs_tol", spec.abs_tol},
        {"max_depth", spec.max_depth},
        {"endpoint_mode",
         spec.endpoint_mode == quad::EndpointMode::Plain
             ? "plain"
             : "singular-endpoint-substitution"},
    };
}

inline nlohmann::json residual_to_json(const verify::ResidualReport& report) {
    return {
        {"family", report.family},   {"check", report.check},
        {"max_abs", report.max_abs}, {"l2", report.l2},
        {"tolerance", report.tolerance_used},
        {"verdict", report.verdict()},
        {"nodes", report.nodes},
    };
}

inline nlohmann::json solution_to_json(const SolutionField& field,
                                       const std::string& command) {
    nlohmann::json j;
    j["schema"] = kCsvSchemaVersion;
    j["command"] = command;
    j["family"] = field.family.name();
    j["quad"] = quad_to_json(field.quad);
    j["grid_x"] = field.grid_x;
    j["grid_t"] = field.grid_t;
    j["values"] = field.values;
    if (!field.values_imag.empty()) j["values_imag"] = field.values_imag;
    return j;
}

inline nlohmann::json error_to_json(const std::string& kind,
                                    const std::string& what) {
    return {{"error", kind}, {"message", what}};
}

} // namespace hyperfund::io

#endif
