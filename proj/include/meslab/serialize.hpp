#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meslab/arith.hpp"
#include "meslab/geometry.hpp"
#include "meslab/hilbert.hpp"
#include "meslab/mes.hpp"
#include "meslab/mub.hpp"
#include "meslab/protocols.hpp"
#include "meslab/report.hpp"

namespace meslab::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Core types.
// ---------------------------------------------------------------------------

inline json to_json(const BasisLabel& b) {
    return b.is_cb() ? json("CB") : json(b.index().value());
}

inline json to_json(const Point& p) {
    return json{{"m", p.m.value()}, {"b", to_json(p.b)}};
}

inline json to_json(const Line& l) {
    return json{{"m_dd", l.m_dd.value()}, {"m0", l.m0.value()}};
}

inline json to_json(const Fraction& f) { return json(f.to_string()); }

inline json to_json(const Ket& k) {
    json amps = json::array();
    for (const auto& a : k.amps()) amps.push_back(a.coeffs());
    return json{{"dim", k.dim().value()}, {"scale", k.scale()}, {"amps", std::move(amps)}};
}

inline json to_json(const PairKet& k) {
    json amps = json::array();
    for (const auto& a : k.amps()) amps.push_back(a.coeffs());
    return json{{"dim", k.dim().value()},
                {"labeling", to_string(k.labeling())},
                {"scale", k.scale()},
                {"amps", std::move(amps)}};
}

inline Ket ket_from_json(const json& j) {
    Dimension d(j.at("dim").get<std::int64_t>());
    int scale = j.at("scale").get<int>();
    std::vector<CycNum> amps;
    for (const auto& row : j.at("amps"))
        amps.emplace_back(d, row.get<std::vector<std::int64_t>>(), scale);
    return Ket(d, std::move(amps));
}

inline PairKet pairket_from_json(const json& j) {
    Dimension d(j.at("dim").get<std::int64_t>());
    int scale = j.at("scale").get<int>();
    PairLabeling labeling = j.at("labeling").get<std::string>() == "particle"
                                ? PairLabeling::particle
                                : PairLabeling::collective;
    std::vector<CycNum> amps;
    for (const auto& row : j.at("amps"))
        amps.emplace_back(d, row.get<std::vector<std::int64_t>>(), scale);
    return PairKet(d, std::move(amps), labeling);
}

inline json to_json(const CheckReport& r) {
    return json{{"name", r.name()},
                {"checks", r.checks()},
                {"passed", r.passed()},
                {"violations", r.violations()}};
}

inline json to_json(const VerdictMass& m) {
    return json{{"correct", m.correct.to_string()},
                {"undetermined", m.undetermined.to_string()},
                {"error", m.error.to_string()}};
}

// ---------------------------------------------------------------------------
// Protocol reports.
// ---------------------------------------------------------------------------

inline json to_json(const SimReport& r) {
    json per_basis = json::array();
    for (const auto& pb : r.per_basis) {
        per_basis.push_back(json{{"basis", to_json(pb.basis)},
                                 {"trials", pb.trials},
                                 {"correct", pb.correct},
                                 {"undetermined", pb.undetermined},
                                 {"error", pb.errors}});
    }
    json empirical{{"correct", r.correct},
                   {"undetermined", r.undetermined},
                   {"error", r.errors},
                   {"success_rate", static_cast<double>(r.correct) / static_cast<double>(r.trials)},
                   {"undetermined_rate",
                    static_cast<double>(r.undetermined) / static_cast<double>(r.trials)},
                   {"per_basis", std::move(per_basis)}};
    json out{{"d", r.d.value()},
             {"protocol", to_string(r.protocol)},
             {"seed", r.seed},
             {"trials", r.trials},
             {"basis_policy", r.basis_policy}};
    if (r.prepared) out["prepared"] = to_json(*r.prepared);
    out["exact"] = to_json(r.exact);
    out["empirical"] = std::move(empirical);
    return out;
}

inline json to_json(const EnumReport& r, bool include_branches = false) {
    json per_basis = json::array();
    for (const auto& [b, mass] : r.per_basis) {
        json entry{{"basis", to_json(b)}};
        entry.update(to_json(mass));
        per_basis.push_back(std::move(entry));
    }
    json out{{"d", r.d.value()}, {"protocol", to_string(r.protocol)}};
    if (r.prepared) out["prepared"] = to_json(*r.prepared);
    out["per_basis"] = std::move(per_basis);
    out["uniform"] = to_json(r.uniform);
    out["passed"] = r.passed();
    out["violations"] = r.violations;
    if (include_branches) {
        json branches = json::array();
        for (const auto& br : r.branches) {
            json entry{{"basis", to_json(br.king.basis)},
                       {"king_m", br.king.outcome.value()},
                       {"alice", json{{"m_dd", br.alice.m_dd.value()}, {"m0", br.alice.m0.value()}}},
                       {"probability", br.probability.to_string()},
                       {"verdict", to_string(br.verdict)}};
            if (br.deduced_m) entry["deduced_m"] = br.deduced_m->value();
            if (br.deduced_b) entry["deduced_b"] = to_json(*br.deduced_b);
            branches.push_back(std::move(entry));
        }
        out["branches"] = std::move(branches);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tables for the CLI subcommands.
// ---------------------------------------------------------------------------

/// Exponent table of the d standard bases: amps of |m;b> are
/// omega^{exponents[n]} / sqrt(d).
inline json mub_table_json(Dimension d) {
    json bases = json::array();
    ModInt h = half(d);
    for (std::int64_t b = 0; b < d.value(); ++b) {
        json states = json::array();
        for (std::int64_t m = 0; m < d.value(); ++m) {
            std::vector<std::int64_t> exponents;
            for (std::int64_t n = 0; n < d.value(); ++n)
                exponents.push_back(
                    (h * ModInt(b, d) * ModInt(n, d) * ModInt(n - 1, d) - ModInt(n, d) * ModInt(m, d))
                        .value());
            states.push_back(json{{"m", m}, {"exponents", std::move(exponents)}});
        }
        bases.push_back(json{{"b", b}, {"states", std::move(states)}});
    }
    return json{{"d", d.value()}, {"bases", std::move(bases)}};
}

inline std::string mub_table_csv(Dimension d) {
    std::ostringstream os;
    os << "b,m";
    for (std::int64_t n = 0; n < d.value(); ++n) os << ",e" << n;
    os << "\n";
    const json table = mub_table_json(d);
    for (const auto& basis : table.at("bases")) {
        for (const auto& state : basis.at("states")) {
            os << basis.at("b").get<std::int64_t>() << "," << state.at("m").get<std::int64_t>();
            for (const auto& e : state.at("exponents")) os << "," << e.get<std::int64_t>();
            os << "\n";
        }
    }
    return os.str();
}

/// Incidence table: every line with its d+1 points.
inline json geometry_table_json(Dimension d) {
    json lines = json::array();
    for (const auto& j : all_lines(d)) {
        json pts = json::array();
        for (const auto& p : line_points(j)) pts.push_back(to_json(p));
        lines.push_back(json{{"m_dd", j.m_dd.value()}, {"m0", j.m0.value()}, {"points", std::move(pts)}});
    }
    return json{{"d", d.value()},
                {"points", d.value() * (d.value() + 1)},
                {"lines", std::move(lines)}};
}

inline std::string geometry_table_csv(Dimension d) {
    std::ostringstream os;
    os << "m_dd,m0,b,m\n";
    for (const auto& j : all_lines(d))
        for (const auto& p : line_points(j))
            os << j.m_dd.value() << "," << j.m0.value() << "," << p.b.to_string() << ","
               << p.m.value() << "\n";
    return os.str();
}

/// DOT rendering: one cluster per column, one colored clique per line.
inline std::string geometry_dot(Dimension d) {
    static const char* palette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                    "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080",
                                    "#9a6324", "#800000", "#808000"};
    const std::size_t ncolors = sizeof(palette) / sizeof(palette[0]);
    auto node = [](const Point& p) {
        return "\"" + p.b.to_string() + "_" + std::to_string(p.m.value()) + "\"";
    };
    std::ostringstream os;
    os << "graph dapg {\n  node [shape=circle];\n";
    std::size_t cluster = 0;
    for (const auto& b : all_basis_labels(d)) {
        os << "  subgraph cluster_" << cluster++ << " {\n    label=\"b=" << b.to_string() << "\";\n";
        for (std::int64_t m = 0; m < d.value(); ++m)
            os << "    " << node(Point{ModInt(m, d), b}) << ";\n";
        os << "  }\n";
    }
    std::size_t li = 0;
    for (const auto& j : all_lines(d)) {
        const auto pts = line_points(j);
        const char* color = palette[li++ % ncolors];
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = i + 1; k < pts.size(); ++k)
                os << "  " << node(pts[i]) << " -- " << node(pts[k]) << " [color=\"" << color
                   << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

/// Line-state table plus the full point-line overlap probability matrix,
/// d(d+1) rows by d^2 columns.
inline json mes_tables_json(Dimension d) {
    std::vector<PointState> pstates;
    for (const auto& p : all_points(d)) pstates.push_back(point_state(p));
    std::vector<LineState> lstates;
    for (const auto& j : all_lines(d)) lstates.push_back(line_state(j));

    json lines = json::array();
    for (const auto& ls : lstates)
        lines.push_back(json{{"line", to_json(ls.line)}, {"state", to_json(ls.normalized)}});

    json points = json::array();
    for (const auto& ps : pstates) points.push_back(to_json(ps.point));
    json line_labels = json::array();
    for (const auto& ls : lstates) line_labels.push_back(to_json(ls.line));

    json rows = json::array();
    for (const auto& ps : pstates) {
        json row = json::array();
        for (const auto& ls : lstates)
            row.push_back(fraction_from(overlap_point_line(ps, ls).abs2()).to_string());
        rows.push_back(std::move(row));
    }

    return json{{"d", d.value()},
                {"lines", std::move(lines)},
                {"overlap", json{{"points", std::move(points)},
                                 {"lines", std::move(line_labels)},
                                 {"probabilities", std::move(rows)}}}};
}

inline std::string mes_overlap_csv(Dimension d) {
    std::vector<PointState> pstates;
    for (const auto& p : all_points(d)) pstates.push_back(point_state(p));
    std::vector<LineState> lstates;
    for (const auto& j : all_lines(d)) lstates.push_back(line_state(j));
    std::ostringstream os;
    os << "point_b,point_m,line_m_dd,line_m0,probability\n";
    for (const auto& ps : pstates)
        for (const auto& ls : lstates)
            os << ps.point.b.to_string() << "," << ps.point.m.value() << ","
               << ls.line.m_dd.value() << "," << ls.line.m0.value() << ","
               << fraction_from(overlap_point_line(ps, ls).abs2()).to_string() << "\n";
    return os.str();
}

inline std::string sim_report_csv(const SimReport& r) {
    std::ostringstream os;
    os << "basis,trials,correct,undetermined,error\n";
    os << "ALL," << r.trials << "," << r.correct << "," << r.undetermined << "," << r.errors
       << "\n";
    for (const auto& pb : r.per_basis)
        os << pb.basis.to_string() << "," << pb.trials << "," << pb.correct << ","
           << pb.undetermined << "," << pb.errors << "\n";
    return os.str();
}

inline std::string check_reports_csv(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << "suite,checks,passed,violations\n";
    for (const auto& r : reports)
        os << r.name() << "," << r.checks() << "," << (r.passed() ? "true" : "false") << ","
           << r.violations().size() << "\n";
    return os.str();
}

}  // namespace meslab::io
