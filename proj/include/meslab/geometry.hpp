#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meslab/arith.hpp"
#include "meslab/mub.hpp"
#include "meslab/report.hpp"

namespace meslab {

/// Point of the dual affine plane: row m in column b. There are d(d+1)
/// points arranged in d rows and d+1 columns (CB column plus b = 0..d-1).
struct Point {
    ModInt m;
    BasisLabel b;

    std::string to_string() const { return "(" + std::to_string(m.value()) + "," + b.to_string() + ")"; }

    friend bool operator==(const Point& x, const Point& y) { return x.m == y.m && x.b == y.b; }
    friend bool operator!=(const Point& x, const Point& y) { return !(x == y); }
};

/// Line named by its two anchor rows: m_dd in the CB column and m0 in
/// column b = 0. There are d^2 lines.
struct Line {
    ModInt m_dd;
    ModInt m0;

    std::string to_string() const {
        return "(" + std::to_string(m_dd.value()) + "," + std::to_string(m0.value()) + ")";
    }

    friend bool operator==(const Line& x, const Line& y) { return x.m_dd == y.m_dd && x.m0 == y.m0; }
    friend bool operator!=(const Line& x, const Line& y) { return !(x == y); }
};

inline std::vector<Point> all_points(Dimension d) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(d.value() * (d.value() + 1)));
    for (const auto& b : all_basis_labels(d))
        for (std::int64_t m = 0; m < d.value(); ++m)
            pts.push_back(Point{ModInt(m, d), b});
    return pts;
}

inline std::vector<Line> all_lines(Dimension d) {
    std::vector<Line> lines;
    lines.reserve(static_cast<std::size_t>(d.value() * d.value()));
    for (std::int64_t mdd = 0; mdd < d.value(); ++mdd)
        for (std::int64_t m0 = 0; m0 < d.value(); ++m0)
            lines.push_back(Line{ModInt(mdd, d), ModInt(m0, d)});
    return lines;
}

/// The d+1 points of line j, one per column:
/// m(CB) = m_dd and m(b) = m0 + (b/2)(2 m_dd - 1) for b = 0..d-1.
inline std::vector<Point> line_points(const Line& j) {
    Dimension d = j.m_dd.dim();
    ModInt h = half(d);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(d.value() + 1));
    pts.push_back(Point{j.m_dd, BasisLabel::cb(d)});
    ModInt slope = 2 * j.m_dd - 1;
    for (std::int64_t b = 0; b < d.value(); ++b)
        pts.push_back(Point{j.m0 + h * ModInt(b, d) * slope, BasisLabel::standard(ModInt(b, d))});
    return pts;
}

/// Row of line j in column b; the single source for this is the point
/// list itself.
inline ModInt line_row_at(const Line& j, const BasisLabel& b) {
    for (const auto& p : line_points(j))
        if (p.b == b) return p.m;
    throw std::logic_error("line_row_at: column not present");  // unreachable
}

inline bool point_on_line(const Point& alpha, const Line& j) {
    const auto pts = line_points(j);
    return std::find(pts.begin(), pts.end(), alpha) != pts.end();
}

/// The d lines through a point. For (m, CB) these are (m_dd = m, m0 = *);
/// for (m, b) solve m0 = m - (b/2)(2 m_dd - 1) for each m_dd.
inline std::vector<Line> lines_through_point(const Point& alpha) {
    Dimension d = alpha.m.dim();
    std::vector<Line> lines;
    lines.reserve(static_cast<std::size_t>(d.value()));
    if (alpha.b.is_cb()) {
        for (std::int64_t m0 = 0; m0 < d.value(); ++m0)
            lines.push_back(Line{alpha.m, ModInt(m0, d)});
        return lines;
    }
    ModInt h = half(d);
    ModInt b = alpha.b.index();
    for (std::int64_t mdd = 0; mdd < d.value(); ++mdd) {
        ModInt slope = ModInt(2 * mdd - 1, d);
        lines.push_back(Line{ModInt(mdd, d), alpha.m - h * b * slope});
    }
    return lines;
}

/// Unique line joining two points in different columns; nullopt when the
/// points share a column (a parallel class joins no two of its points).
inline std::optional<Line> line_through(const Point& alpha, const Point& beta) {
    if (alpha == beta)
        throw std::invalid_argument("line_through: points must be distinct");
    if (alpha.b == beta.b) return std::nullopt;
    Dimension d = alpha.m.dim();
    ModInt h = half(d);
    if (alpha.b.is_cb() || beta.b.is_cb()) {
        const Point& cb_pt = alpha.b.is_cb() ? alpha : beta;
        const Point& other = alpha.b.is_cb() ? beta : alpha;
        ModInt slope = 2 * cb_pt.m - 1;
        return Line{cb_pt.m, other.m - h * other.b.index() * slope};
    }
    // two standard columns: m - m' = (b - b')/2 * (2 m_dd - 1)
    ModInt db = alpha.b.index() - beta.b.index();
    ModInt slope = 2 * (alpha.m - beta.m) * mod_inv(db);  // = 2 m_dd - 1
    ModInt mdd = h * (slope + 1);
    return Line{mdd, alpha.m - h * alpha.b.index() * slope};
}

/// Exhaustive verification of the dual-affine-plane axioms:
/// (a) d^2 lines and d(d+1) points; (b) unique joins and single-point
/// meets; (c) d lines per point, d+1 points per line; (d) columns are
/// parallel classes; (e) cross-column points are always joined.
inline CheckReport verify_dapg(Dimension d) {
    CheckReport report("dapg");
    const auto points = all_points(d);
    const auto lines = all_lines(d);

    report.check(static_cast<std::int64_t>(lines.size()) == d.value() * d.value(),
                 "(a) line count != d^2");
    report.check(static_cast<std::int64_t>(points.size()) == d.value() * (d.value() + 1),
                 "(a) point count != d(d+1)");

    std::vector<std::vector<Point>> members;
    members.reserve(lines.size());
    for (const auto& j : lines) members.push_back(line_points(j));

    // (c) each line carries d+1 points, one per column
    for (std::size_t li = 0; li < lines.size(); ++li) {
        report.check(static_cast<std::int64_t>(members[li].size()) == d.value() + 1,
                     [&] { return "(c) line " + lines[li].to_string() + " has wrong point count"; });
        for (const auto& b : all_basis_labels(d)) {
            int hits = 0;
            for (const auto& p : members[li])
                if (p.b == b) ++hits;
            report.check(hits == 1, [&] {
                return "(c) line " + lines[li].to_string() + " misses column " + b.to_string();
            });
        }
    }

    // (c) each point lies on d lines, and lines_through_point agrees with membership
    for (const auto& p : points) {
        const auto through = lines_through_point(p);
        report.check(static_cast<std::int64_t>(through.size()) == d.value(),
                     [&] { return "(c) point " + p.to_string() + " not on d lines"; });
        for (const auto& j : through)
            report.check(point_on_line(p, j), [&] {
                return "(c) lines_through_point returned " + j.to_string() + " missing " +
                       p.to_string();
            });
        std::int64_t count = 0;
        for (std::size_t li = 0; li < lines.size(); ++li)
            if (std::find(members[li].begin(), members[li].end(), p) != members[li].end()) ++count;
        report.check(count == d.value(),
                     [&] { return "(c) membership count for " + p.to_string() + " != d"; });
    }

    // (b) two distinct lines share exactly one point
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t k = i + 1; k < lines.size(); ++k) {
            int shared = 0;
            for (const auto& p : members[i])
                if (std::find(members[k].begin(), members[k].end(), p) != members[k].end()) ++shared;
            report.check(shared == 1, [&] {
                return "(b) lines " + lines[i].to_string() + "," + lines[k].to_string() +
                       " share " + std::to_string(shared) + " points";
            });
        }
    }

    // (b,d,e) point pairs: same column joined by no line, cross column by exactly one
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t k = i + 1; k < points.size(); ++k) {
            std::int64_t joining = 0;
            for (std::size_t li = 0; li < lines.size(); ++li)
                if (std::find(members[li].begin(), members[li].end(), points[i]) != members[li].end() &&
                    std::find(members[li].begin(), members[li].end(), points[k]) != members[li].end())
                    ++joining;
            const bool same_column = points[i].b == points[k].b;
            report.check(joining == (same_column ? 0 : 1), [&] {
                return "(b/d/e) points " + points[i].to_string() + "," + points[k].to_string() +
                       " joined by " + std::to_string(joining) + " lines";
            });
            if (!same_column) {
                auto j = line_through(points[i], points[k]);
                report.check(j.has_value() && point_on_line(points[i], *j) && point_on_line(points[k], *j),
                             [&] {
                                 return "(b) line_through inconsistent for " + points[i].to_string() +
                                        "," + points[k].to_string();
                             });
            } else {
                report.check(!line_through(points[i], points[k]).has_value(), [&] {
                    return "(d) same-column points " + points[i].to_string() + "," +
                           points[k].to_string() + " reported joined";
                });
            }
        }
    }

    return report;
}

}  // namespace meslab
