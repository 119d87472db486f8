#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "meslab/arith.hpp"
#include "meslab/collective.hpp"
#include "meslab/geometry.hpp"
#include "meslab/hilbert.hpp"
#include "meslab/mub.hpp"
#include "meslab/report.hpp"

namespace meslab {

/// Product state underpinned by a geometry point: |m,b>_1 |~m,~b>_2,
/// which is |n>_1 |n>_2 in the CB column.
struct PointState {
    Point point;
    PairKet ket;
};

inline PointState point_state(const Point& alpha) {
    MubLabel l{alpha.m, alpha.b};
    return PointState{alpha, tensor(mub_state(l), mub_state(tilde(l)))};
}

/// The balance vector sum_n |n>_1 |n>_2 (unnormalized, norm^2 = d). It is
/// the column sum of point states for every column, CB included.
inline PairKet royal_state(Dimension d) {
    std::vector<CycNum> amps(static_cast<std::size_t>(d.value() * d.value()), CycNum::zero(d));
    for (std::int64_t n = 0; n < d.value(); ++n)
        amps[static_cast<std::size_t>(n * d.value() + n)] = CycNum::one(d);
    return PairKet(d, std::move(amps), PairLabeling::particle);
}

inline PairKet royal_state_normalized(Dimension d) { return div_sqrt_d(royal_state(d), 1); }

/// Maximally entangled line state, held in both normalizations. The
/// constructor builds the state three independent ways and insists they
/// agree exactly:
///   (i)   sum of the line's point states minus the royal state
///         (unnormalized),
///   (ii)  the delta/phase double sum over the particle CB,
///   (iii) the collective product |m_dd>_c |2 m0>_r.
struct LineState {
    Line line;
    PairKet normalized;
    PairKet unnormalized;  // exactly sqrt(d) times the normalized form
};

inline LineState line_state(const Line& j) {
    Dimension d = j.m_dd.dim();

    // form (ii): amplitudes delta_{n1+n2, 2 m_dd} omega^{-(n1-n2) m0} / sqrt(d)
    std::vector<CycNum> amps(static_cast<std::size_t>(d.value() * d.value()),
                             CycNum::zero(d, 1));
    ModInt two_mdd = 2 * j.m_dd;
    for (std::int64_t n1 = 0; n1 < d.value(); ++n1) {
        std::int64_t n2 = ((two_mdd.value() - n1) % d.value() + d.value()) % d.value();
        ModInt e = -(ModInt(n1 - n2, d) * j.m0);
        amps[static_cast<std::size_t>(n1 * d.value() + n2)] = CycNum::root(e).div_sqrt_d(1);
    }
    PairKet delta_form(d, std::move(amps), PairLabeling::particle);

    // form (iii): |2 m0>_r (the b = 0 state of the relative mode) times |m_dd>_c
    Ket r_factor = collective_mub_state(
        CollectiveMode::relative,
        MubLabel{2 * j.m0, BasisLabel::standard(ModInt(0, d))});
    Ket c_factor = ket_cb(j.m_dd);
    PairKet collective_form = relabel(tensor_collective(r_factor, c_factor));

    if (collective_form != delta_form)
        throw std::logic_error("line_state " + j.to_string() +
                               ": collective product disagrees with the delta/phase form");

    // form (i): sum over the line's points minus the royal state
    PairKet sum = PairKet::zero(d, PairLabeling::particle);
    for (const auto& p : line_points(j)) sum = sum + point_state(p).ket;
    PairKet geometric_form = sum - royal_state(d);

    if (geometric_form != mul_sqrt_d(delta_form, 1))
        throw std::logic_error("line_state " + j.to_string() +
                               ": point-state sum disagrees with sqrt(d) times the delta/phase form");

    return LineState{j, delta_form, geometric_form};
}

/// The d x d operator realization of a line, <n|P_j|n'> =
/// delta_{n+n', 2 m_dd} omega^{-(n-n') m0}. Row-major CycNum matrix.
struct LineOperator {
    Line line;
    Dimension dim;
    std::vector<CycNum> mat;

    const CycNum& entry(std::int64_t n, std::int64_t n_prime) const {
        return mat[static_cast<std::size_t>(n * dim.value() + n_prime)];
    }

    Ket apply(const Ket& psi) const {
        std::vector<CycNum> amps;
        amps.reserve(static_cast<std::size_t>(dim.value()));
        for (std::int64_t n = 0; n < dim.value(); ++n) {
            CycNum acc = CycNum::zero(dim, mat.front().scale() + psi.scale());
            for (std::int64_t k = 0; k < dim.value(); ++k) {
                if (entry(n, k).is_zero() || psi.amp(k).is_zero()) continue;
                acc = acc + entry(n, k) * psi.amp(k);
            }
            amps.push_back(acc);
        }
        return Ket(dim, std::move(amps));
    }
};

/// Builds P_j from the matrix-element formula and, independently, as the
/// sum of the line's rank-one projectors minus the identity; the two must
/// agree exactly.
inline LineOperator line_operator(const Line& j) {
    Dimension d = j.m_dd.dim();
    const std::int64_t dd = d.value();

    std::vector<CycNum> mat(static_cast<std::size_t>(dd * dd), CycNum::zero(d));
    ModInt two_mdd = 2 * j.m_dd;
    for (std::int64_t n = 0; n < dd; ++n) {
        std::int64_t n2 = ((two_mdd.value() - n) % dd + dd) % dd;
        mat[static_cast<std::size_t>(n * dd + n2)] = CycNum::root(-(ModInt(n - n2, d) * j.m0));
    }

    // projector route: sum_{(m,b) in j} |m,b><b,m| - I
    std::vector<CycNum> proj(static_cast<std::size_t>(dd * dd), CycNum::zero(d, 2));
    for (const auto& p : line_points(j)) {
        Ket v = mub_state(MubLabel{p.m, p.b});
        for (std::int64_t n = 0; n < dd; ++n) {
            if (v.amp(n).is_zero()) continue;
            for (std::int64_t k = 0; k < dd; ++k) {
                if (v.amp(k).is_zero()) continue;
                auto idx = static_cast<std::size_t>(n * dd + k);
                proj[idx] = proj[idx] + v.amp(n) * v.amp(k).conj();
            }
        }
    }
    for (std::int64_t n = 0; n < dd; ++n) {
        auto idx = static_cast<std::size_t>(n * dd + n);
        proj[idx] = proj[idx] - CycNum::one(d);
    }

    for (std::size_t i = 0; i < mat.size(); ++i)
        if (mat[i] != proj[i])
            throw std::logic_error("line_operator " + j.to_string() +
                                   ": projector sum disagrees with the matrix-element formula");

    return LineOperator{j, d, std::move(mat)};
}

/// P_j^2 = I, checked by exact matrix multiplication.
inline bool line_operator_squares_to_identity(const LineOperator& P) {
    Dimension d = P.dim;
    const std::int64_t dd = d.value();
    for (std::int64_t i = 0; i < dd; ++i) {
        for (std::int64_t k = 0; k < dd; ++k) {
            CycNum acc = CycNum::zero(d, 2 * P.mat.front().scale());
            for (std::int64_t l = 0; l < dd; ++l) {
                if (P.entry(i, l).is_zero() || P.entry(l, k).is_zero()) continue;
                acc = acc + P.entry(i, l) * P.entry(l, k);
            }
            if (acc != (i == k ? CycNum::one(d) : CycNum::zero(d))) return false;
        }
    }
    return true;
}

/// tr(P_j P_j'), exact.
inline CycNum line_operator_trace_product(const LineOperator& A, const LineOperator& B) {
    if (A.dim != B.dim)
        throw std::invalid_argument("trace_product: dimension mismatch");
    Dimension d = A.dim;
    CycNum acc = CycNum::zero(d, A.mat.front().scale() + B.mat.front().scale());
    for (std::int64_t n = 0; n < d.value(); ++n)
        for (std::int64_t k = 0; k < d.value(); ++k) {
            if (A.entry(n, k).is_zero() || B.entry(k, n).is_zero()) continue;
            acc = acc + A.entry(n, k) * B.entry(k, n);
        }
    return acc;
}

/// <A_alpha | P_j> against the normalized line state: exactly 1/sqrt(d)
/// when alpha lies on j and exactly 0 otherwise.
inline CycNum overlap_point_line(const PointState& alpha, const LineState& j) {
    return inner(alpha.ket, j.normalized);
}

inline CycNum overlap_point_line(const Point& alpha, const Line& j) {
    return overlap_point_line(point_state(alpha), line_state(j));
}

/// What one particle of a line state looks like after the other is caught
/// in a MUB state: a single tilde-basis state at weight 1/d.
struct LeakyMarginal {
    Ket ket;            // the (unnormalized) particle-2 remainder
    CycNum norm2;       // always exactly 1/d
    BasisLabel basis;   // the tilde basis the remainder lives in
    ModInt m_observed;  // which state of that basis it is proportional to
};

inline LeakyMarginal leaky_marginal(const MubLabel& l, const LineState& P) {
    Dimension d = l.m.dim();
    Ket chi = partial_inner_1(mub_state(l), P.normalized);
    CycNum n2 = chi.norm2();
    if (n2 != CycNum::one(d).div_sqrt_d(2))
        throw std::logic_error("leaky_marginal: norm^2 != 1/d for " + l.to_string() + " on " +
                               P.line.to_string());

    BasisLabel bt = tilde(l).b;
    const CycNum inv_d = CycNum::one(d).div_sqrt_d(2);
    std::vector<std::int64_t> hits;
    for (std::int64_t m2 = 0; m2 < d.value(); ++m2) {
        CycNum ov = inner(mub_state(ModInt(m2, d), bt), chi);
        if (ov.is_zero()) continue;
        if (ov.abs2() == inv_d)
            hits.push_back(m2);
        else
            throw std::logic_error("leaky_marginal: remainder has a partial overlap in basis " +
                                   bt.to_string());
    }
    if (hits.size() != 1)
        throw std::logic_error("leaky_marginal: remainder is not a single basis-" + bt.to_string() +
                               " state");
    return LeakyMarginal{std::move(chi), std::move(n2), bt, ModInt(hits.front(), d)};
}

inline LeakyMarginal leaky_marginal(const MubLabel& l, const Line& j) {
    return leaky_marginal(l, line_state(j));
}

/// Full sweep of the line-state and operator laws: triple-form consistency,
/// Gram = I, uniform single-particle marginals, the shift/phase middle form,
/// P_j^2 = I with trace orthogonality, the point-line overlap law, and the
/// leaky-particle law.
inline CheckReport verify_mes(Dimension d) {
    CheckReport report("mes");
    const CycNum one = CycNum::one(d);
    const CycNum zero = CycNum::zero(d);
    const CycNum inv_d = one.div_sqrt_d(2);
    const std::int64_t dd = d.value();

    std::vector<LineState> states;
    for (const auto& j : all_lines(d)) {
        try {
            states.push_back(line_state(j));
            report.check(true, "");
        } catch (const std::logic_error& e) {
            report.check(false, std::string(e.what()));
        }
    }
    if (static_cast<std::int64_t>(states.size()) != dd * dd) return report;

    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t k = 0; k < states.size(); ++k)
            report.check(inner(states[i].normalized, states[k].normalized) == (i == k ? one : zero),
                         [&] {
                             return "Gram entry " + states[i].line.to_string() + "," +
                                    states[k].line.to_string() + " wrong";
                         });

    for (const auto& ls : states) {
        for (std::int64_t n1 = 0; n1 < dd; ++n1) {
            CycNum row = CycNum::zero(d, 2 * ls.normalized.scale());
            CycNum col = CycNum::zero(d, 2 * ls.normalized.scale());
            for (std::int64_t n2 = 0; n2 < dd; ++n2) {
                row = row + ls.normalized.amp(n1, n2).abs2();
                col = col + ls.normalized.amp(n2, n1).abs2();
            }
            report.check(row == inv_d && col == inv_d, [&] {
                return "line " + ls.line.to_string() + " is not maximally entangled at index " +
                       std::to_string(n1);
            });
        }
    }

    // middle form: |P_j> = (omega^{2 m_dd m0}/sqrt d) sum_n |n>_1 X^{2 m_dd} Z^{2 m0} I |n>_2
    for (const auto& ls : states) {
        ModInt two_mdd = 2 * ls.line.m_dd;
        ModInt two_m0 = 2 * ls.line.m0;
        PairKet acc = PairKet::zero(d, PairLabeling::particle);
        for (std::int64_t n = 0; n < dd; ++n) {
            Ket second = apply_x_pow(two_mdd, apply_z_pow(two_m0, apply_inversion(ket_cb(ModInt(n, d)))));
            acc = acc + tensor(ket_cb(ModInt(n, d)), second);
        }
        PairKet middle = CycNum::root(two_mdd * ls.line.m0).div_sqrt_d(1) * acc;
        report.check(middle == ls.normalized, [&] {
            return "middle form disagrees for line " + ls.line.to_string();
        });
    }

    std::vector<LineOperator> ops;
    for (const auto& j : all_lines(d)) {
        try {
            ops.push_back(line_operator(j));
            report.check(true, "");
        } catch (const std::logic_error& e) {
            report.check(false, std::string(e.what()));
        }
    }
    if (ops.size() == states.size()) {
        for (const auto& P : ops)
            report.check(line_operator_squares_to_identity(P),
                         [&] { return "P^2 != I for line " + P.line.to_string(); });
        const CycNum d_num = CycNum::integer(d, dd);
        for (std::size_t i = 0; i < ops.size(); ++i)
            for (std::size_t k = 0; k < ops.size(); ++k)
                report.check(line_operator_trace_product(ops[i], ops[k]) == (i == k ? d_num : zero),
                             [&] {
                                 return "trace orthogonality fails at " + ops[i].line.to_string() +
                                        "," + ops[k].line.to_string();
                             });
    }

    std::vector<PointState> pstates;
    for (const auto& p : all_points(d)) pstates.push_back(point_state(p));
    const CycNum inv_sqrt_d = one.div_sqrt_d(1);
    for (const auto& ps : pstates) {
        for (const auto& ls : states) {
            CycNum ov = overlap_point_line(ps, ls);
            bool on = point_on_line(ps.point, ls.line);
            report.check(ov == (on ? inv_sqrt_d : zero), [&] {
                return "overlap law fails at point " + ps.point.to_string() + ", line " +
                       ls.line.to_string();
            });
        }
    }
    // per line, the d+1 point probabilities add to (d+1)/d: not mutually exclusive
    const CycNum dplus1_over_d = CycNum::integer(d, dd + 1).div_sqrt_d(2);
    for (const auto& ls : states) {
        CycNum sum = CycNum::zero(d, 2);
        for (const auto& p : line_points(ls.line))
            sum = sum + overlap_point_line(point_state(p), ls).abs2();
        report.check(sum == dplus1_over_d,
                     [&] { return "per-line probability sum != (d+1)/d at " + ls.line.to_string(); });
    }

    for (const auto& l : all_mub_labels(d)) {
        for (const auto& ls : states) {
            try {
                LeakyMarginal lm = leaky_marginal(l, ls);
                report.check(lm.norm2 == inv_d, [&] {
                    return "leaky norm^2 != 1/d at " + l.to_string() + ", " + ls.line.to_string();
                });
            } catch (const std::logic_error& e) {
                report.check(false, std::string(e.what()));
            }
        }
    }

    return report;
}

/// The three state-level balance identities:
/// (i)   every column of point states sums to the royal state,
/// (ii)  (1/d) sum of all unnormalized line states is the royal state,
/// (iii) d |A_alpha> = sum of the unnormalized line states through alpha.
inline CheckReport verify_balance(Dimension d) {
    CheckReport report("balance");
    const PairKet royal = royal_state(d);

    for (const auto& b : all_basis_labels(d)) {
        PairKet sum = PairKet::zero(d, PairLabeling::particle);
        for (std::int64_t m = 0; m < d.value(); ++m)
            sum = sum + point_state(Point{ModInt(m, d), b}).ket;
        report.check(sum == royal,
                     [&] { return "(i) column " + b.to_string() + " does not sum to the royal state"; });
    }

    std::vector<LineState> states;
    for (const auto& j : all_lines(d)) states.push_back(line_state(j));

    PairKet total = PairKet::zero(d, PairLabeling::particle);
    for (const auto& s : states) total = total + s.unnormalized;
    report.check(total == CycNum::integer(d, d.value()) * royal,
                 "(ii) sum of unnormalized line states != d * royal state");

    for (const auto& alpha : all_points(d)) {
        PairKet sum = PairKet::zero(d, PairLabeling::particle);
        for (const auto& j : lines_through_point(alpha))
            sum = sum + states[static_cast<std::size_t>(j.m_dd.value() * d.value() + j.m0.value())]
                            .unnormalized;
        report.check(sum == CycNum::integer(d, d.value()) * point_state(alpha).ket, [&] {
            return "(iii) point " + alpha.to_string() + " is not reconstructed by its lines";
        });
    }

    return report;
}

}  // namespace meslab
