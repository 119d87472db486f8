#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "meslab/arith.hpp"
#include "meslab/hilbert.hpp"
#include "meslab/report.hpp"

namespace meslab {

/// Basis column label: either the computational basis (the paper-style
/// non-numeric column, printed "CB") or one of the d standard bases
/// b = 0..d-1. The CB label deliberately refuses modular arithmetic.
class BasisLabel {
public:
    static BasisLabel cb(Dimension dim) { return BasisLabel(dim, true, 0); }
    static BasisLabel standard(ModInt b) { return BasisLabel(b.dim(), false, b.value()); }

    Dimension dim() const { return dim_; }
    bool is_cb() const { return cb_; }

    ModInt index() const {
        if (cb_)
            throw std::logic_error("BasisLabel: the CB column has no numerical index");
        return ModInt(b_, dim_);
    }

    std::string to_string() const { return cb_ ? "CB" : std::to_string(b_); }

    friend bool operator==(const BasisLabel& a, const BasisLabel& b) {
        return a.dim_ == b.dim_ && a.cb_ == b.cb_ && (a.cb_ || a.b_ == b.b_);
    }
    friend bool operator!=(const BasisLabel& a, const BasisLabel& b) { return !(a == b); }

private:
    BasisLabel(Dimension dim, bool cb, std::int64_t b) : dim_(dim), cb_(cb), b_(b) {}

    Dimension dim_;
    bool cb_;
    std::int64_t b_;
};

/// The d+1 basis labels in canonical order: CB first, then 0..d-1.
inline std::vector<BasisLabel> all_basis_labels(Dimension d) {
    std::vector<BasisLabel> labels;
    labels.reserve(static_cast<std::size_t>(d.value() + 1));
    labels.push_back(BasisLabel::cb(d));
    for (std::int64_t b = 0; b < d.value(); ++b)
        labels.push_back(BasisLabel::standard(ModInt(b, d)));
    return labels;
}

/// One of the d(d+1) MUB state labels (m within basis b).
struct MubLabel {
    ModInt m;
    BasisLabel b;

    friend bool operator==(const MubLabel& x, const MubLabel& y) { return x.m == y.m && x.b == y.b; }
    friend bool operator!=(const MubLabel& x, const MubLabel& y) { return !(x == y); }

    std::string to_string() const { return "(" + std::to_string(m.value()) + ";" + b.to_string() + ")"; }
};

/// |m;b> = (1/sqrt d) sum_n omega^{(b/2) n(n-1) - n m} |n>, with b/2 taken
/// as (d+1)/2 * b mod d; for the CB column, plainly |m>.
inline Ket mub_state(const MubLabel& l) {
    Dimension d = l.m.dim();
    if (l.b.is_cb()) return ket_cb(l.m);
    ModInt h = half(d);
    ModInt b = l.b.index();
    std::vector<CycNum> amps;
    amps.reserve(static_cast<std::size_t>(d.value()));
    for (std::int64_t n = 0; n < d.value(); ++n) {
        ModInt e = h * b * ModInt(n, d) * ModInt(n - 1, d) - ModInt(n, d) * l.m;
        amps.push_back(CycNum::root(e).div_sqrt_d(1));
    }
    return Ket(d, std::move(amps));
}

inline Ket mub_state(ModInt m, const BasisLabel& b) { return mub_state(MubLabel{m, b}); }

/// Conjugation closure map: (m, b) -> (d-m, d-b) for standard bases,
/// identity on the CB column.
inline MubLabel tilde(const MubLabel& l) {
    if (l.b.is_cb()) return l;
    return MubLabel{-l.m, BasisLabel::standard(-l.b.index())};
}

/// All d(d+1) labels, CB column first, then b = 0..d-1, m ascending.
inline std::vector<MubLabel> all_mub_labels(Dimension d) {
    std::vector<MubLabel> labels;
    labels.reserve(static_cast<std::size_t>(d.value() * (d.value() + 1)));
    for (const auto& b : all_basis_labels(d))
        for (std::int64_t m = 0; m < d.value(); ++m)
            labels.push_back(MubLabel{ModInt(m, d), b});
    return labels;
}

/// Checks |<u|v>|^2 = 1/d across every distinct basis pair and Gram = I
/// within each basis, all exactly.
inline CheckReport verify_unbiased(Dimension d) {
    CheckReport report("unbiased");
    const auto bases = all_basis_labels(d);
    const CycNum one = CycNum::one(d);
    const CycNum zero = CycNum::zero(d);
    const CycNum inv_d = one.div_sqrt_d(2);

    std::vector<std::vector<Ket>> states;
    for (const auto& b : bases) {
        std::vector<Ket> column;
        for (std::int64_t m = 0; m < d.value(); ++m)
            column.push_back(mub_state(ModInt(m, d), b));
        states.push_back(std::move(column));
    }

    for (std::size_t i = 0; i < bases.size(); ++i) {
        for (std::int64_t m = 0; m < d.value(); ++m) {
            for (std::int64_t m2 = 0; m2 < d.value(); ++m2) {
                CycNum ov = inner(states[i][static_cast<std::size_t>(m)],
                                  states[i][static_cast<std::size_t>(m2)]);
                report.check(ov == (m == m2 ? one : zero), [&] {
                    return "basis " + bases[i].to_string() + ": Gram(" + std::to_string(m) + "," +
                           std::to_string(m2) + ") != " + (m == m2 ? "1" : "0");
                });
            }
        }
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            for (std::int64_t m = 0; m < d.value(); ++m) {
                for (std::int64_t m2 = 0; m2 < d.value(); ++m2) {
                    CycNum ov = inner(states[i][static_cast<std::size_t>(m)],
                                      states[j][static_cast<std::size_t>(m2)]);
                    report.check(ov.abs2() == inv_d, [&] {
                        return "bases " + bases[i].to_string() + "," + bases[j].to_string() +
                               " states (" + std::to_string(m) + "," + std::to_string(m2) +
                               "): |overlap|^2 != 1/d";
                    });
                }
            }
        }
    }
    return report;
}

/// Entrywise conjugation of |m,b> lands exactly on the tilde-labeled state,
/// and tilde is an involution on all d(d+1) labels.
inline CheckReport verify_conjugation(Dimension d) {
    CheckReport report("conjugation");
    for (const auto& l : all_mub_labels(d)) {
        report.check(apply_tau(mub_state(l)) == mub_state(tilde(l)),
                     [&] { return "conj of " + l.to_string() + " != state of " + tilde(l).to_string(); });
        report.check(tilde(tilde(l)) == l,
                     [&] { return "tilde not involutive at " + l.to_string(); });
    }
    return report;
}

/// Resolution of identity within each basis, probed on every CB ket:
/// sum_m <m;b|e_n> |m;b> = e_n.
inline CheckReport verify_completeness(Dimension d) {
    CheckReport report("completeness");
    for (const auto& b : all_basis_labels(d)) {
        std::vector<Ket> column;
        for (std::int64_t m = 0; m < d.value(); ++m)
            column.push_back(mub_state(ModInt(m, d), b));
        for (std::int64_t n = 0; n < d.value(); ++n) {
            Ket e = ket_cb(ModInt(n, d));
            Ket acc = Ket::zero(d, 2 * column.front().scale());
            for (const auto& state : column) acc = acc + inner(state, e) * state;
            report.check(acc == e, [&] {
                return "basis " + b.to_string() + " does not resolve |" + std::to_string(n) + ">";
            });
        }
    }
    return report;
}

/// Checks X Z^b |m;b> = omega^m |m;b> for every standard basis, and
/// Z|n> = omega^n |n> on the CB column.
inline CheckReport verify_eigen(Dimension d) {
    CheckReport report("eigen");
    const ModInt one(1, d);
    for (std::int64_t m = 0; m < d.value(); ++m) {
        Ket cb = ket_cb(ModInt(m, d));
        report.check(apply_z_pow(one, cb) == CycNum::root(ModInt(m, d)) * cb,
                     "CB: Z|" + std::to_string(m) + "> != omega^" + std::to_string(m) + "|" +
                         std::to_string(m) + ">");
    }
    for (std::int64_t b = 0; b < d.value(); ++b) {
        for (std::int64_t m = 0; m < d.value(); ++m) {
            MubLabel l{ModInt(m, d), BasisLabel::standard(ModInt(b, d))};
            Ket psi = mub_state(l);
            Ket lhs = apply_x_pow(one, apply_z_pow(ModInt(b, d), psi));
            report.check(lhs == CycNum::root(ModInt(m, d)) * psi, [&] {
                return "X Z^" + std::to_string(b) + " eigenrelation fails at " + l.to_string();
            });
        }
    }
    return report;
}

}  // namespace meslab
