#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "meslab/arith.hpp"
#include "meslab/geometry.hpp"
#include "meslab/hilbert.hpp"
#include "meslab/mes.hpp"
#include "meslab/mub.hpp"
#include "meslab/report.hpp"

namespace meslab {

// ---------------------------------------------------------------------------
// Counter-based RNG. Stream i is fully determined by (seed, i), so trials can
// run in any order or in parallel and still produce the sequential transcript.
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-trial stream key: seed' = mix64(seed ^ mix64(trial_index)).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t trial_index) {
    return mix64(seed ^ mix64(trial_index));
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : state_(key) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw from [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("CounterRng::below: zero bound");
        const std::uint64_t rem = UINT64_MAX % bound;
        if (rem == bound - 1) return next() % bound;  // bound divides 2^64
        const std::uint64_t limit = UINT64_MAX - rem;  // largest multiple of bound
        for (;;) {
            const std::uint64_t u = next();
            if (u < limit) return u % bound;
        }
    }

private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Exact probability bookkeeping. Every probability in these protocols is a
// ratio of small integers (denominators are powers of d).
// ---------------------------------------------------------------------------

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
        if (den < 0) {
            num = detail::checked_sub(0, num);
            den = detail::checked_sub(0, den);
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static Fraction zero() { return Fraction(); }
    static Fraction one() { return Fraction(1, 1); }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string to_string() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    friend Fraction operator+(const Fraction& a, const Fraction& b) {
        return Fraction(detail::checked_add(detail::checked_mul(a.num, b.den),
                                            detail::checked_mul(b.num, a.den)),
                        detail::checked_mul(a.den, b.den));
    }
    friend Fraction operator*(const Fraction& a, const Fraction& b) {
        return Fraction(detail::checked_mul(a.num, b.num), detail::checked_mul(a.den, b.den));
    }
    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
};

/// Exact fraction of a rational CycNum (denominator a power of d).
inline Fraction fraction_from(const CycNum& x) {
    auto parts = x.rational_parts();
    if (!parts)
        throw std::domain_error("fraction_from: value is not rational: " + x.to_string());
    std::int64_t den = 1;
    for (int i = 0; i < parts->dpow; ++i) den = detail::checked_mul(den, x.dim().value());
    return Fraction(parts->num, den);
}

// ---------------------------------------------------------------------------
// Protocol vocabulary.
// ---------------------------------------------------------------------------

enum class Protocol { mkp, track };

inline const char* to_string(Protocol p) { return p == Protocol::mkp ? "MKP" : "TRACK"; }

/// The King's alignment and observed outcome label.
struct KingChoice {
    BasisLabel basis;
    ModInt outcome;
};

/// Alice's control-measurement outcome: the line-basis label pair
/// (m_dd', m0'').
struct AliceOutcome {
    ModInt m_dd;
    ModInt m0;

    Line as_line() const { return Line{m_dd, m0}; }

    friend bool operator==(const AliceOutcome& a, const AliceOutcome& b) {
        return a.m_dd == b.m_dd && a.m0 == b.m0;
    }
    friend bool operator!=(const AliceOutcome& a, const AliceOutcome& b) { return !(a == b); }
};

enum class Verdict { correct, undetermined, error };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::correct: return "correct";
        case Verdict::undetermined: return "undetermined";
        default: return "error";
    }
}

/// One protocol round, fully resolved.
struct MeasurementRecord {
    Protocol protocol;
    std::optional<Line> prepared;           // TRACK: the prepared line; MKP: royal state
    KingChoice king;
    AliceOutcome alice;
    std::optional<ModInt> deduced_m;        // MKP deduction
    std::optional<BasisLabel> deduced_b;    // TRACK deduction; nullopt = undetermined
    Verdict verdict;
};

// ---------------------------------------------------------------------------
// Precomputed state tables for one dimension; read-only once built, safe to
// share across trial threads.
// ---------------------------------------------------------------------------

class ProtocolContext {
public:
    explicit ProtocolContext(Dimension d)
        : dim_(d), bases_(all_basis_labels(d)), royal_norm_(royal_state_normalized(d)) {
        for (const auto& b : bases_) {
            std::vector<Ket> column;
            for (std::int64_t m = 0; m < d.value(); ++m)
                column.push_back(mub_state(ModInt(m, d), b));
            mub_.push_back(std::move(column));
        }
        for (const auto& j : all_lines(d)) lines_.push_back(line_state(j));
    }

    Dimension dim() const { return dim_; }
    const std::vector<BasisLabel>& bases() const { return bases_; }
    const PairKet& royal_normalized() const { return royal_norm_; }
    const std::vector<LineState>& lines() const { return lines_; }

    std::size_t basis_ordinal(const BasisLabel& b) const {
        return b.is_cb() ? 0 : static_cast<std::size_t>(b.index().value() + 1);
    }

    const Ket& mub(const BasisLabel& b, std::int64_t m) const {
        return mub_[basis_ordinal(b)][static_cast<std::size_t>(m)];
    }

    const LineState& line(const Line& j) const {
        return lines_[static_cast<std::size_t>(j.m_dd.value() * dim_.value() + j.m0.value())];
    }

private:
    Dimension dim_;
    std::vector<BasisLabel> bases_;
    std::vector<std::vector<Ket>> mub_;
    std::vector<LineState> lines_;
    PairKet royal_norm_;
};

namespace detail {

/// Integer weights over a common power-of-d denominator; sampling walks the
/// cumulative sum in index order.
struct ExactDistribution {
    std::vector<std::int64_t> weights;
    std::int64_t total = 0;

    static ExactDistribution from(const std::vector<CycNum>& probabilities, Dimension d) {
        int dpow = 0;
        std::vector<CycNum::RationalParts> parts;
        parts.reserve(probabilities.size());
        for (const auto& p : probabilities) {
            auto rp = p.rational_parts();
            if (!rp || rp->num < 0)
                throw std::domain_error("measurement probability is not a non-negative rational");
            dpow = std::max(dpow, rp->dpow);
            parts.push_back(*rp);
        }
        ExactDistribution dist;
        std::int64_t total_expected = 1;
        for (int i = 0; i < dpow; ++i) total_expected = checked_mul(total_expected, d.value());
        for (const auto& rp : parts) {
            std::int64_t w = rp.num;
            for (int i = 0; i < dpow - rp.dpow; ++i) w = checked_mul(w, d.value());
            dist.weights.push_back(w);
            dist.total = checked_add(dist.total, w);
        }
        if (dist.total != total_expected)
            throw std::logic_error("measurement probabilities do not sum to 1");
        return dist;
    }

    std::size_t sample(CounterRng& rng) const {
        std::int64_t u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (u < weights[i]) return i;
            u -= weights[i];
        }
        throw std::logic_error("ExactDistribution::sample: exhausted weights");  // unreachable
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Measurements.
// ---------------------------------------------------------------------------

struct KingResult {
    ModInt outcome;
    PairKet post;
};

/// The King measures particle 1 in alignment b: outcome m arrives with exact
/// probability |<m,b|_1 Psi|^2 and the state collapses to |m,b>_1 times the
/// normalized remainder.
inline KingResult king_measure(const ProtocolContext& ctx, const PairKet& Psi, const BasisLabel& b,
                               CounterRng& rng) {
    Dimension d = ctx.dim();
    if (!Psi.is_normalized())
        throw std::invalid_argument("king_measure: state must be normalized");
    std::vector<Ket> remainders;
    std::vector<CycNum> probs;
    for (std::int64_t m = 0; m < d.value(); ++m) {
        Ket chi = partial_inner_1(ctx.mub(b, m), Psi);
        probs.push_back(chi.norm2());
        remainders.push_back(std::move(chi));
    }
    auto dist = detail::ExactDistribution::from(probs, d);
    std::size_t m = dist.sample(rng);
    return KingResult{ModInt(static_cast<std::int64_t>(m), d),
                      tensor(ctx.mub(b, static_cast<std::int64_t>(m)),
                             remainders[m].normalized())};
}

/// Alice measures the non-degenerate line-basis observable; outcomes are the
/// d^2 line labels with exact probabilities |<P_j|Psi>|^2.
inline AliceOutcome alice_measure(const ProtocolContext& ctx, const PairKet& Psi, CounterRng& rng) {
    Dimension d = ctx.dim();
    std::vector<CycNum> probs;
    probs.reserve(ctx.lines().size());
    for (const auto& ls : ctx.lines()) probs.push_back(inner(ls.normalized, Psi).abs2());
    auto dist = detail::ExactDistribution::from(probs, d);
    std::size_t idx = dist.sample(rng);
    return AliceOutcome{ModInt(static_cast<std::int64_t>(idx) / d.value(), d),
                        ModInt(static_cast<std::int64_t>(idx) % d.value(), d)};
}

// ---------------------------------------------------------------------------
// Deduction.
// ---------------------------------------------------------------------------

/// Mean King deduction: the row of Alice's line at the revealed column b.
inline ModInt mkp_deduce(const AliceOutcome& a, const BasisLabel& b) {
    return line_row_at(a.as_line(), b);
}

/// Tracking deduction from the prepared line and Alice's outcome:
/// differing m_dd gives b = (m0'' - m0)/(m_dd - m_dd'); matching m_dd with
/// differing m0 gives the CB alignment; a full match is undetermined.
inline std::optional<BasisLabel> track_deduce(const Line& prepared, const AliceOutcome& a) {
    if (a.m_dd != prepared.m_dd) {
        ModInt b = (a.m0 - prepared.m0) * mod_inv(prepared.m_dd - a.m_dd);
        return BasisLabel::standard(b);
    }
    if (a.m0 != prepared.m0) return BasisLabel::cb(prepared.m_dd.dim());
    return std::nullopt;
}

inline MeasurementRecord make_mkp_record(const KingChoice& king, const AliceOutcome& alice) {
    ModInt deduced = mkp_deduce(alice, king.basis);
    return MeasurementRecord{Protocol::mkp,
                             std::nullopt,
                             king,
                             alice,
                             deduced,
                             std::nullopt,
                             deduced == king.outcome ? Verdict::correct : Verdict::error};
}

inline MeasurementRecord make_track_record(const Line& prepared, const KingChoice& king,
                                           const AliceOutcome& alice) {
    std::optional<BasisLabel> deduced = track_deduce(prepared, alice);
    Verdict v = !deduced.has_value()
                    ? Verdict::undetermined
                    : (*deduced == king.basis ? Verdict::correct : Verdict::error);
    return MeasurementRecord{Protocol::track, prepared, king, alice, std::nullopt, deduced, v};
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration over every nonzero-probability branch.
// ---------------------------------------------------------------------------

struct VerdictMass {
    Fraction correct;
    Fraction undetermined;
    Fraction error;

    Fraction total() const { return correct + undetermined + error; }
};

struct Branch {
    KingChoice king;
    AliceOutcome alice;
    Fraction probability;  // joint probability within the fixed-alignment round
    std::optional<ModInt> deduced_m;
    std::optional<BasisLabel> deduced_b;
    Verdict verdict;
};

struct EnumReport {
    Dimension d;
    Protocol protocol;
    std::optional<Line> prepared;
    std::vector<Branch> branches;
    std::vector<std::pair<BasisLabel, VerdictMass>> per_basis;  // CB first, then 0..d-1
    VerdictMass uniform;  // averaged over the d+1 equally weighted alignments
    std::vector<std::string> violations;

    bool passed() const { return violations.empty(); }
};

namespace detail {

inline VerdictMass scaled(const VerdictMass& m, const Fraction& f) {
    return VerdictMass{m.correct * f, m.undetermined * f, m.error * f};
}

inline VerdictMass plus(const VerdictMass& a, const VerdictMass& b) {
    return VerdictMass{a.correct + b.correct, a.undetermined + b.undetermined, a.error + b.error};
}

/// King outcome table for a fixed alignment: remainders and exact
/// probabilities for each m.
struct KingTable {
    std::vector<PairKet> posts;
    std::vector<Fraction> probs;
};

inline KingTable king_table(const ProtocolContext& ctx, const PairKet& Psi, const BasisLabel& b) {
    KingTable t;
    for (std::int64_t m = 0; m < ctx.dim().value(); ++m) {
        Ket chi = partial_inner_1(ctx.mub(b, m), Psi);
        CycNum p = chi.norm2();
        t.probs.push_back(fraction_from(p));
        if (!p.is_zero())
            t.posts.push_back(tensor(ctx.mub(b, m), chi.normalized()));
        else
            t.posts.push_back(PairKet::zero(ctx.dim(), PairLabeling::particle));
    }
    return t;
}

template <typename MakeRecord>
EnumReport enumerate_protocol(const ProtocolContext& ctx, const PairKet& prepared_state,
                              Protocol protocol, std::optional<Line> prepared_line,
                              MakeRecord&& make_record) {
    Dimension d = ctx.dim();
    EnumReport report{d, protocol, prepared_line, {}, {}, {}, {}};
    const Fraction inv_d(1, d.value());
    const Fraction one = Fraction::one();

    for (const auto& b : ctx.bases()) {
        VerdictMass mass;
        Fraction total = Fraction::zero();
        auto kt = king_table(ctx, prepared_state, b);
        for (std::int64_t m = 0; m < d.value(); ++m) {
            const Fraction& pk = kt.probs[static_cast<std::size_t>(m)];
            if (pk == Fraction::zero()) continue;
            if (pk != inv_d)
                report.violations.push_back("king outcome probability != 1/d at basis " +
                                            b.to_string() + ", m=" + std::to_string(m));
            const PairKet& post = kt.posts[static_cast<std::size_t>(m)];
            for (const auto& ls : ctx.lines()) {
                CycNum amp2 = inner(ls.normalized, post).abs2();
                if (amp2.is_zero()) continue;
                Fraction pa = fraction_from(amp2);
                KingChoice king{b, ModInt(m, d)};
                AliceOutcome alice{ls.line.m_dd, ls.line.m0};
                MeasurementRecord rec = make_record(king, alice);
                Fraction joint = pk * pa;
                total = total + joint;
                switch (rec.verdict) {
                    case Verdict::correct: mass.correct = mass.correct + joint; break;
                    case Verdict::undetermined: mass.undetermined = mass.undetermined + joint; break;
                    case Verdict::error: mass.error = mass.error + joint; break;
                }
                report.branches.push_back(
                    Branch{king, alice, joint, rec.deduced_m, rec.deduced_b, rec.verdict});
            }
        }
        if (total != one)
            report.violations.push_back("branch probabilities at basis " + b.to_string() +
                                        " sum to " + total.to_string());
        report.per_basis.emplace_back(b, mass);
    }

    const Fraction weight(1, d.value() + 1);
    for (const auto& [b, mass] : report.per_basis)
        report.uniform = plus(report.uniform, scaled(mass, weight));
    return report;
}

}  // namespace detail

/// Every Mean King branch with nonzero probability: the King's alignment and
/// outcome, Alice's feasible lines, and the deduction verdict, all exact.
inline EnumReport enumerate_mkp(const ProtocolContext& ctx) {
    EnumReport report = detail::enumerate_protocol(
        ctx, ctx.royal_normalized(), Protocol::mkp, std::nullopt,
        [](const KingChoice& king, const AliceOutcome& alice) { return make_mkp_record(king, alice); });

    // structural law: Alice's feasible lines are exactly the d lines through
    // the King's point, each at probability 1/d
    Dimension d = ctx.dim();
    const Fraction inv_d2(1, d.value() * d.value());
    for (const auto& br : report.branches) {
        if (br.probability != inv_d2)
            report.violations.push_back("MKP branch probability != 1/d^2");
        if (!point_on_line(Point{br.king.outcome, br.king.basis}, br.alice.as_line()))
            report.violations.push_back("MKP branch line does not pass through the King's point");
    }
    const std::size_t expected =
        static_cast<std::size_t>((d.value() + 1) * d.value() * d.value());
    if (report.branches.size() != expected)
        report.violations.push_back("MKP branch count != (d+1) d^2");
    return report;
}

inline EnumReport enumerate_mkp(Dimension d) { return enumerate_mkp(ProtocolContext(d)); }

/// Every tracking branch for a given prepared line, with the feasibility law
/// m0'' - m0 = b (m_dd - m_dd') checked for standard alignments and
/// m_dd'' = m_dd for the CB alignment.
inline EnumReport enumerate_track(const ProtocolContext& ctx, const Line& prepared) {
    EnumReport report = detail::enumerate_protocol(
        ctx, ctx.line(prepared).normalized, Protocol::track, prepared,
        [&](const KingChoice& king, const AliceOutcome& alice) {
            return make_track_record(prepared, king, alice);
        });

    Dimension d = ctx.dim();
    const Fraction inv_d2(1, d.value() * d.value());
    for (const auto& br : report.branches) {
        if (br.probability != inv_d2)
            report.violations.push_back("TRACK branch probability != 1/d^2");
        if (br.king.basis.is_cb()) {
            if (br.alice.m_dd != prepared.m_dd)
                report.violations.push_back("TRACK CB branch with m_dd' != m_dd");
        } else {
            ModInt lhs = br.alice.m0 - prepared.m0;
            ModInt rhs = br.king.basis.index() * (prepared.m_dd - br.alice.m_dd);
            if (lhs != rhs)
                report.violations.push_back("TRACK branch violates m0''-m0 = b(m_dd-m_dd')");
        }
    }
    return report;
}

inline EnumReport enumerate_track(Dimension d, const Line& prepared) {
    return enumerate_track(ProtocolContext(d), prepared);
}

inline EnumReport enumerate_track(Dimension d) {
    return enumerate_track(d, Line{ModInt(0, d), ModInt(0, d)});
}

/// Exhaustive branch verification of both protocols: every Mean King branch
/// deduces the King's outcome, and tracking yields verdict masses
/// correct = (d-1)/d, undetermined = 1/d, error = 0 for every alignment.
inline CheckReport verify_protocols(Dimension d) {
    CheckReport report("protocols");
    ProtocolContext ctx(d);
    const Fraction one = Fraction::one();
    const Fraction zero = Fraction::zero();

    EnumReport mkp = enumerate_mkp(ctx);
    report.check(mkp.passed(), [&] {
        return "mkp enumeration: " + (mkp.violations.empty() ? std::string("?") : mkp.violations.front());
    });
    for (const auto& [b, mass] : mkp.per_basis)
        report.check(mass.correct == one && mass.undetermined == zero && mass.error == zero, [&] {
            return "mkp verdict mass at basis " + b.to_string() + " is not certain success";
        });

    const Fraction corr(d.value() - 1, d.value());
    const Fraction undet(1, d.value());
    const std::vector<Line> preps{Line{ModInt(0, d), ModInt(0, d)},
                                  Line{ModInt(1, d), ModInt(2, d)}};
    for (const auto& prep : preps) {
        EnumReport tr = enumerate_track(ctx, prep);
        report.check(tr.passed(), [&] {
            return "track enumeration at " + prep.to_string() + ": " +
                   (tr.violations.empty() ? std::string("?") : tr.violations.front());
        });
        for (const auto& [b, mass] : tr.per_basis)
            report.check(mass.correct == corr && mass.undetermined == undet && mass.error == zero,
                         [&] {
                             return "track verdict mass at basis " + b.to_string() + ", line " +
                                    prep.to_string() + " is off";
                         });
    }
    return report;
}

// ---------------------------------------------------------------------------
// Seeded Monte-Carlo runner.
// ---------------------------------------------------------------------------

/// Basis policy for the King: a fixed alignment, or uniform over the d+1
/// labels (the default; the paper leaves the King's distribution open).
struct BasisPolicy {
    std::optional<BasisLabel> fixed;

    static BasisPolicy uniform() { return BasisPolicy{std::nullopt}; }
    static BasisPolicy fixed_basis(const BasisLabel& b) { return BasisPolicy{b}; }

    std::string to_string() const { return fixed ? "fixed:" + fixed->to_string() : "uniform"; }
};

struct SimReport {
    Dimension d;
    Protocol protocol;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::optional<Line> prepared;
    std::string basis_policy;
    std::uint64_t correct = 0;
    std::uint64_t undetermined = 0;
    std::uint64_t errors = 0;

    struct PerBasis {
        BasisLabel basis;
        std::uint64_t trials = 0;
        std::uint64_t correct = 0;
        std::uint64_t undetermined = 0;
        std::uint64_t errors = 0;
    };
    std::vector<PerBasis> per_basis;  // CB first, then 0..d-1

    VerdictMass exact;  // expected verdict masses under the configured policy
};

namespace detail {

template <typename RunTrial>
SimReport run_protocol(const ProtocolContext& ctx, Protocol protocol,
                       std::optional<Line> prepared, std::uint64_t trials, std::uint64_t seed,
                       const BasisPolicy& policy, int threads, RunTrial&& run_trial) {
    if (trials == 0) throw std::invalid_argument("run: trials must be >= 1");
    Dimension d = ctx.dim();

    std::vector<std::optional<MeasurementRecord>> records(trials);
    auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            CounterRng rng(derive_stream(seed, t));
            BasisLabel b = policy.fixed
                               ? *policy.fixed
                               : ctx.bases()[rng.below(static_cast<std::uint64_t>(d.value() + 1))];
            records[t] = run_trial(b, rng);
        }
    };

    const int nthreads = std::max(1, threads);
    if (nthreads == 1 || trials < 2) {
        worker(0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + nthreads - 1) / static_cast<std::uint64_t>(nthreads);
        for (int i = 0; i < nthreads; ++i) {
            const std::uint64_t begin = chunk * static_cast<std::uint64_t>(i);
            const std::uint64_t end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    SimReport report{d, protocol, seed, trials, prepared, policy.to_string(), 0, 0, 0, {}, {}};
    for (const auto& b : ctx.bases()) report.per_basis.push_back(SimReport::PerBasis{b});

    // aggregate in trial order
    for (std::uint64_t t = 0; t < trials; ++t) {
        const MeasurementRecord& rec = *records[t];
        auto& pb = report.per_basis[ctx.basis_ordinal(rec.king.basis)];
        ++pb.trials;
        switch (rec.verdict) {
            case Verdict::correct: ++report.correct; ++pb.correct; break;
            case Verdict::undetermined: ++report.undetermined; ++pb.undetermined; break;
            case Verdict::error: ++report.errors; ++pb.errors; break;
        }
    }
    return report;
}

inline VerdictMass expected_mass(const EnumReport& en, const BasisPolicy& policy,
                                 const ProtocolContext& ctx) {
    if (!policy.fixed) return en.uniform;
    return en.per_basis[ctx.basis_ordinal(*policy.fixed)].second;
}

}  // namespace detail

/// Mean King rounds: prepare the normalized royal state, let the King
/// measure, let Alice measure the line basis, reveal b, deduce m.
inline SimReport run_mkp(const ProtocolContext& ctx, std::uint64_t trials, std::uint64_t seed,
                         const BasisPolicy& policy = BasisPolicy::uniform(), int threads = 1) {
    SimReport report = detail::run_protocol(
        ctx, Protocol::mkp, std::nullopt, trials, seed, policy, threads,
        [&](const BasisLabel& b, CounterRng& rng) {
            KingResult king = king_measure(ctx, ctx.royal_normalized(), b, rng);
            AliceOutcome alice = alice_measure(ctx, king.post, rng);
            return make_mkp_record(KingChoice{b, king.outcome}, alice);
        });
    report.exact = detail::expected_mass(enumerate_mkp(ctx), policy, ctx);
    return report;
}

inline SimReport run_mkp(Dimension d, std::uint64_t trials, std::uint64_t seed,
                         const BasisPolicy& policy = BasisPolicy::uniform(), int threads = 1) {
    return run_mkp(ProtocolContext(d), trials, seed, policy, threads);
}

/// Tracking rounds: prepare a line state, let the King measure with b
/// hidden, deduce b from Alice's line outcome and the preparation.
inline SimReport run_track(const ProtocolContext& ctx, const Line& prepared, std::uint64_t trials,
                           std::uint64_t seed, const BasisPolicy& policy = BasisPolicy::uniform(),
                           int threads = 1) {
    const PairKet& prep = ctx.line(prepared).normalized;
    SimReport report = detail::run_protocol(
        ctx, Protocol::track, prepared, trials, seed, policy, threads,
        [&](const BasisLabel& b, CounterRng& rng) {
            KingResult king = king_measure(ctx, prep, b, rng);
            AliceOutcome alice = alice_measure(ctx, king.post, rng);
            return make_track_record(prepared, KingChoice{b, king.outcome}, alice);
        });
    report.exact = detail::expected_mass(enumerate_track(ctx, prepared), policy, ctx);
    return report;
}

inline SimReport run_track(Dimension d, const Line& prepared, std::uint64_t trials,
                           std::uint64_t seed, const BasisPolicy& policy = BasisPolicy::uniform(),
                           int threads = 1) {
    return run_track(ProtocolContext(d), prepared, trials, seed, policy, threads);
}

}  // namespace meslab
