#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "meslab/protocols.hpp"
#include "meslab/serialize.hpp"

using namespace meslab;

namespace {

Line ln(std::int64_t mdd, std::int64_t m0, Dimension d) {
    return Line{ModInt(mdd, d), ModInt(m0, d)};
}

bool within_4sigma(double freq, double p, std::uint64_t n) {
    return std::abs(freq - p) <= 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

TEST_CASE("counter rng", "[protocols]") {
    // canonical SplitMix64 first output for seed 0
    CounterRng rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFull);

    CounterRng a(derive_stream(42, 0));
    CounterRng b(derive_stream(42, 0));
    CHECK(a.next() == b.next());
    CHECK(derive_stream(42, 0) != derive_stream(42, 1));
    CHECK(derive_stream(42, 7) != derive_stream(43, 7));

    CounterRng c(123);
    for (int i = 0; i < 1000; ++i) CHECK(c.below(7) < 7);
    CHECK_THROWS_AS(c.below(0), std::invalid_argument);
}

TEST_CASE("fractions", "[protocols]") {
    CHECK(Fraction(2, 6) == Fraction(1, 3));
    CHECK(Fraction(2, 6).to_string() == "1/3");
    CHECK(Fraction(3, 1).to_string() == "3");
    CHECK(Fraction(1, 3) + Fraction(2, 3) == Fraction::one());
    CHECK(Fraction(1, 2) * Fraction(2, 5) == Fraction(1, 5));
    CHECK_THROWS_AS(Fraction(1, 0), std::invalid_argument);
}

TEST_CASE("king measurement on the royal state", "[protocols]") {
    Dimension d(3);
    ProtocolContext ctx(d);
    const CycNum inv_d = CycNum::one(d).div_sqrt_d(2);

    for (const auto& b : ctx.bases()) {
        // outcome distribution is uniform
        for (std::int64_t m = 0; m < 3; ++m) {
            Ket chi = partial_inner_1(ctx.mub(b, m), ctx.royal_normalized());
            CHECK(chi.norm2() == inv_d);
        }
        // the post state is exactly the point state of the observed outcome
        CounterRng rng(derive_stream(7, ctx.basis_ordinal(b)));
        KingResult r = king_measure(ctx, ctx.royal_normalized(), b, rng);
        CHECK(r.post == point_state(Point{r.outcome, b}).ket);
    }
}

TEST_CASE("king measurement on a line state sees the leaky law", "[protocols]") {
    Dimension d(5);
    ProtocolContext ctx(d);
    const CycNum inv_d = CycNum::one(d).div_sqrt_d(2);
    const PairKet& prep = ctx.line(ln(2, 3, d)).normalized;
    for (const auto& b : ctx.bases())
        for (std::int64_t m = 0; m < 5; ++m)
            CHECK(partial_inner_1(ctx.mub(b, m), prep).norm2() == inv_d);
}

TEST_CASE("alice measurement", "[protocols]") {
    Dimension d(3);
    ProtocolContext ctx(d);

    // on a line state the outcome is that line with certainty
    for (const auto& ls : ctx.lines()) {
        CounterRng rng(99);
        AliceOutcome a = alice_measure(ctx, ls.normalized, rng);
        CHECK(a.as_line() == ls.line);
    }

    // on a point state: the d lines through the point, each at 1/d
    Point alpha{ModInt(1, d), BasisLabel::standard(ModInt(2, d))};
    PairKet ps = point_state(alpha).ket;
    const CycNum inv_d = CycNum::one(d).div_sqrt_d(2);
    for (const auto& ls : ctx.lines()) {
        CycNum p = inner(ls.normalized, ps).abs2();
        if (point_on_line(alpha, ls.line))
            CHECK(p == inv_d);
        else
            CHECK(p.is_zero());
    }

    // sampled frequencies agree with the exact distribution
    const std::uint64_t n = 3000;
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> counts;
    for (std::uint64_t t = 0; t < n; ++t) {
        CounterRng rng(derive_stream(2024, t));
        AliceOutcome a = alice_measure(ctx, ps, rng);
        ++counts[{a.m_dd.value(), a.m0.value()}];
    }
    auto feasible = lines_through_point(alpha);
    CHECK(counts.size() == feasible.size());
    for (const auto& [key, c] : counts) {
        Line j = ln(key.first, key.second, d);
        CHECK(point_on_line(alpha, j));
        CHECK(within_4sigma(static_cast<double>(c) / static_cast<double>(n), 1.0 / 3.0, n));
    }
}

TEST_CASE("mkp deduction", "[protocols]") {
    Dimension d(3);
    AliceOutcome a{ModInt(1, d), ModInt(0, d)};
    CHECK(mkp_deduce(a, BasisLabel::standard(ModInt(1, d))).value() == 2);
    CHECK(mkp_deduce(a, BasisLabel::cb(d)).value() == 1);            // b = CB: m = m_dd'
    CHECK(mkp_deduce(a, BasisLabel::standard(ModInt(0, d))).value() == 0);  // b = 0: m = m0''
}

TEST_CASE("track deduction", "[protocols]") {
    Dimension d(3);
    Line prepared = ln(1, 0, d);

    auto b1 = track_deduce(prepared, AliceOutcome{ModInt(0, d), ModInt(1, d)});
    REQUIRE(b1.has_value());
    CHECK(*b1 == BasisLabel::standard(ModInt(1, d)));

    CHECK_FALSE(track_deduce(prepared, AliceOutcome{ModInt(1, d), ModInt(0, d)}).has_value());

    auto bcb = track_deduce(prepared, AliceOutcome{ModInt(1, d), ModInt(2, d)});
    REQUIRE(bcb.has_value());
    CHECK(bcb->is_cb());
}

TEST_CASE("mkp enumeration is exhaustive and always correct", "[protocols]") {
    Dimension d(3);
    EnumReport en = enumerate_mkp(d);
    CHECK(en.passed());
    CHECK(en.branches.size() == 36);  // (d+1) alignments x d outcomes x d feasible lines
    for (const auto& br : en.branches) CHECK(br.verdict == Verdict::correct);
    for (const auto& [b, mass] : en.per_basis) {
        CHECK(mass.correct == Fraction::one());
        CHECK(mass.undetermined == Fraction::zero());
        CHECK(mass.error == Fraction::zero());
    }
    CHECK(en.uniform.correct == Fraction::one());
}

TEST_CASE("track enumeration masses for every prepared line", "[protocols]") {
    Dimension d(3);
    ProtocolContext ctx(d);
    const Fraction corr(2, 3), undet(1, 3), zero = Fraction::zero();
    for (const auto& prep : all_lines(d)) {
        EnumReport en = enumerate_track(ctx, prep);
        CHECK(en.passed());
        for (const auto& [b, mass] : en.per_basis) {
            CHECK(mass.correct == corr);
            CHECK(mass.undetermined == undet);
            CHECK(mass.error == zero);
        }
    }
}

TEST_CASE("track enumeration branch structure", "[protocols]") {
    Dimension d(5);
    ProtocolContext ctx(d);
    Line prep = ln(1, 0, d);
    EnumReport en = enumerate_track(ctx, prep);
    CHECK(en.passed());
    // for standard b, the feasible alice outcomes obey m0'' - m0 = b (m_dd - m_dd')
    for (const auto& br : en.branches) {
        if (br.king.basis.is_cb()) {
            CHECK(br.alice.m_dd == prep.m_dd);
        } else {
            CHECK(br.alice.m0 - prep.m0 == br.king.basis.index() * (prep.m_dd - br.alice.m_dd));
        }
        CHECK(br.probability == Fraction(1, 25));
    }
    // the undetermined branch is exactly the prepared line itself
    for (const auto& br : en.branches)
        CHECK((br.verdict == Verdict::undetermined) == (br.alice.as_line() == prep));
}

TEST_CASE("mkp monte carlo always succeeds", "[protocols]") {
    for (std::int64_t dv : {3, 5}) {
        SimReport r = run_mkp(Dimension(dv), 500, 20240101);
        CHECK(r.correct == r.trials);
        CHECK(r.undetermined == 0);
        CHECK(r.errors == 0);
        CHECK(r.exact.correct == Fraction::one());
        std::uint64_t per_basis_total = 0;
        for (const auto& pb : r.per_basis) per_basis_total += pb.trials;
        CHECK(per_basis_total == r.trials);
    }
}

TEST_CASE("track monte carlo matches the exact masses", "[protocols]") {
    Dimension d(5);
    ProtocolContext ctx(d);
    const std::uint64_t n = 2000;

    // fixed standard alignment
    SimReport fixed = run_track(ctx, ln(1, 0, d), n, 7,
                                BasisPolicy::fixed_basis(BasisLabel::standard(ModInt(2, d))));
    CHECK(fixed.errors == 0);
    CHECK(fixed.exact.correct == Fraction(4, 5));
    CHECK(fixed.exact.undetermined == Fraction(1, 5));
    CHECK(within_4sigma(static_cast<double>(fixed.undetermined) / n, 0.2, n));

    // fixed CB alignment
    SimReport cb = run_track(ctx, ln(1, 0, d), n, 8, BasisPolicy::fixed_basis(BasisLabel::cb(d)));
    CHECK(cb.errors == 0);
    CHECK(within_4sigma(static_cast<double>(cb.undetermined) / n, 0.2, n));

    // uniform policy
    SimReport uni = run_track(ctx, ln(0, 2, d), n, 9);
    CHECK(uni.errors == 0);
    CHECK(uni.correct + uni.undetermined == n);
    CHECK(uni.exact.correct == Fraction(4, 5));
    CHECK(within_4sigma(static_cast<double>(uni.correct) / n, 0.8, n));
}

TEST_CASE("runs are deterministic and thread count does not matter", "[protocols]") {
    Dimension d(3);
    ProtocolContext ctx(d);

    SimReport a = run_mkp(ctx, 400, 77);
    SimReport b = run_mkp(ctx, 400, 77);
    CHECK(io::to_json(a).dump() == io::to_json(b).dump());

    SimReport t1 = run_track(ctx, ln(1, 2, d), 400, 5, BasisPolicy::uniform(), 1);
    SimReport t4 = run_track(ctx, ln(1, 2, d), 400, 5, BasisPolicy::uniform(), 4);
    CHECK(io::to_json(t1).dump() == io::to_json(t4).dump());

    SimReport m1 = run_mkp(ctx, 400, 5, BasisPolicy::uniform(), 1);
    SimReport m4 = run_mkp(ctx, 400, 5, BasisPolicy::uniform(), 4);
    CHECK(io::to_json(m1).dump() == io::to_json(m4).dump());

    // different seeds give different draws somewhere
    SimReport c = run_mkp(ctx, 400, 78);
    bool same_breakdown = true;
    for (std::size_t i = 0; i < a.per_basis.size(); ++i)
        same_breakdown = same_breakdown && a.per_basis[i].trials == c.per_basis[i].trials;
    CHECK_FALSE(same_breakdown);
}

TEST_CASE("protocol sweep", "[protocols]") {
    CHECK(verify_protocols(Dimension(3)).passed());
    CHECK(verify_protocols(Dimension(5)).passed());
}

TEST_CASE("invalid configurations", "[protocols]") {
    Dimension d(3);
    ProtocolContext ctx(d);
    CHECK_THROWS_AS(run_mkp(ctx, 0, 1), std::invalid_argument);
    CounterRng rng(1);
    PairKet unnorm = royal_state(d);
    CHECK_THROWS_AS(king_measure(ctx, unnorm, BasisLabel::cb(d), rng), std::invalid_argument);
}
