#include <catch2/catch_amalgamated.hpp>

#include "meslab/mes.hpp"
#include "test_util.hpp"

using namespace meslab;

namespace {

Line ln(std::int64_t mdd, std::int64_t m0, Dimension d) {
    return Line{ModInt(mdd, d), ModInt(m0, d)};
}

}  // namespace

TEST_CASE("point states", "[mes]") {
    Dimension d(3);
    // CB points carry |n>|n>
    for (std::int64_t n = 0; n < 3; ++n) {
        PointState ps = point_state(Point{ModInt(n, d), BasisLabel::cb(d)});
        CHECK(ps.ket == tensor(ket_cb(ModInt(n, d)), ket_cb(ModInt(n, d))));
    }

    // (1,2) pairs with its tilde partner (2,1)
    PointState ps = point_state(Point{ModInt(1, d), BasisLabel::standard(ModInt(2, d))});
    CHECK(ps.ket == tensor(mub_state(ModInt(1, d), BasisLabel::standard(ModInt(2, d))),
                           mub_state(ModInt(2, d), BasisLabel::standard(ModInt(1, d)))));

    for (const auto& p : all_points(d)) CHECK(point_state(p).ket.is_normalized());
}

TEST_CASE("royal state", "[mes]") {
    Dimension d(3);
    PairKet royal = royal_state(d);
    for (std::int64_t n1 = 0; n1 < 3; ++n1)
        for (std::int64_t n2 = 0; n2 < 3; ++n2)
            CHECK(royal.amp(n1, n2) == (n1 == n2 ? CycNum::one(d) : CycNum::zero(d)));
    CHECK(royal.norm2() == CycNum::integer(d, 3));
    CHECK(royal_state_normalized(d).is_normalized());

    // every column of point states sums to it, the CB column trivially
    for (std::int64_t dv : {3, 5}) {
        Dimension dd(dv);
        PairKet r = royal_state(dd);
        for (const auto& b : all_basis_labels(dd)) {
            PairKet sum = PairKet::zero(dd, PairLabeling::particle);
            for (std::int64_t m = 0; m < dv; ++m)
                sum = sum + point_state(Point{ModInt(m, dd), b}).ket;
            CHECK(sum == r);
        }
    }
}

TEST_CASE("line states for d=3", "[mes]") {
    Dimension d(3);
    // j = (1,0): (|02> + |11> + |20>)/sqrt(3), no phases
    LineState s = line_state(ln(1, 0, d));
    const CycNum amp = CycNum::one(d).div_sqrt_d(1);
    for (std::int64_t n1 = 0; n1 < 3; ++n1)
        for (std::int64_t n2 = 0; n2 < 3; ++n2)
            CHECK(s.normalized.amp(n1, n2) == ((n1 + n2) % 3 == 2 ? amp : CycNum::zero(d, 1)));

    // j = (0,0): (|00> + |12> + |21>)/sqrt(3)
    LineState s0 = line_state(ln(0, 0, d));
    for (std::int64_t n1 = 0; n1 < 3; ++n1)
        for (std::int64_t n2 = 0; n2 < 3; ++n2)
            CHECK(s0.normalized.amp(n1, n2) == ((n1 + n2) % 3 == 0 ? amp : CycNum::zero(d, 1)));

    // unnormalized = sqrt(d) * normalized, and the set is orthonormal
    for (const auto& j : all_lines(d)) {
        LineState lsj = line_state(j);
        CHECK(lsj.unnormalized == mul_sqrt_d(lsj.normalized, 1));
        CHECK(lsj.normalized.is_normalized());
        for (const auto& k : all_lines(d)) {
            CycNum ov = inner(lsj.normalized, line_state(k).normalized);
            CHECK(ov == (j == k ? CycNum::one(d) : CycNum::zero(d)));
        }
    }
}

TEST_CASE("line operators", "[mes]") {
    Dimension d(3);
    // j = (0,0): 0/1 anti-diagonal with wraparound
    LineOperator P = line_operator(ln(0, 0, d));
    for (std::int64_t n = 0; n < 3; ++n)
        for (std::int64_t k = 0; k < 3; ++k)
            CHECK(P.entry(n, k) == ((n + k) % 3 == 0 ? CycNum::one(d) : CycNum::zero(d)));

    const CycNum three = CycNum::integer(d, 3);
    std::vector<LineOperator> ops;
    for (const auto& j : all_lines(d)) ops.push_back(line_operator(j));
    for (const auto& op : ops) CHECK(line_operator_squares_to_identity(op));
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t k = 0; k < ops.size(); ++k)
            CHECK(line_operator_trace_product(ops[i], ops[k]) ==
                  (i == k ? three : CycNum::zero(d)));
}

TEST_CASE("overlap law", "[mes]") {
    Dimension d(3);
    const CycNum inv_sqrt3 = CycNum::one(d).div_sqrt_d(1);

    CHECK(overlap_point_line(Point{ModInt(0, d), BasisLabel::standard(ModInt(0, d))}, ln(1, 0, d)) ==
          inv_sqrt3);
    CHECK(overlap_point_line(Point{ModInt(1, d), BasisLabel::standard(ModInt(0, d))}, ln(1, 0, d))
              .is_zero());
    for (std::int64_t m0 = 0; m0 < 3; ++m0)
        CHECK(overlap_point_line(Point{ModInt(1, d), BasisLabel::cb(d)}, ln(1, m0, d)) == inv_sqrt3);

    // law against membership, every pair
    for (const auto& p : all_points(d)) {
        PointState ps = point_state(p);
        for (const auto& j : all_lines(d)) {
            CycNum ov = overlap_point_line(ps, line_state(j));
            if (point_on_line(p, j))
                CHECK(ov == inv_sqrt3);
            else
                CHECK(ov.is_zero());
        }
    }
}

TEST_CASE("leaky particle marginals", "[mes]") {
    Dimension d(3);
    const CycNum inv_d = CycNum::one(d).div_sqrt_d(2);

    // CB bra: remainder is a single CB ket with an explicit phase,
    // chi = omega^{-2(n - m_dd) m0} / sqrt(d) |2 m_dd - n>
    for (std::int64_t n = 0; n < 3; ++n) {
        for (const auto& j : all_lines(d)) {
            LineState ls = line_state(j);
            Ket chi = partial_inner_1(ket_cb(ModInt(n, d)), ls.normalized);
            std::int64_t target = ((2 * j.m_dd.value() - n) % 3 + 3) % 3;
            CycNum phase = CycNum::root(ModInt(-2 * (n - j.m_dd.value()) * j.m0.value(), d));
            for (std::int64_t k = 0; k < 3; ++k) {
                if (k == target)
                    CHECK(chi.amp(k) == phase.div_sqrt_d(1));
                else
                    CHECK(chi.amp(k).is_zero());
            }
        }
    }

    LeakyMarginal lm = leaky_marginal(MubLabel{ModInt(0, d), BasisLabel::standard(ModInt(1, d))},
                                      ln(0, 0, d));
    CHECK(lm.norm2 == inv_d);
    CHECK(lm.basis == BasisLabel::standard(ModInt(2, d)));  // tilde of b=1

    // every pair: norm^2 = 1/d and the remainder is a single tilde-basis state
    for (const auto& l : all_mub_labels(d)) {
        for (const auto& j : all_lines(d)) {
            LeakyMarginal m = leaky_marginal(l, j);
            CHECK(m.norm2 == inv_d);
            CHECK(m.basis == tilde(l).b);
        }
    }
}

TEST_CASE("balance identities", "[mes]") {
    Dimension d(3);
    // explicit (iii) at alpha = (0,0): three lines reconstruct the point
    Point alpha{ModInt(0, d), BasisLabel::standard(ModInt(0, d))};
    PairKet sum = PairKet::zero(d, PairLabeling::particle);
    for (const auto& j : lines_through_point(alpha)) sum = sum + line_state(j).unnormalized;
    CHECK(sum == CycNum::integer(d, 3) * point_state(alpha).ket);

    CHECK(verify_balance(Dimension(3)).passed());
    CHECK(verify_balance(Dimension(7)).passed());
}

TEST_CASE("full mes sweep at d=3 and d=5", "[mes]") {
    CHECK(verify_mes(Dimension(3)).passed());
    CHECK(verify_mes(Dimension(5)).passed());
}
