#include <catch2/catch_amalgamated.hpp>

#include "meslab/collective.hpp"
#include "meslab/mes.hpp"
#include "test_util.hpp"

using namespace meslab;
using testutil::random_pair_ket;

TEST_CASE("coordinate bijection", "[collective]") {
    Dimension d(3);
    CollectiveIndex idx = to_collective(ModInt(2, d), ModInt(0, d));
    CHECK(idx.n_r.value() == 1);
    CHECK(idx.n_c.value() == 1);

    for (std::int64_t n = 0; n < 3; ++n) {
        CollectiveIndex diag = to_collective(ModInt(n, d), ModInt(n, d));
        CHECK(diag.n_r.value() == 0);
        CHECK(diag.n_c.value() == n);
    }

    Dimension d5(5);
    for (std::int64_t n1 = 0; n1 < 5; ++n1)
        for (std::int64_t n2 = 0; n2 < 5; ++n2) {
            auto [m1, m2] = from_collective(to_collective(ModInt(n1, d5), ModInt(n2, d5)));
            CHECK(m1.value() == n1);
            CHECK(m2.value() == n2);
        }
}

TEST_CASE("bijection as inner products", "[collective]") {
    Dimension d(3);
    for (std::int64_t n1 = 0; n1 < 3; ++n1)
        for (std::int64_t n2 = 0; n2 < 3; ++n2) {
            PairKet basis = relabel(tensor(ket_cb(ModInt(n1, d)), ket_cb(ModInt(n2, d))));
            CollectiveIndex idx = to_collective(ModInt(n1, d), ModInt(n2, d));
            for (std::int64_t nr = 0; nr < 3; ++nr)
                for (std::int64_t nc = 0; nc < 3; ++nc) {
                    bool hit = nr == idx.n_r.value() && nc == idx.n_c.value();
                    CHECK(basis.amp(nr, nc) == (hit ? CycNum::one(d) : CycNum::zero(d)));
                }
        }
}

TEST_CASE("relabel", "[collective]") {
    Dimension d(3);
    PairKet royal_coll = relabel(royal_state(d));
    CHECK(royal_coll.labeling() == PairLabeling::collective);
    for (std::int64_t nr = 0; nr < 3; ++nr)
        for (std::int64_t nc = 0; nc < 3; ++nc)
            CHECK(royal_coll.amp(nr, nc) == (nr == 0 ? CycNum::one(d) : CycNum::zero(d)));

    CounterRng rng(7);
    for (int i = 0; i < 20; ++i) {
        PairKet Psi = random_pair_ket(d, rng);
        CHECK(relabel(relabel(Psi)) == Psi);
    }

    PairKet p = relabel(tensor(ket_cb(ModInt(2, d)), ket_cb(ModInt(0, d))));
    CHECK(p.amp(1, 1) == CycNum::one(d));
}

TEST_CASE("collective operators", "[collective]") {
    Dimension d(3);
    // X_c shifts n_c on a collective CB state
    PairKet basis = relabel(tensor(ket_cb(ModInt(0, d)), ket_cb(ModInt(0, d))));
    PairKet shifted = apply_collective(CollectiveOp::x_c, ModInt(1, d), basis);
    CHECK(shifted.amp(0, 1) == CycNum::one(d));

    // period d
    CounterRng rng(13);
    for (CollectiveOp op : {CollectiveOp::z_r, CollectiveOp::z_c, CollectiveOp::x_r, CollectiveOp::x_c}) {
        PairKet Psi = random_pair_ket(d, rng, PairLabeling::collective);
        PairKet walked = Psi;
        for (int i = 0; i < 3; ++i) walked = apply_collective(op, ModInt(1, d), walked);
        CHECK(walked == Psi);
    }
}

TEST_CASE("particle operators factor through collective ones", "[collective]") {
    Dimension d(5);
    ModInt h = half(d);
    CounterRng rng(17);
    for (int i = 0; i < 100; ++i) {
        PairKet Psi = random_pair_ket(d, rng);
        ModInt k(static_cast<std::int64_t>(rng.below(5)), d);
        // Z_1 = Z_r Z_c ; Z_2 = Z_r^{-1} Z_c
        CHECK(apply_z1_pow(k, Psi) ==
              apply_collective(CollectiveOp::z_r, k, apply_collective(CollectiveOp::z_c, k, Psi)));
        CHECK(apply_z2_pow(k, Psi) ==
              apply_collective(CollectiveOp::z_r, -k, apply_collective(CollectiveOp::z_c, k, Psi)));
        // X_1 = X_r^{1/2} X_c^{1/2} ; X_2 = X_r^{-1/2} X_c^{1/2}
        CHECK(apply_x1_pow(k, Psi) ==
              apply_collective(CollectiveOp::x_r, k * h,
                               apply_collective(CollectiveOp::x_c, k * h, Psi)));
        CHECK(apply_x2_pow(k, Psi) ==
              apply_collective(CollectiveOp::x_r, -(k * h),
                               apply_collective(CollectiveOp::x_c, k * h, Psi)));
    }
}

TEST_CASE("collective weyl commutation", "[collective]") {
    Dimension d(3);
    CounterRng rng(19);
    const CycNum omega = CycNum::root(ModInt(1, d));
    for (int i = 0; i < 20; ++i) {
        PairKet Psi = random_pair_ket(d, rng, PairLabeling::collective);
        // same mode: acting with X_s then Z_s equals omega times Z_s then X_s
        for (auto [x, z] : {std::pair{CollectiveOp::x_r, CollectiveOp::z_r},
                            std::pair{CollectiveOp::x_c, CollectiveOp::z_c}}) {
            PairKet x_then_z = apply_collective(z, ModInt(1, d), apply_collective(x, ModInt(1, d), Psi));
            PairKet z_then_x = apply_collective(x, ModInt(1, d), apply_collective(z, ModInt(1, d), Psi));
            CHECK(x_then_z == omega * z_then_x);
        }
        // different modes commute outright
        for (auto [x, z] : {std::pair{CollectiveOp::x_r, CollectiveOp::z_c},
                            std::pair{CollectiveOp::x_c, CollectiveOp::z_r}}) {
            PairKet a = apply_collective(z, ModInt(1, d), apply_collective(x, ModInt(1, d), Psi));
            PairKet b = apply_collective(x, ModInt(1, d), apply_collective(z, ModInt(1, d), Psi));
            CHECK(a == b);
        }
    }
}

TEST_CASE("both routes of a collective operator agree", "[collective]") {
    Dimension d(3);
    for (CollectiveOp op : {CollectiveOp::z_r, CollectiveOp::z_c, CollectiveOp::x_r, CollectiveOp::x_c}) {
        for (std::int64_t n1 = 0; n1 < 3; ++n1)
            for (std::int64_t n2 = 0; n2 < 3; ++n2) {
                PairKet particle = tensor(ket_cb(ModInt(n1, d)), ket_cb(ModInt(n2, d)));
                PairKet via_particle = apply_collective(op, ModInt(1, d), particle);
                PairKet via_collective =
                    relabel(apply_collective(op, ModInt(1, d), relabel(particle)));
                CHECK(via_particle == via_collective);
            }
    }
}

TEST_CASE("collective mub states", "[collective]") {
    Dimension d(3);
    // the Fourier-type state used by the line construction: (1/sqrt d) sum omega^{-2 m0 n} |n>_r
    for (std::int64_t m0 = 0; m0 < 3; ++m0) {
        Ket f = collective_mub_state(CollectiveMode::relative,
                                     MubLabel{ModInt(2 * m0, d), BasisLabel::standard(ModInt(0, d))});
        for (std::int64_t n = 0; n < 3; ++n)
            CHECK(f.amp(n) == CycNum::root(ModInt(-2 * m0 * n, d)).div_sqrt_d(1));
    }

    // the CB label of a mode factor is a computational ket
    CHECK(collective_mub_state(CollectiveMode::com, MubLabel{ModInt(2, d), BasisLabel::cb(d)}) ==
          ket_cb(ModInt(2, d)));

    // mode factors inherit unbiasedness (they are the same d-dimensional construction)
    for (std::int64_t m = 0; m < 3; ++m)
        for (std::int64_t b = 0; b < 3; ++b)
            CHECK(collective_mub_state(CollectiveMode::relative,
                                       MubLabel{ModInt(m, d), BasisLabel::standard(ModInt(b, d))}) ==
                  mub_state(ModInt(m, d), BasisLabel::standard(ModInt(b, d))));
}

TEST_CASE("tau on pair states", "[collective]") {
    Dimension d(3);
    CounterRng rng(23);
    for (int i = 0; i < 20; ++i) {
        PairKet Psi = random_pair_ket(d, rng);
        PairKet coll = relabel(Psi);
        // tau commutes with the relabeling permutation
        CHECK(apply_tau(coll) == relabel(apply_tau(Psi)));
        CHECK(apply_tau(apply_tau(Psi)) == Psi);
    }
}
