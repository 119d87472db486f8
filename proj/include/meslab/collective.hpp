#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "meslab/arith.hpp"
#include "meslab/hilbert.hpp"
#include "meslab/mub.hpp"

namespace meslab {

/// Center-of-mass / relative labels of a pair state:
/// n_r = (n1 - n2)/2, n_c = (n1 + n2)/2, all mod d with the exact half.
struct CollectiveIndex {
    ModInt n_r;
    ModInt n_c;

    friend bool operator==(const CollectiveIndex& a, const CollectiveIndex& b) {
        return a.n_r == b.n_r && a.n_c == b.n_c;
    }
    friend bool operator!=(const CollectiveIndex& a, const CollectiveIndex& b) { return !(a == b); }
};

enum class CollectiveMode { relative, com };

inline CollectiveIndex to_collective(ModInt n1, ModInt n2) {
    ModInt h = half(n1.dim());
    return CollectiveIndex{(n1 - n2) * h, (n1 + n2) * h};
}

inline std::pair<ModInt, ModInt> from_collective(const CollectiveIndex& idx) {
    return {idx.n_r + idx.n_c, idx.n_c - idx.n_r};
}

/// Permutes amplitudes between particle and collective labelings; applying
/// twice restores the original state.
inline PairKet relabel(const PairKet& Psi) {
    Dimension d = Psi.dim();
    std::vector<CycNum> amps(Psi.amps().size(), CycNum::zero(d, Psi.scale()));
    if (Psi.labeling() == PairLabeling::particle) {
        for (std::int64_t nr = 0; nr < d.value(); ++nr) {
            for (std::int64_t nc = 0; nc < d.value(); ++nc) {
                auto [n1, n2] = from_collective(CollectiveIndex{ModInt(nr, d), ModInt(nc, d)});
                amps[Psi.flat(nr, nc)] = Psi.amp(n1, n2);
            }
        }
        return PairKet(d, std::move(amps), PairLabeling::collective);
    }
    for (std::int64_t n1 = 0; n1 < d.value(); ++n1) {
        for (std::int64_t n2 = 0; n2 < d.value(); ++n2) {
            CollectiveIndex idx = to_collective(ModInt(n1, d), ModInt(n2, d));
            amps[Psi.flat(n1, n2)] = Psi.amp(idx.n_r, idx.n_c);
        }
    }
    return PairKet(d, std::move(amps), PairLabeling::particle);
}

enum class CollectiveOp { z_r, z_c, x_r, x_c };

/// Collective Weyl operators. In collective labeling Z_s multiplies by
/// omega^{n_s} and X_s shifts n_s; a particle-labeled state is routed
/// through relabel and back.
inline PairKet apply_collective(CollectiveOp op, ModInt power, const PairKet& Psi) {
    if (Psi.labeling() == PairLabeling::particle)
        return relabel(apply_collective(op, power, relabel(Psi)));
    Dimension d = Psi.dim();
    std::vector<CycNum> amps(Psi.amps().size(), CycNum::zero(d, Psi.scale()));
    for (std::int64_t nr = 0; nr < d.value(); ++nr) {
        for (std::int64_t nc = 0; nc < d.value(); ++nc) {
            switch (op) {
                case CollectiveOp::z_r:
                    amps[Psi.flat(nr, nc)] = CycNum::root(power * nr) * Psi.amp(nr, nc);
                    break;
                case CollectiveOp::z_c:
                    amps[Psi.flat(nr, nc)] = CycNum::root(power * nc) * Psi.amp(nr, nc);
                    break;
                case CollectiveOp::x_r:
                    amps[Psi.flat((nr + power.value()) % d.value(), nc)] = Psi.amp(nr, nc);
                    break;
                case CollectiveOp::x_c:
                    amps[Psi.flat(nr, (nc + power.value()) % d.value())] = Psi.amp(nr, nc);
                    break;
            }
        }
    }
    return PairKet(d, std::move(amps), PairLabeling::collective);
}

/// The Eq.-style MUB construction on one collective mode's d-dimensional
/// factor. The amplitudes do not depend on the mode; the tag records which
/// factor the ket addresses.
inline Ket collective_mub_state(CollectiveMode mode, const MubLabel& l) {
    (void)mode;
    return mub_state(l);
}

/// Product state in the collective factors, (n_r major, n_c minor).
inline PairKet tensor_collective(const Ket& r_factor, const Ket& c_factor) {
    if (r_factor.dim() != c_factor.dim())
        throw std::invalid_argument("tensor_collective: dimension mismatch");
    Dimension d = r_factor.dim();
    std::vector<CycNum> amps;
    amps.reserve(static_cast<std::size_t>(d.value() * d.value()));
    for (std::int64_t nr = 0; nr < d.value(); ++nr)
        for (std::int64_t nc = 0; nc < d.value(); ++nc)
            amps.push_back(r_factor.amp(nr) * c_factor.amp(nc));
    return PairKet(d, std::move(amps), PairLabeling::collective);
}

/// tau on a pair state: amplitude conjugation in the particle CB
/// representation. Collective-labeled input is converted first.
inline PairKet apply_tau(const PairKet& Psi) {
    if (Psi.labeling() == PairLabeling::collective)
        return relabel(apply_tau(relabel(Psi)));
    std::vector<CycNum> amps;
    amps.reserve(Psi.amps().size());
    for (const auto& a : Psi.amps()) amps.push_back(a.conj());
    return PairKet(Psi.dim(), std::move(amps), PairLabeling::particle);
}

}  // namespace meslab
