#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "meslab/arith.hpp"

namespace meslab {

/// Index convention tag for a pair state: particle labels (n1, n2) or
/// collective labels (n_r, n_c). Conversions are explicit, never implicit.
enum class PairLabeling { particle, collective };

inline const char* to_string(PairLabeling l) {
    return l == PairLabeling::particle ? "particle" : "collective";
}

/// Dense exact state vector of one d-dimensional system. All amplitudes
/// are held at one common scale.
class Ket {
public:
    Ket(Dimension dim, std::vector<CycNum> amps) : dim_(dim), amps_(std::move(amps)) {
        if (static_cast<std::int64_t>(amps_.size()) != dim_.value())
            throw std::invalid_argument("Ket: amplitude count must equal d");
        align_scales(amps_);
    }

    static Ket zero(Dimension dim, int scale = 0) {
        return Ket(dim, std::vector<CycNum>(dim.value(), CycNum::zero(dim, scale)));
    }

    Dimension dim() const { return dim_; }
    int scale() const { return amps_.front().scale(); }
    const std::vector<CycNum>& amps() const { return amps_; }
    const CycNum& amp(std::int64_t n) const { return amps_.at(static_cast<std::size_t>(n)); }
    const CycNum& amp(ModInt n) const { return amp(n.value()); }

    CycNum norm2() const {
        CycNum acc = CycNum::zero(dim_, 2 * scale());
        for (const auto& a : amps_) acc = acc + a.abs2();
        return acc;
    }

    bool is_normalized() const { return norm2() == CycNum::one(dim_); }

    /// Exact normalization; only norms of the form 1/sqrt(d)^k occur here.
    Ket normalized() const;

    friend bool operator==(const Ket& a, const Ket& b) {
        if (a.dim_ != b.dim_) return false;
        for (std::size_t i = 0; i < a.amps_.size(); ++i)
            if (a.amps_[i] != b.amps_[i]) return false;
        return true;
    }
    friend bool operator!=(const Ket& a, const Ket& b) { return !(a == b); }

    /// Brings every amplitude to one representation scale. Exact zeros adopt
    /// whatever parity the rest of the vector uses.
    static void align_scales(std::vector<CycNum>& amps) {
        int target = 0;
        bool any_nonzero = false;
        for (const auto& a : amps) {
            if (a.is_zero()) continue;
            if (!any_nonzero) {
                target = a.scale();
                any_nonzero = true;
            } else {
                if (a.scale() % 2 != target % 2)
                    throw ScaleParityError("amplitudes at scales of different parity");
                target = std::max(target, a.scale());
            }
        }
        if (!any_nonzero)
            for (const auto& a : amps) target = std::max(target, a.scale());
        for (auto& a : amps) a = a.rescaled_to(target);
    }

private:
    Dimension dim_;
    std::vector<CycNum> amps_;
};

/// Dense exact state vector of a pair of d-dimensional systems, d^2
/// amplitudes indexed row-major by the major label first:
/// particle labeling (n1, n2) -> n1*d + n2, collective (n_r, n_c) -> n_r*d + n_c.
class PairKet {
public:
    PairKet(Dimension dim, std::vector<CycNum> amps, PairLabeling labeling)
        : dim_(dim), labeling_(labeling), amps_(std::move(amps)) {
        if (static_cast<std::int64_t>(amps_.size()) != dim_.value() * dim_.value())
            throw std::invalid_argument("PairKet: amplitude count must equal d^2");
        Ket::align_scales(amps_);
    }

    static PairKet zero(Dimension dim, PairLabeling labeling, int scale = 0) {
        return PairKet(dim, std::vector<CycNum>(dim.value() * dim.value(), CycNum::zero(dim, scale)),
                       labeling);
    }

    Dimension dim() const { return dim_; }
    PairLabeling labeling() const { return labeling_; }
    int scale() const { return amps_.front().scale(); }
    const std::vector<CycNum>& amps() const { return amps_; }

    const CycNum& amp(std::int64_t major, std::int64_t minor) const {
        return amps_[flat(major, minor)];
    }
    const CycNum& amp(ModInt major, ModInt minor) const { return amp(major.value(), minor.value()); }

    std::size_t flat(std::int64_t major, std::int64_t minor) const {
        return static_cast<std::size_t>(major * dim_.value() + minor);
    }

    CycNum norm2() const {
        CycNum acc = CycNum::zero(dim_, 2 * scale());
        for (const auto& a : amps_) acc = acc + a.abs2();
        return acc;
    }

    bool is_normalized() const { return norm2() == CycNum::one(dim_); }

    PairKet normalized() const;

    friend bool operator==(const PairKet& a, const PairKet& b) {
        if (a.dim_ != b.dim_ || a.labeling_ != b.labeling_) return false;
        for (std::size_t i = 0; i < a.amps_.size(); ++i)
            if (a.amps_[i] != b.amps_[i]) return false;
        return true;
    }
    friend bool operator!=(const PairKet& a, const PairKet& b) { return !(a == b); }

private:
    Dimension dim_;
    PairLabeling labeling_;
    std::vector<CycNum> amps_;
};

namespace detail {

template <typename State>
State map_amps(const State& s, const CycNum& factor) {
    std::vector<CycNum> amps;
    amps.reserve(s.amps().size());
    for (const auto& a : s.amps()) amps.push_back(factor * a);
    if constexpr (std::is_same_v<State, Ket>)
        return Ket(s.dim(), std::move(amps));
    else
        return PairKet(s.dim(), std::move(amps), s.labeling());
}

template <typename State, typename Fn>
State zip_amps(const State& a, const State& b, Fn&& fn) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("dimension mismatch");
    std::vector<CycNum> amps;
    amps.reserve(a.amps().size());
    for (std::size_t i = 0; i < a.amps().size(); ++i) amps.push_back(fn(a.amps()[i], b.amps()[i]));
    if constexpr (std::is_same_v<State, Ket>) {
        return Ket(a.dim(), std::move(amps));
    } else {
        if (a.labeling() != b.labeling())
            throw std::invalid_argument("labeling mismatch");
        return PairKet(a.dim(), std::move(amps), a.labeling());
    }
}

template <typename State>
State normalized_impl(const State& s) {
    // Exact normalization exists only when norm^2 is a (positive or
    // negative) power of d; that covers every state this artifact builds.
    auto parts = s.norm2().rational_parts();
    int up = 0, down = 0;
    if (parts && parts->num == 1) {
        up = parts->dpow;  // norm^2 = 1/d^k: multiply by sqrt(d)^k
    } else if (parts && parts->dpow == 0 && parts->num > 0) {
        std::int64_t n = parts->num;
        while (n % s.dim().value() == 0) {
            n /= s.dim().value();
            ++down;  // norm^2 = d^k: divide by sqrt(d)^k
        }
        if (n != 1)
            throw std::domain_error("normalized: norm^2 is not a power of d: " +
                                    s.norm2().to_string());
    } else {
        throw std::domain_error("normalized: norm^2 is not a power of d: " +
                                s.norm2().to_string());
    }
    std::vector<CycNum> amps;
    amps.reserve(s.amps().size());
    for (const auto& a : s.amps())
        amps.push_back(up > 0 ? a.mul_sqrt_d(up) : a.div_sqrt_d(down));
    if constexpr (std::is_same_v<State, Ket>)
        return Ket(s.dim(), std::move(amps));
    else
        return PairKet(s.dim(), std::move(amps), s.labeling());
}

}  // namespace detail

inline Ket operator*(const CycNum& c, const Ket& psi) { return detail::map_amps(psi, c); }
inline PairKet operator*(const CycNum& c, const PairKet& psi) { return detail::map_amps(psi, c); }

inline Ket operator+(const Ket& a, const Ket& b) {
    return detail::zip_amps(a, b, [](const CycNum& x, const CycNum& y) { return x + y; });
}
inline Ket operator-(const Ket& a, const Ket& b) {
    return detail::zip_amps(a, b, [](const CycNum& x, const CycNum& y) { return x - y; });
}
inline PairKet operator+(const PairKet& a, const PairKet& b) {
    return detail::zip_amps(a, b, [](const CycNum& x, const CycNum& y) { return x + y; });
}
inline PairKet operator-(const PairKet& a, const PairKet& b) {
    return detail::zip_amps(a, b, [](const CycNum& x, const CycNum& y) { return x - y; });
}

inline Ket mul_sqrt_d(const Ket& s, int k) {
    std::vector<CycNum> amps;
    for (const auto& a : s.amps()) amps.push_back(a.mul_sqrt_d(k));
    return Ket(s.dim(), std::move(amps));
}
inline PairKet mul_sqrt_d(const PairKet& s, int k) {
    std::vector<CycNum> amps;
    for (const auto& a : s.amps()) amps.push_back(a.mul_sqrt_d(k));
    return PairKet(s.dim(), std::move(amps), s.labeling());
}
inline Ket div_sqrt_d(const Ket& s, int k) {
    std::vector<CycNum> amps;
    for (const auto& a : s.amps()) amps.push_back(a.div_sqrt_d(k));
    return Ket(s.dim(), std::move(amps));
}
inline PairKet div_sqrt_d(const PairKet& s, int k) {
    std::vector<CycNum> amps;
    for (const auto& a : s.amps()) amps.push_back(a.div_sqrt_d(k));
    return PairKet(s.dim(), std::move(amps), s.labeling());
}

inline Ket Ket::normalized() const { return detail::normalized_impl(*this); }
inline PairKet PairKet::normalized() const { return detail::normalized_impl(*this); }

/// Computational basis ket |n>.
inline Ket ket_cb(ModInt n) {
    Dimension d = n.dim();
    std::vector<CycNum> amps(d.value(), CycNum::zero(d));
    amps[static_cast<std::size_t>(n.value())] = CycNum::one(d);
    return Ket(d, std::move(amps));
}

/// Z^k: multiplies the amplitude at |n> by omega^{k n}.
inline Ket apply_z_pow(ModInt k, const Ket& psi) {
    Dimension d = psi.dim();
    std::vector<CycNum> amps;
    amps.reserve(psi.amps().size());
    for (std::int64_t n = 0; n < d.value(); ++n)
        amps.push_back(CycNum::root(k * n) * psi.amp(n));
    return Ket(d, std::move(amps));
}

/// X^k: shifts |n> -> |n + k>.
inline Ket apply_x_pow(ModInt k, const Ket& psi) {
    Dimension d = psi.dim();
    std::vector<CycNum> amps(psi.amps().size(), CycNum::zero(d));
    for (std::int64_t n = 0; n < d.value(); ++n)
        amps[static_cast<std::size_t>((n + k.value()) % d.value())] = psi.amp(n);
    return Ket(d, std::move(amps));
}

/// <phi|psi> = sum conj(phi_i) psi_i, exact.
inline CycNum inner(const Ket& phi, const Ket& psi) {
    if (phi.dim() != psi.dim())
        throw std::invalid_argument("inner: dimension mismatch");
    CycNum acc = CycNum::zero(phi.dim(), phi.scale() + psi.scale());
    for (std::size_t i = 0; i < phi.amps().size(); ++i) {
        if (phi.amps()[i].is_zero() || psi.amps()[i].is_zero()) continue;
        acc = acc + phi.amps()[i].conj() * psi.amps()[i];
    }
    return acc;
}

inline CycNum inner(const PairKet& phi, const PairKet& psi) {
    if (phi.dim() != psi.dim())
        throw std::invalid_argument("inner: dimension mismatch");
    if (phi.labeling() != psi.labeling())
        throw std::invalid_argument("inner: labeling mismatch");
    CycNum acc = CycNum::zero(phi.dim(), phi.scale() + psi.scale());
    for (std::size_t i = 0; i < phi.amps().size(); ++i) {
        if (phi.amps()[i].is_zero() || psi.amps()[i].is_zero()) continue;
        acc = acc + phi.amps()[i].conj() * psi.amps()[i];
    }
    return acc;
}

/// |phi>_1 |psi>_2 with particle labeling, (n1, n2) row-major.
inline PairKet tensor(const Ket& phi, const Ket& psi) {
    if (phi.dim() != psi.dim())
        throw std::invalid_argument("tensor: dimension mismatch");
    Dimension d = phi.dim();
    std::vector<CycNum> amps;
    amps.reserve(static_cast<std::size_t>(d.value() * d.value()));
    for (std::int64_t n1 = 0; n1 < d.value(); ++n1)
        for (std::int64_t n2 = 0; n2 < d.value(); ++n2)
            amps.push_back(phi.amp(n1) * psi.amp(n2));
    return PairKet(d, std::move(amps), PairLabeling::particle);
}

/// Contracts particle 1 with the bra <phi|: chi[n2] = sum_n1 conj(phi[n1]) Psi[n1, n2].
inline Ket partial_inner_1(const Ket& phi, const PairKet& Psi) {
    if (phi.dim() != Psi.dim())
        throw std::invalid_argument("partial_inner_1: dimension mismatch");
    if (Psi.labeling() != PairLabeling::particle)
        throw std::invalid_argument("partial_inner_1: pair state must carry particle labeling");
    Dimension d = phi.dim();
    std::vector<CycNum> amps;
    amps.reserve(static_cast<std::size_t>(d.value()));
    for (std::int64_t n2 = 0; n2 < d.value(); ++n2) {
        CycNum acc = CycNum::zero(d, phi.scale() + Psi.scale());
        for (std::int64_t n1 = 0; n1 < d.value(); ++n1) {
            if (phi.amp(n1).is_zero() || Psi.amp(n1, n2).is_zero()) continue;
            acc = acc + phi.amp(n1).conj() * Psi.amp(n1, n2);
        }
        amps.push_back(acc);
    }
    return Ket(d, std::move(amps));
}

/// Inversion I|n> = |-n>.
inline Ket apply_inversion(const Ket& psi) {
    Dimension d = psi.dim();
    std::vector<CycNum> amps(psi.amps().size(), CycNum::zero(d));
    for (std::int64_t n = 0; n < d.value(); ++n)
        amps[static_cast<std::size_t>(((d.value() - n) % d.value()))] = psi.amp(n);
    return Ket(d, std::move(amps));
}

/// Antiunitary tau: conjugates every amplitude in the CB representation.
inline Ket apply_tau(const Ket& psi) {
    std::vector<CycNum> amps;
    for (const auto& a : psi.amps()) amps.push_back(a.conj());
    return Ket(psi.dim(), std::move(amps));
}

namespace detail {

inline void require_particle(const PairKet& Psi, const char* op) {
    if (Psi.labeling() != PairLabeling::particle)
        throw std::invalid_argument(std::string(op) + ": pair state must carry particle labeling");
}

}  // namespace detail

/// Single-particle Weyl operators acting on a particle-labeled pair state.
inline PairKet apply_z1_pow(ModInt k, const PairKet& Psi) {
    detail::require_particle(Psi, "apply_z1_pow");
    Dimension d = Psi.dim();
    std::vector<CycNum> amps;
    amps.reserve(Psi.amps().size());
    for (std::int64_t n1 = 0; n1 < d.value(); ++n1)
        for (std::int64_t n2 = 0; n2 < d.value(); ++n2)
            amps.push_back(CycNum::root(k * n1) * Psi.amp(n1, n2));
    return PairKet(d, std::move(amps), PairLabeling::particle);
}

inline PairKet apply_z2_pow(ModInt k, const PairKet& Psi) {
    detail::require_particle(Psi, "apply_z2_pow");
    Dimension d = Psi.dim();
    std::vector<CycNum> amps;
    amps.reserve(Psi.amps().size());
    for (std::int64_t n1 = 0; n1 < d.value(); ++n1)
        for (std::int64_t n2 = 0; n2 < d.value(); ++n2)
            amps.push_back(CycNum::root(k * n2) * Psi.amp(n1, n2));
    return PairKet(d, std::move(amps), PairLabeling::particle);
}

inline PairKet apply_x1_pow(ModInt k, const PairKet& Psi) {
    detail::require_particle(Psi, "apply_x1_pow");
    Dimension d = Psi.dim();
    std::vector<CycNum> amps(Psi.amps().size(), CycNum::zero(d));
    for (std::int64_t n1 = 0; n1 < d.value(); ++n1)
        for (std::int64_t n2 = 0; n2 < d.value(); ++n2)
            amps[Psi.flat((n1 + k.value()) % d.value(), n2)] = Psi.amp(n1, n2);
    return PairKet(d, std::move(amps), PairLabeling::particle);
}

inline PairKet apply_x2_pow(ModInt k, const PairKet& Psi) {
    detail::require_particle(Psi, "apply_x2_pow");
    Dimension d = Psi.dim();
    std::vector<CycNum> amps(Psi.amps().size(), CycNum::zero(d));
    for (std::int64_t n1 = 0; n1 < d.value(); ++n1)
        for (std::int64_t n2 = 0; n2 < d.value(); ++n2)
            amps[Psi.flat(n1, (n2 + k.value()) % d.value())] = Psi.amp(n1, n2);
    return PairKet(d, std::move(amps), PairLabeling::particle);
}

}  // namespace meslab
