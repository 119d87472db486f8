#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace meslab {

/// Raised when two cyclotomic values sit at scales of different parity.
/// An odd power of 1/sqrt(d) cannot be folded into the integer coefficient
/// grid without expanding sqrt(d) as a Gauss sum, which would make
/// representations non-unique, so the comparison is rejected instead.
class ScaleParityError : public std::invalid_argument {
public:
    explicit ScaleParityError(const std::string& what) : std::invalid_argument(what) {}
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("coefficient overflow in add");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw std::overflow_error("coefficient overflow in sub");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("coefficient overflow in mul");
    return r;
}

}  // namespace detail

/// An odd prime d, the single parameter of the whole construction.
class Dimension {
public:
    static constexpr std::int64_t max_supported = 1'000'000;

    explicit Dimension(std::int64_t d) : d_(d) {
        if (d < 3 || d > max_supported || !is_prime(d) || d == 2)
            throw std::invalid_argument("dimension must be an odd prime (3 <= d <= 10^6), got " +
                                        std::to_string(d));
    }

    std::int64_t value() const { return d_; }

    friend bool operator==(Dimension a, Dimension b) { return a.d_ == b.d_; }
    friend bool operator!=(Dimension a, Dimension b) { return a.d_ != b.d_; }

private:
    static bool is_prime(std::int64_t n) {
        if (n < 2) return false;
        for (std::int64_t p = 2; p * p <= n; ++p)
            if (n % p == 0) return false;
        return true;
    }

    std::int64_t d_;
};

/// Element of Z_d, always stored reduced to [0, d).
class ModInt {
public:
    ModInt(std::int64_t value, Dimension dim)
        : v_(((value % dim.value()) + dim.value()) % dim.value()), dim_(dim) {}

    std::int64_t value() const { return v_; }
    Dimension dim() const { return dim_; }

    ModInt operator-() const { return ModInt(-v_, dim_); }

    friend ModInt operator+(ModInt a, ModInt b) { return ModInt(a.matched(b).v_ + b.v_, a.dim_); }
    friend ModInt operator-(ModInt a, ModInt b) { return ModInt(a.matched(b).v_ - b.v_, a.dim_); }
    friend ModInt operator*(ModInt a, ModInt b) { return ModInt(a.matched(b).v_ * b.v_, a.dim_); }

    friend ModInt operator+(ModInt a, std::int64_t b) { return ModInt(a.v_ + b % a.dim_.value(), a.dim_); }
    friend ModInt operator-(ModInt a, std::int64_t b) { return ModInt(a.v_ - b % a.dim_.value(), a.dim_); }
    friend ModInt operator*(ModInt a, std::int64_t b) { return ModInt(a.v_ * (((b % a.dim_.value()) + a.dim_.value()) % a.dim_.value()), a.dim_); }
    friend ModInt operator*(std::int64_t a, ModInt b) { return b * a; }

    friend bool operator==(ModInt a, ModInt b) { return a.dim_ == b.dim_ && a.v_ == b.v_; }
    friend bool operator!=(ModInt a, ModInt b) { return !(a == b); }

private:
    const ModInt& matched(const ModInt& other) const {
        if (dim_ != other.dim_)
            throw std::invalid_argument("ModInt dimension mismatch");
        return *this;
    }

    std::int64_t v_;
    Dimension dim_;
};

/// Multiplicative inverse in Z_d (d prime). Zero has none.
inline ModInt mod_inv(ModInt a) {
    if (a.value() == 0)
        throw std::domain_error("mod_inv: zero has no multiplicative inverse");
    // extended Euclid
    std::int64_t d = a.dim().value();
    std::int64_t r0 = d, r1 = a.value(), t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    return ModInt(t0, a.dim());
}

/// (d+1)/2, the inverse of 2 mod d. Half-integer exponents route through
/// this value everywhere.
inline ModInt half(Dimension d) {
    return ModInt((d.value() + 1) / 2, d);
}

/// Exact element of the cyclotomic ring Z[omega], omega = e^{2 pi i / d},
/// carrying a formal power of 1/sqrt(d):
///
///   value = (sum_k coeffs[k] * omega^k) / sqrt(d)^scale.
///
/// Canonical form keeps coeffs[d-1] == 0, so {1, omega, ..., omega^{d-2}}
/// acts as an integral basis and equality is a plain vector comparison.
/// Raising scale by 2 while multiplying every coefficient by d preserves
/// the value; scales of unequal parity are never merged (ScaleParityError).
class CycNum {
public:
    CycNum(Dimension dim, std::vector<std::int64_t> coeffs, int scale = 0)
        : dim_(dim), scale_(scale), coeffs_(std::move(coeffs)) {
        if (static_cast<std::int64_t>(coeffs_.size()) != dim_.value())
            throw std::invalid_argument("CycNum: coefficient vector must have length d");
        if (scale_ < 0)
            throw std::invalid_argument("CycNum: scale must be non-negative");
        canonicalize();
    }

    static CycNum zero(Dimension dim, int scale = 0) {
        return CycNum(dim, std::vector<std::int64_t>(dim.value(), 0), scale);
    }

    static CycNum one(Dimension dim) { return integer(dim, 1); }

    static CycNum integer(Dimension dim, std::int64_t value) {
        std::vector<std::int64_t> c(dim.value(), 0);
        c[0] = value;
        return CycNum(dim, std::move(c), 0);
    }

    /// omega^k at scale 0.
    static CycNum root(ModInt k) {
        std::vector<std::int64_t> c(k.dim().value(), 0);
        c[static_cast<std::size_t>(k.value())] = 1;
        return CycNum(k.dim(), std::move(c), 0);
    }

    Dimension dim() const { return dim_; }
    int scale() const { return scale_; }
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
    bool is_zero() const { return zero_; }

    CycNum operator-() const {
        std::vector<std::int64_t> c(coeffs_.size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = detail::checked_sub(0, coeffs_[k]);
        return CycNum(dim_, std::move(c), scale_);
    }

    /// Complex conjugate: omega^k -> omega^{d-k}.
    CycNum conj() const {
        std::size_t d = coeffs_.size();
        std::vector<std::int64_t> c(d);
        for (std::size_t k = 0; k < d; ++k) c[(d - k) % d] = coeffs_[k];
        return CycNum(dim_, std::move(c), scale_);
    }

    /// a * conj(a); real and non-negative, rational for every overlap in
    /// this artifact.
    CycNum abs2() const { return *this * conj(); }

    /// Same value, scale raised by `extra` (even, >= 0).
    CycNum rescaled(int extra) const {
        if (extra < 0 || extra % 2 != 0)
            throw std::invalid_argument("rescaled: extra must be even and non-negative");
        CycNum r = *this;
        for (int step = 0; step < extra / 2; ++step)
            for (auto& c : r.coeffs_) c = detail::checked_mul(c, dim_.value());
        r.scale_ += extra;
        return r;
    }

    /// Representation change to a given scale. Requires target >= scale and
    /// matching parity; an exact zero may hop parity freely.
    CycNum rescaled_to(int target) const {
        if (zero_) {
            CycNum r = *this;
            r.scale_ = target;
            return r;
        }
        if (target < scale_ || (target - scale_) % 2 != 0)
            throw ScaleParityError("rescaled_to: incommensurable scales " +
                                   std::to_string(scale_) + " -> " + std::to_string(target));
        return rescaled(target - scale_);
    }

    /// value / sqrt(d)^k.
    CycNum div_sqrt_d(int k) const {
        if (k < 0) throw std::invalid_argument("div_sqrt_d: negative power");
        CycNum r = *this;
        r.scale_ += k;
        return r;
    }

    /// value * sqrt(d)^k.
    CycNum mul_sqrt_d(int k) const {
        if (k < 0) throw std::invalid_argument("mul_sqrt_d: negative power");
        CycNum r = *this;
        if (k <= r.scale_) {
            r.scale_ -= k;
            return r;
        }
        int excess = k - r.scale_;        // leftover sqrt(d) factors to multiply in
        r.scale_ = excess % 2;            // odd leftover parks one power back at scale 1
        int dfactors = (excess + r.scale_) / 2;
        for (int i = 0; i < dfactors; ++i)
            for (auto& c : r.coeffs_) c = detail::checked_mul(c, dim_.value());
        return r;
    }

    std::complex<double> to_complex() const {
        const double d = static_cast<double>(dim_.value());
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] == 0) continue;
            acc += static_cast<double>(coeffs_[k]) *
                   std::polar(1.0, 2.0 * 3.14159265358979323846 * static_cast<double>(k) / d);
        }
        return acc / std::pow(d, scale_ / 2.0);
    }

    /// value = num / d^dpow, when the value is rational; nullopt otherwise.
    struct RationalParts {
        std::int64_t num;
        int dpow;
    };
    std::optional<RationalParts> rational_parts() const {
        if (zero_) return RationalParts{0, 0};
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            if (coeffs_[k] != 0) return std::nullopt;
        if (scale_ % 2 != 0) return std::nullopt;  // num / sqrt(d)^odd is irrational
        std::int64_t num = coeffs_[0];
        int dpow = scale_ / 2;
        while (dpow > 0 && num % dim_.value() == 0) {
            num /= dim_.value();
            --dpow;
        }
        return RationalParts{num, dpow};
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "(";
        bool first = true;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] == 0) continue;
            if (!first) os << (coeffs_[k] > 0 ? "+" : "");
            os << coeffs_[k];
            if (k > 0) os << "w^" << k;
            first = false;
        }
        if (first) os << "0";
        os << ")";
        if (scale_ > 0) os << "/sqrt(" << dim_.value() << ")^" << scale_;
        return os.str();
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        a.matched(b);
        auto [x, y] = aligned(a, b);
        std::vector<std::int64_t> c(x.coeffs_.size());
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = detail::checked_add(x.coeffs_[k], y.coeffs_[k]);
        return CycNum(a.dim_, std::move(c), x.scale_);
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) {
        a.matched(b);
        auto [x, y] = aligned(a, b);
        std::vector<std::int64_t> c(x.coeffs_.size());
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = detail::checked_sub(x.coeffs_[k], y.coeffs_[k]);
        return CycNum(a.dim_, std::move(c), x.scale_);
    }

    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        a.matched(b);
        const std::size_t d = a.coeffs_.size();
        std::vector<std::int64_t> c(d, 0);
        if (!a.zero_ && !b.zero_) {
            for (std::size_t k = 0; k < d; ++k) {
                if (a.coeffs_[k] == 0) continue;
                for (std::size_t l = 0; l < d; ++l) {
                    if (b.coeffs_[l] == 0) continue;
                    std::size_t idx = k + l >= d ? k + l - d : k + l;
                    c[idx] = detail::checked_add(c[idx], detail::checked_mul(a.coeffs_[k], b.coeffs_[l]));
                }
            }
        }
        return CycNum(a.dim_, std::move(c), a.scale_ + b.scale_);
    }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        a.matched(b);
        if (a.zero_ || b.zero_) return a.zero_ && b.zero_;
        if (a.scale_ % 2 != b.scale_ % 2)
            throw ScaleParityError("cannot compare values at scales of different parity");
        int target = std::max(a.scale_, b.scale_);
        return a.rescaled_to(target).coeffs_ == b.rescaled_to(target).coeffs_;
    }

    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

private:
    void canonicalize() {
        std::int64_t last = coeffs_.back();
        if (last != 0)
            for (auto& c : coeffs_) c = detail::checked_sub(c, last);
        zero_ = true;
        for (auto c : coeffs_)
            if (c != 0) { zero_ = false; break; }
    }

    void matched(const CycNum& other) const {
        if (dim_ != other.dim_)
            throw std::invalid_argument("CycNum dimension mismatch");
    }

    static std::pair<CycNum, CycNum> aligned(const CycNum& a, const CycNum& b) {
        if (a.scale_ == b.scale_) return {a, b};
        if (a.zero_) return {a.rescaled_to(b.scale_), b};  // zeros adopt the other scale
        if (b.zero_) return {a, b.rescaled_to(a.scale_)};
        if (a.scale_ % 2 != b.scale_ % 2)
            throw ScaleParityError("cannot add values at scales of different parity");
        int target = std::max(a.scale_, b.scale_);
        return {a.rescaled_to(target), b.rescaled_to(target)};
    }

    Dimension dim_;
    int scale_;
    std::vector<std::int64_t> coeffs_;
    bool zero_ = true;
};

inline CycNum conj(const CycNum& a) { return a.conj(); }

}  // namespace meslab
