#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nckit/errors.hpp"

namespace nckit::gf {

/// Value of a field element. Wide enough for GF(2^m) with m <= 16.
using Symbol = std::uint16_t;

/// GF(2^m) with log/antilog multiplication tables.
///
/// The tables are built once from shift-and-reduce multiplication, which
/// stays available as mul_shift_reduce() so the two routes can be checked
/// against each other. All operations on a constructed Field are pure and
/// thread-safe.
///
/// Note: the irreducible polynomial is a convention of this library
/// (0x11B for m=8, 0x1100B for m=16); packet streams are only compatible
/// across implementations that agree on it.
class Field {
public:
    Field(unsigned m, std::uint32_t poly);

    /// Shared GF(2^8), polynomial x^8+x^4+x^3+x+1 (0x11B).
    static const Field& gf256();
    /// Shared GF(2^16), polynomial x^16+x^12+x^3+x+1 (0x1100B).
    static const Field& gf65536();
    /// Field for a configured exponent m in {8, 16}.
    static const Field& for_exponent(unsigned m);

    unsigned m() const { return m_; }
    std::uint32_t order() const { return order_; }
    std::uint32_t poly() const { return poly_; }
    /// Bytes used per symbol on the wire.
    unsigned symbol_bytes() const { return (m_ + 7) / 8; }

    static Symbol add(Symbol a, Symbol b) { return a ^ b; }
    static Symbol sub(Symbol a, Symbol b) { return a ^ b; }

    Symbol mul(Symbol a, Symbol b) const {
        if (a == 0 || b == 0) return 0;
        return alog_[log_[a] + log_[b]];
    }

    Symbol inv(Symbol a) const {
        if (a == 0) throw InversionOfZero();
        return alog_[order_ - 1 - log_[a]];
    }

    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

    /// Reference multiplication, independent of the tables.
    Symbol mul_shift_reduce(Symbol a, Symbol b) const;

private:
    unsigned m_;
    std::uint32_t poly_;
    std::uint32_t order_;
    std::vector<std::uint32_t> log_;   // log_[a] for a != 0
    std::vector<Symbol> alog_;         // doubled to skip the mod in mul
};

/// Deterministic random stream owned by a single simulation entity.
/// Field draws are uniform over [0, 2^m); unit draws over [0, 1).
class SymbolRng {
public:
    explicit SymbolRng(std::uint64_t seed) : eng_(seed) {}

    Symbol next(const Field& f) {
        return static_cast<Symbol>(eng_() & (f.order() - 1));
    }

    double next_unit() { return (eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

/// Stable seed derivation so parallel runs never share streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace nckit::gf
