#include "nckit/gf.hpp"

namespace nckit::gf {

Field::Field(unsigned m, std::uint32_t poly)
    : m_(m), poly_(poly), order_(1u << m) {
    if (m < 2 || m > 16) throw ConfigError("field exponent must be in [2,16]");
    log_.assign(order_, 0);
    alog_.assign(2 * (order_ - 1), 0);
    // smallest multiplicative generator (x itself need not be one, e.g.
    // for 0x11B), found by checking the group order directly
    Symbol gen = 0;
    for (std::uint32_t g = 2; g < order_; ++g) {
        std::uint32_t b = 1;
        std::uint32_t steps = 0;
        do {
            b = mul_shift_reduce(static_cast<Symbol>(b), static_cast<Symbol>(g));
            ++steps;
        } while (b != 1);
        if (steps == order_ - 1) {
            gen = static_cast<Symbol>(g);
            break;
        }
    }
    if (gen == 0) throw ConfigError("polynomial is not irreducible");
    std::uint32_t b = 1;
    for (std::uint32_t i = 0; i < order_ - 1; ++i) {
        alog_[i] = static_cast<Symbol>(b);
        log_[b] = i;
        b = mul_shift_reduce(static_cast<Symbol>(b), gen);
    }
    for (std::uint32_t i = order_ - 1; i < 2 * (order_ - 1); ++i)
        alog_[i] = alog_[i - (order_ - 1)];
}

Symbol Field::mul_shift_reduce(Symbol a, Symbol b) const {
    std::uint32_t acc = 0;
    std::uint32_t aa = a;
    std::uint32_t bb = b;
    while (bb) {
        if (bb & 1) acc ^= aa;
        bb >>= 1;
        aa <<= 1;
        if (aa & order_) aa ^= poly_;
    }
    return static_cast<Symbol>(acc);
}

const Field& Field::gf256() {
    static const Field f(8, 0x11B);
    return f;
}

const Field& Field::gf65536() {
    static const Field f(16, 0x1100B);
    return f;
}

const Field& Field::for_exponent(unsigned m) {
    switch (m) {
        case 8: return gf256();
        case 16: return gf65536();
        default: throw ConfigError("supported field exponents are 8 and 16");
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 over the pair
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace nckit::gf
