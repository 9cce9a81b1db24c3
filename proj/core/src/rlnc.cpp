#include "nckit/rlnc.hpp"

#include <algorithm>
#include <cmath>

namespace nckit::rlnc {

namespace {

constexpr int kIndependenceRetryCap = 100;

std::size_t packet_count(double rate, std::size_t base) {
    return static_cast<std::size_t>(std::ceil(rate * static_cast<double>(base)));
}

/// Rank tracker over coefficient rows only (no payload), used by the
/// encoders' repeat-until-independent loops.
class RankTracker {
public:
    RankTracker(const gf::Field& field, std::size_t dim)
        : field_(field), dim_(dim) {}

    std::size_t rank() const { return rows_.size(); }

    /// Reduces v against the basis; absorbs it when independent.
    bool try_add(std::vector<gf::Symbol> v) {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            gf::Symbol c = v[pivots_[r]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j)
                v[j] = gf::Field::add(v[j], field_.mul(c, rows_[r][j]));
        }
        auto pivot = std::find_if(v.begin(), v.end(),
                                  [](gf::Symbol s) { return s != 0; });
        if (pivot == v.end()) return false;
        std::size_t col = static_cast<std::size_t>(pivot - v.begin());
        gf::Symbol scale = field_.inv(*pivot);
        for (auto& s : v) s = field_.mul(s, scale);
        rows_.push_back(std::move(v));
        pivots_.push_back(col);
        return true;
    }

private:
    const gf::Field& field_;
    std::size_t dim_;
    std::vector<std::vector<gf::Symbol>> rows_;
    std::vector<std::size_t> pivots_;
};

std::vector<gf::Symbol> random_vector(const gf::Field& field, std::size_t dim,
                                      gf::SymbolRng& rng) {
    std::vector<gf::Symbol> v(dim);
    for (auto& s : v) s = rng.next(field);
    return v;
}

/// Draws ceil-count coefficient rows of the given dimension, the first
/// min(dim, count) mutually independent, the rest unconstrained.
std::vector<std::vector<gf::Symbol>> draw_coefficient_rows(
    const gf::Field& field, std::size_t dim, std::size_t count,
    gf::SymbolRng& rng) {
    std::vector<std::vector<gf::Symbol>> rows;
    rows.reserve(count);
    RankTracker tracker(field, dim);
    for (std::size_t i = 0; i < count; ++i) {
        if (i < dim) {
            int tries = 0;
            for (;;) {
                auto v = random_vector(field, dim, rng);
                if (tracker.try_add(v)) {
                    rows.push_back(std::move(v));
                    break;
                }
                if (++tries >= kIndependenceRetryCap)
                    throw DegenerateRandomness(
                        "could not draw an independent coefficient row within "
                        "the retry cap");
            }
        } else {
            rows.push_back(random_vector(field, dim, rng));
        }
    }
    return rows;
}

}  // namespace

std::vector<CodedPacket> source_encode(const CodingGroup& group, double rate,
                                       gf::SymbolRng& rng) {
    if (group.field == nullptr || group.n == 0 ||
        group.originals.size() != group.n)
        throw ConfigError("coding group not populated");
    if (rate <= 0) throw ConfigError("code rate must be positive");
    const gf::Field& field = *group.field;
    std::size_t count = packet_count(rate, group.n);
    auto rows = draw_coefficient_rows(field, group.n, count, rng);

    std::vector<CodedPacket> out;
    out.reserve(count);
    for (auto& delta : rows) {
        CodedPacket p;
        p.payload.assign(group.payload_len, 0);
        for (std::size_t j = 0; j < group.n; ++j) {
            gf::Symbol c = delta[j];
            if (c == 0) continue;
            const auto& h = group.originals[j];
            for (std::size_t s = 0; s < group.payload_len; ++s)
                p.payload[s] = gf::Field::add(p.payload[s], field.mul(c, h[s]));
        }
        p.coeffs = std::move(delta);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<CodedPacket> recode_count(const gf::Field& field,
                                      std::span<const CodedPacket> fresh,
                                      std::size_t count, gf::SymbolRng& rng) {
    if (fresh.empty()) throw EmptyBuffer();
    std::size_t n_tau = fresh.size();
    std::size_t n = fresh[0].coeffs.size();
    std::size_t payload_len = fresh[0].payload.size();
    for (const auto& p : fresh)
        if (p.coeffs.size() != n || p.payload.size() != payload_len)
            throw GroupMismatch("recode inputs disagree on dimensions");

    auto rows = draw_coefficient_rows(field, n_tau, count, rng);
    std::vector<CodedPacket> out;
    out.reserve(count);
    for (const auto& r : rows) {
        CodedPacket p;
        p.coeffs.assign(n, 0);
        p.payload.assign(payload_len, 0);
        for (std::size_t j = 0; j < n_tau; ++j) {
            gf::Symbol c = r[j];
            if (c == 0) continue;
            for (std::size_t s = 0; s < n; ++s)
                p.coeffs[s] =
                    gf::Field::add(p.coeffs[s], field.mul(c, fresh[j].coeffs[s]));
            for (std::size_t s = 0; s < payload_len; ++s)
                p.payload[s] = gf::Field::add(p.payload[s],
                                              field.mul(c, fresh[j].payload[s]));
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<CodedPacket> recode(const gf::Field& field,
                                std::span<const CodedPacket> fresh,
                                double rate, gf::SymbolRng& rng) {
    if (fresh.empty()) throw EmptyBuffer();
    if (rate <= 0) throw ConfigError("code rate must be positive");
    return recode_count(field, fresh, packet_count(rate, fresh.size()), rng);
}

Decoder::Decoder(const gf::Field& field, std::size_t n, std::size_t payload_len)
    : field_(field), n_(n), payload_len_(payload_len) {
    if (n == 0) throw ConfigError("group size must be at least 1");
}

bool Decoder::accept(const CodedPacket& p) {
    if (p.coeffs.size() != n_ || p.payload.size() != payload_len_)
        throw GroupMismatch("packet dimensions do not match this decoder");
    CodedPacket row = p;
    // forward-eliminate against existing pivots
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        gf::Symbol c = row.coeffs[pivot_of_row_[r]];
        if (c == 0) continue;
        for (std::size_t j = 0; j < n_; ++j)
            row.coeffs[j] =
                gf::Field::add(row.coeffs[j], field_.mul(c, rows_[r].coeffs[j]));
        for (std::size_t j = 0; j < payload_len_; ++j)
            row.payload[j] = gf::Field::add(row.payload[j],
                                            field_.mul(c, rows_[r].payload[j]));
    }
    auto it = std::find_if(row.coeffs.begin(), row.coeffs.end(),
                           [](gf::Symbol s) { return s != 0; });
    if (it == row.coeffs.end()) return false;  // not fresh
    std::size_t col = static_cast<std::size_t>(it - row.coeffs.begin());
    gf::Symbol scale = field_.inv(*it);
    for (auto& s : row.coeffs) s = field_.mul(s, scale);
    for (auto& s : row.payload) s = field_.mul(s, scale);
    // back-eliminate the new pivot from existing rows
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        gf::Symbol c = rows_[r].coeffs[col];
        if (c == 0) continue;
        for (std::size_t j = 0; j < n_; ++j)
            rows_[r].coeffs[j] =
                gf::Field::add(rows_[r].coeffs[j], field_.mul(c, row.coeffs[j]));
        for (std::size_t j = 0; j < payload_len_; ++j)
            rows_[r].payload[j] = gf::Field::add(rows_[r].payload[j],
                                                 field_.mul(c, row.payload[j]));
    }
    // keep rows sorted by pivot column
    std::size_t pos = 0;
    while (pos < pivot_of_row_.size() && pivot_of_row_[pos] < col) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(row));
    pivot_of_row_.insert(pivot_of_row_.begin() + pos, col);
    return true;
}

std::vector<std::vector<gf::Symbol>> Decoder::decode() const {
    if (!complete()) throw InsufficientRank(rank(), n_);
    // full rank in RREF sorted by pivot: the coefficient block is the
    // identity and payload row i is h_{i+1}
    std::vector<std::vector<gf::Symbol>> out;
    out.reserve(n_);
    for (const auto& row : rows_) out.push_back(row.payload);
    return out;
}

std::vector<std::uint8_t> serialize(const gf::Field& field,
                                    const CodedPacket& p) {
    unsigned sb = field.symbol_bytes();
    std::vector<std::uint8_t> out;
    out.reserve((p.coeffs.size() + p.payload.size()) * sb);
    auto put = [&](gf::Symbol s) {
        for (unsigned b = sb; b-- > 0;)
            out.push_back(static_cast<std::uint8_t>((s >> (8 * b)) & 0xFF));
    };
    for (gf::Symbol s : p.coeffs) put(s);
    for (gf::Symbol s : p.payload) put(s);
    return out;
}

CodedPacket deserialize(const gf::Field& field,
                        std::span<const std::uint8_t> bytes, std::size_t n,
                        std::size_t payload_len) {
    unsigned sb = field.symbol_bytes();
    if (bytes.size() != (n + payload_len) * sb)
        throw MalformedPacket("packet buffer has " +
                              std::to_string(bytes.size()) + " bytes, expected " +
                              std::to_string((n + payload_len) * sb));
    std::size_t pos = 0;
    auto get = [&]() {
        gf::Symbol s = 0;
        for (unsigned b = 0; b < sb; ++b)
            s = static_cast<gf::Symbol>((s << 8) | bytes[pos++]);
        if (s >= field.order()) throw MalformedPacket("symbol out of field range");
        return s;
    };
    CodedPacket p;
    p.coeffs.reserve(n);
    p.payload.reserve(payload_len);
    for (std::size_t i = 0; i < n; ++i) p.coeffs.push_back(get());
    for (std::size_t i = 0; i < payload_len; ++i) p.payload.push_back(get());
    return p;
}

}  // namespace nckit::rlnc
