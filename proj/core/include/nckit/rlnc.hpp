#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nckit/gf.hpp"

namespace nckit::rlnc {

/// Encoding vector followed by the coded payload. The vector records the
/// linear combination of the group's original packets this payload carries.
struct CodedPacket {
    std::vector<gf::Symbol> coeffs;   // length n
    std::vector<gf::Symbol> payload;  // length L

    bool operator==(const CodedPacket&) const = default;
};

/// A batch of n equal-length data packets coded together.
struct CodingGroup {
    const gf::Field* field = nullptr;
    std::size_t n = 0;
    std::size_t payload_len = 0;
    std::vector<std::vector<gf::Symbol>> originals;  // n rows of payload_len
};

/// Source encoding: emit ceil(rate*n) coded packets; the first min(n, count)
/// encoding vectors are mutually linearly independent, the rest are free
/// random combinations.
/// Throws DegenerateRandomness if a row cannot be drawn independent within
/// the retry cap (100 per row).
std::vector<CodedPacket> source_encode(const CodingGroup& group, double rate,
                                       gf::SymbolRng& rng);

/// Relay recoding: emit ceil(rate * fresh.size()) packets, each a random
/// linear combination of the buffered fresh packets, with the same
/// coefficients applied to encoding vector and payload. The first
/// min(n_tau, count) coefficient rows are mutually independent.
std::vector<CodedPacket> recode(const gf::Field& field,
                                std::span<const CodedPacket> fresh,
                                double rate, gf::SymbolRng& rng);

/// Same combination rule but with an explicit output count, independent of
/// any code rate. Used for keep-alive recoding in the simulator.
std::vector<CodedPacket> recode_count(const gf::Field& field,
                                      std::span<const CodedPacket> fresh,
                                      std::size_t count, gf::SymbolRng& rng);

/// Progressive Gaussian elimination over received packets. A packet is
/// fresh when its encoding vector is linearly independent of everything
/// accepted before; the same reduction that detects freshness accumulates
/// the solved basis, so decode is a read-out once rank reaches n.
class Decoder {
public:
    Decoder(const gf::Field& field, std::size_t n, std::size_t payload_len);

    /// Returns true iff the packet was fresh (rank increased).
    bool accept(const CodedPacket& p);

    std::size_t rank() const { return pivot_of_row_.size(); }
    std::size_t group_size() const { return n_; }
    bool complete() const { return rank() == n_; }

    /// Original payloads h_1..h_n. Throws InsufficientRank if rank < n.
    std::vector<std::vector<gf::Symbol>> decode() const;

private:
    const gf::Field& field_;
    std::size_t n_;
    std::size_t payload_len_;
    // rows kept in reduced row-echelon form, sorted by pivot column
    std::vector<CodedPacket> rows_;
    std::vector<std::size_t> pivot_of_row_;
};

/// Wire format: encoding vector symbols then payload symbols, each symbol
/// big-endian in ceil(m/8) bytes.
std::vector<std::uint8_t> serialize(const gf::Field& field,
                                    const CodedPacket& p);
CodedPacket deserialize(const gf::Field& field,
                        std::span<const std::uint8_t> bytes, std::size_t n,
                        std::size_t payload_len);

}  // namespace nckit::rlnc
