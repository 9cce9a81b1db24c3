#pragma once

#include <stdexcept>
#include <string>

namespace nckit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration rejected before any work was done.
struct ConfigError : Error {
    using Error::Error;
};

// gf
struct InversionOfZero : Error {
    InversionOfZero() : Error("multiplicative inverse of zero") {}
};

// rlnc
struct DegenerateRandomness : Error {
    using Error::Error;
};
struct EmptyBuffer : Error {
    EmptyBuffer() : Error("recode called with an empty packet buffer") {}
};
struct GroupMismatch : Error {
    using Error::Error;
};
struct InsufficientRank : Error {
    InsufficientRank(std::size_t rank, std::size_t n)
        : Error("decode requires full rank " + std::to_string(n) +
                ", have " + std::to_string(rank)),
          rank(rank) {}
    std::size_t rank;
};
struct MalformedPacket : Error {
    using Error::Error;
};

// controller
struct StaleReport : Error {
    explicit StaleReport(const std::string& node)
        : Error("missing report for node " + node), node(node) {}
    std::string node;
};

// netsim
struct UndefinedEfficiency : Error {
    UndefinedEfficiency() : Error("no sink decoded; efficiency undefined") {}
};

// allocation
struct NoValidAllocation : Error {
    using Error::Error;
};
struct EnumerationCapExceeded : Error {
    using Error::Error;
};

}  // namespace nckit
