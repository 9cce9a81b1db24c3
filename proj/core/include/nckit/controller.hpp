#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nckit/errors.hpp"

namespace nckit::ctrl {

/// Per-epoch counters reported by one coding node: how many packets it
/// sent and how many of them each successor received.
struct NodeReport {
    std::string node_id;
    std::uint64_t sent = 0;
    std::map<std::string, std::uint64_t> received;  // successor -> count
};

struct RateBounds {
    double min_rate = 1.0;
    double max_rate = 4.0;
};

/// Which successor's receipt count anchors the rate. The default rule
/// uses the best-served successor (max); min is available behind config.
enum class SuccessorAggregate { kMax, kMin };

struct RateDirective {
    std::string node_id;
    double rate = 1.0;
    /// Set when every successor reported zero receipts and the rate was
    /// pinned to the upper bound.
    bool total_loss = false;

    bool operator==(const RateDirective&) const = default;
};

/// New code rate for one node: sent / aggregate(received), clamped to the
/// bounds. Total loss yields max_rate with the advisory flag set.
RateDirective compute_rate(const NodeReport& report, RateBounds bounds,
                           SuccessorAggregate agg = SuccessorAggregate::kMax);

/// One directive per configured coding node, as absolute rates for the next
/// reporting period. Throws StaleReport if a configured node has no report.
std::vector<RateDirective> update_epoch(
    const std::vector<NodeReport>& reports,
    const std::vector<std::string>& coding_nodes, RateBounds bounds,
    SuccessorAggregate agg = SuccessorAggregate::kMax);

}  // namespace nckit::ctrl
