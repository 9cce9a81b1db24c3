#include "nckit/controller.hpp"

#include <algorithm>

namespace nckit::ctrl {

RateDirective compute_rate(const NodeReport& report, RateBounds bounds,
                           SuccessorAggregate agg) {
    if (report.received.empty())
        throw ConfigError("node " + report.node_id + " has no successors");
    if (report.sent == 0)
        throw ConfigError("node " + report.node_id +
                          " reported zero sent packets");
    if (bounds.min_rate <= 0 || bounds.max_rate < bounds.min_rate)
        throw ConfigError("invalid rate bounds");

    std::uint64_t anchor = 0;
    bool first = true;
    for (const auto& [succ, count] : report.received) {
        if (first) {
            anchor = count;
            first = false;
        } else if (agg == SuccessorAggregate::kMax) {
            anchor = std::max(anchor, count);
        } else {
            anchor = std::min(anchor, count);
        }
    }

    RateDirective d;
    d.node_id = report.node_id;
    if (anchor == 0) {
        d.rate = bounds.max_rate;
        d.total_loss = true;
        return d;
    }
    double r = static_cast<double>(report.sent) / static_cast<double>(anchor);
    d.rate = std::clamp(r, bounds.min_rate, bounds.max_rate);
    return d;
}

std::vector<RateDirective> update_epoch(
    const std::vector<NodeReport>& reports,
    const std::vector<std::string>& coding_nodes, RateBounds bounds,
    SuccessorAggregate agg) {
    std::vector<RateDirective> out;
    out.reserve(coding_nodes.size());
    for (const auto& node : coding_nodes) {
        auto it = std::find_if(reports.begin(), reports.end(),
                               [&](const NodeReport& r) { return r.node_id == node; });
        if (it == reports.end()) throw StaleReport(node);
        out.push_back(compute_rate(*it, bounds, agg));
    }
    return out;
}

}  // namespace nckit::ctrl
