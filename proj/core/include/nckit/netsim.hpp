#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nckit/controller.hpp"
#include "nckit/errors.hpp"
#include "nckit/gf.hpp"
#include "nckit/rlnc.hpp"

namespace nckit::sim {

enum class NodeKind { kSource, kRelay, kSink };

struct Node {
    std::string id;
    NodeKind kind = NodeKind::kRelay;
};

struct Link {
    int from = -1;
    int to = -1;
    /// Bernoulli loss probability. Unset means "draw from the config's
    /// loss_range under the run seed, once per run".
    std::optional<double> loss;
};

/// Directed acyclic topology: one source, any number of relays, at least
/// one sink. Sinks never forward.
struct Topology {
    std::vector<Node> nodes;
    std::vector<Link> links;

    int source_index() const;
    std::vector<int> sink_indices() const;
    /// Throws ConfigError on cycles, unreachable sinks, bad losses,
    /// duplicate ids, or sinks with outgoing links.
    void validate() const;
};

enum class Strategy { kNoCodingRetransmit, kFixedRate, kAdaptive };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct RunConfig {
    std::size_t n = 16;       // coding group size
    unsigned m = 8;           // field exponent
    std::size_t payload_len = 4;  // symbols per packet
    Strategy strategy = Strategy::kAdaptive;
    double fixed_rate = 1.5;  // used by kFixedRate
    std::size_t rounds_limit = 1000;
    std::uint64_t seed = 1;
    ctrl::RateBounds bounds;
    std::size_t epoch = 1;    // rounds per controller update
    double initial_rate = 1.2;
    ctrl::SuccessorAggregate aggregate = ctrl::SuccessorAggregate::kMax;
    /// Range for links whose loss is not pinned in the topology.
    double loss_range_lo = 0.05;
    double loss_range_hi = 0.35;

    void validate() const;
};

struct NodeRoundStats {
    std::size_t round = 0;
    std::string node;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t fresh = 0;
};

struct RunResult {
    std::vector<NodeRoundStats> trace;
    /// Emissions by source and relays only; control traffic excluded.
    std::uint64_t total_sent = 0;
    std::size_t rounds_used = 0;
    std::size_t decoded_sinks = 0;
    std::size_t sink_count = 0;
    bool dnf = false;
    /// n / total_sent when at least one sink decoded, else unset.
    std::optional<double> efficiency;
    /// Loss probabilities actually used, per link (after range draws).
    std::vector<double> link_loss;
};

/// Execute one deterministic round-based run. Decoded data is checked
/// against the source's originals on every completed sink.
RunResult run(const Topology& topology, const RunConfig& config);

/// n_min / total_sent. Throws UndefinedEfficiency when no sink decoded.
double transmission_efficiency(const RunResult& result, std::size_t n);

struct SweepRow {
    std::size_t n = 0;
    Strategy strategy = Strategy::kAdaptive;
    std::uint64_t seed = 0;
    std::uint64_t total_sent = 0;
    std::size_t rounds = 0;
    std::size_t decoded_sinks = 0;
    bool dnf = false;
    std::optional<double> efficiency;
    /// efficiency / (seed-batch mean no-coding efficiency at the same n)
    std::optional<double> normalized_efficiency;
    std::string error;  // nonempty when the cell failed
};

/// Run every (n, strategy, seed) cell; normalize each row by the
/// no-coding baseline at the same n. Per-cell errors are recorded, not
/// thrown. `jobs` > 1 runs cells in parallel; results are identical
/// either way because every cell owns its RNG streams.
std::vector<SweepRow> sweep(const Topology& topology,
                            const RunConfig& base_config,
                            const std::vector<std::size_t>& n_values,
                            const std::vector<std::uint64_t>& seeds,
                            unsigned jobs = 1);

/// JSON document holding both the topology and the run configuration.
/// Schema: nodes[{id,kind}], links[{from,to,loss?}], strategy, rate?, n,
/// m, L, seed, rounds, bounds{r_min,r_max}, epoch, initial_rate?,
/// successor_aggregate?, loss_range?[lo,hi].
std::pair<Topology, RunConfig> parse_run_spec(const std::string& json_text);
std::pair<Topology, RunConfig> load_run_spec(const std::string& path);

}  // namespace nckit::sim
