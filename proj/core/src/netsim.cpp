#include "nckit/netsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace nckit::sim {

namespace {

using nlohmann::json;

// stream tags for per-run seed derivation
constexpr std::uint64_t kDataStream = 0xDA7A;
constexpr std::uint64_t kLossStream = 0x1055;
constexpr std::uint64_t kNodeStreamBase = 0x4000;

std::vector<int> topological_order(const Topology& t) {
    std::size_t v = t.nodes.size();
    std::vector<int> indegree(v, 0);
    for (const auto& l : t.links) ++indegree[l.to];
    std::vector<int> order;
    std::vector<bool> done(v, false);
    order.reserve(v);
    while (order.size() < v) {
        bool progressed = false;
        for (std::size_t i = 0; i < v; ++i) {
            if (done[i] || indegree[i] != 0) continue;
            done[i] = true;
            order.push_back(static_cast<int>(i));
            for (const auto& l : t.links)
                if (l.from == static_cast<int>(i)) --indegree[l.to];
            progressed = true;
        }
        if (!progressed) throw ConfigError("topology contains a cycle");
    }
    return order;
}

}  // namespace

int Topology::source_index() const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].kind == NodeKind::kSource) return static_cast<int>(i);
    throw ConfigError("topology has no source node");
}

std::vector<int> Topology::sink_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].kind == NodeKind::kSink) out.push_back(static_cast<int>(i));
    return out;
}

void Topology::validate() const {
    if (nodes.empty()) throw ConfigError("topology has no nodes");
    int sources = 0;
    for (const auto& n : nodes) {
        if (n.id.empty()) throw ConfigError("node with empty id");
        if (n.kind == NodeKind::kSource) ++sources;
    }
    if (sources != 1) throw ConfigError("topology must have exactly one source");
    if (sink_indices().empty()) throw ConfigError("topology has no sink");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i].id == nodes[j].id)
                throw ConfigError("duplicate node id: " + nodes[i].id);
    int v = static_cast<int>(nodes.size());
    for (const auto& l : links) {
        if (l.from < 0 || l.from >= v || l.to < 0 || l.to >= v)
            throw ConfigError("link references an unknown node");
        if (l.from == l.to) throw ConfigError("self-loop link");
        if (l.loss && (*l.loss < 0.0 || *l.loss > 1.0))
            throw ConfigError("link loss must lie in [0,1]");
        if (nodes[l.from].kind == NodeKind::kSink)
            throw ConfigError("sink " + nodes[l.from].id +
                              " has an outgoing link; sinks never forward");
    }
    topological_order(*this);  // throws on cycles
    // reachability from the source
    int src = source_index();
    std::vector<bool> reach(nodes.size(), false);
    reach[src] = true;
    for (int it = 0; it < v; ++it)
        for (const auto& l : links)
            if (reach[l.from]) reach[l.to] = true;
    for (int s : sink_indices())
        if (!reach[s])
            throw ConfigError("sink " + nodes[s].id +
                              " is unreachable from the source");
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::kNoCodingRetransmit: return "no_coding_retransmit";
        case Strategy::kFixedRate: return "fixed_rate";
        case Strategy::kAdaptive: return "adaptive";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "no_coding_retransmit") return Strategy::kNoCodingRetransmit;
    if (name == "fixed_rate") return Strategy::kFixedRate;
    if (name == "adaptive") return Strategy::kAdaptive;
    throw ConfigError("unknown strategy: " + name);
}

void RunConfig::validate() const {
    if (n < 1) throw ConfigError("group size n must be at least 1");
    if (m != 8 && m != 16) throw ConfigError("field exponent must be 8 or 16");
    if (payload_len < 1) throw ConfigError("payload length must be at least 1");
    if (rounds_limit < 1) throw ConfigError("rounds limit must be at least 1");
    if (strategy == Strategy::kFixedRate && fixed_rate <= 0)
        throw ConfigError("fixed rate must be positive");
    if (epoch < 1) throw ConfigError("epoch must be at least 1");
    if (bounds.min_rate <= 0 || bounds.max_rate < bounds.min_rate)
        throw ConfigError("invalid rate bounds");
    if (initial_rate < bounds.min_rate || initial_rate > bounds.max_rate)
        throw ConfigError("initial rate outside bounds");
    if (loss_range_lo < 0 || loss_range_hi > 1 || loss_range_hi < loss_range_lo)
        throw ConfigError("invalid loss range");
}

namespace {

struct LinkRef {
    int link_index;
    int to;
};

struct Wiring {
    std::vector<int> order;                    // topological node order
    std::vector<std::vector<LinkRef>> out;     // per node, in link-file order
    std::vector<double> loss;                  // per link, resolved
};

Wiring wire_up(const Topology& t, const RunConfig& c) {
    Wiring w;
    w.order = topological_order(t);
    w.out.resize(t.nodes.size());
    for (std::size_t li = 0; li < t.links.size(); ++li)
        w.out[t.links[li].from].push_back({static_cast<int>(li), t.links[li].to});
    w.loss.resize(t.links.size());
    gf::SymbolRng loss_rng(gf::derive_seed(c.seed, kLossStream));
    for (std::size_t li = 0; li < t.links.size(); ++li) {
        if (t.links[li].loss) {
            w.loss[li] = *t.links[li].loss;
        } else {
            w.loss[li] = c.loss_range_lo +
                         loss_rng.next_unit() * (c.loss_range_hi - c.loss_range_lo);
        }
    }
    return w;
}

std::vector<std::vector<gf::Symbol>> make_originals(const gf::Field& field,
                                                    const RunConfig& c) {
    gf::SymbolRng data_rng(gf::derive_seed(c.seed, kDataStream));
    std::vector<std::vector<gf::Symbol>> originals(c.n);
    for (auto& h : originals) {
        h.resize(c.payload_len);
        for (auto& s : h) s = data_rng.next(field);
    }
    return originals;
}

std::size_t ceil_count(double rate, std::size_t base) {
    return static_cast<std::size_t>(std::ceil(rate * static_cast<double>(base)));
}

RunResult run_coded(const Topology& topo, const RunConfig& cfg) {
    const gf::Field& field = gf::Field::for_exponent(cfg.m);
    Wiring w = wire_up(topo, cfg);
    const std::size_t v = topo.nodes.size();
    const int src = topo.source_index();
    const auto sinks = topo.sink_indices();

    rlnc::CodingGroup group{&field, cfg.n, cfg.payload_len,
                            make_originals(field, cfg)};

    std::vector<gf::SymbolRng> rng;
    rng.reserve(v);
    for (std::size_t i = 0; i < v; ++i)
        rng.emplace_back(gf::derive_seed(cfg.seed, kNodeStreamBase + i));

    const double start_rate =
        cfg.strategy == Strategy::kFixedRate ? cfg.fixed_rate : cfg.initial_rate;
    std::vector<double> rate(v, start_rate);

    std::vector<std::unique_ptr<rlnc::Decoder>> dec(v);
    for (std::size_t i = 0; i < v; ++i)
        if (static_cast<int>(i) != src)
            dec[i] = std::make_unique<rlnc::Decoder>(field, cfg.n, cfg.payload_len);

    // per relay: everything fresh so far (recoding basis) and this round's
    // fresh arrivals (Algorithm 2's interval buffer, tau = 1 round)
    std::vector<std::vector<rlnc::CodedPacket>> knowledge(v);
    std::vector<std::vector<rlnc::CodedPacket>> round_buffer(v);
    std::vector<std::vector<rlnc::CodedPacket>> send_queue(v);

    std::vector<std::uint64_t> sent_epoch(v, 0);
    std::vector<std::map<int, std::uint64_t>> recv_epoch(v);  // from -> (to -> count)

    RunResult result;
    result.sink_count = sinks.size();
    result.link_loss = w.loss;

    auto all_sinks_done = [&] {
        return std::all_of(sinks.begin(), sinks.end(),
                           [&](int s) { return dec[s]->complete(); });
    };
    auto check_sink = [&](int s) {
        if (!dec[s]->complete()) return;
        auto decoded = dec[s]->decode();
        if (decoded != group.originals)
            throw Error("decoded data differs from the source originals");
    };

    std::size_t round = 0;
    for (round = 1; round <= cfg.rounds_limit; ++round) {
        std::vector<std::uint64_t> sent(v, 0), received(v, 0), fresh(v, 0);

        // source schedule: the whole group in round 1, then a keep-alive
        // trickle of ceil(rate) unconstrained combinations per round
        if (round == 1) {
            send_queue[src] = rlnc::source_encode(group, rate[src], rng[src]);
        } else {
            std::size_t count = ceil_count(rate[src], 1);
            send_queue[src].clear();
            for (std::size_t i = 0; i < count; ++i) {
                rlnc::CodedPacket p;
                p.coeffs.resize(cfg.n);
                for (auto& s : p.coeffs) s = rng[src].next(field);
                p.payload.assign(cfg.payload_len, 0);
                for (std::size_t j = 0; j < cfg.n; ++j) {
                    gf::Symbol c = p.coeffs[j];
                    if (c == 0) continue;
                    for (std::size_t sidx = 0; sidx < cfg.payload_len; ++sidx)
                        p.payload[sidx] = gf::Field::add(
                            p.payload[sidx], field.mul(c, group.originals[j][sidx]));
                }
                send_queue[src].push_back(std::move(p));
            }
        }

        for (int u : w.order) {
            for (const auto& pkt : send_queue[u]) {
                ++sent[u];
                ++sent_epoch[u];
                ++result.total_sent;
                for (const auto& ref : w.out[u]) {
                    if (rng[u].next_unit() < w.loss[ref.link_index]) continue;
                    int to = ref.to;
                    ++received[to];
                    ++recv_epoch[u][to];
                    if (topo.nodes[to].kind == NodeKind::kSource) continue;
                    bool was_fresh = dec[to]->accept(pkt);
                    if (!was_fresh) continue;
                    ++fresh[to];
                    if (topo.nodes[to].kind == NodeKind::kRelay) {
                        knowledge[to].push_back(pkt);
                        round_buffer[to].push_back(pkt);
                    }
                }
            }
            send_queue[u].clear();
        }

        for (std::size_t i = 0; i < v; ++i)
            result.trace.push_back(
                {round, topo.nodes[i].id, sent[i], received[i], fresh[i]});

        if (all_sinks_done()) break;

        // controller epoch: recompute rates from this epoch's counters
        if (cfg.strategy == Strategy::kAdaptive && round % cfg.epoch == 0) {
            for (std::size_t i = 0; i < v; ++i) {
                if (topo.nodes[i].kind == NodeKind::kSink) continue;
                if (w.out[i].empty() || sent_epoch[i] == 0) continue;
                ctrl::NodeReport report;
                report.node_id = topo.nodes[i].id;
                report.sent = sent_epoch[i];
                for (const auto& ref : w.out[i])
                    report.received[topo.nodes[ref.to].id] = recv_epoch[i][ref.to];
                rate[i] = ctrl::compute_rate(report, cfg.bounds, cfg.aggregate).rate;
            }
            std::fill(sent_epoch.begin(), sent_epoch.end(), 0);
            for (auto& m : recv_epoch) m.clear();
        }

        // relays build the next round's queue from this round's buffer,
        // falling back to a trickle over everything known so far
        for (std::size_t i = 0; i < v; ++i) {
            if (topo.nodes[i].kind != NodeKind::kRelay) continue;
            if (!round_buffer[i].empty()) {
                send_queue[i] =
                    rlnc::recode(field, round_buffer[i], rate[i], rng[i]);
                round_buffer[i].clear();
            } else if (!knowledge[i].empty()) {
                send_queue[i] = rlnc::recode_count(
                    field, knowledge[i], ceil_count(rate[i], 1), rng[i]);
            }
        }
    }

    bool finished = all_sinks_done();
    result.rounds_used = std::min(round, cfg.rounds_limit);
    result.dnf = !finished;
    for (int s : sinks) {
        if (dec[s]->complete()) {
            check_sink(s);
            ++result.decoded_sinks;
        }
    }
    if (result.decoded_sinks > 0)
        result.efficiency =
            static_cast<double>(cfg.n) / static_cast<double>(result.total_sent);
    return result;
}

RunResult run_retransmit(const Topology& topo, const RunConfig& cfg) {
    Wiring w = wire_up(topo, cfg);
    const std::size_t v = topo.nodes.size();
    const int src = topo.source_index();
    const auto sinks = topo.sink_indices();

    std::vector<gf::SymbolRng> rng;
    rng.reserve(v);
    for (std::size_t i = 0; i < v; ++i)
        rng.emplace_back(gf::derive_seed(cfg.seed, kNodeStreamBase + i));

    // have[u][p]: node u holds original packet p. Hop-by-hop ARQ: every
    // link runs its own per-packet positive acknowledgment, so a node
    // rebroadcasts p until each of its successors has received p from it.
    // Deliveries land at round end (store-and-forward).
    std::vector<std::vector<bool>> have(v, std::vector<bool>(cfg.n, false));
    have[src].assign(cfg.n, true);
    std::vector<std::vector<bool>> acked(topo.links.size(),
                                         std::vector<bool>(cfg.n, false));

    RunResult result;
    result.sink_count = sinks.size();
    result.link_loss = w.loss;

    auto all_sinks_done = [&] {
        return std::all_of(sinks.begin(), sinks.end(), [&](int s) {
            return std::all_of(have[s].begin(), have[s].end(),
                               [](bool b) { return b; });
        });
    };

    std::size_t round = 0;
    for (round = 1; round <= cfg.rounds_limit; ++round) {
        std::vector<std::uint64_t> sent(v, 0), received(v, 0), fresh(v, 0);
        auto incoming = have;  // deliveries merge at round end

        for (int u : w.order) {
            if (topo.nodes[u].kind == NodeKind::kSink || w.out[u].empty())
                continue;
            for (std::size_t p = 0; p < cfg.n; ++p) {
                if (!have[u][p]) continue;
                bool needed = std::any_of(
                    w.out[u].begin(), w.out[u].end(),
                    [&](const LinkRef& ref) { return !acked[ref.link_index][p]; });
                if (!needed) continue;
                ++sent[u];
                ++result.total_sent;
                for (const auto& ref : w.out[u]) {
                    if (acked[ref.link_index][p]) continue;
                    if (rng[u].next_unit() < w.loss[ref.link_index]) continue;
                    acked[ref.link_index][p] = true;
                    ++received[ref.to];
                    if (!incoming[ref.to][p]) {
                        incoming[ref.to][p] = true;
                        ++fresh[ref.to];
                    }
                }
            }
        }

        have = std::move(incoming);
        for (std::size_t i = 0; i < v; ++i)
            result.trace.push_back(
                {round, topo.nodes[i].id, sent[i], received[i], fresh[i]});
        if (all_sinks_done()) break;
    }

    result.rounds_used = std::min(round, cfg.rounds_limit);
    result.dnf = !all_sinks_done();
    for (int s : sinks)
        if (std::all_of(have[s].begin(), have[s].end(), [](bool b) { return b; }))
            ++result.decoded_sinks;
    if (result.decoded_sinks > 0)
        result.efficiency =
            static_cast<double>(cfg.n) / static_cast<double>(result.total_sent);
    return result;
}

}  // namespace

RunResult run(const Topology& topology, const RunConfig& config) {
    topology.validate();
    config.validate();
    if (config.strategy == Strategy::kNoCodingRetransmit)
        return run_retransmit(topology, config);
    return run_coded(topology, config);
}

double transmission_efficiency(const RunResult& result, std::size_t n) {
    if (result.decoded_sinks == 0) throw UndefinedEfficiency();
    return static_cast<double>(n) / static_cast<double>(result.total_sent);
}

std::vector<SweepRow> sweep(const Topology& topology,
                            const RunConfig& base_config,
                            const std::vector<std::size_t>& n_values,
                            const std::vector<std::uint64_t>& seeds,
                            unsigned jobs) {
    if (n_values.empty()) throw ConfigError("sweep needs at least one n value");
    if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
    topology.validate();

    const Strategy strategies[] = {Strategy::kNoCodingRetransmit,
                                   Strategy::kFixedRate, Strategy::kAdaptive};
    struct Cell {
        std::size_t n;
        Strategy strategy;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t n : n_values)
        for (Strategy s : strategies)
            for (std::uint64_t seed : seeds) cells.push_back({n, s, seed});

    std::vector<SweepRow> rows(cells.size());
    auto run_cell = [&](std::size_t idx) {
        const Cell& c = cells[idx];
        SweepRow& row = rows[idx];
        row.n = c.n;
        row.strategy = c.strategy;
        row.seed = c.seed;
        RunConfig cfg = base_config;
        cfg.n = c.n;
        cfg.strategy = c.strategy;
        cfg.seed = c.seed;
        try {
            RunResult r = run(topology, cfg);
            row.total_sent = r.total_sent;
            row.rounds = r.rounds_used;
            row.decoded_sinks = r.decoded_sinks;
            row.dnf = r.dnf;
            row.efficiency = r.efficiency;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        for (auto& th : pool) th.join();
    }

    // normalize by the seed-batch mean no-coding efficiency at the same n
    for (std::size_t n : n_values) {
        double sum = 0;
        std::size_t count = 0;
        for (const auto& row : rows)
            if (row.n == n && row.strategy == Strategy::kNoCodingRetransmit &&
                row.efficiency) {
                sum += *row.efficiency;
                ++count;
            }
        if (count == 0) continue;
        double baseline = sum / static_cast<double>(count);
        for (auto& row : rows)
            if (row.n == n && row.efficiency)
                row.normalized_efficiency = *row.efficiency / baseline;
    }
    return rows;
}

std::pair<Topology, RunConfig> parse_run_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }

    auto fail = [](const std::string& key, const std::string& why) -> ConfigError {
        return ConfigError("config key '" + key + "': " + why);
    };

    Topology topo;
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        throw fail("nodes", "required array");
    std::map<std::string, int> index_of;
    for (const auto& jn : doc["nodes"]) {
        Node n;
        if (!jn.contains("id")) throw fail("nodes[].id", "required");
        n.id = jn["id"].get<std::string>();
        std::string kind = jn.value("kind", "relay");
        if (kind == "source")
            n.kind = NodeKind::kSource;
        else if (kind == "relay")
            n.kind = NodeKind::kRelay;
        else if (kind == "sink")
            n.kind = NodeKind::kSink;
        else
            throw fail("nodes[].kind", "must be source, relay, or sink");
        index_of[n.id] = static_cast<int>(topo.nodes.size());
        topo.nodes.push_back(std::move(n));
    }
    if (!doc.contains("links") || !doc["links"].is_array())
        throw fail("links", "required array");
    for (const auto& jl : doc["links"]) {
        Link l;
        std::string from = jl.value("from", "");
        std::string to = jl.value("to", "");
        if (!index_of.count(from)) throw fail("links[].from", "unknown node " + from);
        if (!index_of.count(to)) throw fail("links[].to", "unknown node " + to);
        l.from = index_of[from];
        l.to = index_of[to];
        if (jl.contains("loss") && !jl["loss"].is_null())
            l.loss = jl["loss"].get<double>();
        topo.links.push_back(l);
    }

    RunConfig cfg;
    cfg.n = doc.value("n", cfg.n);
    cfg.m = doc.value("m", cfg.m);
    cfg.payload_len = doc.value("L", cfg.payload_len);
    if (doc.contains("strategy"))
        cfg.strategy = strategy_from_string(doc["strategy"].get<std::string>());
    cfg.fixed_rate = doc.value("rate", cfg.fixed_rate);
    cfg.rounds_limit = doc.value("rounds", cfg.rounds_limit);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.epoch = doc.value("epoch", cfg.epoch);
    cfg.initial_rate = doc.value("initial_rate", cfg.initial_rate);
    if (doc.contains("bounds")) {
        cfg.bounds.min_rate = doc["bounds"].value("r_min", cfg.bounds.min_rate);
        cfg.bounds.max_rate = doc["bounds"].value("r_max", cfg.bounds.max_rate);
    }
    if (doc.contains("successor_aggregate")) {
        std::string agg = doc["successor_aggregate"].get<std::string>();
        if (agg == "max")
            cfg.aggregate = ctrl::SuccessorAggregate::kMax;
        else if (agg == "min")
            cfg.aggregate = ctrl::SuccessorAggregate::kMin;
        else
            throw fail("successor_aggregate", "must be max or min");
    }
    if (doc.contains("loss_range")) {
        const auto& lr = doc["loss_range"];
        if (!lr.is_array() || lr.size() != 2)
            throw fail("loss_range", "must be [lo, hi]");
        cfg.loss_range_lo = lr[0].get<double>();
        cfg.loss_range_hi = lr[1].get<double>();
    }

    topo.validate();
    cfg.validate();
    return {std::move(topo), cfg};
}

std::pair<Topology, RunConfig> load_run_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_spec(ss.str());
}

}  // namespace nckit::sim
