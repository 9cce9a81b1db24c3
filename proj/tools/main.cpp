// Command-line front end: network-coding simulation runs and sweeps,
// storage-allocation solving, partition listing, regenerating-code
// parameters. Configs are JSON, bulk results are CSV.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nckit/allocation.hpp"
#include "nckit/netsim.hpp"

namespace {

using nlohmann::json;

// exit-code contract: 0 ok, 1 config error, 2 did-not-finish
constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDnf = 2;

/// Scientific notation with 12 fractional digits and a minimal exponent,
/// e.g. 1.000000000000e-4.
std::string sci12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12e", value);
    std::string s(buf);
    auto epos = s.find('e');
    std::string mantissa = s.substr(0, epos);
    std::string exp = s.substr(epos + 1);
    bool negative = exp[0] == '-';
    std::size_t i = 1;
    while (i + 1 < exp.size() && exp[i] == '0') ++i;
    return mantissa + "e" + (negative ? "-" : "+") + exp.substr(i);
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw nckit::ConfigError("cannot open output file: " + path);
    return file;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& strategy, std::optional<double> rate,
                 const std::string& output) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config file: " << config_path << "\n";
        return kExitConfigError;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::exception& e) {
        std::cerr << "error: invalid JSON in " << config_path << ": " << e.what()
                  << "\n";
        return kExitConfigError;
    }
    if (seed) doc["seed"] = *seed;
    if (!strategy.empty()) doc["strategy"] = strategy;
    if (rate) doc["rate"] = *rate;

    auto [topo, cfg] = nckit::sim::parse_run_spec(doc.dump());
    nckit::sim::RunResult result = nckit::sim::run(topo, cfg);

    std::ofstream file;
    std::ostream& csv = open_output(file, output);
    csv << "round,node,sent,received,fresh\n";
    for (const auto& row : result.trace)
        csv << row.round << ',' << row.node << ',' << row.sent << ','
            << row.received << ',' << row.fresh << '\n';
    csv.flush();

    json summary;
    summary["efficiency"] =
        result.efficiency ? json(*result.efficiency) : json(nullptr);
    summary["rounds"] = result.rounds_used;
    summary["decoded_sinks"] = result.decoded_sinks;
    summary["sink_count"] = result.sink_count;
    summary["total_sent"] = result.total_sent;
    summary["dnf"] = result.dnf;
    summary["link_loss"] = result.link_loss;
    summary["config"] = doc;  // enough to re-run bit-identically
    std::cout << summary.dump(2) << "\n";
    return result.dnf ? kExitDnf : kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& n_values_text,
              unsigned seeds, std::uint64_t seed_base, unsigned jobs,
              const std::string& output) {
    auto [topo, cfg] = nckit::sim::load_run_spec(config_path);
    std::vector<std::size_t> n_values;
    for (int n : parse_int_list(n_values_text))
        n_values.push_back(static_cast<std::size_t>(n));
    std::vector<std::uint64_t> seed_list;
    for (unsigned i = 0; i < seeds; ++i) seed_list.push_back(seed_base + i);

    auto rows = nckit::sim::sweep(topo, cfg, n_values, seed_list, jobs);

    std::ofstream file;
    std::ostream& csv = open_output(file, output);
    csv << "n,strategy,seed,total_sent,rounds,decoded_sinks,efficiency,"
           "normalized_efficiency\n";
    for (const auto& row : rows) {
        csv << row.n << ',' << nckit::sim::to_string(row.strategy) << ','
            << row.seed << ',' << row.total_sent << ',' << row.rounds << ','
            << row.decoded_sinks << ',';
        if (row.efficiency) csv << format_double(*row.efficiency);
        csv << ',';
        if (row.normalized_efficiency)
            csv << format_double(*row.normalized_efficiency);
        csv << '\n';
    }
    csv.flush();
    return kExitOk;
}

/// Brute-force failure probability: enumerate all 2^N failure patterns.
nckit::alloc::BigRat brute_force_probability(
    const nckit::alloc::Allocation& alloc,
    const nckit::alloc::StorageParams& params) {
    using nckit::alloc::BigRat;
    const int N = alloc.count();
    BigRat total = 0;
    const BigRat& p = params.p;
    const BigRat q = BigRat(1) - p;
    for (std::uint64_t mask = 1; mask < (1ull << N); ++mask) {
        int lost = 0, card = 0;
        for (int i = 0; i < N; ++i)
            if (mask & (1ull << i)) {
                lost += alloc.parts[i];
                ++card;
            }
        if (lost <= params.n - params.k) continue;
        BigRat term = 1;
        for (int i = 0; i < card; ++i) term *= p;
        for (int i = 0; i < N - card; ++i) term *= q;
        total += term;
    }
    return total;
}

int cmd_allocate(int n, int k, int N, const std::string& p_text, bool oracle,
                 const std::string& k_list, const std::string& N_list,
                 const std::string& output) {
    using namespace nckit::alloc;
    BigRat p = parse_probability(p_text);

    // grid mode: one CSV row per (k, N) cell
    if (!k_list.empty() || !N_list.empty()) {
        std::vector<int> ks = k_list.empty() ? std::vector<int>{k}
                                             : parse_int_list(k_list);
        std::vector<int> Ns = N_list.empty() ? std::vector<int>{N}
                                             : parse_int_list(N_list);
        std::vector<StorageParams> grid;
        for (int kk : ks)
            for (int NN : Ns) grid.push_back({n, kk, NN, p});
        auto rows = sweep_reliability(grid);
        std::ofstream file;
        std::ostream& csv = open_output(file, output);
        csv << "n,k,N,p,P_even,P_osa,allocation\n";
        for (const auto& row : rows) {
            if (!row.error.empty()) {
                std::cerr << "cell n=" << row.params.n << " k=" << row.params.k
                          << " N=" << row.params.N << " failed: " << row.error
                          << "\n";
                continue;
            }
            csv << row.params.n << ',' << row.params.k << ',' << row.params.N
                << ',' << p_text << ',' << sci12(row.p_even) << ','
                << sci12(row.p_osa) << ',' << row.osa_allocation.joined() << '\n';
        }
        csv.flush();
        return kExitOk;
    }

    StorageParams params{n, k, N, p};
    std::pair<Allocation, BigRat> best;
    if (oracle) {
        // brute force both stages: stream partitions, evaluate each by
        // 2^N subset enumeration
        std::optional<Allocation> arg;
        BigRat best_prob;
        for_each_allocation(n, N, [&](const Allocation& a) {
            BigRat prob = brute_force_probability(a, params);
            if (!arg || prob < best_prob ||
                (prob == best_prob && a.parts < arg->parts)) {
                arg = a;
                best_prob = prob;
            }
        });
        best = {*arg, best_prob};
    } else {
        best = optimal_allocation_exact(params);
    }
    std::cout << best.first.joined() << "  "
              << sci12(static_cast<double>(best.second)) << "\n";

    if (!output.empty()) {
        Allocation even = even_allocation(n, N);
        std::ofstream file;
        std::ostream& csv = open_output(file, output);
        csv << "n,k,N,p,P_even,P_osa,allocation\n";
        csv << n << ',' << k << ',' << N << ',' << p_text << ','
            << sci12(failure_probability(even, params)) << ','
            << sci12(static_cast<double>(best.second)) << ','
            << best.first.joined() << '\n';
        csv.flush();
    }
    return kExitOk;
}

int cmd_partitions(int n, int N) {
    using namespace nckit::alloc;
    auto list = enumerate_allocations(n, N);
    std::vector<std::vector<int>> sorted;
    sorted.reserve(list.size());
    for (const auto& a : list) sorted.push_back(a.parts);
    std::sort(sorted.begin(), sorted.end());
    for (const auto& parts : sorted)
        std::cout << Allocation{parts}.joined() << "\n";
    std::cout << "count=" << count_partitions(n, N) << "\n";
    return kExitOk;
}

int cmd_regen_params(int B, int k, int d) {
    using namespace nckit::alloc;
    RegenPoints pts = regen_points(B, k, d);
    auto show = [](const BigRat& r) {
        std::ostringstream os;
        os << r;
        return os.str();
    };
    std::cout << "msr_alpha=" << show(pts.msr.alpha) << "\n"
              << "msr_gamma=" << show(pts.msr.gamma) << "\n"
              << "mbr_alpha=" << show(pts.mbr.alpha) << "\n"
              << "mbr_gamma=" << show(pts.mbr.gamma) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random linear network coding simulator and exact storage "
                 "allocation solver"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_strategy, sim_output;
    std::optional<std::uint64_t> sim_seed;
    std::optional<double> sim_rate;
    auto* simulate = app.add_subcommand("simulate", "run one simulation");
    simulate->add_option("config", sim_config, "JSON config file")->required();
    simulate->add_option("--seed", sim_seed, "override the RNG seed");
    simulate->add_option("--strategy", sim_strategy,
                         "override the strategy (no_coding_retransmit, "
                         "fixed_rate, adaptive)");
    simulate->add_option("--rate", sim_rate, "override the fixed code rate");
    simulate->add_option("--output", sim_output, "CSV trace path (default stdout)");

    // sweep
    std::string sw_config, sw_n_values = "16,32,64,128", sw_output;
    unsigned sw_seeds = 30, sw_jobs = 1;
    std::uint64_t sw_seed_base = 1;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "efficiency sweep over group sizes and strategies");
    sweep_cmd->add_option("config", sw_config, "JSON config file")->required();
    sweep_cmd->add_option("--n-values", sw_n_values, "comma-separated group sizes");
    sweep_cmd->add_option("--seeds", sw_seeds, "number of seeds per cell");
    sweep_cmd->add_option("--seed", sw_seed_base, "first seed of the batch");
    sweep_cmd->add_option("--jobs", sw_jobs, "parallel workers");
    sweep_cmd->add_option("--output", sw_output, "CSV path (default stdout)");

    // allocate
    int al_n = 0, al_k = 0, al_N = 0;
    std::string al_p, al_k_list, al_N_list, al_output;
    bool al_oracle = false;
    auto* allocate = app.add_subcommand(
        "allocate", "optimal storage allocation for coded parts");
    allocate->add_option("n", al_n, "number of coded parts")->required();
    allocate->add_option("k", al_k, "parts needed to recover")->required();
    allocate->add_option("N", al_N, "number of storage centers")->required();
    allocate->add_option("p", al_p, "per-center failure probability")->required();
    allocate->add_flag("--oracle", al_oracle,
                       "solve by brute-force subset enumeration instead");
    allocate->add_option("--k-list", al_k_list, "grid of k values (CSV output)");
    allocate->add_option("--N-list", al_N_list, "grid of N values (CSV output)");
    allocate->add_option("--output", al_output, "CSV path");

    // partitions
    int pa_n = 0, pa_N = 0;
    auto* partitions =
        app.add_subcommand("partitions", "list partitions of n into N parts");
    partitions->add_option("n", pa_n)->required();
    partitions->add_option("N", pa_N)->required();

    // regen-params
    int rg_B = 0, rg_k = 0, rg_d = 0;
    auto* regen = app.add_subcommand(
        "regen-params", "MSR/MBR points of a regenerating code");
    regen->add_option("B", rg_B, "file size in symbols")->required();
    regen->add_option("k", rg_k, "nodes contacted to reconstruct")->required();
    regen->add_option("d", rg_d, "helper nodes for repair")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(sim_config, sim_seed, sim_strategy, sim_rate,
                                sim_output);
        if (sweep_cmd->parsed())
            return cmd_sweep(sw_config, sw_n_values, sw_seeds, sw_seed_base,
                             sw_jobs, sw_output);
        if (allocate->parsed())
            return cmd_allocate(al_n, al_k, al_N, al_p, al_oracle, al_k_list,
                                al_N_list, al_output);
        if (partitions->parsed()) return cmd_partitions(pa_n, pa_N);
        if (regen->parsed()) return cmd_regen_params(rg_B, rg_k, rg_d);
    } catch (const nckit::NoValidAllocation&) {
        std::cerr << "no valid allocation\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
