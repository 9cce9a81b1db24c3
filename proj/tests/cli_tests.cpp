// End-to-end checks of the command-line binary: golden outputs, exit
// codes, and byte-level determinism. The binary and config paths come in
// through compile definitions.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(NCKIT_CLI_PATH) + " " + args +
                      (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string config(const std::string& name) {
    return std::string(NCKIT_CONFIG_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("partitions: golden listing and count") {
    auto r = run_cli("partitions 7 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "1+1+5\n"
          "1+2+4\n"
          "1+3+3\n"
          "2+2+3\n"
          "count=4\n");
}

TEST_CASE("allocate: golden optimum for the worked example") {
    auto r = run_cli("allocate 4 2 2 0.01");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "2+2  1.000000000000e-4\n");
}

TEST_CASE("allocate: table solver agrees with the brute-force oracle") {
    auto fast = run_cli("allocate 12 5 4 0.1");
    auto oracle = run_cli("allocate 12 5 4 0.1 --oracle");
    CHECK(fast.exit_code == 0);
    CHECK(oracle.exit_code == 0);
    CHECK(fast.out == oracle.out);
    CHECK_FALSE(fast.out.empty());
}

TEST_CASE("allocate: infeasible parameters exit 1 with a message") {
    auto r = run_cli("allocate 3 2 5 0.1", /*merge_stderr=*/true);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("no valid allocation") != std::string::npos);
}

TEST_CASE("regen-params: golden rational output") {
    auto r = run_cli("regen-params 4 2 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "msr_alpha=2\n"
          "msr_gamma=3\n"
          "mbr_alpha=12/5\n"
          "mbr_gamma=12/5\n");
}

TEST_CASE("simulate: lossless link decodes with efficiency 1 and exit 0") {
    auto r = run_cli("simulate " + config("lossless_link.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("round,node,sent,received,fresh") != std::string::npos);
    CHECK(r.out.find("\"efficiency\": 1.0") != std::string::npos);
    CHECK(r.out.find("\"dnf\": false") != std::string::npos);
}

TEST_CASE("simulate: identical invocations are byte-identical") {
    std::string trace_a = "/tmp/nckit_cli_trace_a.csv";
    std::string trace_b = "/tmp/nckit_cli_trace_b.csv";
    auto a = run_cli("simulate " + config("reference_2sink.json") +
                     " --seed 5 --output " + trace_a);
    auto b = run_cli("simulate " + config("reference_2sink.json") +
                     " --seed 5 --output " + trace_b);
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(a.out == b.out);  // JSON summaries
    std::string ta = slurp(trace_a), tb = slurp(trace_b);
    CHECK(ta == tb);
    CHECK(ta.rfind("round,node,sent,received,fresh\n", 0) == 0);
    std::remove(trace_a.c_str());
    std::remove(trace_b.c_str());
}

TEST_CASE("simulate: seed override changes the run") {
    auto a = run_cli("simulate " + config("reference_2sink.json") + " --seed 5");
    auto b = run_cli("simulate " + config("reference_2sink.json") + " --seed 6");
    CHECK(a.out != b.out);
}

TEST_CASE("simulate: missing config exits 1") {
    auto r = run_cli("simulate /nonexistent.json", /*merge_stderr=*/true);
    CHECK(r.exit_code == 1);
}

TEST_CASE("simulate: round-limit expiry exits 2") {
    auto r = run_cli("simulate " + config("lossy_chain.json") +
                     " --strategy fixed_rate --rate 1.0");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("\"dnf\": true") != std::string::npos);
}

TEST_CASE("sweep: CSV schema and row count") {
    auto r = run_cli("sweep " + config("lossless_link.json") +
                     " --n-values 8 --seeds 2 --jobs 2");
    CHECK(r.exit_code == 0);
    std::stringstream ss(r.out);
    std::string line;
    REQUIRE(std::getline(ss, line));
    CHECK(line ==
          "n,strategy,seed,total_sent,rounds,decoded_sinks,efficiency,"
          "normalized_efficiency");
    int rows = 0;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6);  // 1 n-value x 3 strategies x 2 seeds
}

TEST_CASE("allocate grid: CSV schema with scientific-notation columns") {
    auto r = run_cli("allocate 14 0 0 0.01 --k-list 7,9 --N-list 4");
    CHECK(r.exit_code == 0);
    std::stringstream ss(r.out);
    std::string line;
    REQUIRE(std::getline(ss, line));
    CHECK(line == "n,k,N,p,P_even,P_osa,allocation");
    int rows = 0;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.rfind("14,", 0) == 0);
        CHECK(line.find("e-") != std::string::npos);
    }
    CHECK(rows == 2);
}
