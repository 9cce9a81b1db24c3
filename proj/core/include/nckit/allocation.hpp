#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nckit/errors.hpp"

namespace nckit::alloc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Parse a probability given as a decimal ("0.01") or a fraction ("1/100")
/// into an exact rational in [0,1].
BigRat parse_probability(const std::string& text);

/// Placement of n coded parts into N centers, every center nonempty.
/// Parts are kept sorted non-descending; that sorted form is the canonical
/// identity of the allocation.
struct Allocation {
    std::vector<int> parts;

    int total() const;
    int count() const { return static_cast<int>(parts.size()); }
    /// "2+2+3"
    std::string joined() const;

    bool operator==(const Allocation&) const = default;
    auto operator<=>(const Allocation&) const = default;
};

struct StorageParams {
    int n = 0;  // coded parts
    int k = 0;  // parts needed to recover
    int N = 0;  // storage centers
    BigRat p;   // per-center failure probability

    void validate() const;
};

/// Number of partitions of n into exactly N positive parts,
/// P(n,N) = P(n-1,N-1) + P(n-N,N).
BigInt count_partitions(int n, int N);

/// All partitions of n into N positive parts via the bottom-up DP that
/// builds S(i,j) lists from S(i-1,j-1) u {1} and S(i-j,j) + 1.
/// Throws NoValidAllocation when N > n, EnumerationCapExceeded when
/// P(n,N) > cap (use for_each_allocation instead of raising the cap).
std::vector<Allocation> enumerate_allocations(
    int n, int N, std::uint64_t cap = 10'000'000);

/// Streaming enumeration in lexicographic order of sorted parts; does not
/// materialize the partition lists.
void for_each_allocation(int n, int N,
                         const std::function<void(const Allocation&)>& fn);

/// Distinct nonempty-subset sums of an allocation with per-cardinality
/// multiplicities: counts(l, j) = number of l-element subsets summing to
/// values[j].
class SumCountTable {
public:
    const std::vector<int>& values() const { return values_; }
    const BigInt& count(int cardinality, int value_index) const;
    /// Number of subsets with at most `cardinality` irrelevant; total over
    /// all cells is 2^N - 1.
    BigInt total_subsets() const;

private:
    friend SumCountTable build_sum_count_table(const Allocation&);
    std::vector<int> values_;                  // ascending, excludes the empty sum
    std::vector<std::vector<BigInt>> counts_;  // counts_[j][l-1], l = 1..N
    int max_cardinality_ = 0;
};

/// Sorted-merge construction of the subset-sum table: one pass per part,
/// merging the previous list with its shifted copy.
SumCountTable build_sum_count_table(const Allocation& alloc);

/// Probability that the surviving parts number fewer than k, i.e. the
/// failed parts sum strictly exceeds n-k. Exact rational arithmetic.
BigRat failure_probability_exact(const Allocation& alloc,
                                 const StorageParams& params);
double failure_probability(const Allocation& alloc,
                           const StorageParams& params);

/// Allocation minimizing the failure probability, with the probability.
/// Ties go to the lexicographically smallest sorted parts. Streams the
/// candidates when P(n,N) exceeds the materialization cap.
std::pair<Allocation, BigRat> optimal_allocation_exact(
    const StorageParams& params, std::uint64_t cap = 10'000'000);
std::pair<Allocation, double> optimal_allocation(
    const StorageParams& params, std::uint64_t cap = 10'000'000);

/// mod(n,N) centers get floor(n/N)+1 parts, the rest floor(n/N).
Allocation even_allocation(int n, int N);

/// One point of the regenerating-code storage/repair-bandwidth tradeoff.
struct RegenPoint {
    BigRat alpha;  // storage per node, in symbols
    BigRat gamma;  // repair bandwidth, in symbols
};

struct RegenPoints {
    RegenPoint msr;  // (B/k, Bd/(k(d-k+1)))
    RegenPoint mbr;  // (2Bd/(2kd-k^2+k), same)
};

RegenPoints regen_points(int B, int k, int d);

/// Cut-set bound B <= sum_{i=0}^{k-1} min(alpha, (d-i) beta).
bool cutset_bound_ok(int B, int k, int d, const BigRat& alpha,
                     const BigRat& beta);

struct ReliabilityRow {
    StorageParams params;
    double p_even = 0;
    double p_osa = 0;
    Allocation osa_allocation;
    std::string error;  // nonempty when the cell failed
};

/// Evaluate even vs optimal allocation over a grid of parameter cells.
/// Per-cell errors are recorded in the row; the sweep continues.
std::vector<ReliabilityRow> sweep_reliability(
    const std::vector<StorageParams>& grid);

}  // namespace nckit::alloc
