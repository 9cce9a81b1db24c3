#include "nckit/allocation.hpp"

#include <algorithm>
#include <numeric>

namespace nckit::alloc {

namespace {

BigRat pow_rat(const BigRat& base, int exp) {
    BigRat acc = 1;
    for (int i = 0; i < exp; ++i) acc *= base;
    return acc;
}

// base-10 only: the cpp_int string constructor would read a leading zero
// as octal
BigInt parse_digits(const std::string& text) {
    if (text.empty()) throw ConfigError("empty number");
    BigInt value = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw ConfigError("malformed number: " + text);
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace

BigRat parse_probability(const std::string& text) {
    if (text.empty()) throw ConfigError("empty probability");
    BigRat value;
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_digits(text.substr(0, slash));
        BigInt den = parse_digits(text.substr(slash + 1));
        if (den == 0) throw ConfigError("zero denominator in probability");
        value = BigRat(num, den);
    } else {
        auto dot = text.find('.');
        if (dot == std::string::npos) {
            value = BigRat(parse_digits(text));
        } else {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            std::size_t frac_len = text.size() - dot - 1;
            BigInt den = 1;
            for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
            value = BigRat(parse_digits(digits), den);
        }
    }
    if (value < 0 || value > 1)
        throw ConfigError("probability must lie in [0,1]: " + text);
    return value;
}

int Allocation::total() const {
    return std::accumulate(parts.begin(), parts.end(), 0);
}

std::string Allocation::joined() const {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '+';
        out += std::to_string(parts[i]);
    }
    return out;
}

void StorageParams::validate() const {
    if (n <= 0 || k <= 0 || N <= 0) throw ConfigError("n, k, N must be positive");
    if (k > n) throw ConfigError("k must not exceed n");
    if (N > n) throw NoValidAllocation("more centers than parts: N > n");
    if (p < 0 || p > 1) throw ConfigError("p must lie in [0,1]");
}

BigInt count_partitions(int n, int N) {
    if (n <= 0 || N <= 0) throw ConfigError("n and N must be positive");
    if (N > n) return 0;
    // P(i,j) = P(i-1,j-1) + P(i-j,j)
    std::vector<std::vector<BigInt>> P(n + 1, std::vector<BigInt>(N + 1, 0));
    P[0][0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= std::min(i, N); ++j) {
            P[i][j] = P[i - 1][j - 1];
            if (i - j >= j) P[i][j] += P[i - j][j];
        }
    return P[n][N];
}

std::vector<Allocation> enumerate_allocations(int n, int N, std::uint64_t cap) {
    if (n <= 0 || N <= 0) throw ConfigError("n and N must be positive");
    if (N > n) throw NoValidAllocation("no partition of " + std::to_string(n) +
                                       " into " + std::to_string(N) + " parts");
    if (count_partitions(n, N) > cap)
        throw EnumerationCapExceeded(
            "P(n,N) exceeds the materialization cap; stream instead");

    // S[i][j]: all partitions of i into exactly j parts, parts sorted
    // non-descending. Built bottom-up; the two branches prepend a 1 to
    // S(i-1,j-1) or add 1 to every part of S(i-j,j), both of which
    // preserve the sorted order.
    std::vector<std::vector<std::vector<Allocation>>> S(
        n + 1, std::vector<std::vector<Allocation>>(N + 1));
    for (int i = 1; i <= n; ++i) {
        S[i][1] = {Allocation{{i}}};
        for (int j = 2; j <= std::min(i, N); ++j) {
            std::vector<Allocation> list;
            for (const auto& a : S[i - 1][j - 1]) {
                Allocation b;
                b.parts.reserve(j);
                b.parts.push_back(1);
                b.parts.insert(b.parts.end(), a.parts.begin(), a.parts.end());
                list.push_back(std::move(b));
            }
            if (i - j >= j) {
                for (const auto& a : S[i - j][j]) {
                    Allocation b = a;
                    for (auto& part : b.parts) ++part;
                    list.push_back(std::move(b));
                }
            }
            S[i][j] = std::move(list);
        }
    }
    return S[n][N];
}

namespace {

void emit_partitions(int remaining, int slots, int min_part, Allocation& prefix,
                     const std::function<void(const Allocation&)>& fn) {
    if (slots == 1) {
        if (remaining >= min_part) {
            prefix.parts.push_back(remaining);
            fn(prefix);
            prefix.parts.pop_back();
        }
        return;
    }
    for (int a = min_part; a * slots <= remaining; ++a) {
        prefix.parts.push_back(a);
        emit_partitions(remaining - a, slots - 1, a, prefix, fn);
        prefix.parts.pop_back();
    }
}

}  // namespace

void for_each_allocation(int n, int N,
                         const std::function<void(const Allocation&)>& fn) {
    if (n <= 0 || N <= 0) throw ConfigError("n and N must be positive");
    if (N > n) throw NoValidAllocation("no partition of " + std::to_string(n) +
                                       " into " + std::to_string(N) + " parts");
    Allocation prefix;
    prefix.parts.reserve(N);
    emit_partitions(n, N, 1, prefix, fn);
}

const BigInt& SumCountTable::count(int cardinality, int value_index) const {
    static const BigInt zero = 0;
    if (value_index < 0 || value_index >= static_cast<int>(values_.size()) ||
        cardinality < 1 || cardinality > max_cardinality_)
        return zero;
    return counts_[value_index][cardinality - 1];
}

BigInt SumCountTable::total_subsets() const {
    BigInt total = 0;
    for (const auto& row : counts_)
        for (const auto& c : row) total += c;
    return total;
}

SumCountTable build_sum_count_table(const Allocation& alloc) {
    const int N = alloc.count();
    if (N == 0) throw ConfigError("empty allocation");
    std::vector<int> parts = alloc.parts;
    if (!std::is_sorted(parts.begin(), parts.end()))
        std::sort(parts.begin(), parts.end());

    // entry: subset-sum value with per-cardinality counts, index 0 = empty
    struct Entry {
        int value;
        std::vector<BigInt> counts;  // counts[l], l = 0..N
    };
    std::vector<Entry> merged;
    merged.push_back({0, std::vector<BigInt>(N + 1, 0)});
    merged[0].counts[0] = 1;  // the empty-subset sentinel

    for (int part : parts) {
        if (part <= 0) throw ConfigError("allocation parts must be positive");
        // shifted copy: every subset gains this part, cardinality + 1
        std::vector<Entry> shifted;
        shifted.reserve(merged.size());
        for (const auto& e : merged) {
            Entry s;
            s.value = e.value + part;
            s.counts.assign(N + 1, 0);
            for (int l = 0; l < N; ++l) s.counts[l + 1] = e.counts[l];
            shifted.push_back(std::move(s));
        }
        // merge two value-sorted lists, summing counts on equal values
        std::vector<Entry> out;
        out.reserve(merged.size() + shifted.size());
        std::size_t li = 0, ri = 0;
        while (li < merged.size() && ri < shifted.size()) {
            if (merged[li].value == shifted[ri].value) {
                Entry e = std::move(merged[li]);
                for (int l = 0; l <= N; ++l) e.counts[l] += shifted[ri].counts[l];
                out.push_back(std::move(e));
                ++li;
                ++ri;
            } else if (merged[li].value < shifted[ri].value) {
                out.push_back(std::move(merged[li++]));
            } else {
                out.push_back(std::move(shifted[ri++]));
            }
        }
        while (li < merged.size()) out.push_back(std::move(merged[li++]));
        while (ri < shifted.size()) out.push_back(std::move(shifted[ri++]));
        merged = std::move(out);
    }

    SumCountTable table;
    table.max_cardinality_ = N;
    for (const auto& e : merged) {
        if (e.value == 0) continue;  // drop the empty sentinel
        table.values_.push_back(e.value);
        table.counts_.emplace_back(e.counts.begin() + 1, e.counts.end());
    }
    return table;
}

BigRat failure_probability_exact(const Allocation& alloc,
                                 const StorageParams& params) {
    params.validate();
    if (alloc.total() != params.n || alloc.count() != params.N)
        throw ConfigError("allocation inconsistent with storage parameters");

    SumCountTable table = build_sum_count_table(alloc);
    const int threshold = params.n - params.k;  // data lost iff failed sum > this
    const BigRat& p = params.p;
    const BigRat q = BigRat(1) - p;

    BigRat total = 0;
    for (int l = 1; l <= params.N; ++l) {
        BigInt subsets = 0;
        const auto& values = table.values();
        for (int j = 0; j < static_cast<int>(values.size()); ++j)
            if (values[j] > threshold) subsets += table.count(l, j);
        if (subsets != 0)
            total += BigRat(subsets) * pow_rat(p, l) * pow_rat(q, params.N - l);
    }
    return total;
}

double failure_probability(const Allocation& alloc,
                           const StorageParams& params) {
    return static_cast<double>(failure_probability_exact(alloc, params));
}

std::pair<Allocation, BigRat> optimal_allocation_exact(
    const StorageParams& params, std::uint64_t cap) {
    params.validate();
    std::optional<Allocation> best;
    BigRat best_prob;
    auto consider = [&](const Allocation& a) {
        BigRat prob = failure_probability_exact(a, params);
        if (!best || prob < best_prob ||
            (prob == best_prob && a.parts < best->parts)) {
            best = a;
            best_prob = prob;
        }
    };
    if (count_partitions(params.n, params.N) <= cap) {
        for (const auto& a : enumerate_allocations(params.n, params.N, cap))
            consider(a);
    } else {
        for_each_allocation(params.n, params.N, consider);
    }
    return {*best, best_prob};
}

std::pair<Allocation, double> optimal_allocation(const StorageParams& params,
                                                 std::uint64_t cap) {
    auto [alloc, prob] = optimal_allocation_exact(params, cap);
    return {alloc, static_cast<double>(prob)};
}

Allocation even_allocation(int n, int N) {
    if (n <= 0 || N <= 0) throw ConfigError("n and N must be positive");
    if (N > n) throw NoValidAllocation("more centers than parts: N > n");
    int base = n / N;
    int extra = n % N;
    Allocation a;
    a.parts.assign(N - extra, base);
    a.parts.insert(a.parts.end(), extra, base + 1);
    return a;
}

RegenPoints regen_points(int B, int k, int d) {
    if (B <= 0 || k <= 0 || d <= 0) throw ConfigError("B, k, d must be positive");
    if (k > d) throw ConfigError("regenerating code requires k <= d");
    RegenPoints out;
    out.msr.alpha = BigRat(B, k);
    out.msr.gamma = BigRat(BigInt(B) * d, BigInt(k) * (d - k + 1));
    BigRat mbr(BigInt(2) * B * d, BigInt(2) * k * d - BigInt(k) * k + k);
    out.mbr.alpha = mbr;
    out.mbr.gamma = mbr;
    return out;
}

bool cutset_bound_ok(int B, int k, int d, const BigRat& alpha,
                     const BigRat& beta) {
    if (B <= 0 || k <= 0 || d <= 0 || alpha <= 0 || beta <= 0)
        throw ConfigError("cut-set parameters must be positive");
    if (k > d) throw ConfigError("cut-set bound requires k <= d");
    BigRat sum = 0;
    for (int i = 0; i < k; ++i) sum += std::min(alpha, BigRat(d - i) * beta);
    return BigRat(B) <= sum;
}

std::vector<ReliabilityRow> sweep_reliability(
    const std::vector<StorageParams>& grid) {
    std::vector<ReliabilityRow> rows;
    rows.reserve(grid.size());
    for (const auto& cell : grid) {
        ReliabilityRow row;
        row.params = cell;
        try {
            Allocation even = even_allocation(cell.n, cell.N);
            row.p_even = failure_probability(even, cell);
            auto [osa, prob] = optimal_allocation(cell);
            row.osa_allocation = osa;
            row.p_osa = prob;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nckit::alloc
