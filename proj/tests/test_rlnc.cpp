#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "nckit/rlnc.hpp"

using namespace nckit;
using gf::Field;
using gf::Symbol;
using namespace nckit::rlnc;

namespace {

CodingGroup random_group(const Field& f, std::size_t n, std::size_t len,
                         gf::SymbolRng& rng) {
    CodingGroup g{&f, n, len, {}};
    g.originals.resize(n);
    for (auto& h : g.originals) {
        h.resize(len);
        for (auto& s : h) s = rng.next(f);
    }
    return g;
}

std::size_t rank_of(const Field& f, const std::vector<CodedPacket>& pkts,
                    std::size_t n) {
    Decoder d(f, n, pkts.empty() ? 0 : pkts[0].payload.size());
    for (const auto& p : pkts) d.accept(p);
    return d.rank();
}

}  // namespace

TEST_CASE("single-packet group: payload is the scaled original") {
    const Field& f = Field::gf256();
    gf::SymbolRng rng(1);
    CodingGroup g = random_group(f, 1, 5, rng);
    auto pkts = source_encode(g, 1.0, rng);
    REQUIRE(pkts.size() == 1);
    Symbol delta = pkts[0].coeffs[0];
    CHECK(delta != 0);
    for (std::size_t s = 0; s < 5; ++s)
        CHECK(pkts[0].payload[s] == f.mul(delta, g.originals[0][s]));
}

TEST_CASE("n=4, r=1.5 gives 6 packets with the first 4 independent") {
    const Field& f = Field::gf256();
    gf::SymbolRng rng(2);
    CodingGroup g = random_group(f, 4, 3, rng);
    auto pkts = source_encode(g, 1.5, rng);
    REQUIRE(pkts.size() == 6);
    CHECK(rank_of(f, {pkts.begin(), pkts.begin() + 4}, 4) == 4);
    // linearity: payload = Delta * H for every packet
    for (const auto& p : pkts)
        for (std::size_t s = 0; s < 3; ++s) {
            Symbol expect = 0;
            for (std::size_t j = 0; j < 4; ++j)
                expect = Field::add(expect, f.mul(p.coeffs[j], g.originals[j][s]));
            CHECK(p.payload[s] == expect);
        }
}

TEST_CASE("n=8, r=2: random 8-subsets of the 16 vectors usually full rank") {
    const Field& f = Field::gf256();
    gf::SymbolRng rng(3);
    CodingGroup g = random_group(f, 8, 2, rng);
    auto pkts = source_encode(g, 2.0, rng);
    REQUIRE(pkts.size() == 16);
    gf::SymbolRng pick(99);
    int full = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> idx(16);
        std::iota(idx.begin(), idx.end(), 0);
        // Fisher-Yates with the field rng as the entropy source
        for (int i = 15; i > 0; --i) {
            int j = pick.next(f) % (i + 1);
            std::swap(idx[i], idx[j]);
        }
        std::vector<CodedPacket> chosen;
        for (int i = 0; i < 8; ++i) chosen.push_back(pkts[idx[i]]);
        if (rank_of(f, chosen, 8) == 8) ++full;
    }
    CHECK(full >= 960);
}

TEST_CASE("recode: scaling, row-space containment, span preservation") {
    const Field& f = Field::gf256();
    gf::SymbolRng rng(4);
    CodingGroup g = random_group(f, 4, 3, rng);
    auto pkts = source_encode(g, 1.0, rng);

    SUBCASE("single input is scaled by one coefficient") {
        std::vector<CodedPacket> one{pkts[0]};
        auto out = recode(f, one, 1.0, rng);
        REQUIRE(out.size() == 1);
        // out = c * in for the same c on vector and payload
        Symbol c = f.div(out[0].coeffs[0], pkts[0].coeffs[0]);
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(out[0].coeffs[j] == f.mul(c, pkts[0].coeffs[j]));
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(out[0].payload[j] == f.mul(c, pkts[0].payload[j]));
    }

    SUBCASE("recode of recode stays in the group row space") {
        auto once = recode(f, pkts, 1.5, rng);
        auto twice = recode(f, once, 1.0, rng);
        auto combined = pkts;
        std::size_t base = rank_of(f, combined, 4);
        combined.insert(combined.end(), twice.begin(), twice.end());
        CHECK(rank_of(f, combined, 4) == base);
    }

    SUBCASE("two independent inputs, r=1: span preserved") {
        std::vector<CodedPacket> two{pkts[0], pkts[1]};
        auto out = recode(f, two, 1.0, rng);
        REQUIRE(out.size() == 2);
        CHECK(rank_of(f, out, 4) == 2);
        auto all = two;
        all.insert(all.end(), out.begin(), out.end());
        CHECK(rank_of(f, all, 4) == 2);
    }

    SUBCASE("empty buffer is an error") {
        std::vector<CodedPacket> none;
        CHECK_THROWS_AS(recode(f, none, 1.0, rng), EmptyBuffer);
    }
}

TEST_CASE("freshness bookkeeping at the decoder") {
    const Field& f = Field::gf256();
    Decoder d(f, 3, 1);
    CodedPacket e1{{1, 0, 0}, {10}};
    CodedPacket e2{{0, 1, 0}, {20}};
    CodedPacket e12{{1, 1, 0}, {30}};
    CHECK(d.accept(e1));
    CHECK_FALSE(d.accept(e1));  // duplicate
    CHECK(d.accept(e2));
    CHECK_FALSE(d.accept(e12));  // dependent
    CHECK(d.rank() == 2);
    CodedPacket zero{{0, 0, 0}, {0}};
    CHECK_FALSE(d.accept(zero));
    CodedPacket wrong{{1, 0}, {1}};
    CHECK_THROWS_AS(d.accept(wrong), GroupMismatch);
}

TEST_CASE("decode solves the char-2 elimination example") {
    const Field& f = Field::gf256();
    Decoder d(f, 2, 1);
    Symbol g1 = 0x5A, g2 = 0x77;
    d.accept({{1, 0}, {g1}});
    d.accept({{1, 1}, {g2}});
    auto h = d.decode();
    CHECK(h[0][0] == g1);
    CHECK(h[1][0] == Field::add(g1, g2));
}

TEST_CASE("identity vectors decode to the payloads unchanged") {
    const Field& f = Field::gf256();
    Decoder d(f, 3, 2);
    d.accept({{0, 1, 0}, {3, 4}});
    d.accept({{1, 0, 0}, {1, 2}});
    CHECK_THROWS_AS(d.decode(), InsufficientRank);
    try {
        d.decode();
    } catch (const InsufficientRank& e) {
        CHECK(e.rank == 2);
    }
    d.accept({{0, 0, 1}, {5, 6}});
    auto h = d.decode();
    CHECK(h == std::vector<std::vector<Symbol>>{{1, 2}, {3, 4}, {5, 6}});
}

TEST_CASE("encode -> recode -> decode roundtrip over seeded trials") {
    const Field& f = Field::gf256();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        gf::SymbolRng rng(seed);
        std::size_t n = 1 + rng.next(f) % 12;
        CodingGroup g = random_group(f, n, 4, rng);
        auto pkts = source_encode(g, 1.5, rng);
        // drop every third packet, recode the survivors
        std::vector<CodedPacket> survivors;
        for (std::size_t i = 0; i < pkts.size(); ++i)
            if (i % 3 != 2) survivors.push_back(pkts[i]);
        auto relayed = recode(f, survivors, 1.2, rng);
        Decoder d(f, n, 4);
        for (const auto& p : relayed) d.accept(p);
        for (const auto& p : pkts) d.accept(p);
        REQUIRE(d.complete());
        REQUIRE(d.decode() == g.originals);
    }
}

TEST_CASE("wire format: golden bytes, roundtrip, truncation") {
    const Field& f8 = Field::gf256();
    CodedPacket p{{0x01, 0x02}, {0x0A, 0x0B, 0x0C}};
    auto bytes = serialize(f8, p);
    CHECK(bytes == std::vector<std::uint8_t>{0x01, 0x02, 0x0A, 0x0B, 0x0C});
    CHECK(deserialize(f8, bytes, 2, 3) == p);

    auto short_buf = bytes;
    short_buf.pop_back();
    CHECK_THROWS_AS(deserialize(f8, short_buf, 2, 3), MalformedPacket);

    // property: roundtrip identity for random packets, both fields
    for (unsigned m : {8u, 16u}) {
        const Field& f = Field::for_exponent(m);
        gf::SymbolRng rng(55 + m);
        for (int t = 0; t < 200; ++t) {
            std::size_t n = 1 + rng.next(f) % 6;
            std::size_t len = 1 + rng.next(f) % 9;
            CodedPacket q;
            for (std::size_t i = 0; i < n; ++i) q.coeffs.push_back(rng.next(f));
            for (std::size_t i = 0; i < len; ++i) q.payload.push_back(rng.next(f));
            REQUIRE(deserialize(f, serialize(f, q), n, len) == q);
        }
    }
}

TEST_CASE("identical seeds produce byte-identical packet streams") {
    const Field& f = Field::gf256();
    gf::SymbolRng rng1(77), rng2(77);
    CodingGroup g1 = random_group(f, 6, 3, rng1);
    CodingGroup g2 = random_group(f, 6, 3, rng2);
    auto a = source_encode(g1, 1.7, rng1);
    auto b = source_encode(g2, 1.7, rng2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(serialize(f, a[i]) == serialize(f, b[i]));
}
