#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "symban/partition.hpp"

using namespace symban;

namespace {

// Independent brute-force oracle: enumerate every set partition of {1..d}
// via restricted growth strings, with no class logic shared with the
// library (the class predicates here are written from the raw pattern
// definitions on element quadruples).
std::vector<std::vector<std::vector<int>>> oracle_all_partitions(int d) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> a(static_cast<size_t>(d), 0);
    auto emit = [&] {
        int k = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<std::vector<int>> blocks(static_cast<size_t>(k));
        for (int i = 0; i < d; ++i) blocks[static_cast<size_t>(a[static_cast<size_t>(i)])].push_back(i + 1);
        out.push_back(blocks);
    };
    // iterate restricted growth strings
    for (;;) {
        emit();
        int i = d - 1;
        while (i > 0) {
            int mx = 0;
            for (int j = 0; j < i; ++j) mx = std::max(mx, a[static_cast<size_t>(j)]);
            if (a[static_cast<size_t>(i)] < mx + 1) break;
            --i;
        }
        if (i == 0) break;
        ++a[static_cast<size_t>(i)];
        for (int j = i + 1; j < d; ++j) a[static_cast<size_t>(j)] = 0;
    }
    return out;
}

bool oracle_crossing(const std::vector<std::vector<int>>& blocks) {
    // exists i<p<j<q with {i,j} and {p,q} in two distinct blocks
    for (size_t b1 = 0; b1 < blocks.size(); ++b1)
        for (size_t b2 = 0; b2 < blocks.size(); ++b2) {
            if (b1 == b2) continue;
            for (int i : blocks[b1])
                for (int j : blocks[b1])
                    for (int p : blocks[b2])
                        for (int q : blocks[b2])
                            if (i < p && p < j && j < q) return true;
        }
    return false;
}

bool oracle_nesting(const std::vector<std::vector<int>>& blocks) {
    // exists arcs i<p<q<j where (i,j) joins consecutive elements of one
    // block and (p,q) consecutive elements of another
    auto arcs_of = [](std::vector<int> b) {
        std::sort(b.begin(), b.end());
        std::vector<std::pair<int, int>> arcs;
        for (size_t i = 0; i + 1 < b.size(); ++i) arcs.emplace_back(b[i], b[i + 1]);
        return arcs;
    };
    for (size_t b1 = 0; b1 < blocks.size(); ++b1)
        for (size_t b2 = 0; b2 < blocks.size(); ++b2) {
            if (b1 == b2) continue;
            for (auto [i, j] : arcs_of(blocks[b1]))
                for (auto [p, q] : arcs_of(blocks[b2]))
                    if (i < p && p < q && q < j) return true;
        }
    return false;
}

bool oracle_interval(const std::vector<std::vector<int>>& blocks) {
    for (const auto& b : blocks) {
        auto s = b;
        std::sort(s.begin(), s.end());
        if (s.back() - s.front() + 1 != static_cast<int>(s.size())) return false;
    }
    return true;
}

bool oracle_in_class(const std::vector<std::vector<int>>& blocks, PartitionClass c) {
    switch (c) {
        case PartitionClass::All: return true;
        case PartitionClass::NonCrossing: return !oracle_crossing(blocks);
        case PartitionClass::NonNesting: return !oracle_nesting(blocks);
        case PartitionClass::Interval: return oracle_interval(blocks);
    }
    return false;
}

}  // namespace

TEST_CASE("canonicalize sorts blocks and elements") {
    Partition p({{3, 1}, {2}}, 3);
    CHECK(p.blocks() == std::vector<std::vector<int>>{{1, 3}, {2}});
    CHECK(p.block_count() == 2);

    Partition q({{1}, {2}, {3}}, 3);
    CHECK(q == Partition::finest(3));
}

TEST_CASE("canonicalize rejects bad covers") {
    CHECK_THROWS_AS(Partition({{1, 2}, {2, 3}}, 3), OverlapError);
    CHECK_THROWS_AS(Partition({{1, 2}}, 3), CoverageError);
    CHECK_THROWS_AS(Partition({{1, 2, 4}}, 3), CoverageError);
    CHECK_THROWS_AS(Partition({{1, 1}, {2, 3}}, 3), OverlapError);
}

TEST_CASE("class predicates on the defining patterns") {
    CHECK_FALSE(is_in_class(Partition({{1, 3}, {2, 4}}, 4), PartitionClass::NonCrossing));
    CHECK(is_in_class(Partition({{1, 3}, {2, 4}}, 4), PartitionClass::NonNesting));
    CHECK_FALSE(is_in_class(Partition({{1, 4}, {2, 3}}, 4), PartitionClass::NonNesting));
    CHECK(is_in_class(Partition({{1, 4}, {2, 3}}, 4), PartitionClass::NonCrossing));
    // nested element pairs but no nested arcs: non-nesting
    CHECK(is_in_class(Partition({{1, 3, 5}, {2, 4}}, 5), PartitionClass::NonNesting));
    CHECK(is_in_class(Partition({{1, 2}, {3}}, 3), PartitionClass::Interval));
    CHECK_FALSE(is_in_class(Partition({{1, 3}, {2}}, 3), PartitionClass::Interval));
    CHECK(is_in_class(Partition({{1, 3}, {2}}, 3), PartitionClass::All));
}

TEST_CASE("class predicates agree with the quadruple-pattern oracle up to d=7") {
    for (int d = 1; d <= 7; ++d) {
        for (const auto& blocks : oracle_all_partitions(d)) {
            Partition p(blocks, d);
            for (auto c : {PartitionClass::NonCrossing, PartitionClass::NonNesting,
                           PartitionClass::Interval}) {
                CAPTURE(to_string(p));
                CHECK(is_in_class(p, c) == oracle_in_class(blocks, c));
            }
        }
    }
}

TEST_CASE("enumeration counts match brute force and known values") {
    // Bell(3) = 5
    CHECK(enumerate_partitions(3, PartitionClass::All, 3).size() == 5);
    // Catalan C_4 = 14 non-crossing partitions of {1..4}
    CHECK(enumerate_partitions(4, PartitionClass::NonCrossing, 4).size() == 14);
    // Stirling S(4,2) = 7
    auto all4 = enumerate_partitions(4, PartitionClass::All, 2);
    int two_blocks = 0;
    for (const auto& p : all4)
        if (p.block_count() == 2) ++two_blocks;
    CHECK(two_blocks == 7);
}

TEST_CASE("enumeration is duplicate-free, canonical and matches the oracle") {
    for (int d = 1; d <= 6; ++d) {
        for (auto c : {PartitionClass::All, PartitionClass::NonCrossing,
                       PartitionClass::NonNesting, PartitionClass::Interval}) {
            auto got = enumerate_partitions(d, c, d);
            std::set<std::string> seen;
            for (const auto& p : got) {
                CHECK(is_in_class(p, c));
                CHECK(seen.insert(to_string(p)).second);
            }
            size_t expected = 0;
            for (const auto& blocks : oracle_all_partitions(d))
                if (oracle_in_class(blocks, c)) ++expected;
            CHECK(got.size() == expected);
        }
    }
}

TEST_CASE("enumeration respects max_blocks and the cap guard") {
    auto got = enumerate_partitions(5, PartitionClass::All, 2);
    for (const auto& p : got) CHECK(p.block_count() <= 2);
    // S(5,1) + S(5,2) = 1 + 15
    CHECK(got.size() == 16);
    CHECK_THROWS_AS(enumerate_partitions(30, PartitionClass::All, 2), TooLargeError);
    CHECK_THROWS_AS(enumerate_partitions(4, PartitionClass::All, 2, /*cap=*/3), TooLargeError);
}

TEST_CASE("count_partitions: identities vs enumeration for d <= 9") {
    for (int d = 1; d <= 9; ++d) {
        for (auto c : {PartitionClass::All, PartitionClass::NonCrossing,
                       PartitionClass::NonNesting, PartitionClass::Interval}) {
            auto all = enumerate_partitions(d, c, d);
            std::map<int, std::uint64_t> by_k;
            for (const auto& p : all) ++by_k[p.block_count()];
            for (int k = 1; k <= d; ++k) {
                CAPTURE(d);
                CAPTURE(k);
                CAPTURE(to_string(c));
                CHECK(count_partitions(d, k, c) == (by_k.count(k) ? by_k[k] : 0));
            }
        }
    }
}

TEST_CASE("count_partitions spot values") {
    CHECK(count_partitions(4, 2, PartitionClass::NonCrossing) == 6);  // Narayana N(4,2)
    CHECK(count_partitions(4, 2, PartitionClass::All) == 7);          // S(4,2)
    for (auto c : {PartitionClass::All, PartitionClass::NonCrossing,
                   PartitionClass::NonNesting, PartitionClass::Interval})
        CHECK(count_partitions(5, 1, c) == 1);
    CHECK(count_partitions(6, 3, PartitionClass::Interval) == 10);  // C(5,2)
    CHECK_THROWS_AS(count_partitions(4, 0, PartitionClass::All), ArgumentError);
    CHECK_THROWS_AS(count_partitions(4, 5, PartitionClass::All), ArgumentError);
}

TEST_CASE("coarsen merges exactly two blocks") {
    auto res = coarsen(Partition::finest(3), PartitionClass::All);
    CHECK(res.size() == 3);
    std::set<std::string> got;
    for (const auto& p : res) got.insert(to_string(p));
    CHECK(got == std::set<std::string>{"1,2|3", "1,3|2", "1|2,3"});

    // all C(4,2) singleton merges stay non-crossing
    CHECK(coarsen(Partition::finest(4), PartitionClass::NonCrossing).size() == 6);

    CHECK_THROWS_AS(coarsen(Partition::coarsest(4), PartitionClass::All), NoCoarseningError);
}

TEST_CASE("coarsen filters by the class predicate") {
    Partition p({{1, 3}, {2}, {4}}, 4);
    for (auto c : {PartitionClass::NonCrossing, PartitionClass::NonNesting}) {
        auto res = coarsen(p, c);
        // oracle: try all three merges by hand, keep those passing is_in_class
        std::set<std::string> expected;
        std::vector<Partition> merges = {Partition({{1, 2, 3}, {4}}, 4),
                                         Partition({{1, 3, 4}, {2}}, 4),
                                         Partition({{1, 3}, {2, 4}}, 4)};
        for (const auto& m : merges)
            if (is_in_class(m, c)) expected.insert(to_string(m));
        std::set<std::string> got;
        for (const auto& m : res) {
            CHECK(m.block_count() == 2);
            CHECK(refines(p, m));
            CHECK(is_in_class(m, c));
            got.insert(to_string(m));
        }
        CHECK(got == expected);
    }
}

TEST_CASE("coarsen properties over enumerated partitions") {
    for (int d = 2; d <= 6; ++d) {
        for (auto c : {PartitionClass::All, PartitionClass::NonCrossing,
                       PartitionClass::NonNesting, PartitionClass::Interval}) {
            for (const auto& p : enumerate_partitions(d, c, d)) {
                if (p.block_count() < 2) continue;
                std::vector<Partition> res;
                try {
                    res = coarsen(p, c);
                } catch (const NoCoarseningError&) {
                    // Only non-nesting partitions may dead-end: NN is not
                    // closed under single merges (no lattice structure).
                    CHECK(c == PartitionClass::NonNesting);
                    continue;
                }
                CHECK(res.size() <= static_cast<size_t>(d) * static_cast<size_t>(d));
                std::set<std::string> seen;
                for (const auto& q : res) {
                    CHECK(q.block_count() == p.block_count() - 1);
                    CHECK(refines(p, q));
                    CHECK(is_in_class(q, c));
                    CHECK(seen.insert(to_string(q)).second);
                }
            }
        }
    }
}

TEST_CASE("non-nesting merge dead end exists and is surfaced") {
    // every pairwise merge of 1,4|2,5|3,6 creates a nesting
    Partition p({{1, 4}, {2, 5}, {3, 6}}, 6);
    REQUIRE(is_in_class(p, PartitionClass::NonNesting));
    CHECK_THROWS_AS(coarsen(p, PartitionClass::NonNesting), NoCoarseningError);
    // but the crossing class accepts all three merges
    CHECK(coarsen(p, PartitionClass::All).size() == 3);
}

TEST_CASE("refines") {
    CHECK(refines(Partition::finest(3), Partition({{1, 2}, {3}}, 3)));
    CHECK_FALSE(refines(Partition({{1, 2}, {3}}, 3), Partition({{1, 3}, {2}}, 3)));
    Partition p({{1, 2}, {3, 4}}, 4);
    CHECK(refines(p, p));
    CHECK_THROWS_AS(refines(Partition::finest(3), Partition::finest(4)), DimensionMismatch);
}

TEST_CASE("interval support map and its inverse") {
    CHECK(interval_support_map(Partition({{1, 2}, {3}}, 3)) == std::vector<int>{2});
    CHECK(interval_support_map(Partition::coarsest(5)).empty());
    CHECK(support_to_interval({1, 2}, 3) == Partition::finest(3));
    CHECK_THROWS_AS(interval_support_map(Partition({{1, 3}, {2}}, 3)), NotIntervalError);
    CHECK_THROWS_AS(support_to_interval({3}, 3), ArgumentError);

    // round trip on every interval partition up to d = 10
    for (int d = 1; d <= 10; ++d) {
        for (const auto& p : enumerate_partitions(d, PartitionClass::Interval, d)) {
            auto s = interval_support_map(p);
            CHECK(support_to_interval(s, d) == p);
        }
    }
}

TEST_CASE("interval implies non-crossing and non-nesting (d <= 9)") {
    for (int d = 1; d <= 9; ++d) {
        for (const auto& p : enumerate_partitions(d, PartitionClass::Interval, d)) {
            CHECK(is_in_class(p, PartitionClass::NonCrossing));
            CHECK(is_in_class(p, PartitionClass::NonNesting));
        }
    }
}

TEST_CASE("stabilizer sampling") {
    Rng rng(42);

    // finest: always the identity
    for (int rep = 0; rep < 20; ++rep)
        CHECK(sample_stabilizer_permutation(Partition::finest(5), rng).is_identity());

    // permutations fix blocks setwise
    Partition p({{1, 3, 5}, {2, 4}}, 5);
    for (int rep = 0; rep < 200; ++rep) {
        auto g = sample_stabilizer_permutation(p, rng);
        for (int e = 1; e <= 5; ++e)
            CHECK(p.block_of(g.image[static_cast<size_t>(e - 1)]) == p.block_of(e));
    }

    // {1,2}|{3}: id and swap each with probability 1/2 (binomial bound)
    Partition two({{1, 2}, {3}}, 3);
    int swaps = 0;
    const int n = 4000;
    for (int rep = 0; rep < n; ++rep)
        if (!sample_stabilizer_permutation(two, rng).is_identity()) ++swaps;
    CHECK(swaps > n / 2 - 200);  // ~6.3 sigma
    CHECK(swaps < n / 2 + 200);

    // coarsest of {1..3}: all 6 permutations roughly uniform (chi-square,
    // 5 dof, 99.9% quantile ~ 20.5)
    std::map<std::vector<int>, int> counts;
    const int m = 6000;
    for (int rep = 0; rep < m; ++rep)
        ++counts[sample_stabilizer_permutation(Partition::coarsest(3), rng).image];
    CHECK(counts.size() == 6);
    double chi2 = 0;
    for (const auto& [img, cnt] : counts) {
        const double expect = m / 6.0;
        chi2 += (cnt - expect) * (cnt - expect) / expect;
    }
    CHECK(chi2 < 20.5);
}

TEST_CASE("partition text round trip") {
    for (const char* text : {"1,3|2|4", "1|2|3", "1,2,3", "1,2|3,4|5"}) {
        Partition p = parse_partition(text);
        CHECK(to_string(p) == text);
    }
    CHECK(to_string(parse_partition(" 3 ,1 | 2 ")) == "1,3|2");
    CHECK_THROWS_AS(parse_partition(""), ArgumentError);
    CHECK_THROWS_AS(parse_partition("1,x|2"), ArgumentError);
    CHECK_THROWS_AS(parse_partition("1|1,2"), OverlapError);
    CHECK_THROWS_AS(parse_partition("1|3"), CoverageError);
}
