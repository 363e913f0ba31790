#include "symban/partition.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

namespace symban {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    return __builtin_add_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (int i = 0; i < k; ++i) {
        acc = acc * static_cast<unsigned>(n - i);
        acc /= static_cast<unsigned>(i + 1);  // exact at every step
        if (acc > kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t stirling2(int d, int k) {
    // S(n,j) = j*S(n-1,j) + S(n-1,j-1), rolling row.
    std::vector<std::uint64_t> row(static_cast<size_t>(k) + 1, 0);
    row[0] = 1;  // S(0,0)
    for (int n = 1; n <= d; ++n) {
        for (int j = std::min(n, k); j >= 1; --j) {
            row[j] = sat_add(sat_mul(static_cast<std::uint64_t>(j), row[j]), row[j - 1]);
        }
        row[0] = 0;
    }
    return row[k];
}

std::uint64_t narayana(int d, int k) {
    const std::uint64_t b1 = binomial(d, k);
    const std::uint64_t b2 = binomial(d, k - 1);
    if (b1 == kSaturated || b2 == kSaturated) return kSaturated;
    const unsigned __int128 prod =
        static_cast<unsigned __int128>(b1) * static_cast<unsigned __int128>(b2);
    const unsigned __int128 res = prod / static_cast<unsigned>(d);  // exact
    return res > kSaturated ? kSaturated : static_cast<std::uint64_t>(res);
}

bool block_is_interval(const std::vector<int>& b) {
    return b.back() - b.front() + 1 == static_cast<int>(b.size());
}

// Crossing pattern i<p<j<q across two sorted blocks: present iff the
// merged label sequence has at least 4 runs (ABAB or BABA).
bool blocks_cross(const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0, j = 0;
    int runs = 0;
    int last = -1;  // 0 = from a, 1 = from b
    while (i < a.size() || j < b.size()) {
        int take;
        if (i == a.size()) {
            take = 1;
        } else if (j == b.size()) {
            take = 0;
        } else {
            take = a[i] < b[j] ? 0 : 1;
        }
        if (take != last) {
            ++runs;
            if (runs >= 4) return true;
            last = take;
        }
        take == 0 ? ++i : ++j;
    }
    return false;
}

// Nesting pattern i<p<q<j on the arc diagram: arcs join consecutive
// elements of a block, and two blocks nest iff some arc of one lies
// strictly inside an arc of the other. (The arc convention is what makes
// non-nesting partitions equinumerous with non-crossing ones.)
bool blocks_nest(const std::vector<int>& a, const std::vector<int>& b) {
    auto arc_inside = [](const std::vector<int>& outer, const std::vector<int>& inner) {
        for (size_t i = 0; i + 1 < inner.size(); ++i) {
            const int p = inner[i], q = inner[i + 1];
            // outer arc spanning p: predecessor of p and its successor
            const auto it = std::lower_bound(outer.begin(), outer.end(), p);
            if (it == outer.begin() || it == outer.end()) continue;
            if (*it > q) return true;  // pred < p <= q < succ
        }
        return false;
    };
    return arc_inside(a, b) || arc_inside(b, a);
}

bool pair_ok(const std::vector<int>& a, const std::vector<int>& b, PartitionClass c) {
    switch (c) {
        case PartitionClass::NonCrossing:
            return !blocks_cross(a, b);
        case PartitionClass::NonNesting:
            return !blocks_nest(a, b);
        default:
            return true;
    }
}

}  // namespace

Partition::Partition(std::vector<std::vector<int>> raw_blocks, int d) : d_(d) {
    if (d < 1) throw ArgumentError("partition: d must be positive");
    if (raw_blocks.empty()) throw CoverageError("partition: no blocks");
    for (auto& b : raw_blocks) {
        if (b.empty()) throw ArgumentError("partition: empty block");
        std::sort(b.begin(), b.end());
    }
    std::sort(raw_blocks.begin(), raw_blocks.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });

    block_of_.assign(static_cast<size_t>(d), -1);
    int covered = 0;
    for (size_t bi = 0; bi < raw_blocks.size(); ++bi) {
        int prev = 0;
        for (int e : raw_blocks[bi]) {
            if (e < 1 || e > d)
                throw CoverageError("partition: element " + std::to_string(e) +
                                    " outside {1.." + std::to_string(d) + "}");
            if (e == prev)
                throw OverlapError("partition: element " + std::to_string(e) + " repeated");
            if (block_of_[e - 1] != -1)
                throw OverlapError("partition: element " + std::to_string(e) +
                                   " in two blocks");
            block_of_[e - 1] = static_cast<int>(bi);
            prev = e;
            ++covered;
        }
    }
    if (covered != d) throw CoverageError("partition: union is not {1..d}");
    blocks_ = std::move(raw_blocks);
}

Partition Partition::finest(int d) {
    std::vector<std::vector<int>> blocks(static_cast<size_t>(d));
    for (int e = 1; e <= d; ++e) blocks[static_cast<size_t>(e - 1)] = {e};
    return Partition(std::move(blocks), d);
}

Partition Partition::coarsest(int d) {
    std::vector<int> all(static_cast<size_t>(d));
    std::iota(all.begin(), all.end(), 1);
    return Partition({std::move(all)}, d);
}

bool Partition::operator<(const Partition& other) const {
    if (d_ != other.d_) return d_ < other.d_;
    return blocks_ < other.blocks_;
}

const char* to_string(PartitionClass c) {
    switch (c) {
        case PartitionClass::All: return "all";
        case PartitionClass::NonCrossing: return "non-crossing";
        case PartitionClass::NonNesting: return "non-nesting";
        case PartitionClass::Interval: return "interval";
    }
    return "?";
}

PartitionClass partition_class_from_string(std::string_view name) {
    if (name == "all") return PartitionClass::All;
    if (name == "non-crossing" || name == "nc") return PartitionClass::NonCrossing;
    if (name == "non-nesting" || name == "nn") return PartitionClass::NonNesting;
    if (name == "interval") return PartitionClass::Interval;
    throw ArgumentError("unknown partition class: " + std::string(name));
}

bool Permutation::is_identity() const {
    for (int i = 0; i < d; ++i)
        if (image[static_cast<size_t>(i)] != i + 1) return false;
    return true;
}

std::vector<double> Permutation::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != d) throw DimensionMismatch("permutation apply");
    std::vector<double> y(x.size());
    for (int i = 0; i < d; ++i)
        y[static_cast<size_t>(i)] = x[static_cast<size_t>(image[static_cast<size_t>(i)] - 1)];
    return y;
}

bool is_in_class(const Partition& p, PartitionClass c) {
    const auto& blocks = p.blocks();
    switch (c) {
        case PartitionClass::All:
            return true;
        case PartitionClass::Interval:
            return std::all_of(blocks.begin(), blocks.end(), block_is_interval);
        case PartitionClass::NonCrossing:
        case PartitionClass::NonNesting:
            for (size_t i = 0; i < blocks.size(); ++i)
                for (size_t j = i + 1; j < blocks.size(); ++j)
                    if (!pair_ok(blocks[i], blocks[j], c)) return false;
            return true;
    }
    return true;
}

namespace {

struct Enumerator {
    int d;
    PartitionClass cls;
    int max_blocks;
    std::vector<std::vector<int>> current;
    std::vector<Partition> out;

    // Called with e already appended to block bi; appending can only
    // introduce violations between block bi and the others.
    bool still_feasible(size_t bi) const {
        if (cls == PartitionClass::All) return true;
        if (cls == PartitionClass::Interval) return block_is_interval(current[bi]);
        for (size_t j = 0; j < current.size(); ++j) {
            if (j == bi) continue;
            if (!pair_ok(current[bi], current[j], cls)) return false;
        }
        return true;
    }

    void rec(int e) {
        if (e > d) {
            out.emplace_back(current, d);
            return;
        }
        for (size_t bi = 0; bi < current.size(); ++bi) {
            current[bi].push_back(e);
            if (still_feasible(bi)) rec(e + 1);
            current[bi].pop_back();
        }
        if (static_cast<int>(current.size()) < max_blocks) {
            current.push_back({e});
            rec(e + 1);
            current.pop_back();
        }
    }
};

}  // namespace

std::vector<Partition> enumerate_partitions(int d, PartitionClass c, int max_blocks,
                                            std::uint64_t cap) {
    if (d < 1) throw ArgumentError("enumerate_partitions: d must be positive");
    if (max_blocks < 1 || max_blocks > d)
        throw ArgumentError("enumerate_partitions: max_blocks out of [1, d]");
    std::uint64_t total = 0;
    for (int k = 1; k <= max_blocks; ++k) total = sat_add(total, count_partitions(d, k, c));
    if (total > cap)
        throw TooLargeError("enumerate_partitions: class count " +
                            (total == kSaturated ? std::string(">= 2^64")
                                                 : std::to_string(total)) +
                            " exceeds cap " + std::to_string(cap));
    Enumerator en{d, c, max_blocks, {}, {}};
    en.out.reserve(static_cast<size_t>(total));
    en.rec(1);
    return std::move(en.out);
}

std::uint64_t count_partitions(int d, int k, PartitionClass c) {
    if (d < 1) throw ArgumentError("count_partitions: d must be positive");
    if (k < 1 || k > d) throw ArgumentError("count_partitions: k out of [1, d]");
    switch (c) {
        case PartitionClass::All: return stirling2(d, k);
        case PartitionClass::NonCrossing:
        case PartitionClass::NonNesting:
            // equal cardinalities: non-nesting is in bijection with
            // non-crossing, both counted by the Narayana number
            return narayana(d, k);
        case PartitionClass::Interval: return binomial(d - 1, k - 1);
    }
    return 0;
}

std::vector<std::pair<int, int>> coarsen_pairs(const Partition& p, PartitionClass c) {
    const int k = p.block_count();
    if (k < 2) throw NoCoarseningError("coarsen: partition already coarsest");
    const auto& blocks = p.blocks();
    std::vector<std::pair<int, int>> out;
    std::vector<int> merged;
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            merged.clear();
            std::merge(blocks[a].begin(), blocks[a].end(), blocks[b].begin(), blocks[b].end(),
                       std::back_inserter(merged));
            bool ok = true;
            if (c == PartitionClass::Interval) {
                ok = block_is_interval(merged);
            } else if (c != PartitionClass::All) {
                // merging a and b can only violate patterns between the
                // merged block and the untouched ones
                for (int j = 0; j < k && ok; ++j)
                    if (j != a && j != b) ok = pair_ok(merged, blocks[j], c);
            }
            if (ok) out.emplace_back(a, b);
        }
    }
    if (out.empty()) throw NoCoarseningError("coarsen: no merge stays in class");
    return out;
}

Partition merge_blocks(const Partition& p, int a, int b) {
    const auto& blocks = p.blocks();
    if (a == b || a < 0 || b < 0 || a >= p.block_count() || b >= p.block_count())
        throw ArgumentError("merge_blocks: bad block ids");
    std::vector<std::vector<int>> nb;
    nb.reserve(static_cast<size_t>(p.block_count() - 1));
    std::vector<int> merged;
    std::merge(blocks[static_cast<size_t>(a)].begin(), blocks[static_cast<size_t>(a)].end(),
               blocks[static_cast<size_t>(b)].begin(), blocks[static_cast<size_t>(b)].end(),
               std::back_inserter(merged));
    nb.push_back(std::move(merged));
    for (int j = 0; j < p.block_count(); ++j)
        if (j != a && j != b) nb.push_back(blocks[static_cast<size_t>(j)]);
    return Partition(std::move(nb), p.ground_set_size());
}

std::vector<Partition> coarsen(const Partition& p, PartitionClass c) {
    std::vector<Partition> out;
    for (auto [a, b] : coarsen_pairs(p, c)) out.push_back(merge_blocks(p, a, b));
    return out;
}

bool refines(const Partition& p, const Partition& q) {
    if (p.ground_set_size() != q.ground_set_size())
        throw DimensionMismatch("refines: ground sets differ");
    for (const auto& b : p.blocks()) {
        const int target = q.block_of(b.front());
        for (int e : b)
            if (q.block_of(e) != target) return false;
    }
    return true;
}

std::vector<int> interval_support_map(const Partition& p) {
    if (!is_in_class(p, PartitionClass::Interval))
        throw NotIntervalError("interval_support_map: not an interval partition");
    std::vector<int> support;
    for (int i = 1; i < p.ground_set_size(); ++i)
        if (p.block_of(i) != p.block_of(i + 1)) support.push_back(i);
    return support;
}

Partition support_to_interval(const std::vector<int>& support, int d) {
    std::vector<bool> boundary(static_cast<size_t>(d), false);
    for (int s : support) {
        if (s < 1 || s >= d)
            throw ArgumentError("support_to_interval: boundary " + std::to_string(s) +
                                " outside {1.." + std::to_string(d - 1) + "}");
        boundary[static_cast<size_t>(s - 1)] = true;
    }
    std::vector<std::vector<int>> blocks;
    std::vector<int> run;
    for (int e = 1; e <= d; ++e) {
        run.push_back(e);
        if (e == d || boundary[static_cast<size_t>(e - 1)]) {
            blocks.push_back(run);
            run.clear();
        }
    }
    return Partition(std::move(blocks), d);
}

Permutation sample_stabilizer_permutation(const Partition& p, Rng& rng) {
    const int d = p.ground_set_size();
    Permutation g;
    g.d = d;
    g.image.resize(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) g.image[static_cast<size_t>(i)] = i + 1;
    for (const auto& block : p.blocks()) {
        // Fisher-Yates inside the block.
        std::vector<int> shuffled = block;
        for (size_t j = shuffled.size(); j > 1; --j)
            std::swap(shuffled[j - 1], shuffled[rng.uniform_int(j)]);
        for (size_t i = 0; i < block.size(); ++i)
            g.image[static_cast<size_t>(block[i] - 1)] = shuffled[i];
    }
    return g;
}

std::string to_string(const Partition& p) {
    std::string s;
    for (size_t bi = 0; bi < p.blocks().size(); ++bi) {
        if (bi) s += '|';
        const auto& b = p.blocks()[bi];
        for (size_t i = 0; i < b.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(b[i]);
        }
    }
    return s;
}

Partition parse_partition(std::string_view text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) cleaned += ch;
    if (cleaned.empty()) throw ArgumentError("parse_partition: empty text");

    std::vector<std::vector<int>> blocks;
    std::vector<int> block;
    int d = 0;
    size_t pos = 0;
    while (pos <= cleaned.size()) {
        const size_t next = cleaned.find_first_of(",|", pos);
        const std::string_view tok{cleaned.data() + pos,
                                   (next == std::string::npos ? cleaned.size() : next) - pos};
        int value = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ArgumentError("parse_partition: bad element '" + std::string(tok) + "'");
        block.push_back(value);
        d = std::max(d, value);
        if (next == std::string::npos) {
            blocks.push_back(std::move(block));
            break;
        }
        if (cleaned[next] == '|') {
            blocks.push_back(std::move(block));
            block = {};
        }
        pos = next + 1;
    }
    return Partition(std::move(blocks), d);
}

}  // namespace symban
