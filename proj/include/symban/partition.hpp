#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symban/errors.hpp"
#include "symban/rng.hpp"

namespace symban {

/// Set partition of {1..d} in canonical form: every block sorted
/// ascending, blocks ordered by their smallest element.
class Partition {
  public:
    // Canonicalizes and validates: blocks must be disjoint, nonempty and
    // cover {1..d} exactly. Throws OverlapError / CoverageError.
    Partition(std::vector<std::vector<int>> raw_blocks, int d);

    static Partition finest(int d);    // 1|2|...|d
    static Partition coarsest(int d);  // single block

    int ground_set_size() const { return d_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    // block id (0-based) of element e in {1..d}.
    int block_of(int e) const { return block_of_[e - 1]; }

    bool operator==(const Partition& other) const {
        return d_ == other.d_ && blocks_ == other.blocks_;
    }
    bool operator!=(const Partition& other) const { return !(*this == other); }

    // Total order used for deterministic tie-breaking: lexicographic on
    // the canonical block lists.
    bool operator<(const Partition& other) const;

  private:
    int d_;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

enum class PartitionClass { All, NonCrossing, NonNesting, Interval };

const char* to_string(PartitionClass c);
PartitionClass partition_class_from_string(std::string_view name);

/// Permutation of {1..d}; image[i] is the image of element i+1.
struct Permutation {
    int d = 0;
    std::vector<int> image;

    bool is_identity() const;
    // (g . x)[i] = x[g(i+1) - 1]: coordinate permutation action.
    std::vector<double> apply(const std::vector<double>& x) const;
};

// True iff p avoids the forbidden pattern of class c. Patterns live on
// the arc diagram (arcs join consecutive elements of a block): crossing
// is two arcs with i<p<j<q, nesting two arcs with i<p<q<j. For crossing
// the arc and element-pair readings coincide; for nesting only the arc
// reading keeps non-nesting partitions equinumerous with non-crossing
// ones. All always passes; Interval requires contiguous blocks.
bool is_in_class(const Partition& p, PartitionClass c);

// All canonical class-c partitions of {1..d} with at most max_blocks
// blocks, in deterministic (restricted-growth-string) order. Throws
// TooLargeError when the class count exceeds `cap`.
std::vector<Partition> enumerate_partitions(int d, PartitionClass c, int max_blocks,
                                            std::uint64_t cap = 10'000'000);

// Exact count of class-c partitions of {1..d} with exactly k blocks,
// saturating at UINT64_MAX on overflow. All: Stirling recurrence;
// NonCrossing / NonNesting: Narayana numbers; Interval: C(d-1, k-1).
std::uint64_t count_partitions(int d, int k, PartitionClass c);

// All one-step coarsenings of p (merge exactly two blocks) that stay in
// class c. Each result has block_count-1 blocks; duplicate-free and in a
// deterministic order. Throws NoCoarseningError when none exists.
std::vector<Partition> coarsen(const Partition& p, PartitionClass c);

// The (a, b) block-index pairs, a < b, whose merge stays in class c;
// same legality rule and order as coarsen. Throws NoCoarseningError.
std::vector<std::pair<int, int>> coarsen_pairs(const Partition& p, PartitionClass c);

// p with blocks a and b merged (block ids refer to canonical order).
Partition merge_blocks(const Partition& p, int a, int b);

// Refinement order: every block of p is contained in some block of q.
bool refines(const Partition& p, const Partition& q);

// Interval partition -> set of boundary positions i in {1..d-1} where
// elements i and i+1 fall in different blocks. Throws NotIntervalError.
std::vector<int> interval_support_map(const Partition& p);

// Inverse of interval_support_map.
Partition support_to_interval(const std::vector<int>& support, int d);

// Uniform random permutation fixing every block of p setwise (independent
// uniform shuffles inside each block).
Permutation sample_stabilizer_permutation(const Partition& p, Rng& rng);

// Text encoding: blocks separated by '|', elements comma-separated,
// e.g. "1,3|2|4". Whitespace is ignored on parse.
std::string to_string(const Partition& p);
Partition parse_partition(std::string_view text);

}  // namespace symban
