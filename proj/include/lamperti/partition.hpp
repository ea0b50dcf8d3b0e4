#ifndef LAMPERTI_PARTITION_HPP
#define LAMPERTI_PARTITION_HPP

#include <cstdint>
#include <vector>

namespace lamperti {

// Partition of {1,...,p}. block_of[i] (0-based element index) is the 0-based
// index of the block containing element i+1, with blocks numbered in order of
// their least elements. Canonical form: block_of is a "restricted growth
// string": block_of[0] = 0 and block_of[i] <= 1 + max(block_of[0..i-1]).
class Partition {
public:
    explicit Partition(std::size_t p);                       // singletons
    explicit Partition(std::vector<std::uint32_t> block_of); // canonicalized

    static Partition one_block(std::size_t p);
    static Partition from_blocks(std::size_t p,
                                 const std::vector<std::vector<std::uint32_t>>& blocks);

    std::size_t num_elements() const { return block_of_.size(); }
    std::size_t num_blocks() const { return num_blocks_; }
    std::uint32_t block_of(std::size_t element_index) const { return block_of_[element_index]; }
    const std::vector<std::uint32_t>& labels() const { return block_of_; }

    // elements (0-based) of each block, blocks ordered by least element
    std::vector<std::vector<std::uint32_t>> blocks() const;

    // coagulate the blocks with the given indices into one; the empty set and
    // singleton sets leave the partition unchanged
    Partition coagulate(const std::vector<std::uint32_t>& block_indices) const;

    Partition restrict_to(std::size_t m) const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.block_of_ == b.block_of_;
    }

private:
    std::vector<std::uint32_t> block_of_;
    std::size_t num_blocks_ = 0;
};

// 1/m where m is the deepest level of agreement; 0 when the partitions agree
// at full tracked depth.
double partition_distance(const Partition& a, const Partition& b);

} // namespace lamperti

#endif
