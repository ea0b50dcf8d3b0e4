#include "lamperti/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace lamperti {

namespace {

// renumber an arbitrary labeling into the restricted growth form
std::vector<std::uint32_t> canonicalize(const std::vector<std::uint32_t>& raw,
                                        std::size_t& num_blocks_out) {
    std::vector<std::uint32_t> out(raw.size());
    std::vector<std::uint32_t> seen;  // raw label -> canonical index by first appearance
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto it = std::find(seen.begin(), seen.end(), raw[i]);
        if (it == seen.end()) {
            out[i] = static_cast<std::uint32_t>(seen.size());
            seen.push_back(raw[i]);
        } else {
            out[i] = static_cast<std::uint32_t>(it - seen.begin());
        }
    }
    num_blocks_out = seen.size();
    return out;
}

} // namespace

Partition::Partition(std::size_t p) {
    if (p == 0) throw std::invalid_argument("Partition: p must be positive");
    block_of_.resize(p);
    for (std::size_t i = 0; i < p; ++i) block_of_[i] = static_cast<std::uint32_t>(i);
    num_blocks_ = p;
}

Partition::Partition(std::vector<std::uint32_t> block_of) {
    if (block_of.empty()) throw std::invalid_argument("Partition: empty labeling");
    block_of_ = canonicalize(block_of, num_blocks_);
}

Partition Partition::one_block(std::size_t p) {
    return Partition(std::vector<std::uint32_t>(p, 0));
}

Partition Partition::from_blocks(std::size_t p,
                                 const std::vector<std::vector<std::uint32_t>>& blocks) {
    std::vector<std::uint32_t> raw(p, UINT32_MAX);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::uint32_t e : blocks[b]) {
            if (e < 1 || e > p) throw std::invalid_argument("from_blocks: element out of range");
            if (raw[e - 1] != UINT32_MAX) throw std::invalid_argument("from_blocks: duplicate element");
            raw[e - 1] = static_cast<std::uint32_t>(b);
        }
    for (std::uint32_t v : raw)
        if (v == UINT32_MAX) throw std::invalid_argument("from_blocks: element missing");
    return Partition(std::move(raw));
}

std::vector<std::vector<std::uint32_t>> Partition::blocks() const {
    std::vector<std::vector<std::uint32_t>> out(num_blocks_);
    for (std::size_t i = 0; i < block_of_.size(); ++i)
        out[block_of_[i]].push_back(static_cast<std::uint32_t>(i));
    return out;
}

Partition Partition::coagulate(const std::vector<std::uint32_t>& block_indices) const {
    for (std::uint32_t b : block_indices)
        if (b >= num_blocks_) throw std::out_of_range("coagulate: block index out of range");
    if (block_indices.size() < 2) return *this;
    std::uint32_t target = *std::min_element(block_indices.begin(), block_indices.end());
    std::vector<std::uint32_t> raw = block_of_;
    for (auto& v : raw)
        if (std::find(block_indices.begin(), block_indices.end(), v) != block_indices.end())
            v = target;
    return Partition(std::move(raw));
}

Partition Partition::restrict_to(std::size_t m) const {
    if (m == 0 || m > block_of_.size()) throw std::invalid_argument("restrict_to: bad depth");
    // a canonical prefix is canonical
    return Partition(std::vector<std::uint32_t>(block_of_.begin(), block_of_.begin() + m));
}

double partition_distance(const Partition& a, const Partition& b) {
    std::size_t p = std::min(a.num_elements(), b.num_elements());
    std::size_t agree = 0;
    while (agree < p && a.block_of(agree) == b.block_of(agree)) ++agree;
    if (agree == p) return 0.0;  // equal to full tracked depth
    if (agree == 0) return 1.0;  // cannot disagree at level 1 for canonical labelings
    return 1.0 / static_cast<double>(agree);
}

} // namespace lamperti
