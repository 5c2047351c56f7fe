#pragma once

// Mutable adjacency structure used while wiring topologies. Not part of the
// public interface.

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "jellynet/rng.hpp"
#include "jellynet/topology.hpp"

namespace jellynet::detail {

class LinkGraph {
public:
    explicit LinkGraph(SwitchId n) : adj_(static_cast<std::size_t>(n)) {}
    explicit LinkGraph(const Topology& t);

    SwitchId size() const { return static_cast<SwitchId>(adj_.size()); }
    SwitchId add_switch();

    bool adjacent(SwitchId a, SwitchId b) const;
    int degree(SwitchId s) const { return static_cast<int>(adj_[static_cast<std::size_t>(s)].size()); }

    void add(SwitchId a, SwitchId b);
    void remove(SwitchId a, SwitchId b);
    void remove_at(std::size_t index);

    std::size_t link_count() const { return links_.size(); }
    const Link& link(std::size_t index) const { return links_[index]; }
    const std::vector<Link>& links() const { return links_; }

    bool connected() const;

private:
    static std::uint64_t key(Link l) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(l.a)) << 32) |
               static_cast<std::uint32_t>(l.b);
    }

    std::vector<std::vector<SwitchId>> adj_;
    std::vector<Link> links_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Whether a new link between two switches is allowed (beyond the
/// no-self-loop / no-parallel-link rules, which are always enforced).
using PairFilter = std::function<bool(SwitchId, SwitchId)>;

/// Fills free network ports by repeatedly joining uniform-random pairs of
/// switches that still have free ports and are not yet adjacent. Once no such
/// pair is left, ports are absorbed by link swaps: an existing link (x,y) is
/// removed and (p,x),(q,y) are added, where p and q hold the free ports
/// (p == q when one switch holds two or more). Stops when at most one free
/// port remains. `free_ports` is updated in place.
///
/// Returns false if `swap_budget` failed swap attempts are exhausted.
bool fill_free_ports(LinkGraph& g, std::vector<int>& free_ports, Rng& rng, const PairFilter& can_pair,
                     const PairFilter& can_break, std::size_t swap_budget);

/// Swap stage only: absorbs leftover free ports through link swaps.
bool absorb_free_ports(LinkGraph& g, std::vector<int>& free_ports, Rng& rng, const PairFilter& can_pair,
                       const PairFilter& can_break, std::size_t swap_budget);

}  // namespace jellynet::detail
