#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "jellynet/topology.hpp"

namespace jellynet::flow {

/// Server-level permutation traffic: server i sends one unit to dst[i] and
/// every server receives exactly one unit. dst[i] != i.
struct TrafficMatrix {
    ServerId servers = 0;
    std::vector<ServerId> dst;
    std::uint64_t seed = 0;
};

/// Uniform random derangement of `servers` servers, by rejection sampling of
/// uniform permutations.
TrafficMatrix random_permutation(ServerId servers, std::uint64_t seed);

bool is_derangement(const TrafficMatrix& tm);

/// Inter-switch flows (src ToR, dst ToR), one per server flow; flows whose
/// endpoints share a switch are left out.
std::vector<std::pair<SwitchId, SwitchId>> switch_flows(const Topology& t, const TrafficMatrix& tm);

}  // namespace jellynet::flow
