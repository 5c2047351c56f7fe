#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jellynet/topology.hpp"

/// Path computation for routing analysis: equal-cost shortest paths and
/// k-shortest loop-free paths.
namespace jellynet::route {

using Path = std::vector<SwitchId>;

enum class Mode { ecmp, ksp };

std::string_view to_string(Mode mode);

/// Paths for one switch pair, ordered. ECMP paths all have the minimal hop
/// count; k-shortest paths are sorted by (hop count, switch-id sequence).
struct PathSet {
    SwitchId src = 0;
    SwitchId dst = 0;
    Mode mode = Mode::ecmp;
    int limit = 0;
    std::vector<Path> paths;
};

/// Up to `limit` shortest paths, the lexicographically smallest switch-id
/// sequences first. Throws RuntimeError when dst is unreachable.
PathSet ecmp_paths(const Topology& t, SwitchId src, SwitchId dst, int limit);

/// Yen's loopless k-shortest paths with unit link weights; ties are broken
/// by switch-id sequence. Returns fewer than k paths if fewer exist.
PathSet k_shortest_paths(const Topology& t, SwitchId src, SwitchId dst, int k);

PathSet paths_for(const Topology& t, SwitchId src, SwitchId dst, Mode mode, int limit);

/// True if `p` starts at src, ends at dst, repeats no switch and follows
/// existing links.
bool valid_path(const Topology& t, const Path& p, SwitchId src, SwitchId dst);

/// Number of paths crossing every directed link, indexed by
/// Topology::directed_link_id. Each flow contributes its whole path set;
/// links on no path keep count 0.
std::vector<std::uint64_t> link_path_counts(const Topology& t,
                                            std::span<const std::pair<SwitchId, SwitchId>> flows, Mode mode,
                                            int limit);

/// Fraction of directed links whose count is at most `threshold`.
double fraction_at_most(std::span<const std::uint64_t> counts, std::uint64_t threshold);

/// CSV `rank,count` with links sorted by count ascending, header included.
std::string rank_csv(std::span<const std::uint64_t> counts);

}  // namespace jellynet::route
