#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "jellynet/topology.hpp"

/// Measured graph statistics and analytic capacity/diameter bounds.
namespace jellynet::metrics {

enum class Level { switch_level, server_level };

/// Histogram of shortest-path hop counts over ordered pairs.
struct PathLengthDistribution {
    Level level = Level::switch_level;
    std::map<int, std::uint64_t> histogram;
    double mean = 0.0;
    int diameter = 0;
    std::uint64_t pair_count = 0;

    /// Fraction of pairs strictly shorter than `hops`.
    double fraction_below(int hops) const;
};

/// All-pairs BFS. Switch level counts ordered switch pairs. Server level
/// counts ordered server pairs: dist(a,b)+2 across switches, 2 within a
/// switch, a server paired with itself excluded. Throws RuntimeError on a
/// disconnected topology.
PathLengthDistribution path_lengths(const Topology& t, Level level);

/// Hop distances from `source` to every switch (-1 when unreachable).
std::vector<int> bfs_distances(const Topology& t, SwitchId source);

/// Lower bound on the edges leaving any half of the switches of an
/// r-regular random graph: N (r/4 - sqrt(r ln 2)/2). Not clamped.
double bisection_lower_bound(SwitchId switches, int degree);

/// Bound above divided by the server line rate of one half, N(k-r)/2.
double normalized_bisection_lower_bound(SwitchId switches, int ports, int degree);

/// Switch-level diameter bound for almost every r-regular graph:
/// 1 + ceil(log_{r-1}((2+eps) r N ln N)). Requires r >= 3.
int diameter_upper_bound(SwitchId switches, int degree, double eps = 0.1);

/// Server-to-server form of the bound: two more hops.
inline int server_diameter_upper_bound(SwitchId switches, int degree, double eps = 0.1) {
    return diameter_upper_bound(switches, degree, eps) + 2;
}

struct FatTreeStats {
    std::int64_t servers = 0;
    std::int64_t switches = 0;
    std::int64_t switch_links = 0;
    std::int64_t bisection_links = 0;
    double local_fraction = 0.0;
};

/// Closed forms for a kp-port 3-level fat-tree.
FatTreeStats fat_tree_stats(int kp);

/// Fraction of switch-switch links whose endpoints share a container.
double local_fraction(const Topology& t, std::span<const int> container);

/// Number of edge-disjoint paths between two switches (unit-capacity
/// minimum cut).
int edge_connectivity(const Topology& t, SwitchId a, SwitchId b);

/// CSV `hops,pairs` rows for a distribution, header included.
std::string distribution_csv(const PathLengthDistribution& d);

}  // namespace jellynet::metrics
