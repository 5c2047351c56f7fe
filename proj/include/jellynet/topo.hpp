#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jellynet/topology.hpp"

/// Topology construction: Jellyfish random graphs, 3-level fat-trees,
/// small-world lattices and 2-layer localized random graphs.
namespace jellynet::topo {

/// Bound on re-seeded construction attempts before giving up.
inline constexpr int kMaxConstructionRetries = 1000;

/// Jellyfish RRG(N, k, r): N switches with k ports each, r of them wired to
/// other switches and k - r to servers.
///
/// Random free-port pairs are joined until none can be; leftover ports are
/// absorbed by link swaps, so at most one switch ends with degree r - 1
/// (only when N*r is odd). Disconnected results are rebuilt from seed+1,
/// seed+2, ...; the number of retries is recorded as metadata `retries`.
Topology build_rrg(SwitchId switches, int ports, int degree, std::uint64_t seed);

/// Same construction with per-switch port budgets, servers and target
/// network degrees. Switches may carry unused ports.
Topology build_random_graph(std::vector<SwitchSpec> switches, std::span<const int> network_degree,
                            std::uint64_t seed, TopologyKind kind = TopologyKind::rrg);

/// Standard 3-level fat-tree from kp-port switches: kp pods of kp/2 edge
/// and kp/2 aggregation switches, (kp/2)^2 cores, kp/2 servers per edge
/// switch. Switch ids: pod p owns [p*kp, (p+1)*kp) with edge switches first;
/// cores follow at kp*kp.
Topology build_fat_tree(int kp);

/// Container id of every fat-tree switch: pod switches belong to their pod,
/// core c is placed in pod c mod kp.
std::vector<int> fat_tree_containers(int kp);

enum class Lattice { ring, torus2d, hex3d };

/// Small-world topology: a lattice (ring: 2 neighbors, 2D torus: 4, axial
/// 3D torus: 6) plus `degree - lattice degree` random links per switch whose
/// far end is drawn with probability proportional to 1/(lattice distance).
Topology build_swdc(Lattice lattice, SwitchId switches, int degree, int servers_per_switch,
                    std::uint64_t seed);

/// Torus dimensions used for a hex3d lattice of `switches` nodes, or an
/// empty vector if no factorization with all sides >= 3 exists.
std::vector<int> hex3d_dimensions(SwitchId switches);

/// Lattice distance between two switches of a small-world lattice.
int lattice_distance(Lattice lattice, std::span<const int> dims, SwitchId a, SwitchId b);

/// Two-layer random graph: C containers of M switches; inside each container
/// an RRG of degree r_local, and a free-port matching of degree r_global
/// whose links always join different containers. Switch id = c*M + i.
Topology build_layered_rrg(int containers, int per_container, int ports, int r_local, int r_global,
                           int servers_per_switch, std::uint64_t seed);

/// Container of every switch in a layered topology (read from metadata),
/// fat-tree (pods) or, for other kinds, a single container.
std::vector<int> container_assignment(const Topology& t);

}  // namespace jellynet::topo
