#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jellynet/concurrent_flow.hpp"
#include "jellynet/report.hpp"
#include "jellynet/route.hpp"
#include "jellynet/topology.hpp"
#include "jellynet/traffic.hpp"

namespace jellynet::flow {

/// Throughput of a permutation matrix on a topology. All links (switch and
/// server) have unit capacity in each direction and every server flow asks
/// for one unit.
struct FlowSolution {
    /// Concurrent throughput per server flow, in [0, 1]. Zero if any flow's
    /// endpoints are disconnected.
    double lambda = 0.0;
    /// Concurrent throughput of the switch fabric alone, before capping by
    /// the server links; infinite when no flow crosses the fabric.
    double network_lambda = 0.0;
    double upper_bound = 0.0;
    /// Indexed by source server.
    std::vector<double> per_flow;
    /// Indexed by directed link id.
    std::vector<double> link_util;
    double epsilon = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    double mean_flow() const;
    double min_flow() const;
};

/// Unit-capacity arc per directed link id, one node per switch.
Network switch_network(const Topology& t);

/// Commodities between switches, one unit per server flow crossing the
/// fabric, merged per switch pair.
std::vector<Commodity> switch_commodities(const Topology& t, const TrafficMatrix& tm);

FlowSolution max_concurrent_flow(const Topology& t, const TrafficMatrix& tm, double eps = 0.05);

/// Concurrent flow when each switch pair may only use its ECMP or k-shortest
/// path set.
FlowSolution restricted_flow(const Topology& t, const TrafficMatrix& tm, route::Mode mode, int limit,
                             double eps = 0.05);

/// True iff the solver certifies lambda >= 1 - eps. In the band where the
/// certificate cannot separate the two, falls back to the converged value.
bool supports_full_capacity(const Topology& t, const TrafficMatrix& tm, double eps = 0.05);

struct Probe {
    int servers = 0;
    bool full_capacity = false;
    bool confirmation = false;
};

struct FullCapacitySearch {
    int servers = 0;
    std::vector<Probe> probes;
};

struct FullCapacityOptions {
    int matrices_per_probe = 3;
    int confirmation_matrices = 10;
};

/// Largest server count an RRG of `switches` switches with `ports` ports can
/// host at full capacity. Servers are spread as evenly as possible and the
/// remaining ports form the random graph.
FullCapacitySearch max_servers_full_capacity(int switches, int ports, double eps, std::uint64_t seed,
                                             const FullCapacityOptions& options = {});

/// Switch specs for `servers` servers spread over `switches` switches, and
/// the matching network degrees (capped at switches - 1).
std::vector<SwitchSpec> spread_servers(int switches, int ports, int servers);
std::vector<int> network_degrees(std::span<const SwitchSpec> specs);

double jain_index(std::span<const double> values);

/// For each failure fraction and trial: fail links, draw a permutation and
/// solve. Trial t uses the same permutation and the same failure order at
/// every fraction, so the failed sets are nested.
ExperimentReport throughput_vs_failures(const Topology& t, std::span<const double> fractions, int trials,
                                        double eps, std::uint64_t seed);

}  // namespace jellynet::flow
