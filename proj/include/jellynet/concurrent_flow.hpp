#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace jellynet::flow {

struct Arc {
    int from = 0;
    int to = 0;
    double capacity = 0.0;
};

struct Network {
    int nodes = 0;
    std::vector<Arc> arcs;
};

struct Commodity {
    int src = 0;
    int dst = 0;
    double demand = 0.0;
};

struct SolverOptions {
    /// Stop once the routed flow is within this relative gap of the best
    /// dual bound.
    double epsilon = 0.05;
    /// When set, stop as soon as lambda is proven >= threshold or the dual
    /// bound drops below it.
    std::optional<double> decision_threshold;
    /// Stop as soon as lambda reaches this value.
    double lambda_cap = std::numeric_limits<double>::infinity();
    std::size_t max_phases = 2'000'000;
    /// Keep per-source arc flows (used by conservation checks).
    bool record_source_flows = false;
};

struct ConcurrentFlow {
    /// Largest lambda such that lambda * demand is routed for every commodity
    /// within capacity, as achieved by `arc_flow`.
    double lambda = 0.0;
    /// Dual upper bound on the optimum.
    double upper_bound = std::numeric_limits<double>::infinity();
    std::vector<double> arc_flow;
    std::vector<int> sources;
    std::vector<std::vector<double>> source_arc_flow;
    std::size_t phases = 0;
    bool converged = false;
};

/// Maximum concurrent multicommodity flow over arbitrary paths
/// (Garg-Koenemann with Fleischer's phase structure). Commodities with zero
/// demand are ignored; an unreachable commodity gives lambda = 0.
ConcurrentFlow solve_concurrent_flow(const Network& net, std::span<const Commodity> commodities,
                                     const SolverOptions& options = {});

/// Same objective, but commodity i may only use the arc sequences in
/// paths[i]. Every listed path must lead from its commodity's source to its
/// sink.
ConcurrentFlow solve_path_flow(const Network& net, std::span<const Commodity> commodities,
                               std::span<const std::vector<std::vector<int>>> paths,
                               const SolverOptions& options = {});

}  // namespace jellynet::flow
