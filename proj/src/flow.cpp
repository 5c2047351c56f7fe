#include "jellynet/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "jellynet/expand.hpp"
#include "jellynet/rng.hpp"
#include "jellynet/topo.hpp"

namespace jellynet::flow {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw InvalidArgument("eps must lie in (0, 0.5]");
}

void check_traffic(const Topology& t, const TrafficMatrix& tm) {
    if (tm.servers != t.server_count()) throw InvalidArgument("traffic matrix does not match the server count");
    if (!is_derangement(tm)) throw InvalidArgument("traffic matrix is not a derangement");
}

std::vector<int> components(const Topology& t) {
    std::vector<int> comp(static_cast<std::size_t>(t.switch_count()), -1);
    int next = 0;
    std::vector<SwitchId> queue;
    for (SwitchId s = 0; s < t.switch_count(); ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        queue.assign(1, s);
        comp[static_cast<std::size_t>(s)] = next;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (auto v : t.neighbors(queue[h]))
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = next;
                    queue.push_back(v);
                }
        ++next;
    }
    return comp;
}

// Commodities whose endpoints are connected, plus whether any were dropped.
struct Split {
    std::vector<Commodity> reachable;
    bool dropped = false;
};

Split split_reachable(const Topology& t, const TrafficMatrix& tm) {
    const auto comp = components(t);
    Split out;
    for (const auto& c : switch_commodities(t, tm)) {
        if (comp[static_cast<std::size_t>(c.src)] == comp[static_cast<std::size_t>(c.dst)])
            out.reachable.push_back(c);
        else
            out.dropped = true;
    }
    return out;
}

// Assembles the topology-level answer from a fabric solve over the
// reachable commodities.
FlowSolution finish(const Topology& t, const TrafficMatrix& tm, const ConcurrentFlow& fabric, bool dropped,
                    double eps) {
    FlowSolution out;
    out.network_lambda = fabric.lambda;
    const double capped = std::min(1.0, fabric.lambda);
    out.lambda = dropped ? 0.0 : capped;
    out.upper_bound = dropped ? 0.0 : std::min(1.0, fabric.upper_bound);
    out.epsilon = eps;
    out.iterations = fabric.phases;
    out.converged = fabric.converged || fabric.lambda >= 1.0;

    const auto comp = components(t);
    out.per_flow.assign(static_cast<std::size_t>(tm.servers), 0.0);
    for (ServerId s = 0; s < tm.servers; ++s) {
        const auto a = t.switch_of(s);
        const auto b = t.switch_of(tm.dst[static_cast<std::size_t>(s)]);
        if (a == b)
            out.per_flow[static_cast<std::size_t>(s)] = 1.0;
        else if (comp[static_cast<std::size_t>(a)] == comp[static_cast<std::size_t>(b)])
            out.per_flow[static_cast<std::size_t>(s)] = capped;
    }

    out.link_util.assign(2 * t.link_count(), 0.0);
    if (!fabric.arc_flow.empty() && fabric.lambda > 0.0 && std::isfinite(fabric.lambda)) {
        const double scale = capped / fabric.lambda;
        for (std::size_t e = 0; e < out.link_util.size(); ++e) out.link_util[e] = fabric.arc_flow[e] * scale;
    }
    return out;
}

SolverOptions fabric_options(double eps) {
    SolverOptions o;
    o.epsilon = eps;
    // Per-flow rates are capped by the unit server links, so a fabric that
    // carries the whole matrix is all that needs proving.
    o.lambda_cap = 1.0;
    return o;
}

}  // namespace

double FlowSolution::mean_flow() const {
    if (per_flow.empty()) return 0.0;
    return std::accumulate(per_flow.begin(), per_flow.end(), 0.0) / static_cast<double>(per_flow.size());
}

double FlowSolution::min_flow() const {
    if (per_flow.empty()) return 0.0;
    return *std::min_element(per_flow.begin(), per_flow.end());
}

Network switch_network(const Topology& t) {
    Network net;
    net.nodes = t.switch_count();
    net.arcs.reserve(2 * t.link_count());
    for (const auto& l : t.links()) {
        net.arcs.push_back({l.a, l.b, 1.0});
        net.arcs.push_back({l.b, l.a, 1.0});
    }
    return net;
}

std::vector<Commodity> switch_commodities(const Topology& t, const TrafficMatrix& tm) {
    std::map<std::pair<SwitchId, SwitchId>, double> demand;
    for (const auto& f : switch_flows(t, tm)) demand[f] += 1.0;
    std::vector<Commodity> out;
    out.reserve(demand.size());
    for (const auto& [k, d] : demand) out.push_back({k.first, k.second, d});
    return out;
}

FlowSolution max_concurrent_flow(const Topology& t, const TrafficMatrix& tm, double eps) {
    check_eps(eps);
    check_traffic(t, tm);
    const auto split = split_reachable(t, tm);
    const auto fabric = solve_concurrent_flow(switch_network(t), split.reachable, fabric_options(eps));
    return finish(t, tm, fabric, split.dropped, eps);
}

FlowSolution restricted_flow(const Topology& t, const TrafficMatrix& tm, route::Mode mode, int limit, double eps) {
    check_eps(eps);
    check_traffic(t, tm);
    if (limit < 1) throw InvalidArgument("path limit must be positive");
    const auto split = split_reachable(t, tm);
    std::vector<std::vector<std::vector<int>>> paths;
    paths.reserve(split.reachable.size());
    for (const auto& c : split.reachable) {
        auto& list = paths.emplace_back();
        for (const auto& p : route::paths_for(t, c.src, c.dst, mode, limit).paths) {
            auto& arcs = list.emplace_back();
            for (std::size_t i = 0; i + 1 < p.size(); ++i) arcs.push_back(t.directed_link_id(p[i], p[i + 1]));
        }
    }
    const auto fabric = solve_path_flow(switch_network(t), split.reachable, paths, fabric_options(eps));
    return finish(t, tm, fabric, split.dropped, eps);
}

bool supports_full_capacity(const Topology& t, const TrafficMatrix& tm, double eps) {
    check_eps(eps);
    check_traffic(t, tm);
    const auto split = split_reachable(t, tm);
    if (split.dropped) return false;
    SolverOptions o;
    o.epsilon = eps;
    o.decision_threshold = 1.0 - eps;
    const auto fabric = solve_concurrent_flow(switch_network(t), split.reachable, o);
    return fabric.lambda >= 1.0 - eps;
}

std::vector<SwitchSpec> spread_servers(int switches, int ports, int servers) {
    if (switches < 1 || ports < 1) throw InvalidArgument("need at least one switch and one port");
    if (servers < 0 || servers > switches * ports) throw InvalidArgument("server count out of range");
    std::vector<SwitchSpec> specs(static_cast<std::size_t>(switches));
    for (int i = 0; i < switches; ++i)
        specs[static_cast<std::size_t>(i)] = {ports, servers / switches + (i < servers % switches ? 1 : 0)};
    return specs;
}

std::vector<int> network_degrees(std::span<const SwitchSpec> specs) {
    std::vector<int> out;
    out.reserve(specs.size());
    const int cap = static_cast<int>(specs.size()) - 1;
    for (const auto& s : specs) out.push_back(std::min(s.ports - s.servers, cap));
    return out;
}

FullCapacitySearch max_servers_full_capacity(int switches, int ports, double eps, std::uint64_t seed,
                                             const FullCapacityOptions& options) {
    check_eps(eps);
    if (switches < 1 || ports < 1) throw InvalidArgument("need at least one switch and one port");
    if (options.matrices_per_probe < 1 || options.confirmation_matrices < 0)
        throw InvalidArgument("bad matrix counts");
    FullCapacitySearch out;

    // Matrices for probe m come from streams [first, first + count); each m
    // gets its own topology.
    auto passes = [&](int m, std::uint64_t first, int count) {
        if (m < 2) return true;
        const auto specs = spread_servers(switches, ports, m);
        const auto degrees = network_degrees(specs);
        // Degree patterns that cannot form a connected graph fail the probe.
        std::optional<Topology> t;
        try {
            t = topo::build_random_graph(specs, degrees, derive_seed(seed, 1, static_cast<std::uint64_t>(m)));
        } catch (const std::exception&) {
            return false;
        }
        for (int i = 0; i < count; ++i) {
            const auto tm = random_permutation(m, derive_seed(seed, first + static_cast<std::uint64_t>(i),
                                                              static_cast<std::uint64_t>(m)));
            if (!supports_full_capacity(*t, tm, eps)) return false;
        }
        return true;
    };

    int lo = std::min(1, switches * ports);  // known feasible
    int hi = switches * ports + 1;           // known infeasible
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        const bool ok = passes(mid, 2, options.matrices_per_probe);
        out.probes.push_back({mid, ok, false});
        (ok ? lo : hi) = mid;
    }
    while (lo >= 2) {
        const bool ok = passes(lo, 100, options.confirmation_matrices);
        out.probes.push_back({lo, ok, true});
        if (ok) break;
        --lo;
    }
    out.servers = lo;
    return out;
}

double jain_index(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("jain index needs at least one value");
    double sum = 0.0;
    double squares = 0.0;
    for (double v : values) {
        if (!(v >= 0.0)) throw InvalidArgument("jain index needs non-negative values");
        sum += v;
        squares += v * v;
    }
    if (squares == 0.0) throw InvalidArgument("jain index undefined when all values are zero");
    return sum * sum / (static_cast<double>(values.size()) * squares);
}

ExperimentReport throughput_vs_failures(const Topology& t, std::span<const double> fractions, int trials,
                                        double eps, std::uint64_t seed) {
    check_eps(eps);
    if (trials < 1) throw InvalidArgument("need at least one trial");
    if (fractions.empty()) throw InvalidArgument("need at least one failure fraction");
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.name = "throughput_vs_failures";
    report.config = {{"topology", std::string(to_string(t.kind()))},
                     {"switches", std::to_string(t.switch_count())},
                     {"servers", std::to_string(t.server_count())},
                     {"links", std::to_string(t.link_count())},
                     {"trials", std::to_string(trials)},
                     {"eps", format_real(eps, 4)},
                     {"seed", std::to_string(seed)},
                     {"rng", std::string(kRngId)}};
    report.header = {"param", "trial", "seed", "lambda", "mean_flow", "min_flow", "jain"};
    for (double f : fractions) {
        for (int trial = 0; trial < trials; ++trial) {
            const auto ts = derive_seed(seed, 0, static_cast<std::uint64_t>(trial));
            const auto failed = expand::fail_links(t, f, derive_seed(ts, 1));
            const auto tm = random_permutation(t.server_count(), derive_seed(ts, 2));
            const auto sol = max_concurrent_flow(failed, tm, eps);
            const bool any = std::any_of(sol.per_flow.begin(), sol.per_flow.end(), [](double x) { return x > 0; });
            report.rows.push_back({format_real(f, 4), std::to_string(trial), std::to_string(ts),
                                   format_real(sol.lambda), format_real(sol.mean_flow()),
                                   format_real(sol.min_flow()), any ? format_real(jain_index(sol.per_flow)) : "0"});
        }
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace jellynet::flow
