#include "jellynet/concurrent_flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>

#include "jellynet/topology.hpp"

namespace jellynet::flow {

namespace {

void validate(const Network& net, std::span<const Commodity> commodities) {
    if (net.nodes < 1) throw InvalidArgument("network needs at least one node");
    for (const auto& a : net.arcs) {
        if (a.from < 0 || a.to < 0 || a.from >= net.nodes || a.to >= net.nodes)
            throw InvalidArgument("arc endpoint out of range");
        if (!(a.capacity > 0.0) || !std::isfinite(a.capacity)) throw InvalidArgument("arc capacity must be positive");
    }
    for (const auto& c : commodities) {
        if (c.src < 0 || c.dst < 0 || c.src >= net.nodes || c.dst >= net.nodes)
            throw InvalidArgument("commodity endpoint out of range");
        if (c.src == c.dst) throw InvalidArgument("commodity source equals sink");
        if (!(c.demand >= 0.0) || !std::isfinite(c.demand)) throw InvalidArgument("demand must be finite and >= 0");
    }
}

void validate_options(const SolverOptions& o) {
    if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (o.decision_threshold && !(*o.decision_threshold > 0.0))
        throw InvalidArgument("decision threshold must be positive");
}

// Flow accumulated since the start of the run, per arc, per source group and
// per commodity.
struct Accum {
    std::vector<double> arc;
    std::vector<std::vector<double>> group;
    std::vector<double> routed;
};

Accum minus(const Accum& x, const Accum& y) {
    Accum d = x;
    for (std::size_t e = 0; e < d.arc.size(); ++e) d.arc[e] -= y.arc[e];
    for (std::size_t g = 0; g < d.group.size(); ++g)
        for (std::size_t e = 0; e < d.group[g].size(); ++e) d.group[g][e] -= y.group[g][e];
    for (std::size_t i = 0; i < d.routed.size(); ++i) d.routed[i] -= y.routed[i];
    return d;
}

// Lengths grow multiplicatively with step * (flow / capacity). The
// certificate, not the step, decides when to stop; step = eps measured
// fastest on 100-250 switch RRGs.
constexpr double kStepFraction = 1.0;
// Phases between dual bound evaluations (each costs one shortest path tree
// per source).
constexpr std::size_t kDualInterval = 4;
constexpr double kNegligible = 1e-12;

class Driver {
public:
    Driver(const Network& net, std::vector<double> demands, std::size_t groups, const SolverOptions& options)
        : net_(net), demands_(std::move(demands)), options_(options) {
        len_.resize(net.arcs.size());
        for (std::size_t e = 0; e < len_.size(); ++e) len_[e] = 1.0 / net.arcs[e].capacity;
        acc_.arc.assign(net.arcs.size(), 0.0);
        if (options.record_source_flows) acc_.group.assign(groups, std::vector<double>(net.arcs.size(), 0.0));
        acc_.routed.assign(demands_.size(), 0.0);
        snapshot_ = acc_;
        step_ = kStepFraction * options.epsilon;
    }

    std::vector<double>& lengths() { return len_; }
    double step() const { return step_; }

    void route(std::size_t arc, std::size_t group, double amount) {
        acc_.arc[arc] += amount;
        if (!acc_.group.empty()) acc_.group[group][arc] += amount;
        len_[arc] *= 1.0 + step_ * amount / net_.arcs[arc].capacity;
    }
    void credit(std::size_t commodity, double amount) { acc_.routed[commodity] += amount; }

    /// `phase` routes every demand once; `alpha` returns the sum over
    /// commodities of demand times shortest path length under the current
    /// lengths.
    ConcurrentFlow run(const std::function<void()>& phase, const std::function<double()>& alpha) {
        ConcurrentFlow out;
        out.upper_bound = dual(alpha);
        std::size_t next_checkpoint = 1;
        while (true) {
            if (stop(out)) break;
            if (out.phases >= options_.max_phases) break;
            phase();
            ++out.phases;
            consider(acc_, out);
            if (out.phases >= 2) consider(minus(acc_, snapshot_), out);
            normalize();
            if (out.phases % kDualInterval == 0) out.upper_bound = std::min(out.upper_bound, dual(alpha));
            if (out.phases == next_checkpoint) {
                // Later phases route along better paths; restart the window so
                // early phases stop diluting the average.
                snapshot_ = acc_;
                next_checkpoint *= 2;
            }
        }
        out.converged = out.lambda >= (1.0 - options_.epsilon) * out.upper_bound;
        out.lambda = std::min(out.lambda, out.upper_bound);
        if (best_.arc.empty()) best_.arc.assign(net_.arcs.size(), 0.0);
        out.arc_flow = std::move(best_.arc);
        out.source_arc_flow = std::move(best_.group);
        return out;
    }

private:
    bool stop(const ConcurrentFlow& out) const {
        if (out.lambda >= (1.0 - options_.epsilon) * out.upper_bound) return true;
        if (out.lambda >= options_.lambda_cap) return true;
        if (options_.decision_threshold) {
            const double theta = *options_.decision_threshold;
            if (out.lambda >= theta || out.upper_bound < theta) return true;
        }
        return false;
    }

    double dual(const std::function<double()>& alpha) const {
        double d = 0.0;
        for (std::size_t e = 0; e < len_.size(); ++e) d += net_.arcs[e].capacity * len_[e];
        const double a = alpha();
        return a > 0.0 ? d / a : std::numeric_limits<double>::infinity();
    }

    void normalize() {
        double d = 0.0;
        for (std::size_t e = 0; e < len_.size(); ++e) d += net_.arcs[e].capacity * len_[e];
        for (auto& l : len_) l /= d;
    }

    void consider(const Accum& a, ConcurrentFlow& out) {
        double congestion = 0.0;
        for (std::size_t e = 0; e < a.arc.size(); ++e) congestion = std::max(congestion, a.arc[e] / net_.arcs[e].capacity);
        double fraction = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < demands_.size(); ++i) fraction = std::min(fraction, a.routed[i] / demands_[i]);
        if (!(congestion > 0.0) || !(fraction > 0.0)) return;
        const double lambda = fraction / congestion;
        if (lambda <= out.lambda) return;
        out.lambda = lambda;
        const double scale = 1.0 / congestion;
        best_.arc = a.arc;
        for (auto& f : best_.arc) f *= scale;
        best_.group = a.group;
        for (auto& g : best_.group)
            for (auto& f : g) f *= scale;
    }

    const Network& net_;
    std::vector<double> demands_;
    const SolverOptions& options_;
    std::vector<double> len_;
    Accum acc_;
    Accum snapshot_;
    Accum best_;
    double step_ = 0.0;
};

ConcurrentFlow trivial(double lambda) {
    ConcurrentFlow out;
    out.lambda = lambda;
    out.upper_bound = lambda;
    out.converged = true;
    return out;
}

struct Csr {
    std::vector<std::size_t> start;
    std::vector<int> arc;
};

Csr out_arcs(const Network& net) {
    Csr c;
    c.start.assign(static_cast<std::size_t>(net.nodes) + 1, 0);
    for (const auto& a : net.arcs) ++c.start[static_cast<std::size_t>(a.from) + 1];
    for (std::size_t v = 0; v < static_cast<std::size_t>(net.nodes); ++v) c.start[v + 1] += c.start[v];
    c.arc.resize(net.arcs.size());
    auto fill = c.start;
    for (std::size_t e = 0; e < net.arcs.size(); ++e)
        c.arc[fill[static_cast<std::size_t>(net.arcs[e].from)]++] = static_cast<int>(e);
    return c;
}

}  // namespace

ConcurrentFlow solve_concurrent_flow(const Network& net, std::span<const Commodity> commodities,
                                     const SolverOptions& options) {
    validate(net, commodities);
    validate_options(options);

    // Group positive demands by source; merge commodities with the same
    // endpoints.
    struct Sink {
        int node;
        std::size_t commodity;  // index into the merged demand list
    };
    struct Group {
        int src;
        std::vector<Sink> sinks;
    };
    std::map<std::pair<int, int>, std::size_t> merged_index;
    std::vector<double> demands;
    std::map<int, std::size_t> group_of;
    std::vector<Group> groups;
    for (const auto& c : commodities) {
        if (c.demand <= 0.0) continue;
        auto [it, fresh] = merged_index.try_emplace({c.src, c.dst}, demands.size());
        if (fresh) {
            demands.push_back(0.0);
            auto [git, gfresh] = group_of.try_emplace(c.src, groups.size());
            if (gfresh) groups.push_back({c.src, {}});
            groups[git->second].sinks.push_back({c.dst, it->second});
        }
        demands[it->second] += c.demand;
    }
    if (demands.empty()) return trivial(std::numeric_limits<double>::infinity());

    const auto csr = out_arcs(net);
    const auto n = static_cast<std::size_t>(net.nodes);
    std::vector<double> dist(n);
    std::vector<int> parent(n);
    std::vector<char> settled(n);
    std::vector<char> wanted(n, 0);

    // Dijkstra from src under `len`; stops once every wanted node is settled.
    // Returns false if some wanted node is unreachable.
    auto dijkstra = [&](int src, const std::vector<double>& len, std::size_t want) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        std::fill(settled.begin(), settled.end(), 0);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[static_cast<std::size_t>(src)] = 0.0;
        parent[static_cast<std::size_t>(src)] = -1;
        heap.emplace(0.0, src);
        while (!heap.empty() && want > 0) {
            const auto [d, u] = heap.top();
            heap.pop();
            const auto uu = static_cast<std::size_t>(u);
            if (settled[uu]) continue;
            settled[uu] = 1;
            if (wanted[uu]) --want;
            for (std::size_t i = csr.start[uu]; i < csr.start[uu + 1]; ++i) {
                const int e = csr.arc[i];
                const auto v = static_cast<std::size_t>(net.arcs[static_cast<std::size_t>(e)].to);
                const double nd = d + len[static_cast<std::size_t>(e)];
                if (!settled[v] && nd < dist[v]) {
                    dist[v] = nd;
                    parent[v] = e;
                    heap.emplace(nd, static_cast<int>(v));
                }
            }
        }
        return want == 0;
    };

    // Reachability, using unit lengths.
    {
        const std::vector<double> unit(net.arcs.size(), 1.0);
        for (const auto& g : groups) {
            for (const auto& s : g.sinks) wanted[static_cast<std::size_t>(s.node)] = 1;
            const bool ok = dijkstra(g.src, unit, g.sinks.size());
            for (const auto& s : g.sinks) wanted[static_cast<std::size_t>(s.node)] = 0;
            if (!ok) return trivial(0.0);
        }
    }

    Driver driver(net, demands, groups.size(), options);
    auto& len = driver.lengths();
    std::vector<double> load(net.arcs.size(), 0.0);
    std::vector<std::size_t> touched;
    std::vector<double> rem;

    auto phase = [&] {
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& g = groups[gi];
            rem.assign(g.sinks.size(), 0.0);
            for (std::size_t j = 0; j < g.sinks.size(); ++j) rem[j] = demands[g.sinks[j].commodity];
            while (true) {
                std::size_t want = 0;
                for (std::size_t j = 0; j < g.sinks.size(); ++j) {
                    if (rem[j] > kNegligible * demands[g.sinks[j].commodity]) {
                        wanted[static_cast<std::size_t>(g.sinks[j].node)] = 1;
                        ++want;
                    } else {
                        rem[j] = 0.0;
                    }
                }
                if (want == 0) break;
                dijkstra(g.src, len, want);
                touched.clear();
                for (std::size_t j = 0; j < g.sinks.size(); ++j) {
                    if (rem[j] == 0.0) continue;
                    const auto node = static_cast<std::size_t>(g.sinks[j].node);
                    wanted[node] = 0;
                    for (auto v = node; parent[v] >= 0;) {
                        const auto e = static_cast<std::size_t>(parent[v]);
                        if (load[e] == 0.0) touched.push_back(e);
                        load[e] += rem[j];
                        v = static_cast<std::size_t>(net.arcs[e].from);
                    }
                }
                double sigma = 1.0;
                for (auto e : touched) sigma = std::min(sigma, net.arcs[e].capacity / load[e]);
                for (auto e : touched) {
                    driver.route(e, gi, sigma * load[e]);
                    load[e] = 0.0;
                }
                for (std::size_t j = 0; j < g.sinks.size(); ++j) {
                    if (rem[j] == 0.0) continue;
                    driver.credit(g.sinks[j].commodity, sigma * rem[j]);
                    rem[j] = sigma >= 1.0 ? 0.0 : rem[j] * (1.0 - sigma);
                }
            }
        }
    };

    auto alpha = [&] {
        double a = 0.0;
        for (const auto& g : groups) {
            for (const auto& s : g.sinks) wanted[static_cast<std::size_t>(s.node)] = 1;
            dijkstra(g.src, len, g.sinks.size());
            for (const auto& s : g.sinks) {
                wanted[static_cast<std::size_t>(s.node)] = 0;
                a += demands[s.commodity] * dist[static_cast<std::size_t>(s.node)];
            }
        }
        return a;
    };

    auto out = driver.run(phase, alpha);
    for (const auto& g : groups) out.sources.push_back(g.src);
    if (!options.record_source_flows) out.sources.clear();
    return out;
}

ConcurrentFlow solve_path_flow(const Network& net, std::span<const Commodity> commodities,
                               std::span<const std::vector<std::vector<int>>> paths, const SolverOptions& options) {
    validate(net, commodities);
    validate_options(options);
    if (paths.size() != commodities.size()) throw InvalidArgument("need one path list per commodity");
    for (std::size_t i = 0; i < commodities.size(); ++i) {
        for (const auto& p : paths[i]) {
            if (p.empty()) throw InvalidArgument("empty path");
            int at = commodities[i].src;
            for (int e : p) {
                if (e < 0 || static_cast<std::size_t>(e) >= net.arcs.size()) throw InvalidArgument("arc id out of range");
                if (net.arcs[static_cast<std::size_t>(e)].from != at) throw InvalidArgument("path arcs are not contiguous");
                at = net.arcs[static_cast<std::size_t>(e)].to;
            }
            if (at != commodities[i].dst) throw InvalidArgument("path does not end at the commodity sink");
        }
    }

    std::vector<std::size_t> active;
    std::vector<double> demands;
    for (std::size_t i = 0; i < commodities.size(); ++i) {
        if (commodities[i].demand <= 0.0) continue;
        if (paths[i].empty()) return trivial(0.0);
        active.push_back(i);
        demands.push_back(commodities[i].demand);
    }
    if (active.empty()) return trivial(std::numeric_limits<double>::infinity());

    // Sources are not grouped here; each commodity is its own group.
    Driver driver(net, demands, active.size(), options);
    auto& len = driver.lengths();

    auto shortest = [&](std::size_t i, double& best_len) {
        const auto& list = paths[active[i]];
        std::size_t best = 0;
        best_len = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < list.size(); ++p) {
            double l = 0.0;
            for (int e : list[p]) l += len[static_cast<std::size_t>(e)];
            if (l < best_len) {
                best_len = l;
                best = p;
            }
        }
        return best;
    };

    auto phase = [&] {
        for (std::size_t i = 0; i < active.size(); ++i) {
            double rem = demands[i];
            while (rem > kNegligible * demands[i]) {
                double l = 0.0;
                const auto& p = paths[active[i]][shortest(i, l)];
                double amount = rem;
                for (int e : p) amount = std::min(amount, net.arcs[static_cast<std::size_t>(e)].capacity);
                for (int e : p) driver.route(static_cast<std::size_t>(e), i, amount);
                driver.credit(i, amount);
                rem -= amount;
            }
        }
    };

    auto alpha = [&] {
        double a = 0.0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            double l = 0.0;
            shortest(i, l);
            a += demands[i] * l;
        }
        return a;
    };

    auto out = driver.run(phase, alpha);
    if (options.record_source_flows)
        for (auto i : active) out.sources.push_back(commodities[i].src);
    return out;
}

}  // namespace jellynet::flow
