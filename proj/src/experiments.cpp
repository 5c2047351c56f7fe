#include "jellynet/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "jellynet/expand.hpp"
#include "jellynet/flow.hpp"
#include "jellynet/io.hpp"
#include "jellynet/metrics.hpp"
#include "jellynet/rng.hpp"
#include "jellynet/route.hpp"
#include "jellynet/topo.hpp"
#include "parallel.hpp"

namespace jellynet::experiments {

namespace {

using Clock = std::chrono::steady_clock;
using Row = std::vector<std::string>;

std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }
std::string real(double v) { return format_real(v); }

std::string join(const std::vector<double>& xs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? ";" : "") << format_real(xs[i], 4);
    return out.str();
}

void check(const Options& o) {
    if (o.trials < 1) throw InvalidArgument("trials must be positive");
    if (!(o.eps > 0.0 && o.eps <= 0.5)) throw InvalidArgument("eps must lie in (0, 0.5]");
}

ExperimentReport start(std::string name, const Options& o) {
    ExperimentReport r;
    r.name = std::move(name);
    r.config = {{"seed", str(o.seed)},
                {"traffic_seed", str(o.traffic_seed)},
                {"trials", str(o.trials)},
                {"eps", format_real(o.eps, 4)},
                {"rng", std::string(kRngId)}};
    return r;
}

void finish(ExperimentReport& r, std::vector<std::vector<Row>> chunks, Clock::time_point t0) {
    for (auto& c : chunks)
        for (auto& row : c) r.rows.push_back(std::move(row));
    r.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t topo_seed(const Options& o, std::uint64_t stream, int trial) {
    return derive_seed(o.seed, stream, static_cast<std::uint64_t>(trial));
}
std::uint64_t traffic_seed(const Options& o, std::uint64_t stream, int trial) {
    return derive_seed(o.traffic_seed, stream, static_cast<std::uint64_t>(trial));
}

Topology spread_rrg(int switches, int ports, int servers, std::uint64_t seed) {
    const auto specs = flow::spread_servers(switches, ports, servers);
    const auto degrees = flow::network_degrees(specs);
    return topo::build_random_graph(specs, degrees, seed);
}

}  // namespace

const std::vector<std::string>& names() {
    static const std::vector<std::string> all{"fig3c", "fig5", "fig7", "fig10", "fig11", "ddg", "swdc"};
    return all;
}

ExperimentReport fig3c(const Fig3cConfig& c, const Options& o) {
    check(o);
    if (c.min_ports < 2 || c.min_ports % 2 || c.max_ports % 2 || c.max_ports < c.min_ports)
        throw InvalidArgument("port range must be even and ordered");
    const auto t0 = Clock::now();
    auto r = start("fig3c", o);
    r.config.insert(r.config.end(), {{"min_ports", str(c.min_ports)}, {"max_ports", str(c.max_ports)}});
    r.header = {"param", "trial", "seed", "switches", "fat_tree_servers", "jellyfish_servers", "ratio", "probes"};

    std::vector<int> ports;
    for (int k = c.min_ports; k <= c.max_ports; k += 2) ports.push_back(k);
    const auto n = ports.size() * static_cast<std::size_t>(o.trials);
    std::vector<std::vector<Row>> rows(n);
    detail::parallel_for(n, o.jobs, [&](std::size_t i) {
        const int k = ports[i / static_cast<std::size_t>(o.trials)];
        const int trial = static_cast<int>(i % static_cast<std::size_t>(o.trials));
        const auto stats = metrics::fat_tree_stats(k);
        const auto seed = topo_seed(o, static_cast<std::uint64_t>(k), trial);
        const auto search = flow::max_servers_full_capacity(static_cast<int>(stats.switches), k, o.eps, seed);
        rows[i].push_back({str(k), str(trial), str(seed), str(static_cast<int>(stats.switches)),
                           str(static_cast<int>(stats.servers)), str(search.servers),
                           real(static_cast<double>(search.servers) / static_cast<double>(stats.servers)),
                           str(static_cast<int>(search.probes.size()))});
    });
    finish(r, std::move(rows), t0);
    return r;
}

ExperimentReport fig5(const Fig5Config& c, const Options& o) {
    check(o);
    if (c.start < 2 || c.step < 1 || c.end < c.start) throw InvalidArgument("bad size range");
    if (c.servers < 0 || c.servers >= c.ports) throw InvalidArgument("servers must leave network ports");
    const int degree = c.ports - c.servers;
    const auto t0 = Clock::now();
    auto r = start("fig5", o);
    r.config.insert(r.config.end(), {{"start", str(c.start)},
                                     {"step", str(c.step)},
                                     {"end", str(c.end)},
                                     {"ports", str(c.ports)},
                                     {"servers", str(c.servers)}});
    r.header = {"param",
                "trial",
                "seed",
                "traffic_seed",
                "incremental_lambda",
                "incremental_mean_flow",
                "scratch_lambda",
                "scratch_mean_flow",
                "incremental_path",
                "scratch_path"};

    std::vector<int> sizes;
    for (int n = c.start; n <= c.end; n += c.step) sizes.push_back(n);
    // Growth is sequential within a trial, so trials are the parallel unit.
    std::vector<std::vector<Row>> per_trial(static_cast<std::size_t>(o.trials));
    detail::parallel_for(per_trial.size(), o.jobs, [&](std::size_t ti) {
        const int trial = static_cast<int>(ti);
        const auto seed = topo_seed(o, 0, trial);
        Topology grown = topo::build_rrg(c.start, c.ports, degree, derive_seed(seed, 0));
        std::uint64_t racks = 0;
        for (int n : sizes) {
            while (grown.switch_count() < n)
                grown = expand::add_rack(grown, c.ports, c.servers, derive_seed(seed, 1, racks++)).topology;
            const auto scratch = topo::build_rrg(n, c.ports, degree, derive_seed(seed, 2, static_cast<std::uint64_t>(n)));
            const auto ts = derive_seed(traffic_seed(o, 0, trial), static_cast<std::uint64_t>(n));
            const auto tm = flow::random_permutation(grown.server_count(), ts);
            const auto a = flow::max_concurrent_flow(grown, tm, o.eps);
            const auto b = flow::max_concurrent_flow(scratch, tm, o.eps);
            const auto pa = metrics::path_lengths(grown, metrics::Level::switch_level);
            const auto pb = metrics::path_lengths(scratch, metrics::Level::switch_level);
            per_trial[ti].push_back({str(n), str(trial), str(seed), str(ts), real(a.lambda), real(a.mean_flow()),
                                     real(b.lambda), real(b.mean_flow()), real(pa.mean), real(pb.mean)});
        }
    });
    // Emit sorted by (param, trial).
    std::vector<std::vector<Row>> ordered(sizes.size());
    for (std::size_t s = 0; s < sizes.size(); ++s)
        for (auto& t : per_trial) ordered[s].push_back(std::move(t[s]));
    finish(r, std::move(ordered), t0);
    return r;
}

ExperimentReport fig7(const Fig7Config& c, const Options& o) {
    check(o);
    const auto t0 = Clock::now();
    auto r = start("fig7", o);
    r.config.insert(r.config.end(), {{"switches", str(c.switches)},
                                     {"ports", str(c.ports)},
                                     {"servers", str(c.servers)},
                                     {"limit", str(c.limit)},
                                     {"threshold", str(c.threshold)}});
    r.header = {"param", "trial", "seed", "traffic_seed", "links", "fraction_at_most_threshold", "mean_paths"};
    const route::Mode modes[] = {route::Mode::ecmp, route::Mode::ksp};
    const auto n = 2 * static_cast<std::size_t>(o.trials);
    std::vector<std::vector<Row>> rows(n);
    detail::parallel_for(n, o.jobs, [&](std::size_t i) {
        const auto mode = modes[i / static_cast<std::size_t>(o.trials)];
        const int trial = static_cast<int>(i % static_cast<std::size_t>(o.trials));
        const auto seed = topo_seed(o, 0, trial);
        const auto ts = traffic_seed(o, 0, trial);
        const auto t = spread_rrg(c.switches, c.ports, c.servers, seed);
        const auto tm = flow::random_permutation(t.server_count(), ts);
        const auto flows = flow::switch_flows(t, tm);
        const auto counts = route::link_path_counts(t, flows, mode, c.limit);
        double total = 0.0;
        for (auto x : counts) total += static_cast<double>(x);
        rows[i].push_back({std::string(route::to_string(mode)) + "_" + str(c.limit), str(trial), str(seed), str(ts),
                           str(static_cast<std::uint64_t>(counts.size())),
                           real(route::fraction_at_most(counts, c.threshold)),
                           real(total / static_cast<double>(counts.size()))});
    });
    finish(r, std::move(rows), t0);
    return r;
}

ExperimentReport fig10(const Fig10Config& c, const Options& o) {
    check(o);
    if (c.fractions.empty()) throw InvalidArgument("need at least one failure fraction");
    const auto t0 = Clock::now();
    const auto fat = topo::build_fat_tree(c.ports);
    const int servers =
        c.servers > 0 ? c.servers
                      : fat.switch_count() * ((fat.server_count() + fat.switch_count() - 1) / fat.switch_count());
    const auto jelly = spread_rrg(fat.switch_count(), c.ports, servers, o.seed);

    auto r = start("fig10", o);
    r.config.insert(r.config.end(), {{"ports", str(c.ports)},
                                     {"switches", str(fat.switch_count())},
                                     {"jellyfish_servers", str(servers)},
                                     {"fat_tree_servers", str(fat.server_count())},
                                     {"fractions", join(c.fractions)}});
    r.header = {"param", "trial", "seed", "topology", "lambda", "mean_flow", "min_flow", "jain"};

    // One task per (topology, fraction, trial); throughput_vs_failures keeps
    // the per-trial seeds independent of the fraction.
    const std::vector<const Topology*> topologies{&jelly, &fat};
    const std::vector<std::string> labels{"jellyfish", "fat_tree"};
    const auto per_topo = c.fractions.size() * static_cast<std::size_t>(o.trials);
    std::vector<ExperimentReport> parts(topologies.size() * per_topo);
    detail::parallel_for(parts.size(), o.jobs, [&](std::size_t i) {
        const auto which = i / per_topo;
        const auto rest = i % per_topo;
        const double f = c.fractions[rest / static_cast<std::size_t>(o.trials)];
        const int trial = static_cast<int>(rest % static_cast<std::size_t>(o.trials));
        // A single-trial call with the trial's own seed reproduces row `trial`
        // of the full sweep.
        const double fs[] = {f};
        auto part = flow::throughput_vs_failures(*topologies[which], fs, 1, o.eps, traffic_seed(o, which, trial));
        part.rows.front()[1] = str(trial);
        parts[i] = std::move(part);
    });
    std::vector<std::vector<Row>> rows(c.fractions.size());
    for (std::size_t fi = 0; fi < c.fractions.size(); ++fi)
        for (int trial = 0; trial < o.trials; ++trial)
            for (std::size_t which = 0; which < topologies.size(); ++which) {
                auto row = parts[which * per_topo + fi * static_cast<std::size_t>(o.trials) +
                                 static_cast<std::size_t>(trial)]
                               .rows.front();
                row.insert(row.begin() + 3, labels[which]);
                rows[fi].push_back(std::move(row));
            }
    finish(r, std::move(rows), t0);
    return r;
}

ExperimentReport fig11(const Fig11Config& c, const Options& o) {
    check(o);
    if (c.local_fractions.empty()) throw InvalidArgument("need at least one local fraction");
    const int switches = c.containers * c.per_container;
    const auto t0 = Clock::now();
    auto r = start("fig11", o);
    r.config.insert(r.config.end(), {{"containers", str(c.containers)},
                                     {"per_container", str(c.per_container)},
                                     {"ports", str(c.ports)},
                                     {"degree", str(c.degree)},
                                     {"servers", str(c.servers)},
                                     {"local_fractions", join(c.local_fractions)}});
    r.header = {"param",        "trial",     "seed",          "traffic_seed",          "r_local",
                "r_global",     "local_fraction", "lambda",   "mean_flow",             "baseline_mean_flow",
                "throughput_normalized"};

    std::vector<int> locals;
    for (double f : c.local_fractions) {
        if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("local fraction must lie in [0, 1]");
        locals.push_back(static_cast<int>(std::lround(f * c.degree)));
    }

    const auto trials = static_cast<std::size_t>(o.trials);
    std::vector<double> baseline(trials);
    detail::parallel_for(trials, o.jobs, [&](std::size_t ti) {
        const int trial = static_cast<int>(ti);
        const auto t = topo::build_rrg(switches, c.ports, c.degree, topo_seed(o, 0, trial));
        const auto tm = flow::random_permutation(t.server_count(), traffic_seed(o, 0, trial));
        baseline[ti] = flow::max_concurrent_flow(t, tm, o.eps).mean_flow();
    });

    const auto n = locals.size() * trials;
    std::vector<std::vector<Row>> rows(n);
    detail::parallel_for(n, o.jobs, [&](std::size_t i) {
        const int rl = locals[i / trials];
        const int trial = static_cast<int>(i % trials);
        const auto seed = topo_seed(o, 1 + i / trials, trial);
        const auto ts = traffic_seed(o, 0, trial);
        const auto t = topo::build_layered_rrg(c.containers, c.per_container, c.ports, rl, c.degree - rl, c.servers,
                                               seed);
        const auto tm = flow::random_permutation(t.server_count(), ts);
        const auto sol = flow::max_concurrent_flow(t, tm, o.eps);
        const auto lf = metrics::local_fraction(t, topo::container_assignment(t));
        const double base = baseline[static_cast<std::size_t>(trial)];
        rows[i].push_back({format_real(static_cast<double>(rl) / c.degree, 4), str(trial), str(seed), str(ts), str(rl),
                           str(c.degree - rl), real(lf), real(sol.lambda), real(sol.mean_flow()), real(base),
                           real(base > 0 ? sol.mean_flow() / base : 0.0)});
    });
    finish(r, std::move(rows), t0);
    return r;
}

ExperimentReport ddg(const DdgConfig& c, const Options& o) {
    check(o);
    if (c.imports.empty()) throw InvalidArgument("ddg needs at least one --import graph");
    if (c.servers < 1) throw InvalidArgument("ddg needs at least one server per switch");
    const auto t0 = Clock::now();
    auto r = start("ddg", o);
    std::ostringstream files;
    for (std::size_t i = 0; i < c.imports.size(); ++i) files << (i ? ";" : "") << c.imports[i];
    r.config.insert(r.config.end(),
                    {{"imports", files.str()}, {"servers", str(c.servers)}, {"ports", str(c.ports)}});
    r.header = {"param", "trial", "seed", "traffic_seed", "ddg_lambda", "ddg_mean_flow", "jellyfish_lambda",
                "jellyfish_mean_flow", "ratio"};

    std::vector<Topology> graphs;
    for (const auto& path : c.imports) {
        const auto text = io::read_file(path);
        auto g = io::parse_edge_list(text, 1 << 20, c.servers);
        int max_degree = 0;
        for (SwitchId s = 0; s < g.switch_count(); ++s) max_degree = std::max(max_degree, g.degree(s));
        const int ports = c.ports > 0 ? c.ports : max_degree + c.servers;
        graphs.push_back(io::parse_edge_list(text, ports, c.servers));
    }

    const auto trials = static_cast<std::size_t>(o.trials);
    const auto n = graphs.size() * trials;
    std::vector<std::vector<Row>> rows(n);
    detail::parallel_for(n, o.jobs, [&](std::size_t i) {
        const auto& g = graphs[i / trials];
        const int trial = static_cast<int>(i % trials);
        int degree = 0;
        std::vector<int> degrees;
        for (SwitchId s = 0; s < g.switch_count(); ++s) {
            degrees.push_back(g.degree(s));
            degree = std::max(degree, g.degree(s));
        }
        const int ports = g.ports(0);
        const auto seed = topo_seed(o, i / trials, trial);
        const auto ts = traffic_seed(o, i / trials, trial);
        // Same switches, servers and per-switch degrees, wired at random.
        const auto jelly = topo::build_random_graph({g.switches().begin(), g.switches().end()}, degrees, seed);
        const auto tm = flow::random_permutation(g.server_count(), ts);
        const auto a = flow::max_concurrent_flow(g, tm, o.eps);
        const auto b = flow::max_concurrent_flow(jelly, tm, o.eps);
        const std::string label = str(g.switch_count()) + ":" + str(ports) + ":" + str(degree);
        rows[i].push_back({label, str(trial), str(seed), str(ts), real(a.lambda), real(a.mean_flow()), real(b.lambda),
                           real(b.mean_flow()), real(a.mean_flow() > 0 ? b.mean_flow() / a.mean_flow() : 0.0)});
    });
    finish(r, std::move(rows), t0);
    return r;
}

ExperimentReport swdc(const SwdcConfig& c, const Options& o) {
    check(o);
    const auto t0 = Clock::now();
    auto r = start("swdc", o);
    r.config.insert(r.config.end(), {{"switches", str(c.switches)},
                                     {"hex_switches", str(c.hex_switches)},
                                     {"degree", str(c.degree)},
                                     {"servers", str(c.servers)}});
    r.header = {"param", "trial", "seed", "traffic_seed", "lambda", "mean_flow", "min_flow", "jain"};
    const std::vector<std::string> variants{"jellyfish", "swdc_ring", "swdc_torus2d", "swdc_hex3d"};
    const auto trials = static_cast<std::size_t>(o.trials);
    const auto n = variants.size() * trials;
    std::vector<std::vector<Row>> rows(n);
    detail::parallel_for(n, o.jobs, [&](std::size_t i) {
        const auto v = i / trials;
        const int trial = static_cast<int>(i % trials);
        const auto seed = topo_seed(o, v, trial);
        const auto ts = traffic_seed(o, 0, trial);
        const int ports = c.degree + c.servers;
        const Topology t = [&] {
            switch (v) {
                case 0: return topo::build_rrg(c.switches, ports, c.degree, seed);
                case 1: return topo::build_swdc(topo::Lattice::ring, c.switches, c.degree, c.servers, seed);
                case 2: return topo::build_swdc(topo::Lattice::torus2d, c.switches, c.degree, c.servers, seed);
                default: return topo::build_swdc(topo::Lattice::hex3d, c.hex_switches, c.degree, c.servers, seed);
            }
        }();
        const auto tm = flow::random_permutation(t.server_count(), ts);
        const auto sol = flow::max_concurrent_flow(t, tm, o.eps);
        rows[i].push_back({variants[v], str(trial), str(seed), str(ts), real(sol.lambda), real(sol.mean_flow()),
                           real(sol.min_flow()), sol.mean_flow() > 0 ? real(flow::jain_index(sol.per_flow)) : "0"});
    });
    finish(r, std::move(rows), t0);
    return r;
}

}  // namespace jellynet::experiments
