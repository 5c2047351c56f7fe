#include "jellynet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace jellynet::metrics {

double PathLengthDistribution::fraction_below(int hops) const {
    if (pair_count == 0) return 0.0;
    std::uint64_t below = 0;
    for (const auto& [h, count] : histogram)
        if (h < hops) below += count;
    return static_cast<double>(below) / static_cast<double>(pair_count);
}

std::vector<int> bfs_distances(const Topology& t, SwitchId source) {
    std::vector<int> dist(static_cast<std::size_t>(t.switch_count()), -1);
    std::vector<SwitchId> frontier{source};
    dist[static_cast<std::size_t>(source)] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const auto u = frontier[head];
        const int du = dist[static_cast<std::size_t>(u)];
        for (auto v : t.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = du + 1;
                frontier.push_back(v);
            }
        }
    }
    return dist;
}

PathLengthDistribution path_lengths(const Topology& t, Level level) {
    PathLengthDistribution out;
    out.level = level;
    const auto n = t.switch_count();
    std::vector<std::uint64_t> counts;
    auto bump = [&](int hops, std::uint64_t pairs) {
        if (pairs == 0) return;
        if (counts.size() <= static_cast<std::size_t>(hops)) counts.resize(static_cast<std::size_t>(hops) + 1, 0);
        counts[static_cast<std::size_t>(hops)] += pairs;
    };

    for (SwitchId a = 0; a < n; ++a) {
        const auto dist = bfs_distances(t, a);
        const auto sa = static_cast<std::uint64_t>(t.servers(a));
        if (level == Level::server_level) {
            if (sa == 0) continue;
            bump(2, sa * (sa - 1));
        }
        for (SwitchId b = 0; b < n; ++b) {
            if (b == a) continue;
            const int d = dist[static_cast<std::size_t>(b)];
            if (level == Level::switch_level) {
                if (d < 0) throw RuntimeError("topology is disconnected");
                bump(d, 1);
            } else {
                const auto sb = static_cast<std::uint64_t>(t.servers(b));
                if (sb == 0) continue;
                if (d < 0) throw RuntimeError("topology is disconnected");
                bump(d + 2, sa * sb);
            }
        }
    }

    long double weighted = 0;
    for (std::size_t h = 0; h < counts.size(); ++h) {
        if (counts[h] == 0) continue;
        out.histogram[static_cast<int>(h)] = counts[h];
        out.pair_count += counts[h];
        weighted += static_cast<long double>(h) * static_cast<long double>(counts[h]);
        out.diameter = static_cast<int>(h);
    }
    out.mean = out.pair_count ? static_cast<double>(weighted / static_cast<long double>(out.pair_count)) : 0.0;
    return out;
}

double bisection_lower_bound(SwitchId switches, int degree) {
    if (switches < 2 || degree < 1) throw InvalidArgument("bisection bound needs N >= 2 and r >= 1");
    const double r = degree;
    return switches * (r / 4.0 - std::sqrt(r * std::log(2.0)) / 2.0);
}

double normalized_bisection_lower_bound(SwitchId switches, int ports, int degree) {
    if (degree >= ports) throw InvalidArgument("normalization needs at least one server port per switch");
    const double half_servers = static_cast<double>(switches) * (ports - degree) / 2.0;
    return bisection_lower_bound(switches, degree) / half_servers;
}

int diameter_upper_bound(SwitchId switches, int degree, double eps) {
    if (degree < 3) throw InvalidArgument("diameter bound needs r >= 3");
    if (switches < 2) throw InvalidArgument("diameter bound needs N >= 2");
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    const double n = switches;
    const double inner = (2.0 + eps) * degree * n * std::log(n);
    const double hops = std::log(inner) / std::log(static_cast<double>(degree - 1));
    return 1 + static_cast<int>(std::ceil(hops - 1e-12));
}

FatTreeStats fat_tree_stats(int kp) {
    if (kp < 2 || kp % 2 != 0) throw InvalidArgument("fat-tree port count must be even and >= 2");
    const std::int64_t k = kp;
    return {k * k * k / 4, 5 * k * k / 4, k * k * k / 2, k * k * k / 8, 0.5 * (1.0 + 1.0 / static_cast<double>(k))};
}

double local_fraction(const Topology& t, std::span<const int> container) {
    if (container.size() != static_cast<std::size_t>(t.switch_count()))
        throw InvalidArgument("container assignment must cover every switch");
    if (t.link_count() == 0) return 0.0;
    std::size_t local = 0;
    for (const auto& l : t.links())
        if (container[static_cast<std::size_t>(l.a)] == container[static_cast<std::size_t>(l.b)]) ++local;
    return static_cast<double>(local) / static_cast<double>(t.link_count());
}

int edge_connectivity(const Topology& t, SwitchId a, SwitchId b) {
    if (a == b) throw InvalidArgument("edge connectivity needs distinct switches");
    const auto arcs = 2 * t.link_count();
    // Residual capacity per directed link id; each direction starts at 1.
    std::vector<int> residual(arcs, 1);
    std::vector<std::int64_t> via(static_cast<std::size_t>(t.switch_count()));
    int flow = 0;
    for (;;) {
        std::fill(via.begin(), via.end(), -1);
        std::vector<SwitchId> queue{a};
        via[static_cast<std::size_t>(a)] = -2;
        for (std::size_t head = 0; head < queue.size() && via[static_cast<std::size_t>(b)] == -1; ++head) {
            const auto u = queue[head];
            for (auto v : t.neighbors(u)) {
                const auto id = t.directed_link_id(u, v);
                if (via[static_cast<std::size_t>(v)] != -1 || residual[static_cast<std::size_t>(id)] == 0) continue;
                via[static_cast<std::size_t>(v)] = id;
                queue.push_back(v);
            }
        }
        if (via[static_cast<std::size_t>(b)] == -1) return flow;
        for (SwitchId v = b; v != a;) {
            const auto id = via[static_cast<std::size_t>(v)];
            --residual[static_cast<std::size_t>(id)];
            ++residual[static_cast<std::size_t>(id ^ 1)];
            const Link l = t.links()[static_cast<std::size_t>(id / 2)];
            v = (id % 2 == 0) ? l.a : l.b;
        }
        ++flow;
    }
}

std::string distribution_csv(const PathLengthDistribution& d) {
    std::ostringstream out;
    out << "hops,pairs\n";
    for (const auto& [h, c] : d.histogram) out << h << ',' << c << '\n';
    return out.str();
}

}  // namespace jellynet::metrics
