#include "jellynet/topo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "jellynet/rng.hpp"
#include "link_graph.hpp"

namespace jellynet::topo {

namespace {

using detail::LinkGraph;

bool always(SwitchId, SwitchId) { return true; }

std::size_t swap_budget(SwitchId n) { return 100 * static_cast<std::size_t>(std::max<SwitchId>(n, 1)); }

}  // namespace

Topology build_random_graph(std::vector<SwitchSpec> switches, std::span<const int> network_degree,
                            std::uint64_t seed, TopologyKind kind) {
    const auto n = static_cast<SwitchId>(switches.size());
    if (n < 1) throw InvalidArgument("need at least one switch");
    if (network_degree.size() != switches.size())
        throw InvalidArgument("network degree list does not match switch count");
    long total = 0;
    for (SwitchId s = 0; s < n; ++s) {
        const int r = network_degree[static_cast<std::size_t>(s)];
        const auto& spec = switches[static_cast<std::size_t>(s)];
        if (r < 0) throw InvalidArgument("negative network degree");
        if (r >= n && !(n == 1 && r == 0))
            throw InvalidArgument("network degree " + std::to_string(r) + " impossible with " + std::to_string(n) +
                                  " switches without parallel links");
        if (r + spec.servers > spec.ports)
            throw InvalidArgument("network degree plus servers exceeds ports on switch " + std::to_string(s));
        if (n > 1 && r == 0) throw InvalidArgument("a switch with no network ports cannot be connected");
        total += r;
    }
    if (n > 1 && total / 2 < n - 1)
        throw InvalidArgument("too few network ports for a connected topology");

    for (int attempt = 0; attempt < kMaxConstructionRetries; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        LinkGraph g(n);
        std::vector<int> free(network_degree.begin(), network_degree.end());
        if (!detail::fill_free_ports(g, free, rng, always, always, swap_budget(n))) continue;
        if (!g.connected()) continue;
        return Topology(kind, std::move(switches), g.links(), seed, {{"retries", std::to_string(attempt)}});
    }
    throw RuntimeError("could not build a connected random graph after " +
                       std::to_string(kMaxConstructionRetries) + " attempts");
}

Topology build_rrg(SwitchId switches, int ports, int degree, std::uint64_t seed) {
    if (switches < 1) throw InvalidArgument("RRG needs at least one switch");
    if (degree < 0) throw InvalidArgument("negative network degree");
    if (degree >= switches && !(switches == 1 && degree == 0))
        throw InvalidArgument("r >= N: cannot avoid parallel links");
    if (degree > ports) throw InvalidArgument("r > k: more network ports than switch ports");
    if (switches > 2 && degree == 1) throw InvalidArgument("degree 1 cannot connect more than two switches");
    std::vector<SwitchSpec> specs(static_cast<std::size_t>(switches), SwitchSpec{ports, ports - degree});
    std::vector<int> r(static_cast<std::size_t>(switches), degree);
    return build_random_graph(std::move(specs), r, seed, TopologyKind::rrg);
}

Topology build_fat_tree(int kp) {
    if (kp < 2 || kp % 2 != 0) throw InvalidArgument("fat-tree port count must be even and >= 2");
    const int half = kp / 2;
    const int pod_switches = kp;
    const int cores = half * half;
    const SwitchId n = kp * pod_switches + cores;

    std::vector<SwitchSpec> specs(static_cast<std::size_t>(n), SwitchSpec{kp, 0});
    std::vector<Link> links;
    links.reserve(static_cast<std::size_t>(kp) * kp * kp / 2);
    for (int p = 0; p < kp; ++p) {
        const SwitchId base = p * pod_switches;
        for (int e = 0; e < half; ++e) {
            specs[static_cast<std::size_t>(base + e)].servers = half;
            for (int a = 0; a < half; ++a) links.push_back(Link::make(base + e, base + half + a));
        }
        for (int a = 0; a < half; ++a)
            for (int j = 0; j < half; ++j)
                links.push_back(Link::make(base + half + a, kp * pod_switches + a * half + j));
    }
    return Topology(TopologyKind::fat_tree, std::move(specs), std::move(links), 0, {{"pods", std::to_string(kp)}});
}

std::vector<int> fat_tree_containers(int kp) {
    if (kp < 2 || kp % 2 != 0) throw InvalidArgument("fat-tree port count must be even and >= 2");
    const int cores = (kp / 2) * (kp / 2);
    std::vector<int> container(static_cast<std::size_t>(kp * kp + cores));
    for (int p = 0; p < kp; ++p)
        for (int i = 0; i < kp; ++i) container[static_cast<std::size_t>(p * kp + i)] = p;
    for (int c = 0; c < cores; ++c) container[static_cast<std::size_t>(kp * kp + c)] = c % kp;
    return container;
}

std::vector<int> hex3d_dimensions(SwitchId switches) {
    std::vector<int> best;
    for (int x = 3; x * x * x <= switches; ++x) {
        if (switches % x != 0) continue;
        const int rest = switches / x;
        for (int y = x; y * y <= rest; ++y) {
            if (rest % y != 0) continue;
            const int z = rest / y;
            if (best.empty() || z < best[2]) best = {x, y, z};
        }
    }
    return best;
}

namespace {

int ring_distance(int a, int b, int len) {
    const int d = std::abs(a - b);
    return std::min(d, len - d);
}

int lattice_degree(Lattice lattice) {
    switch (lattice) {
        case Lattice::ring: return 2;
        case Lattice::torus2d: return 4;
        case Lattice::hex3d: return 6;
    }
    return 0;
}

std::vector<int> lattice_dims(Lattice lattice, SwitchId n) {
    switch (lattice) {
        case Lattice::ring:
            if (n < 3) throw InvalidArgument("ring lattice needs at least 3 switches");
            return {n};
        case Lattice::torus2d: {
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
            if (side * side != n || side < 3)
                throw InvalidArgument("torus2d needs a perfect-square switch count with side >= 3");
            return {side, side};
        }
        case Lattice::hex3d: {
            auto dims = hex3d_dimensions(n);
            if (dims.empty())
                throw InvalidArgument("hex3d needs a switch count that factors into three sides >= 3");
            return dims;
        }
    }
    return {};
}

std::vector<int> coords(std::span<const int> dims, SwitchId s) {
    std::vector<int> c(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        c[i] = s % dims[i];
        s /= dims[i];
    }
    return c;
}

SwitchId index_of(std::span<const int> dims, std::span<const int> c) {
    SwitchId s = 0;
    for (std::size_t i = dims.size(); i-- > 0;) s = s * dims[i] + c[i];
    return s;
}

}  // namespace

int lattice_distance(Lattice, std::span<const int> dims, SwitchId a, SwitchId b) {
    const auto ca = coords(dims, a);
    const auto cb = coords(dims, b);
    int d = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) d += ring_distance(ca[i], cb[i], dims[i]);
    return d;
}

Topology build_swdc(Lattice lattice, SwitchId switches, int degree, int servers_per_switch, std::uint64_t seed) {
    if (servers_per_switch < 0) throw InvalidArgument("negative server count");
    const auto dims = lattice_dims(lattice, switches);
    const int base = lattice_degree(lattice);
    if (degree < base)
        throw InvalidArgument("degree " + std::to_string(degree) + " below lattice degree " + std::to_string(base));
    if (degree >= switches) throw InvalidArgument("degree must be below the switch count");
    const int extra = degree - base;

    LinkGraph lattice_graph(switches);
    for (SwitchId s = 0; s < switches; ++s) {
        auto c = coords(dims, s);
        for (std::size_t axis = 0; axis < dims.size(); ++axis) {
            auto next = c;
            next[axis] = (c[axis] + 1) % dims[axis];
            const SwitchId t = index_of(dims, next);
            if (!lattice_graph.adjacent(s, t)) lattice_graph.add(s, t);
        }
    }
    const auto is_lattice = [&](SwitchId a, SwitchId b) { return lattice_graph.adjacent(a, b); };

    std::vector<std::vector<int>> coord(static_cast<std::size_t>(switches));
    for (SwitchId s = 0; s < switches; ++s) coord[static_cast<std::size_t>(s)] = coords(dims, s);
    const auto weight = [&](SwitchId a, SwitchId b) {
        const auto& ca = coord[static_cast<std::size_t>(a)];
        const auto& cb = coord[static_cast<std::size_t>(b)];
        int d = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) d += ring_distance(ca[i], cb[i], dims[i]);
        return 1.0 / d;
    };

    for (int attempt = 0; attempt < kMaxConstructionRetries; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        LinkGraph g(switches);
        for (const auto& l : lattice_graph.links()) g.add(l.a, l.b);
        std::vector<int> free(static_cast<std::size_t>(switches), extra);

        std::vector<SwitchId> pool;
        for (SwitchId s = 0; s < switches && extra > 0; ++s) pool.push_back(s);
        std::vector<double> cumulative;
        std::vector<SwitchId> options;
        const auto collect = [&](SwitchId u) {
            options.clear();
            cumulative.clear();
            double total = 0.0;
            for (auto v : pool) {
                if (v == u || g.adjacent(u, v)) continue;
                total += weight(u, v);
                options.push_back(v);
                cumulative.push_back(total);
            }
            return total;
        };
        while (pool.size() >= 2) {
            // Uniform over switches that still have a valid partner.
            SwitchId u = pool[rng.index(pool.size())];
            double total = collect(u);
            if (options.empty()) {
                std::vector<SwitchId> ready;
                for (auto w : pool)
                    if (collect(w) > 0.0) ready.push_back(w);
                if (ready.empty()) break;
                u = ready[rng.index(ready.size())];
                total = collect(u);
            }
            const double pick = rng.unit() * total;
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
            if (it == cumulative.end()) --it;
            const SwitchId v = options[static_cast<std::size_t>(it - cumulative.begin())];
            g.add(u, v);
            --free[static_cast<std::size_t>(u)];
            --free[static_cast<std::size_t>(v)];
            std::erase_if(pool, [&](SwitchId s) { return free[static_cast<std::size_t>(s)] == 0; });
        }
        const auto random_link = [&](SwitchId a, SwitchId b) { return !is_lattice(a, b); };
        if (!detail::absorb_free_ports(g, free, rng, always, random_link, swap_budget(switches))) continue;

        std::vector<SwitchSpec> specs(static_cast<std::size_t>(switches),
                                      SwitchSpec{degree + servers_per_switch, servers_per_switch});
        std::string dim_text;
        for (std::size_t i = 0; i < dims.size(); ++i) dim_text += (i ? "x" : "") + std::to_string(dims[i]);
        const TopologyKind kind = lattice == Lattice::ring      ? TopologyKind::swdc_ring
                                  : lattice == Lattice::torus2d ? TopologyKind::swdc_torus2d
                                                                : TopologyKind::swdc_hex3d;
        Metadata meta{{"lattice", lattice == Lattice::hex3d ? "axial-3d-torus" : std::string(to_string(kind))},
                      {"dims", dim_text},
                      {"retries", std::to_string(attempt)}};
        return Topology(kind, std::move(specs), g.links(), seed, std::move(meta));
    }
    throw RuntimeError("could not wire small-world random links");
}

Topology build_layered_rrg(int containers, int per_container, int ports, int r_local, int r_global,
                           int servers_per_switch, std::uint64_t seed) {
    if (containers < 1 || per_container < 1) throw InvalidArgument("need at least one container and switch");
    if (r_local < 0 || r_global < 0 || servers_per_switch < 0) throw InvalidArgument("negative degree split");
    if (r_local >= per_container && !(per_container == 1 && r_local == 0))
        throw InvalidArgument("r_local must be below the container size");
    if (r_local + r_global + servers_per_switch > ports)
        throw InvalidArgument("r_local + r_global + servers exceeds ports");
    if ((per_container * r_local) % 2 != 0)
        throw InvalidArgument("container size times r_local must be even for an exact local degree");
    if (containers == 1 && r_global > 0) throw InvalidArgument("global links need at least two containers");
    if (r_global > (containers - 1) * per_container)
        throw InvalidArgument("r_global exceeds the number of switches in other containers");

    const SwitchId n = containers * per_container;
    const auto container_of = [per_container](SwitchId s) { return s / per_container; };
    const auto same = [&](SwitchId a, SwitchId b) { return container_of(a) == container_of(b); };
    const auto different = [&](SwitchId a, SwitchId b) { return container_of(a) != container_of(b); };

    for (int attempt = 0; attempt < kMaxConstructionRetries; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        LinkGraph g(n);
        bool ok = true;
        for (int c = 0; c < containers && ok; ++c) {
            std::vector<int> free(static_cast<std::size_t>(n), 0);
            for (int i = 0; i < per_container; ++i) free[static_cast<std::size_t>(c * per_container + i)] = r_local;
            const auto inside = [&](SwitchId a, SwitchId b) {
                return container_of(a) == c && container_of(b) == c;
            };
            ok = detail::fill_free_ports(g, free, rng, same, inside, swap_budget(per_container));
            ok = ok && std::all_of(free.begin(), free.end(), [](int f) { return f == 0; });
        }
        if (!ok) continue;
        std::vector<int> free(static_cast<std::size_t>(n), r_global);
        if (!detail::fill_free_ports(g, free, rng, different, different, swap_budget(n))) continue;
        if (!g.connected()) continue;

        std::vector<SwitchSpec> specs(static_cast<std::size_t>(n), SwitchSpec{ports, servers_per_switch});
        Metadata meta{{"containers", std::to_string(containers)},
                      {"container_size", std::to_string(per_container)},
                      {"r_local", std::to_string(r_local)},
                      {"r_global", std::to_string(r_global)},
                      {"retries", std::to_string(attempt)}};
        return Topology(TopologyKind::layered_rrg, std::move(specs), g.links(), seed, std::move(meta));
    }
    throw RuntimeError("could not build a connected layered random graph");
}

std::vector<int> container_assignment(const Topology& t) {
    const auto n = static_cast<std::size_t>(t.switch_count());
    if (t.kind() == TopologyKind::layered_rrg) {
        if (auto size = t.meta("container_size")) {
            const int m = std::stoi(*size);
            std::vector<int> c(n);
            for (std::size_t s = 0; s < n; ++s) c[s] = static_cast<int>(s) / m;
            return c;
        }
    }
    if (t.kind() == TopologyKind::fat_tree) {
        if (auto pods = t.meta("pods")) return fat_tree_containers(std::stoi(*pods));
    }
    return std::vector<int>(n, 0);
}

}  // namespace jellynet::topo
