#include "jellynet/topology.hpp"

#include <algorithm>
#include <array>
#include <queue>

namespace jellynet {

namespace {

constexpr std::array<std::pair<TopologyKind, std::string_view>, 7> kKindNames{{
    {TopologyKind::rrg, "rrg"},
    {TopologyKind::fat_tree, "fat_tree"},
    {TopologyKind::swdc_ring, "swdc_ring"},
    {TopologyKind::swdc_torus2d, "swdc_torus2d"},
    {TopologyKind::swdc_hex3d, "swdc_hex3d"},
    {TopologyKind::layered_rrg, "layered_rrg"},
    {TopologyKind::imported, "imported"},
}};

}  // namespace

std::string_view to_string(TopologyKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "imported";
}

std::optional<TopologyKind> parse_kind(std::string_view tag) {
    for (const auto& [k, name] : kKindNames)
        if (name == tag) return k;
    return std::nullopt;
}

Topology::Topology(TopologyKind kind, std::vector<SwitchSpec> switches, std::vector<Link> links,
                   std::uint64_t seed, Metadata metadata, std::string rng_id)
    : kind_(kind),
      seed_(seed),
      rng_id_(std::move(rng_id)),
      metadata_(std::move(metadata)),
      switches_(std::move(switches)),
      links_(std::move(links)) {
    const auto n = static_cast<SwitchId>(switches_.size());
    for (auto& l : links_) {
        if (l.a < 0 || l.b < 0 || l.a >= n || l.b >= n)
            throw InvalidArgument("link endpoint out of range: " + std::to_string(l.a) + " " +
                                  std::to_string(l.b));
        if (l.a == l.b) throw InvalidArgument("self-loop on switch " + std::to_string(l.a));
        l = Link::make(l.a, l.b);
    }
    std::sort(links_.begin(), links_.end());
    if (auto dup = std::adjacent_find(links_.begin(), links_.end()); dup != links_.end())
        throw InvalidArgument("duplicate link " + std::to_string(dup->a) + " " + std::to_string(dup->b));

    std::vector<std::size_t> deg(switches_.size() + 1, 0);
    for (const auto& l : links_) {
        ++deg[static_cast<std::size_t>(l.a)];
        ++deg[static_cast<std::size_t>(l.b)];
    }
    for (SwitchId s = 0; s < n; ++s) {
        const auto& spec = switches_[static_cast<std::size_t>(s)];
        if (spec.ports < 0 || spec.servers < 0)
            throw InvalidArgument("negative port or server count on switch " + std::to_string(s));
        if (static_cast<std::size_t>(spec.servers) + deg[static_cast<std::size_t>(s)] >
            static_cast<std::size_t>(spec.ports))
            throw InvalidArgument("switch " + std::to_string(s) + " exceeds its port budget (" +
                                  std::to_string(deg[static_cast<std::size_t>(s)]) + " links + " +
                                  std::to_string(spec.servers) + " servers > " +
                                  std::to_string(spec.ports) + " ports)");
    }

    adj_offset_.assign(switches_.size() + 1, 0);
    for (std::size_t s = 0; s < switches_.size(); ++s) adj_offset_[s + 1] = adj_offset_[s] + deg[s];
    adj_.assign(adj_offset_.back(), 0);
    std::vector<std::size_t> fill(adj_offset_.begin(), adj_offset_.end() - 1);
    for (const auto& l : links_) {
        adj_[fill[static_cast<std::size_t>(l.a)]++] = l.b;
        adj_[fill[static_cast<std::size_t>(l.b)]++] = l.a;
    }
    for (std::size_t s = 0; s < switches_.size(); ++s)
        std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[s]),
                  adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[s + 1]));

    server_offset_.assign(switches_.size() + 1, 0);
    for (std::size_t s = 0; s < switches_.size(); ++s)
        server_offset_[s + 1] = server_offset_[s] + switches_[s].servers;
    server_count_ = server_offset_.back();
}

std::optional<std::string> Topology::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata_)
        if (k == key) return v;
    return std::nullopt;
}

int Topology::degree(SwitchId s) const {
    const auto i = static_cast<std::size_t>(s);
    return static_cast<int>(adj_offset_[i + 1] - adj_offset_[i]);
}

SwitchId Topology::switch_of(ServerId server) const {
    if (server < 0 || server >= server_count_)
        throw InvalidArgument("server id out of range: " + std::to_string(server));
    auto it = std::upper_bound(server_offset_.begin(), server_offset_.end(), server);
    return static_cast<SwitchId>(it - server_offset_.begin() - 1);
}

std::span<const SwitchId> Topology::neighbors(SwitchId s) const {
    const auto i = static_cast<std::size_t>(s);
    return {adj_.data() + adj_offset_[i], adj_offset_[i + 1] - adj_offset_[i]};
}

bool Topology::has_link(SwitchId a, SwitchId b) const {
    if (a < 0 || a >= switch_count()) return false;
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::int64_t Topology::directed_link_id(SwitchId from, SwitchId to) const {
    if (from == to) return -1;
    const Link key = Link::make(from, to);
    auto it = std::lower_bound(links_.begin(), links_.end(), key);
    if (it == links_.end() || *it != key) return -1;
    const auto idx = static_cast<std::int64_t>(it - links_.begin());
    return 2 * idx + (from < to ? 0 : 1);
}

bool Topology::is_connected() const {
    const auto n = switch_count();
    if (n <= 1) return true;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<SwitchId> q;
    q.push(0);
    seen[0] = 1;
    SwitchId reached = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (auto v : neighbors(u)) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                q.push(v);
            }
        }
    }
    return reached == n;
}

Topology Topology::with_links(std::vector<Link> links) const {
    return Topology(kind_, switches_, std::move(links), seed_, metadata_, rng_id_);
}

Topology Topology::with_metadata(Metadata metadata) const {
    return Topology(kind_, switches_, links_, seed_, std::move(metadata), rng_id_);
}

}  // namespace jellynet
