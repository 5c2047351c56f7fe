#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jellynet {

using SwitchId = std::int32_t;
using ServerId = std::int32_t;

/// Raised for parameters that violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation cannot complete on otherwise valid input
/// (e.g. a disconnected topology where connectivity is required).
class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Undirected switch-to-switch link, normalized so that a < b.
struct Link {
    SwitchId a = 0;
    SwitchId b = 0;

    static Link make(SwitchId x, SwitchId y) { return x < y ? Link{x, y} : Link{y, x}; }
    friend auto operator<=>(const Link&, const Link&) = default;
};

struct SwitchSpec {
    int ports = 0;
    int servers = 0;
    friend bool operator==(const SwitchSpec&, const SwitchSpec&) = default;
};

enum class TopologyKind { rrg, fat_tree, swdc_ring, swdc_torus2d, swdc_hex3d, layered_rrg, imported };

std::string_view to_string(TopologyKind kind);
std::optional<TopologyKind> parse_kind(std::string_view tag);

/// Ordered key/value annotations carried through serialization (construction
/// retries, lattice convention, container size, ...).
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Switch-level graph with per-switch port budgets and attached servers.
///
/// Every switch-switch link is two directed unit-capacity links; every server
/// has one unit-capacity link to its switch. Servers are numbered
/// contiguously by switch: switch 0 owns servers [0, s_0), switch 1 the next
/// s_1, and so on. Values are immutable once constructed.
class Topology {
public:
    Topology() = default;

    /// Validates and normalizes the links (sorted, a < b). Throws
    /// InvalidArgument on self-loops, parallel links, out-of-range ids or a
    /// switch whose degree plus servers exceeds its ports.
    Topology(TopologyKind kind, std::vector<SwitchSpec> switches, std::vector<Link> links,
             std::uint64_t seed, Metadata metadata = {}, std::string rng_id = std::string{"mt19937_64"});

    TopologyKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& rng_id() const { return rng_id_; }
    const Metadata& metadata() const { return metadata_; }
    std::optional<std::string> meta(std::string_view key) const;

    SwitchId switch_count() const { return static_cast<SwitchId>(switches_.size()); }
    std::span<const SwitchSpec> switches() const { return switches_; }
    int ports(SwitchId s) const { return switches_[static_cast<std::size_t>(s)].ports; }
    int servers(SwitchId s) const { return switches_[static_cast<std::size_t>(s)].servers; }
    int degree(SwitchId s) const;
    int free_ports(SwitchId s) const { return ports(s) - servers(s) - degree(s); }

    ServerId server_count() const { return server_count_; }
    SwitchId switch_of(ServerId server) const;
    ServerId first_server(SwitchId s) const { return server_offset_[static_cast<std::size_t>(s)]; }

    std::span<const Link> links() const { return links_; }
    std::size_t link_count() const { return links_.size(); }

    /// Neighbors of `s`, ascending.
    std::span<const SwitchId> neighbors(SwitchId s) const;
    bool has_link(SwitchId a, SwitchId b) const;

    /// Index of the directed link a->b in [0, 2*link_count): link i yields
    /// directed ids 2i (a->b with a < b) and 2i+1 (b->a). Returns -1 if absent.
    std::int64_t directed_link_id(SwitchId from, SwitchId to) const;

    bool is_connected() const;

    friend bool operator==(const Topology& x, const Topology& y) {
        return x.kind_ == y.kind_ && x.seed_ == y.seed_ && x.rng_id_ == y.rng_id_ &&
               x.metadata_ == y.metadata_ && x.switches_ == y.switches_ && x.links_ == y.links_;
    }

    /// Copy with links replaced; kind, seed and switches kept.
    Topology with_links(std::vector<Link> links) const;
    Topology with_metadata(Metadata metadata) const;

private:
    TopologyKind kind_ = TopologyKind::imported;
    std::uint64_t seed_ = 0;
    std::string rng_id_ = "mt19937_64";
    Metadata metadata_;
    std::vector<SwitchSpec> switches_;
    std::vector<Link> links_;

    std::vector<std::size_t> adj_offset_;
    std::vector<SwitchId> adj_;
    std::vector<ServerId> server_offset_;
    ServerId server_count_ = 0;
};

}  // namespace jellynet
