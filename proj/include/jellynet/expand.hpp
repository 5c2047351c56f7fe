#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jellynet/topology.hpp"

/// Incremental growth and random link failure.
namespace jellynet::expand {

enum class StepKind { add_rack, add_switch };

/// Audit log of one expansion: the new switch and every link it rewired.
/// Each removed link (v,w) is paired with the two added links (u,v),(u,w).
struct ExpansionStep {
    StepKind kind = StepKind::add_rack;
    SwitchId new_switch = 0;
    int new_switch_ports = 0;
    int new_switch_servers = 0;
    std::vector<Link> links_removed;
    std::vector<Link> links_added;

    friend bool operator==(const ExpansionStep&, const ExpansionStep&) = default;
};

struct Expansion {
    Topology topology;
    ExpansionStep step;
};

/// Adds one rack: a switch with `ports` ports and `servers` servers. While
/// the new switch u has two or more free network ports, a uniform-random
/// link (v,w) with u adjacent to neither endpoint is replaced by (u,v) and
/// (u,w). A final odd port stays unused. Existing switches keep their degree.
///
/// Throws InvalidArgument if fewer than two network ports are requested and
/// RuntimeError if no eligible link can be found (graph too small or dense).
Expansion add_rack(const Topology& t, int ports, int servers, std::uint64_t seed);

/// Adds a switch without servers, connecting all of its ports to the network.
/// `ports` may differ from the existing switches.
Expansion add_switch(const Topology& t, int ports, std::uint64_t seed);

/// Re-applies a recorded step to the topology it was derived from.
Topology apply(const Topology& t, const ExpansionStep& step);

/// Removes floor(fraction * links) switch-switch links chosen uniformly
/// without replacement. The result may be disconnected.
Topology fail_links(const Topology& t, double fraction, std::uint64_t seed);

inline constexpr std::string_view kExpansionMagic = "jellynet-expansion";

/// Expansion log text:
///
///     jellynet-expansion 1
///     step <add_rack|add_switch> switch <u> ports <k> servers <s>
///     remove <v> <w>
///     add <u> <v>
///     add <u> <w>
///     ...
///
/// Further steps append `step` blocks.
std::string serialize_log(const std::vector<ExpansionStep>& steps);
std::string serialize_step(const ExpansionStep& step);
std::vector<ExpansionStep> parse_log(std::string_view text);

}  // namespace jellynet::expand
