#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jellynet/report.hpp"

namespace jellynet::experiments {

/// Shared by every experiment. Per-trial seeds are derive_seed(seed, stream,
/// trial) and derive_seed(traffic_seed, stream, trial); rows carry both.
struct Options {
    std::uint64_t seed = 1;
    std::uint64_t traffic_seed = 1;
    int trials = 10;
    double eps = 0.05;
    int jobs = 1;  // worker threads; rows never depend on it
};

/// Servers supported at full capacity, Jellyfish vs fat-tree, for every even
/// port count in [min_ports, max_ports] using the fat-tree's switch count.
struct Fig3cConfig {
    int min_ports = 4;
    int max_ports = 10;
};
ExperimentReport fig3c(const Fig3cConfig& config, const Options& options);

/// Incremental growth by whole racks vs from-scratch RRGs at each size.
struct Fig5Config {
    int start = 20;
    int step = 20;
    int end = 160;
    int ports = 12;
    int servers = 4;
};
ExperimentReport fig5(const Fig5Config& config, const Options& options);

/// Per-link path counts under ECMP and k-shortest paths. The default is the
/// fat_tree(14) switch set carrying the fat-tree's 686 servers.
struct Fig7Config {
    int switches = 245;
    int ports = 14;
    int servers = 686;
    int limit = 8;
    std::uint64_t threshold = 2;
};
ExperimentReport fig7(const Fig7Config& config, const Options& options);

/// Throughput under random link failures: Jellyfish vs the fat-tree built
/// from the same switches. The default 780 servers is the same-gear Jellyfish
/// size used against the 686-server fat-tree; servers = 0 picks
/// ceil(fat-tree servers / S) per switch instead.
struct Fig10Config {
    int ports = 14;
    int servers = 780;
    std::vector<double> fractions{0.0, 0.03, 0.06, 0.09, 0.12, 0.15};
};
ExperimentReport fig10(const Fig10Config& config, const Options& options);

/// Two-layer RRG throughput relative to an unrestricted RRG with the same
/// equipment and servers, as the local share of each switch's links grows.
/// Defaults follow fat-tree(16) gear: one container per pod, 20 switches each
/// (16 pod switches plus 4 cores), oversubscribed with 6 servers per switch.
struct Fig11Config {
    int containers = 16;
    int per_container = 20;
    int ports = 16;
    int degree = 10;
    int servers = 6;
    std::vector<double> local_fractions{0.0, 0.2, 0.4, 0.5, 0.6, 0.8};
};
ExperimentReport fig11(const Fig11Config& config, const Options& options);

/// Imported benchmark graphs vs RRGs of the same size and degree.
struct DdgConfig {
    std::vector<std::string> imports;
    int servers = 1;
    int ports = 0;  // 0: max degree + servers
};
ExperimentReport ddg(const DdgConfig& config, const Options& options);

/// Small-world lattices vs Jellyfish with the same degree and servers.
struct SwdcConfig {
    int switches = 484;
    int hex_switches = 450;
    int degree = 6;
    int servers = 2;
};
ExperimentReport swdc(const SwdcConfig& config, const Options& options);

/// Implemented experiment names. `legup` is reserved and not among them.
const std::vector<std::string>& names();

}  // namespace jellynet::experiments
