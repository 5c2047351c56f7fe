#include "jellynet/traffic.hpp"

#include <numeric>

#include "jellynet/rng.hpp"

namespace jellynet::flow {

TrafficMatrix random_permutation(ServerId servers, std::uint64_t seed) {
    if (servers < 2) throw InvalidArgument("permutation traffic needs at least two servers");
    Rng rng(seed);
    TrafficMatrix tm{servers, std::vector<ServerId>(static_cast<std::size_t>(servers)), seed};
    for (;;) {
        std::iota(tm.dst.begin(), tm.dst.end(), ServerId{0});
        rng.shuffle(tm.dst.begin(), tm.dst.end());
        if (is_derangement(tm)) return tm;
    }
}

bool is_derangement(const TrafficMatrix& tm) {
    if (tm.dst.size() != static_cast<std::size_t>(tm.servers)) return false;
    std::vector<char> hit(tm.dst.size(), 0);
    for (std::size_t i = 0; i < tm.dst.size(); ++i) {
        const auto d = tm.dst[i];
        if (d < 0 || d >= tm.servers || static_cast<std::size_t>(d) == i || hit[static_cast<std::size_t>(d)])
            return false;
        hit[static_cast<std::size_t>(d)] = 1;
    }
    return true;
}

std::vector<std::pair<SwitchId, SwitchId>> switch_flows(const Topology& t, const TrafficMatrix& tm) {
    if (tm.servers != t.server_count()) throw InvalidArgument("traffic matrix does not match the server count");
    std::vector<std::pair<SwitchId, SwitchId>> out;
    out.reserve(tm.dst.size());
    for (ServerId s = 0; s < tm.servers; ++s) {
        const auto a = t.switch_of(s);
        const auto b = t.switch_of(tm.dst[static_cast<std::size_t>(s)]);
        if (a != b) out.emplace_back(a, b);
    }
    return out;
}

}  // namespace jellynet::flow
