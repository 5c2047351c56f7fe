#include "jellynet/route.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "jellynet/metrics.hpp"

namespace jellynet::route {

std::string_view to_string(Mode mode) { return mode == Mode::ecmp ? "ecmp" : "ksp"; }

namespace {

void check_pair(const Topology& t, SwitchId src, SwitchId dst) {
    if (src < 0 || dst < 0 || src >= t.switch_count() || dst >= t.switch_count())
        throw InvalidArgument("switch id out of range");
    if (src == dst) throw InvalidArgument("routing needs distinct source and destination switches");
}

struct ShorterFirst {
    bool operator()(const Path& x, const Path& y) const {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    }
};

}  // namespace

PathSet ecmp_paths(const Topology& t, SwitchId src, SwitchId dst, int limit) {
    check_pair(t, src, dst);
    if (limit < 1) throw InvalidArgument("ECMP way limit must be positive");
    const auto to_dst = metrics::bfs_distances(t, dst);
    if (to_dst[static_cast<std::size_t>(src)] < 0) throw RuntimeError("destination unreachable");

    PathSet out{src, dst, Mode::ecmp, limit, {}};
    Path current{src};
    // Depth-first over the shortest-path DAG with ascending neighbor ids
    // yields paths in lexicographic order.
    auto walk = [&](auto&& self, SwitchId u) -> void {
        if (static_cast<int>(out.paths.size()) >= limit) return;
        if (u == dst) {
            out.paths.push_back(current);
            return;
        }
        const int du = to_dst[static_cast<std::size_t>(u)];
        for (auto v : t.neighbors(u)) {
            if (to_dst[static_cast<std::size_t>(v)] != du - 1) continue;
            current.push_back(v);
            self(self, v);
            current.pop_back();
            if (static_cast<int>(out.paths.size()) >= limit) return;
        }
    };
    walk(walk, src);
    return out;
}

namespace {

/// Lexicographically smallest shortest path from `spur` to `dst` that avoids
/// `blocked` switches and does not leave `spur` through `banned_first`.
std::optional<Path> spur_path(const Topology& t, SwitchId spur, SwitchId dst, const std::vector<char>& blocked,
                              const std::set<SwitchId>& banned_first) {
    std::vector<int> dist(static_cast<std::size_t>(t.switch_count()), -1);
    std::vector<SwitchId> queue{dst};
    dist[static_cast<std::size_t>(dst)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        for (auto v : t.neighbors(u)) {
            if (v == spur || blocked[static_cast<std::size_t>(v)] || dist[static_cast<std::size_t>(v)] >= 0) continue;
            dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
            queue.push_back(v);
        }
    }
    SwitchId first = -1;
    for (auto v : t.neighbors(spur)) {
        if (blocked[static_cast<std::size_t>(v)] || banned_first.count(v) || dist[static_cast<std::size_t>(v)] < 0)
            continue;
        if (first < 0 || dist[static_cast<std::size_t>(v)] < dist[static_cast<std::size_t>(first)]) first = v;
    }
    if (first < 0) return std::nullopt;
    Path p{spur, first};
    for (SwitchId u = first; u != dst;) {
        const int want = dist[static_cast<std::size_t>(u)] - 1;
        for (auto v : t.neighbors(u)) {
            if (v != spur && !blocked[static_cast<std::size_t>(v)] && dist[static_cast<std::size_t>(v)] == want) {
                u = v;
                break;
            }
        }
        p.push_back(u);
    }
    return p;
}

}  // namespace

PathSet k_shortest_paths(const Topology& t, SwitchId src, SwitchId dst, int k) {
    check_pair(t, src, dst);
    if (k < 1) throw InvalidArgument("k must be positive");
    PathSet out{src, dst, Mode::ksp, k, {}};
    auto first = ecmp_paths(t, src, dst, 1);
    out.paths.push_back(std::move(first.paths.front()));

    std::set<Path, ShorterFirst> candidates;
    std::vector<char> blocked(static_cast<std::size_t>(t.switch_count()), 0);
    while (static_cast<int>(out.paths.size()) < k) {
        const Path& last = out.paths.back();
        for (std::size_t i = 0; i + 1 < last.size(); ++i) {
            const SwitchId spur = last[i];
            std::set<SwitchId> banned;
            for (const auto& p : out.paths)
                if (p.size() > i + 1 && std::equal(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                                   last.begin()))
                    banned.insert(p[i + 1]);
            std::fill(blocked.begin(), blocked.end(), 0);
            for (std::size_t j = 0; j < i; ++j) blocked[static_cast<std::size_t>(last[j])] = 1;
            auto spur_part = spur_path(t, spur, dst, blocked, banned);
            if (!spur_part) continue;
            Path candidate(last.begin(), last.begin() + static_cast<std::ptrdiff_t>(i));
            candidate.insert(candidate.end(), spur_part->begin(), spur_part->end());
            candidates.insert(std::move(candidate));
        }
        // Drop candidates already accepted (possible when two accepted paths
        // generate the same deviation).
        while (!candidates.empty() &&
               std::find(out.paths.begin(), out.paths.end(), *candidates.begin()) != out.paths.end())
            candidates.erase(candidates.begin());
        if (candidates.empty()) break;
        out.paths.push_back(*candidates.begin());
        candidates.erase(candidates.begin());
    }
    return out;
}

PathSet paths_for(const Topology& t, SwitchId src, SwitchId dst, Mode mode, int limit) {
    return mode == Mode::ecmp ? ecmp_paths(t, src, dst, limit) : k_shortest_paths(t, src, dst, limit);
}

bool valid_path(const Topology& t, const Path& p, SwitchId src, SwitchId dst) {
    if (p.empty() || p.front() != src || p.back() != dst) return false;
    std::set<SwitchId> seen(p.begin(), p.end());
    if (seen.size() != p.size()) return false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (!t.has_link(p[i], p[i + 1])) return false;
    return true;
}

std::vector<std::uint64_t> link_path_counts(const Topology& t,
                                            std::span<const std::pair<SwitchId, SwitchId>> flows, Mode mode,
                                            int limit) {
    if (flows.empty()) throw InvalidArgument("need at least one flow");
    std::vector<std::uint64_t> counts(2 * t.link_count(), 0);
    std::map<std::pair<SwitchId, SwitchId>, std::vector<std::size_t>> cache;
    for (const auto& flow : flows) {
        auto it = cache.find(flow);
        if (it == cache.end()) {
            const auto set = paths_for(t, flow.first, flow.second, mode, limit);
            std::vector<std::size_t> ids;
            for (const auto& p : set.paths)
                for (std::size_t i = 0; i + 1 < p.size(); ++i)
                    ids.push_back(static_cast<std::size_t>(t.directed_link_id(p[i], p[i + 1])));
            it = cache.emplace(flow, std::move(ids)).first;
        }
        for (auto id : it->second) ++counts[id];
    }
    return counts;
}

double fraction_at_most(std::span<const std::uint64_t> counts, std::uint64_t threshold) {
    if (counts.empty()) return 0.0;
    const auto n = std::count_if(counts.begin(), counts.end(), [&](auto c) { return c <= threshold; });
    return static_cast<double>(n) / static_cast<double>(counts.size());
}

std::string rank_csv(std::span<const std::uint64_t> counts) {
    std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream out;
    out << "rank,count\n";
    for (std::size_t i = 0; i < sorted.size(); ++i) out << i << ',' << sorted[i] << '\n';
    return out.str();
}

}  // namespace jellynet::route
