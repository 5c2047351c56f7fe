#include <doctest.h>

#include <algorithm>
#include <set>

#include "jellynet/metrics.hpp"
#include "jellynet/route.hpp"
#include "jellynet/topo.hpp"

using namespace jellynet;

namespace {

void all_simple(const Topology& t, SwitchId at, SwitchId dst, std::vector<char>& seen, route::Path& cur,
                std::vector<route::Path>& out) {
    if (at == dst) {
        out.push_back(cur);
        return;
    }
    for (auto v : t.neighbors(at)) {
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = 1;
        cur.push_back(v);
        all_simple(t, v, dst, seen, cur, out);
        cur.pop_back();
        seen[static_cast<std::size_t>(v)] = 0;
    }
}

std::vector<route::Path> brute_force(const Topology& t, SwitchId src, SwitchId dst) {
    std::vector<char> seen(static_cast<std::size_t>(t.switch_count()), 0);
    seen[static_cast<std::size_t>(src)] = 1;
    route::Path cur{src};
    std::vector<route::Path> out;
    all_simple(t, src, dst, seen, cur, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

}  // namespace

TEST_CASE("k shortest paths on K4") {
    const auto k4 = topo::build_rrg(4, 3, 3, 1);
    const auto p = route::k_shortest_paths(k4, 0, 3, 8);
    REQUIRE(p.paths.size() == 5);
    CHECK(p.paths[0] == route::Path{0, 3});
    CHECK(p.paths[1].size() == 3);
    CHECK(p.paths[2].size() == 3);
    CHECK(p.paths[3].size() == 4);
    CHECK(p.paths[4].size() == 4);
    const auto e = route::ecmp_paths(k4, 0, 3, 8);
    CHECK(e.paths.size() == 1);
}

TEST_CASE("Yen agrees with brute force enumeration") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto t = topo::build_rrg(10, 4, 3, seed);
        for (SwitchId dst = 1; dst < 10; dst += 4) {
            const auto all = brute_force(t, 0, dst);
            for (int k : {1, 3, 8, 20}) {
                const auto got = route::k_shortest_paths(t, 0, dst, k);
                const auto want = std::min<std::size_t>(static_cast<std::size_t>(k), all.size());
                REQUIRE(got.paths.size() == want);
                std::set<route::Path> distinct(got.paths.begin(), got.paths.end());
                CHECK(distinct.size() == got.paths.size());
                for (std::size_t i = 0; i < want; ++i) {
                    CHECK(route::valid_path(t, got.paths[i], 0, dst));
                    CHECK(got.paths[i].size() == all[i].size());
                }
            }
        }
    }
}

TEST_CASE("ECMP returns shortest paths with prefix monotonicity") {
    const auto t = topo::build_rrg(60, 8, 5, 3);
    for (SwitchId dst : {7, 31, 59}) {
        const auto from = metrics::bfs_distances(t, 0);
        const int hops = from[static_cast<std::size_t>(dst)];
        // count shortest paths by dynamic programming over BFS layers
        std::vector<std::uint64_t> ways(static_cast<std::size_t>(t.switch_count()), 0);
        ways[0] = 1;
        for (int h = 1; h <= hops; ++h)
            for (SwitchId v = 0; v < t.switch_count(); ++v)
                if (from[static_cast<std::size_t>(v)] == h)
                    for (auto u : t.neighbors(v))
                        if (from[static_cast<std::size_t>(u)] == h - 1)
                            ways[static_cast<std::size_t>(v)] += ways[static_cast<std::size_t>(u)];
        const auto shortest = static_cast<std::size_t>(ways[static_cast<std::size_t>(dst)]);
        route::PathSet prev;
        for (int limit = 1; limit <= 16; ++limit) {
            const auto cur = route::ecmp_paths(t, 0, dst, limit);
            CHECK(cur.paths.size() == std::min<std::size_t>(static_cast<std::size_t>(limit), shortest));
            for (const auto& p : cur.paths) {
                CHECK(route::valid_path(t, p, 0, dst));
                CHECK(static_cast<int>(p.size()) == hops + 1);
            }
            CHECK(std::equal(prev.paths.begin(), prev.paths.end(), cur.paths.begin()));
            prev = cur;
        }
    }
}

TEST_CASE("path validation") {
    const auto k4 = topo::build_rrg(4, 3, 3, 1);
    CHECK(route::valid_path(k4, {0, 1, 3}, 0, 3));
    CHECK_FALSE(route::valid_path(k4, {0, 1, 0, 3}, 0, 3));
    CHECK_FALSE(route::valid_path(k4, {0, 1}, 0, 3));
    CHECK_FALSE(route::valid_path(k4, {}, 0, 3));
    CHECK_THROWS_AS(route::ecmp_paths(k4, 1, 1, 4), InvalidArgument);
    CHECK_THROWS_AS(route::k_shortest_paths(k4, 0, 1, 0), InvalidArgument);
    const Topology split(TopologyKind::imported, std::vector<SwitchSpec>(4, {1, 0}), {Link::make(0, 1), Link::make(2, 3)},
                         0);
    CHECK_THROWS_AS(route::ecmp_paths(split, 0, 3, 2), RuntimeError);
}

TEST_CASE("link path counts") {
    const auto t = topo::build_rrg(30, 6, 4, 8);
    const std::vector<std::pair<SwitchId, SwitchId>> flows{{0, 9}, {9, 0}, {3, 17}, {3, 17}, {25, 4}};
    for (auto mode : {route::Mode::ecmp, route::Mode::ksp}) {
        const auto counts = route::link_path_counts(t, flows, mode, 8);
        CHECK(counts.size() == 2 * t.link_count());
        std::vector<std::uint64_t> expected(counts.size(), 0);
        for (const auto& [a, b] : flows)
            for (const auto& p : route::paths_for(t, a, b, mode, 8).paths)
                for (std::size_t i = 0; i + 1 < p.size(); ++i)
                    ++expected[static_cast<std::size_t>(t.directed_link_id(p[i], p[i + 1]))];
        CHECK(counts == expected);
    }
    const std::vector<std::uint64_t> c{0, 1, 2, 3, 5};
    CHECK(route::fraction_at_most(c, 2) == doctest::Approx(0.6));
    CHECK(route::rank_csv(std::vector<std::uint64_t>{3, 1}) == "rank,count\n0,1\n1,3\n");
}
