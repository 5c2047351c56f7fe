#include <doctest.h>

#include <algorithm>
#include <set>

#include "jellynet/metrics.hpp"
#include "jellynet/rng.hpp"
#include "jellynet/topo.hpp"

using namespace jellynet;

TEST_CASE("rrg parameter errors") {
    CHECK_THROWS_AS(topo::build_rrg(10, 4, 9, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_rrg(4, 3, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_rrg(0, 3, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_rrg(5, 3, -1, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_rrg(5, 3, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_rrg(5, 3, 1, 1), InvalidArgument);
}

TEST_CASE("rrg on four switches of degree three is K4") {
    const auto t = topo::build_rrg(4, 3, 3, 5);
    CHECK(t.link_count() == 6);
    CHECK(t.server_count() == 0);
    for (SwitchId a = 0; a < 4; ++a)
        for (SwitchId b = a + 1; b < 4; ++b) CHECK(t.has_link(a, b));
}

TEST_CASE("rrg with 686 servers") {
    const auto t = topo::build_rrg(98, 14, 7, 1);
    CHECK(t.switch_count() == 98);
    CHECK(t.server_count() == 686);
    for (SwitchId s = 0; s < 98; ++s) CHECK(t.degree(s) == 7);
    CHECK(t.is_connected());
    CHECK(t.kind() == TopologyKind::rrg);
}

TEST_CASE("tiny rrg edge cases") {
    const auto one = topo::build_rrg(1, 4, 0, 1);
    CHECK(one.switch_count() == 1);
    CHECK(one.server_count() == 4);
    const auto two = topo::build_rrg(2, 3, 1, 1);
    CHECK(two.link_count() == 1);
}

TEST_CASE("odd N*r leaves one port") {
    const auto t = topo::build_rrg(9, 5, 3, 3);
    int short_switches = 0;
    for (SwitchId s = 0; s < 9; ++s) {
        CHECK(t.degree(s) >= 2);
        CHECK(t.degree(s) <= 3);
        if (t.degree(s) == 2) ++short_switches;
        CHECK(t.servers(s) == 2);
    }
    CHECK(short_switches == 1);
}

TEST_CASE("rrg invariants over random parameters") {
    Rng rng(2024);
    for (int c = 0; c < 100; ++c) {
        const int n = 3 + static_cast<int>(rng.below(60));
        const int r = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n - 2, 10))));
        const int k = r + static_cast<int>(rng.below(5));
        const std::uint64_t seed = rng.next();
        CAPTURE(n);
        CAPTURE(r);
        CAPTURE(seed);
        const auto t = topo::build_rrg(n, k, r, seed);
        CHECK(t.is_connected());
        int deficient = 0;
        for (SwitchId s = 0; s < n; ++s) {
            CHECK(t.servers(s) == k - r);
            if (t.degree(s) != r) {
                CHECK(t.degree(s) == r - 1);
                ++deficient;
            }
        }
        CHECK(deficient == ((n * r) % 2));
        CHECK(t.link_count() == static_cast<std::size_t>((n * r) / 2));
        CHECK(t == topo::build_rrg(n, k, r, seed));
    }
}

TEST_CASE("different seeds give different graphs") {
    CHECK_FALSE(topo::build_rrg(40, 8, 5, 1).links().size() == 0);
    const auto a = topo::build_rrg(40, 8, 5, 1);
    const auto b = topo::build_rrg(40, 8, 5, 2);
    CHECK_FALSE(std::equal(a.links().begin(), a.links().end(), b.links().begin(), b.links().end()));
}

TEST_CASE("heterogeneous random graph") {
    std::vector<SwitchSpec> specs{{6, 2}, {6, 2}, {8, 2}, {8, 2}, {4, 1}, {4, 1}, {6, 0}};
    const std::vector<int> degrees{4, 4, 6, 6, 3, 3, 6};
    const auto t = topo::build_random_graph(specs, degrees, 9);
    CHECK(t.is_connected());
    int total = 0;
    for (SwitchId s = 0; s < t.switch_count(); ++s) {
        CHECK(t.degree(s) <= degrees[static_cast<std::size_t>(s)]);
        total += degrees[static_cast<std::size_t>(s)] - t.degree(s);
    }
    CHECK(total <= 1);
    CHECK_THROWS_AS(topo::build_random_graph(specs, std::vector<int>{4, 4, 6}, 1), InvalidArgument);
}

TEST_CASE("fat-tree closed forms") {
    for (int kp : {4, 6, 8, 10, 12, 14}) {
        const auto t = topo::build_fat_tree(kp);
        CAPTURE(kp);
        CHECK(t.server_count() == kp * kp * kp / 4);
        CHECK(t.switch_count() == 5 * kp * kp / 4);
        CHECK(t.link_count() == static_cast<std::size_t>(kp * kp * kp / 2));
        const auto s = metrics::fat_tree_stats(kp);
        CHECK(s.servers == kp * kp * kp / 4);
        CHECK(s.switches == 5 * kp * kp / 4);
        CHECK(s.switch_links == kp * kp * kp / 2);
        for (SwitchId x = 0; x < t.switch_count(); ++x) CHECK(t.degree(x) + t.servers(x) == kp);
    }
    const auto ft4 = topo::build_fat_tree(4);
    CHECK(ft4.server_count() == 16);
    CHECK(ft4.switch_count() == 20);
    CHECK(ft4.meta("pods") == "4");
    CHECK_THROWS_AS(topo::build_fat_tree(5), InvalidArgument);
    CHECK_THROWS_AS(topo::build_fat_tree(0), InvalidArgument);
}

TEST_CASE("fat-tree wiring") {
    const int kp = 6;
    const int h = kp / 2;
    const auto t = topo::build_fat_tree(kp);
    for (int p = 0; p < kp; ++p) {
        for (int e = 0; e < h; ++e) {
            const SwitchId edge = p * kp + e;
            CHECK(t.servers(edge) == h);
            for (int a = 0; a < h; ++a) CHECK(t.has_link(edge, p * kp + h + a));
        }
        for (int a = 0; a < h; ++a) {
            const SwitchId agg = p * kp + h + a;
            CHECK(t.servers(agg) == 0);
            int cores = 0;
            for (auto v : t.neighbors(agg))
                if (v >= kp * kp) ++cores;
            CHECK(cores == h);
        }
    }
    // every core reaches each pod exactly once
    for (SwitchId c = kp * kp; c < t.switch_count(); ++c) {
        std::set<int> pods;
        for (auto v : t.neighbors(c)) pods.insert(v / kp);
        CHECK(pods.size() == static_cast<std::size_t>(kp));
    }
    const auto containers = topo::fat_tree_containers(kp);
    CHECK(containers.size() == static_cast<std::size_t>(t.switch_count()));
    CHECK(containers[static_cast<std::size_t>(kp * kp)] == 0);
    CHECK(containers[static_cast<std::size_t>(kp * kp + 1)] == 1);
}

TEST_CASE("hex3d factorization") {
    CHECK(topo::hex3d_dimensions(450) == std::vector<int>{5, 9, 10});
    CHECK(topo::hex3d_dimensions(27) == std::vector<int>{3, 3, 3});
    CHECK(topo::hex3d_dimensions(29).empty());
    CHECK(topo::hex3d_dimensions(18).empty());
}

TEST_CASE("lattice distances") {
    const std::vector<int> ring{10};
    CHECK(topo::lattice_distance(topo::Lattice::ring, ring, 0, 9) == 1);
    CHECK(topo::lattice_distance(topo::Lattice::ring, ring, 2, 7) == 5);
    const std::vector<int> torus{4, 4};
    CHECK(topo::lattice_distance(topo::Lattice::torus2d, torus, 0, 15) == 2);
    CHECK(topo::lattice_distance(topo::Lattice::torus2d, torus, 0, 10) == 4);
}

TEST_CASE("small-world lattices keep their lattice edges") {
    SUBCASE("ring") {
        const auto t = topo::build_swdc(topo::Lattice::ring, 60, 6, 1, 4);
        CHECK(t.kind() == TopologyKind::swdc_ring);
        for (SwitchId s = 0; s < 60; ++s) {
            CHECK(t.has_link(s, (s + 1) % 60));
            CHECK(t.servers(s) == 1);
            CHECK(t.degree(s) <= 6);
            CHECK(t.degree(s) >= 5);
        }
        CHECK(t.is_connected());
    }
    SUBCASE("2d torus") {
        const auto t = topo::build_swdc(topo::Lattice::torus2d, 64, 6, 2, 4);
        for (SwitchId s = 0; s < 64; ++s) {
            const int x = s % 8, y = s / 8;
            CHECK(t.has_link(s, y * 8 + (x + 1) % 8));
            CHECK(t.has_link(s, ((y + 1) % 8) * 8 + x));
        }
        CHECK_THROWS_AS(topo::build_swdc(topo::Lattice::torus2d, 60, 6, 1, 1), InvalidArgument);
    }
    SUBCASE("hex3d") {
        const auto t = topo::build_swdc(topo::Lattice::hex3d, 60, 8, 1, 4);
        CHECK(t.meta("dims").has_value());
        int lattice_links = 0;
        const auto dims = topo::hex3d_dimensions(60);
        for (const auto& l : t.links())
            if (topo::lattice_distance(topo::Lattice::hex3d, dims, l.a, l.b) == 1) ++lattice_links;
        CHECK(lattice_links >= 60 * 3);
        for (SwitchId s = 0; s < 60; ++s) CHECK(t.degree(s) >= 6);
    }
}

TEST_CASE("two-layer graph of two 4-switch containers") {
    const auto t = topo::build_layered_rrg(2, 4, 4, 2, 2, 0, 11);
    CHECK(t.kind() == TopologyKind::layered_rrg);
    CHECK(t.link_count() == 16);
    const auto container = topo::container_assignment(t);
    int cross = 0;
    for (const auto& l : t.links())
        if (container[static_cast<std::size_t>(l.a)] != container[static_cast<std::size_t>(l.b)]) ++cross;
    CHECK(cross == 8);
    // A 2-regular simple graph on 4 labeled nodes is one of the three 4-cycles.
    for (int c = 0; c < 2; ++c) {
        std::set<std::pair<int, int>> local;
        for (const auto& l : t.links())
            if (container[static_cast<std::size_t>(l.a)] == c && container[static_cast<std::size_t>(l.b)] == c)
                local.insert({l.a - 4 * c, l.b - 4 * c});
        const std::set<std::set<std::pair<int, int>>> cycles{
            {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {{0, 1}, {1, 3}, {2, 3}, {0, 2}}, {{0, 2}, {1, 2}, {1, 3}, {0, 3}}};
        CHECK(cycles.count(local) == 1);
    }
    // every switch has two partners in the other container: all 8 cross pairs
    CHECK(t.link_count() - 8 == 8);
}

TEST_CASE("two-layer local fraction") {
    const int C = 12, M = 16, r = 10;
    const auto t = topo::build_layered_rrg(C, M, 15, r / 2, r / 2, 5, 3);
    const auto container = topo::container_assignment(t);
    const double lf = metrics::local_fraction(t, container);
    CHECK(std::abs(lf - 0.5) <= 1.0 / static_cast<double>(t.link_count()) + 1e-12);
    for (SwitchId s = 0; s < t.switch_count(); ++s) {
        int local = 0, global = 0;
        for (auto v : t.neighbors(s))
            (container[static_cast<std::size_t>(v)] == container[static_cast<std::size_t>(s)] ? local : global)++;
        CHECK(local == r / 2);
        CHECK(global >= r / 2 - 1);
        CHECK(global <= r / 2);
    }
}

TEST_CASE("two-layer errors and degenerate case") {
    CHECK_THROWS_AS(topo::build_layered_rrg(1, 8, 6, 3, 1, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_layered_rrg(2, 4, 6, 4, 1, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_layered_rrg(2, 5, 6, 3, 1, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(topo::build_layered_rrg(2, 4, 4, 2, 2, 1, 1), InvalidArgument);
    const auto single = topo::build_layered_rrg(1, 8, 6, 3, 0, 2, 1);
    CHECK(single.is_connected());
    CHECK(single.link_count() == 12);
}
