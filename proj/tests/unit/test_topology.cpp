#include <doctest.h>

#include "jellynet/topology.hpp"

using namespace jellynet;

namespace {

Topology square() {
    return Topology(TopologyKind::imported, std::vector<SwitchSpec>(4, {3, 1}),
                    {Link::make(2, 3), Link::make(1, 0), Link::make(3, 0), Link::make(1, 2)}, 7);
}

}  // namespace

TEST_CASE("links are normalized and sorted") {
    const auto t = square();
    REQUIRE(t.link_count() == 4);
    CHECK(t.links()[0] == Link{0, 1});
    CHECK(t.links()[1] == Link{0, 3});
    CHECK(t.links()[2] == Link{1, 2});
    CHECK(t.links()[3] == Link{2, 3});
    const auto n = t.neighbors(0);
    CHECK(std::vector<SwitchId>(n.begin(), n.end()) == std::vector<SwitchId>{1, 3});
}

TEST_CASE("directed link ids") {
    const auto t = square();
    CHECK(t.directed_link_id(0, 1) == 0);
    CHECK(t.directed_link_id(1, 0) == 1);
    CHECK(t.directed_link_id(3, 2) == 7);
    CHECK(t.directed_link_id(0, 2) == -1);
    CHECK(t.has_link(3, 0));
    CHECK_FALSE(t.has_link(1, 3));
}

TEST_CASE("servers are numbered by switch") {
    const Topology t(TopologyKind::imported, {{4, 2}, {4, 0}, {4, 3}}, {Link::make(0, 1), Link::make(1, 2)}, 0);
    CHECK(t.server_count() == 5);
    CHECK(t.first_server(2) == 2);
    CHECK(t.switch_of(0) == 0);
    CHECK(t.switch_of(1) == 0);
    CHECK(t.switch_of(2) == 2);
    CHECK(t.switch_of(4) == 2);
    CHECK(t.free_ports(1) == 2);
    CHECK(t.is_connected());
}

TEST_CASE("invalid links are rejected") {
    const std::vector<SwitchSpec> specs(3, {2, 0});
    CHECK_THROWS_AS(Topology(TopologyKind::rrg, specs, {Link{1, 1}}, 0), InvalidArgument);
    CHECK_THROWS_AS(Topology(TopologyKind::rrg, specs, {Link::make(0, 1), Link::make(1, 0)}, 0), InvalidArgument);
    CHECK_THROWS_AS(Topology(TopologyKind::rrg, specs, {Link::make(0, 3)}, 0), InvalidArgument);
    // switch 1 would need 3 ports
    CHECK_THROWS_AS(Topology(TopologyKind::rrg, {{2, 0}, {2, 1}, {2, 0}}, {Link::make(0, 1), Link::make(1, 2)}, 0),
                    InvalidArgument);
}

TEST_CASE("disconnected graph") {
    const Topology t(TopologyKind::imported, std::vector<SwitchSpec>(4, {1, 0}), {Link::make(0, 1), Link::make(2, 3)},
                     0);
    CHECK_FALSE(t.is_connected());
}

TEST_CASE("kind tags round trip") {
    for (auto k : {TopologyKind::rrg, TopologyKind::fat_tree, TopologyKind::swdc_ring, TopologyKind::swdc_torus2d,
                   TopologyKind::swdc_hex3d, TopologyKind::layered_rrg, TopologyKind::imported})
        CHECK(parse_kind(to_string(k)) == k);
    CHECK_FALSE(parse_kind("clos").has_value());
}

TEST_CASE("metadata lookup and equality") {
    const auto t = square().with_metadata({{"retries", "2"}});
    CHECK(t.meta("retries") == "2");
    CHECK_FALSE(t.meta("pods").has_value());
    CHECK_FALSE(t == square());
    CHECK(square() == square());
}
