#include "link_graph.hpp"

#include <algorithm>
#include <cassert>
#include <queue>

namespace jellynet::detail {

LinkGraph::LinkGraph(const Topology& t) : adj_(static_cast<std::size_t>(t.switch_count())) {
    for (const auto& l : t.links()) add(l.a, l.b);
}

SwitchId LinkGraph::add_switch() {
    adj_.emplace_back();
    return static_cast<SwitchId>(adj_.size() - 1);
}

bool LinkGraph::adjacent(SwitchId a, SwitchId b) const {
    const auto& na = adj_[static_cast<std::size_t>(a)];
    const auto& nb = adj_[static_cast<std::size_t>(b)];
    const auto& small = na.size() <= nb.size() ? na : nb;
    const SwitchId other = na.size() <= nb.size() ? b : a;
    return std::find(small.begin(), small.end(), other) != small.end();
}

void LinkGraph::add(SwitchId a, SwitchId b) {
    assert(a != b && !adjacent(a, b));
    const Link l = Link::make(a, b);
    index_.emplace(key(l), links_.size());
    links_.push_back(l);
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
}

void LinkGraph::remove(SwitchId a, SwitchId b) {
    auto it = index_.find(key(Link::make(a, b)));
    if (it == index_.end()) throw InvalidArgument("no link " + std::to_string(a) + " " + std::to_string(b));
    remove_at(it->second);
}

void LinkGraph::remove_at(std::size_t index) {
    const Link l = links_[index];
    index_.erase(key(l));
    if (index + 1 != links_.size()) {
        links_[index] = links_.back();
        index_[key(links_[index])] = index;
    }
    links_.pop_back();
    auto drop = [](std::vector<SwitchId>& v, SwitchId x) {
        auto it = std::find(v.begin(), v.end(), x);
        *it = v.back();
        v.pop_back();
    };
    drop(adj_[static_cast<std::size_t>(l.a)], l.b);
    drop(adj_[static_cast<std::size_t>(l.b)], l.a);
}

bool LinkGraph::connected() const {
    if (adj_.size() <= 1) return true;
    std::vector<char> seen(adj_.size(), 0);
    std::queue<SwitchId> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (auto v : adj_[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                q.push(v);
            }
        }
    }
    return reached == adj_.size();
}

namespace {

class Pool {
public:
    explicit Pool(const std::vector<int>& free_ports) {
        for (std::size_t s = 0; s < free_ports.size(); ++s)
            if (free_ports[s] > 0) members_.push_back(static_cast<SwitchId>(s));
    }
    std::size_t size() const { return members_.size(); }
    SwitchId operator[](std::size_t i) const { return members_[i]; }
    void drop_exhausted(const std::vector<int>& free_ports) {
        std::erase_if(members_, [&](SwitchId s) { return free_ports[static_cast<std::size_t>(s)] <= 0; });
    }
    const std::vector<SwitchId>& members() const { return members_; }

private:
    std::vector<SwitchId> members_;
};

}  // namespace

bool fill_free_ports(LinkGraph& g, std::vector<int>& free_ports, Rng& rng, const PairFilter& can_pair,
                     const PairFilter& can_break, std::size_t swap_budget) {
    Pool pool(free_ports);
    auto joinable = [&](SwitchId a, SwitchId b) { return a != b && !g.adjacent(a, b) && can_pair(a, b); };
    auto join = [&](SwitchId a, SwitchId b) {
        g.add(a, b);
        --free_ports[static_cast<std::size_t>(a)];
        --free_ports[static_cast<std::size_t>(b)];
        if (free_ports[static_cast<std::size_t>(a)] == 0 || free_ports[static_cast<std::size_t>(b)] == 0)
            pool.drop_exhausted(free_ports);
    };

    std::size_t misses = 0;
    while (pool.size() >= 2) {
        const auto p = pool.size();
        const auto i = rng.index(p);
        auto j = rng.index(p - 1);
        if (j >= i) ++j;
        const SwitchId a = pool[i];
        const SwitchId b = pool[j];
        if (joinable(a, b)) {
            join(a, b);
            misses = 0;
            continue;
        }
        if (++misses <= 4 * p + 16) continue;

        // Sampling keeps missing: enumerate what is left.
        std::vector<std::pair<SwitchId, SwitchId>> candidates;
        for (std::size_t x = 0; x < p; ++x)
            for (std::size_t y = x + 1; y < p; ++y)
                if (joinable(pool[x], pool[y])) candidates.emplace_back(pool[x], pool[y]);
        if (candidates.empty()) break;
        const auto& [x, y] = candidates[rng.index(candidates.size())];
        join(x, y);
        misses = 0;
    }
    return absorb_free_ports(g, free_ports, rng, can_pair, can_break, swap_budget);
}

bool absorb_free_ports(LinkGraph& g, std::vector<int>& free_ports, Rng& rng, const PairFilter& can_pair,
                       const PairFilter& can_break, std::size_t swap_budget) {
    std::size_t failures = 0;
    for (;;) {
        Pool pool(free_ports);
        int total = 0;
        SwitchId p = -1;
        for (auto s : pool.members()) {
            const int f = free_ports[static_cast<std::size_t>(s)];
            total += f;
            if (p < 0 || f > free_ports[static_cast<std::size_t>(p)]) p = s;
        }
        if (total < 2) return true;

        SwitchId q = p;
        if (free_ports[static_cast<std::size_t>(p)] < 2) {
            std::vector<SwitchId> others;
            for (auto s : pool.members())
                if (s != p) others.push_back(s);
            q = others[rng.index(others.size())];
        }
        if (g.link_count() == 0) return false;

        for (;;) {
            const auto idx = rng.index(g.link_count());
            Link l = g.link(idx);
            if (rng.below(2) == 1) std::swap(l.a, l.b);
            const SwitchId x = l.a;
            const SwitchId y = l.b;
            const bool ok = x != p && x != q && y != p && y != q && !g.adjacent(p, x) &&
                            !g.adjacent(q, y) && can_break(x, y) && can_pair(p, x) && can_pair(q, y);
            if (!ok) {
                if (++failures >= swap_budget) return false;
                continue;
            }
            g.remove_at(idx);
            g.add(p, x);
            g.add(q, y);
            --free_ports[static_cast<std::size_t>(p)];
            --free_ports[static_cast<std::size_t>(q)];
            break;
        }
    }
}

}  // namespace jellynet::detail
