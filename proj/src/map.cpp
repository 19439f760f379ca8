#include "motif/map.hpp"

#include "motif/value.hpp"

#include <queue>

namespace motif {

Map Map::line(long k)
{
    Map m;
    for (long i = 0; i < k; ++i)
        m.nodes_.insert(std::to_string(i));
    for (long i = 0; i + 1 < k; ++i) {
        m.edges_[{std::to_string(i), std::to_string(i + 1)}] = 1;
        m.edges_[{std::to_string(i + 1), std::to_string(i)}] = 1;
    }
    return m;
}

Map Map::ring(long k)
{
    Map m = line(k);
    if (k > 2) {
        m.edges_[{std::to_string(k - 1), "0"}] = 1;
        m.edges_[{"0", std::to_string(k - 1)}] = 1;
    }
    return m;
}

Map Map::grid(long w, long h)
{
    Map m;
    auto id = [](long x, long y) { return std::to_string(x) + "_" + std::to_string(y); };
    for (long x = 0; x < w; ++x)
        for (long y = 0; y < h; ++y)
            m.nodes_.insert(id(x, y));
    for (long x = 0; x < w; ++x) {
        for (long y = 0; y < h; ++y) {
            if (x + 1 < w) {
                m.edges_[{id(x, y), id(x + 1, y)}] = 1;
                m.edges_[{id(x + 1, y), id(x, y)}] = 1;
            }
            if (y + 1 < h) {
                m.edges_[{id(x, y), id(x, y + 1)}] = 1;
                m.edges_[{id(x, y + 1), id(x, y)}] = 1;
            }
        }
    }
    return m;
}

void Map::add_node(const NodeId& n)
{
    nodes_.insert(n);
    invalidate();
}

void Map::remove_node(const NodeId& n)
{
    if (!has_node(n))
        throw Error(ErrorCode::UnknownNode, "node '" + n + "'");
    nodes_.erase(n);
    for (auto it = edges_.begin(); it != edges_.end();) {
        if (it->first.first == n || it->first.second == n)
            it = edges_.erase(it);
        else
            ++it;
    }
    invalidate();
}

void Map::add_edge(const NodeId& from, const NodeId& to, long weight)
{
    if (!has_node(from))
        throw Error(ErrorCode::UnknownNode, "node '" + from + "'");
    if (!has_node(to))
        throw Error(ErrorCode::UnknownNode, "node '" + to + "'");
    if (weight < 0)
        throw Error(ErrorCode::EffectError, "negative edge weight");
    edges_[{from, to}] = weight;
    invalidate();
}

void Map::remove_edge(const NodeId& from, const NodeId& to)
{
    if (edges_.erase({from, to}) == 0)
        throw Error(ErrorCode::UnknownEdge, "edge '" + from + "' -> '" + to + "'");
    invalidate();
}

const Map::DistanceTable& Map::table() const
{
    if (table_)
        return *table_;
    auto t = std::make_shared<DistanceTable>();
    std::vector<std::vector<std::pair<std::size_t, long>>> adj(nodes_.size());
    std::size_t i = 0;
    for (const auto& n : nodes_)
        t->index[n] = i++;
    for (const auto& [e, w] : edges_)
        adj[t->index[e.first]].push_back({t->index[e.second], w});
    const std::size_t n = nodes_.size();
    t->dist.assign(n * n, -1);
    using Item = std::pair<long, std::size_t>;
    for (std::size_t src = 0; src < n; ++src) {
        long* row = &t->dist[src * n];
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        row[src] = 0;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d != row[u])
                continue;
            for (auto [v, w] : adj[u]) {
                if (row[v] < 0 || d + w < row[v]) {
                    row[v] = d + w;
                    pq.push({row[v], v});
                }
            }
        }
    }
    table_ = t;
    return *table_;
}

std::optional<long> Map::distance(const NodeId& from, const NodeId& to) const
{
    if (!has_node(from))
        throw Error(ErrorCode::UnknownNode, "node '" + from + "'");
    if (!has_node(to))
        throw Error(ErrorCode::UnknownNode, "node '" + to + "'");
    const auto& t = table();
    const long d = t.dist[t.index.at(from) * nodes_.size() + t.index.at(to)];
    if (d < 0)
        return std::nullopt;
    return d;
}

}  // namespace motif
