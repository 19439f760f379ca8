#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace motif {

using NodeId = std::string;

/// Directed weighted graph of abstract coordinates. Undirected maps are symmetric edge pairs.
class Map {
public:
    using Edge = std::pair<NodeId, NodeId>;

    static Map line(long k);
    static Map ring(long k);
    static Map grid(long w, long h);

    bool has_node(const NodeId& n) const { return nodes_.count(n) != 0; }
    bool has_edge(const NodeId& from, const NodeId& to) const { return edges_.count({from, to}) != 0; }

    const std::set<NodeId>& nodes() const { return nodes_; }
    const std::map<Edge, long>& edges() const { return edges_; }

    void add_node(const NodeId& n);
    /// Also drops incident edges. Occupancy is checked by the configuration, not here.
    void remove_node(const NodeId& n);
    void add_edge(const NodeId& from, const NodeId& to, long weight = 1);
    void remove_edge(const NodeId& from, const NodeId& to);

    /// Minimum-weight directed path length; nullopt when unreachable.
    std::optional<long> distance(const NodeId& from, const NodeId& to) const;

    friend bool operator==(const Map& a, const Map& b)
    {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    struct DistanceTable {
        std::map<NodeId, std::size_t> index;
        std::vector<long> dist;  // row-major, -1 = unreachable
    };

    const DistanceTable& table() const;
    void invalidate() { table_.reset(); }

    std::set<NodeId> nodes_;
    std::map<Edge, long> edges_;
    // Lazily built all-pairs table; rebuilt after any edit.
    mutable std::shared_ptr<const DistanceTable> table_;
};

}  // namespace motif
