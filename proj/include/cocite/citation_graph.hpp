#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocite/csv.hpp"

namespace cocite {

using NodeIndex = std::uint32_t;

enum class Direction { out, in };

struct Publication {
    std::string id;  // opaque token, unique within a graph
    int year = 0;    // calendar year, validated to [1500, 2100]
};

struct IngestStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_unknown_endpoint = 0;
    std::size_t duplicate_edges = 0;
    std::size_t duplicate_nodes = 0;
};

// Immutable directed citation graph: an edge a -> b means "a cites b".
// Construction is single-threaded; afterwards the structure is read-only and
// safe to share across threads.
class CitationGraph {
public:
    class Builder {
    public:
        // Returns the index of the node; repeated insertion with the same
        // year is a counted no-op, a conflicting year is an error.
        NodeIndex add_node(std::string id, int year);
        void add_edge(NodeIndex citing, NodeIndex cited);
        CitationGraph build();
        IngestStats stats() const { return stats_; }

    private:
        friend class CitationGraph;
        std::vector<Publication> pubs_;
        std::unordered_map<std::string, NodeIndex> index_;
        std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
        IngestStats stats_;
    };

    // Loads (id, year) and (citing_id, cited_id) tables. Edges with unknown
    // endpoints and self-loops are dropped and counted; duplicates are
    // deduplicated. Malformed rows raise IngestError with the line number.
    static CitationGraph ingest(std::istream& nodes_src, std::istream& edges_src,
                                const DsvReader::Options& opts = {}, IngestStats* stats = nullptr);

    std::size_t node_count() const { return pubs_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::optional<NodeIndex> find(std::string_view id) const;
    NodeIndex index_of(std::string_view id) const;  // throws NotFoundError
    const std::string& id_of(NodeIndex v) const { return pubs_[v].id; }
    int year_of(NodeIndex v) const { return pubs_[v].year; }
    int year_of(std::string_view id) const { return pubs_[index_of(id)].year; }

    // Sorted, read-only adjacency views. out = references of v, in = citers.
    std::span<const NodeIndex> out_neighbors(NodeIndex v) const { return out_[v]; }
    std::span<const NodeIndex> in_neighbors(NodeIndex v) const { return in_[v]; }
    std::span<const NodeIndex> neighbors(NodeIndex v, Direction d) const {
        return d == Direction::out ? out_neighbors(v) : in_neighbors(v);
    }
    std::vector<std::string> neighbor_ids(std::string_view id, Direction d) const;

    bool cites(NodeIndex citing, NodeIndex cited) const;

    std::size_t out_degree(NodeIndex v) const { return out_[v].size(); }
    std::size_t in_degree(NodeIndex v) const { return in_[v].size(); }

    int min_year() const { return min_year_; }
    int max_year() const { return max_year_; }

    // Compact binary snapshot, round-trip stable.
    void save(std::ostream& out) const;
    static CitationGraph load(std::istream& in);

private:
    std::vector<Publication> pubs_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::vector<NodeIndex>> out_;
    std::vector<std::vector<NodeIndex>> in_;
    std::size_t edge_count_ = 0;
    int min_year_ = 0;
    int max_year_ = 0;
};

}  // namespace cocite
