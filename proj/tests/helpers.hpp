#pragma once

#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cocite/citation_graph.hpp"
#include "cocite/rng.hpp"

namespace testutil {

inline cocite::CitationGraph make_graph(const std::string& nodes_csv,
                                        const std::string& edges_csv,
                                        cocite::IngestStats* stats = nullptr) {
    std::istringstream nodes(nodes_csv);
    std::istringstream edges(edges_csv);
    return cocite::CitationGraph::ingest(nodes, edges, {}, stats);
}

struct RandomGraphSpec {
    std::size_t n_nodes = 50;
    std::size_t n_edges = 200;
    int year_from = 1960;
    int year_to = 2000;
};

struct RandomGraphSource {
    std::string nodes_csv;
    std::string edges_csv;
    std::vector<std::pair<std::string, std::string>> unique_edges;
};

// Random edge soup, including occasional self-loops and duplicates, so the
// ingestion drop/dedup rules get exercised.
inline RandomGraphSource random_graph_source(cocite::Rng& rng, const RandomGraphSpec& spec) {
    RandomGraphSource src;
    std::ostringstream nodes, edges;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < spec.n_nodes; ++i) {
        std::string id = "n" + std::to_string(i);
        const int year = spec.year_from +
                         static_cast<int>(rng.next_below(
                             static_cast<std::uint64_t>(spec.year_to - spec.year_from + 1)));
        nodes << id << ',' << year << '\n';
        ids.push_back(std::move(id));
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 0; i < spec.n_edges; ++i) {
        const auto a = rng.next_below(spec.n_nodes);
        const auto b = rng.next_below(spec.n_nodes);
        edges << ids[a] << ',' << ids[b] << '\n';
        if (a != b) seen.insert({ids[a], ids[b]});
    }
    src.nodes_csv = nodes.str();
    src.edges_csv = edges.str();
    src.unique_edges.assign(seen.begin(), seen.end());
    return src;
}

}  // namespace testutil
