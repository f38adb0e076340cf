#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cocite/citation_graph.hpp"
#include "cocite/copairs.hpp"

namespace cocite {

// N(x) and N(y): the exclusive citer sets of a pair, restricted to
// publications no later than the cutoff year. Disjoint by construction.
struct ProxyNeighborhoods {
    std::vector<NodeIndex> nx;  // cite x but not y, year <= cutoff_year
    std::vector<NodeIndex> ny;  // cite y but not x, year <= cutoff_year
    int cutoff_year = 0;
};

enum class ThetaStatus { ok, undefined, not_found };

std::string to_string(ThetaStatus s);

struct ThetaResult {
    std::int64_t edge_count = 0;  // |E(x,y)|, directed, parallel edges count twice
    std::int64_t nx_size = 0;
    std::int64_t ny_size = 0;
    double raw_theta = 0.0;  // edge_count / (nx_size * ny_size)
    double theta = 0.0;      // min(raw_theta, 1)
    bool clamped = false;
    ThetaStatus status = ThetaStatus::ok;
};

ProxyNeighborhoods proxy_neighborhoods(const CitationGraph& g, NodeIndex x, NodeIndex y,
                                       int cutoff_year);

// Number of directed edges between nx and ny (both directions; a mutual
// citation contributes two). Throws DomainError if either side is empty.
std::int64_t proxy_edge_count(const CitationGraph& g, const ProxyNeighborhoods& n);

// theta for one pair at the given cutoff. An empty neighborhood yields
// status=undefined; undefined is a missing value, never zero.
ThetaResult compute_theta(const CitationGraph& g, NodeIndex x, NodeIndex y, int cutoff_year);
ThetaResult compute_theta(const CitationGraph& g, const CoPair& pair);

// Batched computation over the shared immutable graph. Results are
// order-aligned with the input and identical for any worker count; per-pair
// failures are recorded in their slots.
std::vector<ThetaResult> theta_batch(const CitationGraph& g, const std::vector<CoPair>& pairs,
                                     int batch_size, int workers);

}  // namespace cocite
