#include "cocite/theta.hpp"

#include <algorithm>

#include "cocite/errors.hpp"
#include "cocite/parallel.hpp"

namespace cocite {

std::string to_string(ThetaStatus s) {
    switch (s) {
        case ThetaStatus::ok: return "ok";
        case ThetaStatus::undefined: return "undefined";
        case ThetaStatus::not_found: return "not_found";
    }
    return "?";
}

ProxyNeighborhoods proxy_neighborhoods(const CitationGraph& g, NodeIndex x, NodeIndex y,
                                       int cutoff_year) {
    if (x >= g.node_count() || y >= g.node_count())
        throw NotFoundError("proxy_neighborhoods: node index out of range");
    if (x == y) throw DomainError("proxy_neighborhoods: x and y must differ");
    ProxyNeighborhoods n;
    n.cutoff_year = cutoff_year;
    for (NodeIndex a : g.in_neighbors(x))
        if (g.year_of(a) <= cutoff_year && !g.cites(a, y)) n.nx.push_back(a);
    for (NodeIndex b : g.in_neighbors(y))
        if (g.year_of(b) <= cutoff_year && !g.cites(b, x)) n.ny.push_back(b);
    return n;
}

std::int64_t proxy_edge_count(const CitationGraph& g, const ProxyNeighborhoods& n) {
    if (n.nx.empty() || n.ny.empty())
        throw DomainError("proxy_edge_count: neighborhood is empty, theta undefined");
    // Adjacency lists and neighborhood vectors are sorted; count each
    // direction by binary-searching out-edges in the opposite set.
    std::int64_t edges = 0;
    for (NodeIndex a : n.nx)
        for (NodeIndex t : g.out_neighbors(a))
            if (std::binary_search(n.ny.begin(), n.ny.end(), t)) ++edges;
    for (NodeIndex b : n.ny)
        for (NodeIndex t : g.out_neighbors(b))
            if (std::binary_search(n.nx.begin(), n.nx.end(), t)) ++edges;
    return edges;
}

ThetaResult compute_theta(const CitationGraph& g, NodeIndex x, NodeIndex y, int cutoff_year) {
    const ProxyNeighborhoods n = proxy_neighborhoods(g, x, y, cutoff_year);
    ThetaResult r;
    r.nx_size = static_cast<std::int64_t>(n.nx.size());
    r.ny_size = static_cast<std::int64_t>(n.ny.size());
    if (n.nx.empty() || n.ny.empty()) {
        r.status = ThetaStatus::undefined;
        return r;
    }
    r.edge_count = proxy_edge_count(g, n);
    r.raw_theta = static_cast<double>(r.edge_count) /
                  (static_cast<double>(r.nx_size) * static_cast<double>(r.ny_size));
    r.clamped = r.raw_theta > 1.0;
    r.theta = r.clamped ? 1.0 : r.raw_theta;
    return r;
}

ThetaResult compute_theta(const CitationGraph& g, const CoPair& pair) {
    const auto x = g.find(pair.x);
    const auto y = g.find(pair.y);
    if (!x || !y) {
        ThetaResult r;
        r.status = ThetaStatus::not_found;
        return r;
    }
    return compute_theta(g, *x, *y, pair.first_year);
}

std::vector<ThetaResult> theta_batch(const CitationGraph& g, const std::vector<CoPair>& pairs,
                                     int batch_size, int workers) {
    if (batch_size < 1) throw DomainError("theta_batch: batch_size must be >= 1");
    std::vector<ThetaResult> results(pairs.size());
    const std::size_t n_batches =
        (pairs.size() + static_cast<std::size_t>(batch_size) - 1) /
        static_cast<std::size_t>(batch_size);
    parallel_for(n_batches, workers, [&](std::size_t batch) {
        const std::size_t lo = batch * static_cast<std::size_t>(batch_size);
        const std::size_t hi = std::min(pairs.size(), lo + static_cast<std::size_t>(batch_size));
        for (std::size_t i = lo; i < hi; ++i) results[i] = compute_theta(g, pairs[i]);
    });
    return results;
}

}  // namespace cocite
