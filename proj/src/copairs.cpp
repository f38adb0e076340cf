#include "cocite/copairs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cocite/errors.hpp"
#include "cocite/parallel.hpp"

namespace cocite {

std::vector<double> hazen_percentiles(const std::vector<std::int64_t>& counts) {
    const std::size_t n = counts.size();
    if (n == 0) throw DataError("hazen_percentiles: empty input");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });

    std::vector<double> pct(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && counts[order[j + 1]] == counts[order[i]]) ++j;
        // ranks i+1 .. j+1 are tied; average their plotting positions
        const double mean_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        const double p = (mean_rank - 0.5) / static_cast<double>(n);
        for (std::size_t k = i; k <= j; ++k) pct[order[k]] = p;
        i = j + 1;
    }
    return pct;
}

std::unordered_map<std::string, double> hazen_percentiles(
    const std::vector<std::pair<std::string, std::int64_t>>& values) {
    std::vector<std::int64_t> counts;
    counts.reserve(values.size());
    for (const auto& [id, c] : values) counts.push_back(c);
    const auto pct = hazen_percentiles(counts);
    std::unordered_map<std::string, double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[values[i].first] = pct[i];
    return out;
}

HighlyCitedSet build_highly_cited(const CitationGraph& g, double cutoff) {
    if (!(cutoff > 0.0 && cutoff < 1.0))
        throw DomainError("build_highly_cited: cutoff must be in (0,1)");
    std::map<int, std::vector<NodeIndex>> by_year;
    for (NodeIndex v = 0; v < g.node_count(); ++v) by_year[g.year_of(v)].push_back(v);

    HighlyCitedSet hcs;
    hcs.member.assign(g.node_count(), false);
    hcs.percentile_cutoff = cutoff;
    for (const auto& [year, nodes] : by_year) {
        std::vector<std::int64_t> counts;
        counts.reserve(nodes.size());
        for (NodeIndex v : nodes) counts.push_back(static_cast<std::int64_t>(g.in_degree(v)));
        const auto pct = hazen_percentiles(counts);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (pct[i] >= cutoff) {
                hcs.member[nodes[i]] = true;
                ++hcs.size;
            }
        }
    }
    return hcs;
}

namespace {

// Canonical order follows the id token, not the internal index.
struct IdRank {
    std::vector<std::uint32_t> rank;
    explicit IdRank(const CitationGraph& g) : rank(g.node_count()) {
        std::vector<NodeIndex> order(g.node_count());
        for (NodeIndex v = 0; v < g.node_count(); ++v) order[v] = v;
        std::sort(order.begin(), order.end(),
                  [&](NodeIndex a, NodeIndex b) { return g.id_of(a) < g.id_of(b); });
        for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    }
};

struct PairAccum {
    std::int64_t frequency = 0;
    int first_year = 0;
};

using PairKey = std::uint64_t;

inline PairKey make_key(NodeIndex x, NodeIndex y) {
    return (static_cast<std::uint64_t>(x) << 32) | y;
}

void emit_article_pairs(const CitationGraph& g, const HighlyCitedSet& hcs, const IdRank& ranks,
                        NodeIndex citing, int min_refs,
                        const std::function<void(const PairEmission&)>& emit) {
    const auto refs = g.out_neighbors(citing);
    if (refs.size() < static_cast<std::size_t>(min_refs)) return;
    std::vector<NodeIndex> cited;
    for (NodeIndex r : refs)
        if (hcs.contains(r)) cited.push_back(r);
    if (cited.size() < 2) return;
    std::sort(cited.begin(), cited.end(),
              [&](NodeIndex a, NodeIndex b) { return ranks.rank[a] < ranks.rank[b]; });
    for (std::size_t i = 0; i < cited.size(); ++i)
        for (std::size_t j = i + 1; j < cited.size(); ++j)
            emit(PairEmission{citing, cited[i], cited[j]});
}

std::vector<CoPair> finalize(const CitationGraph& g,
                             std::unordered_map<PairKey, PairAccum>&& acc) {
    std::vector<CoPair> out;
    out.reserve(acc.size());
    for (const auto& [key, a] : acc) {
        const NodeIndex x = static_cast<NodeIndex>(key >> 32);
        const NodeIndex y = static_cast<NodeIndex>(key & 0xffffffffu);
        CoPair p;
        p.x = g.id_of(x);
        p.y = g.id_of(y);
        p.frequency = a.frequency;
        p.first_year = a.first_year;
        p.connected = g.cites(x, y) || g.cites(y, x);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), [](const CoPair& a, const CoPair& b) {
        return std::tie(a.x, a.y) < std::tie(b.x, b.y);
    });
    return out;
}

}  // namespace

void generate_pairs(const CitationGraph& g, const HighlyCitedSet& hcs, YearRange range,
                    int min_refs, const std::function<void(const PairEmission&)>& emit) {
    if (min_refs < 1) throw DomainError("generate_pairs: min_refs must be >= 1");
    IdRank ranks(g);
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const int year = g.year_of(v);
        if (year < range.from || year > range.to) continue;
        emit_article_pairs(g, hcs, ranks, v, min_refs, emit);
    }
}

std::vector<CoPair> aggregate_pairs(const std::vector<PairEmission>& stream,
                                    const CitationGraph& g) {
    std::unordered_map<PairKey, PairAccum> acc;
    for (const auto& e : stream) {
        auto& a = acc[make_key(e.x, e.y)];
        const int year = g.year_of(e.citing);
        if (a.frequency == 0 || year < a.first_year) a.first_year = year;
        ++a.frequency;
    }
    return finalize(g, std::move(acc));
}

std::vector<CoPair> build_copairs(const CitationGraph& g, const HighlyCitedSet& hcs,
                                  YearRange range, int min_refs, int workers) {
    if (min_refs < 1) throw DomainError("build_copairs: min_refs must be >= 1");
    IdRank ranks(g);
    std::vector<NodeIndex> articles;
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const int year = g.year_of(v);
        if (year >= range.from && year <= range.to) articles.push_back(v);
    }

    if (workers < 1) workers = 1;
    const std::size_t n_parts = std::max<std::size_t>(1, std::min<std::size_t>(workers, articles.size()));
    std::vector<std::unordered_map<PairKey, PairAccum>> partial(n_parts);
    const std::size_t chunk = (articles.size() + n_parts - 1) / n_parts;
    parallel_for(n_parts, workers, [&](std::size_t part) {
        const std::size_t lo = part * chunk;
        const std::size_t hi = std::min(articles.size(), lo + chunk);
        auto& local = partial[part];
        for (std::size_t i = lo; i < hi; ++i) {
            emit_article_pairs(g, hcs, ranks, articles[i], min_refs,
                               [&](const PairEmission& e) {
                                   auto& a = local[make_key(e.x, e.y)];
                                   const int year = g.year_of(e.citing);
                                   if (a.frequency == 0 || year < a.first_year)
                                       a.first_year = year;
                                   ++a.frequency;
                               });
        }
    });

    std::unordered_map<PairKey, PairAccum> merged;
    for (auto& part : partial) {
        for (const auto& [key, a] : part) {
            auto& m = merged[key];
            if (m.frequency == 0 || a.first_year < m.first_year) m.first_year = a.first_year;
            m.frequency += a.frequency;
        }
        part.clear();
    }
    return finalize(g, std::move(merged));
}

std::vector<std::int64_t> frequency_quantiles(const std::vector<std::int64_t>& frequencies,
                                              const std::vector<double>& probs) {
    if (frequencies.empty()) throw DataError("frequency_quantiles: empty input");
    for (double p : probs)
        if (!(p > 0.0 && p < 1.0)) throw DomainError("frequency_quantiles: probs must be in (0,1)");
    std::vector<std::int64_t> sorted(frequencies);
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int64_t> out;
    out.reserve(probs.size());
    const double n = static_cast<double>(sorted.size());
    for (double p : probs) {
        const auto rank = static_cast<std::size_t>(std::ceil(p * n));  // 1-based nearest rank
        out.push_back(sorted[std::max<std::size_t>(rank, 1) - 1]);
    }
    return out;
}

std::vector<std::int64_t> frequency_quantiles(const std::vector<CoPair>& pairs,
                                              const std::vector<double>& probs) {
    std::vector<std::int64_t> freqs;
    freqs.reserve(pairs.size());
    for (const auto& p : pairs) freqs.push_back(p.frequency);
    return frequency_quantiles(freqs, probs);
}

}  // namespace cocite
