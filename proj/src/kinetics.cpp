#include "cocite/kinetics.hpp"

#include <algorithm>

#include "cocite/errors.hpp"

namespace cocite {

CoTimeline cocitation_timeline(const CitationGraph& g, NodeIndex x, NodeIndex y) {
    if (x >= g.node_count() || y >= g.node_count())
        throw NotFoundError("cocitation_timeline: node index out of range");
    if (x == y) throw DomainError("cocitation_timeline: x and y must differ");
    CoTimeline tl;
    tl.t0 = std::max(g.year_of(x), g.year_of(y));

    // Intersect the citer sets, iterating the smaller side.
    const auto cx = g.in_neighbors(x);
    const auto cy = g.in_neighbors(y);
    const auto& small = cx.size() <= cy.size() ? cx : cy;
    const NodeIndex other = cx.size() <= cy.size() ? y : x;
    for (NodeIndex a : small) {
        if (!g.cites(a, other)) continue;
        const int year = g.year_of(a);
        if (year < tl.t0) {
            ++tl.dropped_pre_t0;  // inconsistent record: co-citer predates the pair
            continue;
        }
        ++tl.counts[year];
    }

    auto it0 = tl.counts.find(tl.t0);
    tl.c0 = it0 == tl.counts.end() ? 0 : it0->second;
    tl.peak_year = tl.t0;
    std::int64_t peak = tl.c0;
    for (const auto& [year, c] : tl.counts)
        if (c > peak) {  // strict: ties keep the earliest year
            peak = c;
            tl.peak_year = year;
        }
    return tl;
}

CoTimeline cocitation_timeline(const CitationGraph& g, const std::string& x,
                               const std::string& y) {
    return cocitation_timeline(g, g.index_of(x), g.index_of(y));
}

double beauty_coefficient(const CoTimeline& tl) {
    const int t0 = tl.t0;
    const int tp = tl.peak_year;
    if (tp <= t0) return 0.0;  // degenerate reference line
    auto count_at = [&](int year) -> std::int64_t {
        auto it = tl.counts.find(year);
        return it == tl.counts.end() ? 0 : it->second;
    };
    const double c0 = static_cast<double>(tl.c0);
    const double cp = static_cast<double>(count_at(tp));
    const double slope = (cp - c0) / static_cast<double>(tp - t0);
    double b = 0.0;
    for (int t = t0; t <= tp; ++t) {
        const double ct = static_cast<double>(count_at(t));
        const double line = slope * static_cast<double>(t - t0) + c0;
        b += (line - ct) / std::max(1.0, ct);
    }
    return b;
}

int timelag(const CoTimeline& tl) {
    for (const auto& [year, c] : tl.counts)
        if (c > 0) return year - tl.t0;
    throw DataError("timelag: pair has no co-citations");
}

}  // namespace cocite
