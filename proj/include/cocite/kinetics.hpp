#pragma once

#include <cstdint>
#include <map>

#include "cocite/citation_graph.hpp"

namespace cocite {

// Year-by-year co-citation counts for a pair, starting at t0, the first year
// the pair could be co-cited (publication year of its more recent member).
struct CoTimeline {
    int t0 = 0;
    std::map<int, std::int64_t> counts;  // year -> co-citations, years >= t0 only
    std::int64_t c0 = 0;                 // counts[t0], 0 if absent
    int peak_year = 0;                   // earliest year attaining the maximum
    std::int64_t dropped_pre_t0 = 0;     // co-citing articles dated before t0
};

CoTimeline cocitation_timeline(const CitationGraph& g, NodeIndex x, NodeIndex y);
CoTimeline cocitation_timeline(const CitationGraph& g, const std::string& x,
                               const std::string& y);

// Beauty coefficient adapted to co-citation timelines: sums, over the years
// from t0 to the peak, the gap between the straight reference line from
// (t0, c0) to the peak and the actual counts, scaled by max(1, c_t).
// Missing years inside the range count as zero; a peak at t0 gives B = 0.
double beauty_coefficient(const CoTimeline& tl);

// Years from t0 to the first observed co-citation; 0 when the first
// co-citation happened in t0 itself. No co-citations at all is an error,
// not zero.
int timelag(const CoTimeline& tl);

}  // namespace cocite
