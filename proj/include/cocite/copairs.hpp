#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocite/citation_graph.hpp"

namespace cocite {

// A canonical unordered pair of highly cited publications, x < y by id token.
struct CoPair {
    std::string x;
    std::string y;
    std::int64_t frequency = 0;  // distinct citing articles citing both
    bool connected = false;      // one member cites the other
    int first_year = 0;          // earliest co-citing article year
    std::optional<double> theta;
};

// Hazen plotting positions (i - 0.5)/n for 1-based ascending ranks, with
// ties averaged over the tied ranks. Result is aligned with the input.
std::vector<double> hazen_percentiles(const std::vector<std::int64_t>& counts);
std::unordered_map<std::string, double> hazen_percentiles(
    const std::vector<std::pair<std::string, std::int64_t>>& values);

struct HighlyCitedSet {
    std::vector<bool> member;  // indexed by NodeIndex
    double percentile_cutoff = 0.0;
    std::size_t size = 0;
    bool contains(NodeIndex v) const { return v < member.size() && member[v]; }
};

// Members are the publications whose within-year Hazen percentile of
// in-degree is >= cutoff, unioned over publication years.
HighlyCitedSet build_highly_cited(const CitationGraph& g, double cutoff);

struct YearRange {
    int from = 0;
    int to = 0;  // inclusive
};

struct PairEmission {
    NodeIndex citing;
    NodeIndex x;  // canonical: id_of(x) < id_of(y)
    NodeIndex y;
};

// Emits every canonical pair of highly cited references for each citing
// article in range with at least min_refs references (of any kind).
void generate_pairs(const CitationGraph& g, const HighlyCitedSet& hcs, YearRange range,
                    int min_refs, const std::function<void(const PairEmission&)>& emit);

// Folds a pair stream into CoPair records: frequency counts distinct citing
// articles, first_year is their earliest year, connectedness comes from the
// graph. Result is sorted by (x, y).
std::vector<CoPair> aggregate_pairs(const std::vector<PairEmission>& stream,
                                    const CitationGraph& g);

// Fused generate + aggregate, partitioned by citing article across workers.
// Output is identical to the sequential aggregate_pairs path.
std::vector<CoPair> build_copairs(const CitationGraph& g, const HighlyCitedSet& hcs,
                                  YearRange range, int min_refs, int workers);

// Empirical quantiles of the frequency multiset, nearest-rank convention.
std::vector<std::int64_t> frequency_quantiles(const std::vector<std::int64_t>& frequencies,
                                              const std::vector<double>& probs);
std::vector<std::int64_t> frequency_quantiles(const std::vector<CoPair>& pairs,
                                              const std::vector<double>& probs);

}  // namespace cocite
