#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cocite/citation_graph.hpp"
#include "cocite/distfit.hpp"
#include "cocite/rng.hpp"

namespace cocite {

enum class SynthFamily { powerlaw, lognormal };

struct SynthSpec {
    SynthFamily family = SynthFamily::powerlaw;
    double alpha = 2.5;  // powerlaw
    double mu = 0.0;     // lognormal
    double sigma = 1.0;  // lognormal
    std::int64_t x_min = 1;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

std::unique_ptr<TailDistribution> make_distribution(const SynthSpec& spec);

// Exact sampler: inverse-CDF table up to the point where the remaining tail
// mass drops below 1e-12 (or the table cap), then an analytic tail draw.
class DiscreteSampler {
public:
    explicit DiscreteSampler(const TailDistribution& dist);
    std::int64_t draw(Rng& rng) const;

private:
    std::unique_ptr<TailDistribution> dist_;
    std::vector<double> cumulative_;  // P(X <= x_min + i)
    std::int64_t table_end_;          // first value handled by the tail draw
};

// i.i.d. draws per the spec, reproducible by seed.
std::vector<std::int64_t> sample_discrete(const SynthSpec& spec);

struct CorpusSpec {
    std::size_t n_pubs = 10000;
    int year_from = 1950;
    int year_to = 2000;
    double attach_exponent = 1.0;  // attachment weight (in-degree + 1)^exponent
    int min_refs = 5;
    int max_refs = 20;
    std::uint64_t seed = 1;
};

// Time-ordered preferential-attachment citation corpus: publication i cites
// earlier publications with probability proportional to (in-degree + 1)^g.
// Node ids are zero-padded ("P0000123"), so id order equals time order and
// every edge points strictly backward.
CitationGraph gen_citation_corpus(const CorpusSpec& spec);

}  // namespace cocite
