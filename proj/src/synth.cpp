#include "cocite/synth.hpp"

#include <algorithm>
#include <cmath>

#include "cocite/errors.hpp"

namespace cocite {

std::unique_ptr<TailDistribution> make_distribution(const SynthSpec& spec) {
    if (spec.family == SynthFamily::powerlaw)
        return std::make_unique<PowerLawDist>(spec.alpha, spec.x_min);
    return std::make_unique<LognormalDist>(spec.mu, spec.sigma, spec.x_min);
}

DiscreteSampler::DiscreteSampler(const TailDistribution& dist) : dist_(dist.clone()) {
    constexpr double kTailMass = 1e-12;
    constexpr std::size_t kTableCap = 1 << 16;
    double cum = 0.0;
    std::int64_t x = dist_->x_min();
    while (cumulative_.size() < kTableCap) {
        cum += dist_->pmf(x);
        cumulative_.push_back(cum);
        if (1.0 - cum < kTailMass) break;
        ++x;
    }
    table_end_ = dist_->x_min() + static_cast<std::int64_t>(cumulative_.size());
}

std::int64_t DiscreteSampler::draw(Rng& rng) const {
    const double u = rng.next_double();
    if (u < cumulative_.back()) {
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return dist_->x_min() + static_cast<std::int64_t>(it - cumulative_.begin());
    }
    return dist_->sample_tail(rng, table_end_);
}

std::vector<std::int64_t> sample_discrete(const SynthSpec& spec) {
    if (spec.n < 1) throw DomainError("sample_discrete: n must be >= 1");
    const auto dist = make_distribution(spec);
    const DiscreteSampler sampler(*dist);
    Rng rng(spec.seed);
    std::vector<std::int64_t> out(spec.n);
    for (auto& v : out) v = sampler.draw(rng);
    return out;
}

namespace {

// Fenwick tree over attachment weights, supporting prefix-weight search.
class WeightTree {
public:
    explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0), total_(0.0) {}

    void add(std::size_t i, double w) {
        total_ += w;
        for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += w;
    }

    double total() const { return total_; }

    // Largest index with prefix sum <= target; assumes 0 <= target < total.
    std::size_t find(double target) const {
        std::size_t pos = 0;
        std::size_t mask = 1;
        while ((mask << 1) < tree_.size()) mask <<= 1;
        for (; mask > 0; mask >>= 1) {
            const std::size_t next = pos + mask;
            if (next < tree_.size() && tree_[next] <= target) {
                target -= tree_[next];
                pos = next;
            }
        }
        return pos;  // 0-based element index
    }

private:
    std::vector<double> tree_;
    double total_;
};

std::string padded_id(std::size_t i) {
    std::string digits = std::to_string(i);
    return "P" + std::string(digits.size() >= 8 ? 0 : 8 - digits.size(), '0') + digits;
}

}  // namespace

CitationGraph gen_citation_corpus(const CorpusSpec& spec) {
    if (spec.n_pubs < 10) throw DomainError("gen_citation_corpus: need at least 10 publications");
    if (spec.min_refs < 1 || spec.max_refs < spec.min_refs)
        throw DomainError("gen_citation_corpus: bad reference-count range");
    if (spec.year_to < spec.year_from) throw DomainError("gen_citation_corpus: bad year range");

    Rng rng(spec.seed);
    CitationGraph::Builder builder;
    const int span = spec.year_to - spec.year_from + 1;
    for (std::size_t i = 0; i < spec.n_pubs; ++i) {
        const int year = spec.year_from +
                         static_cast<int>(i * static_cast<std::size_t>(span) / spec.n_pubs);
        builder.add_node(padded_id(i), year);
    }

    WeightTree weights(spec.n_pubs);
    std::vector<std::int64_t> in_degree(spec.n_pubs, 0);
    auto weight_of = [&](std::int64_t deg) {
        return std::pow(static_cast<double>(deg) + 1.0, spec.attach_exponent);
    };

    std::vector<NodeIndex> targets;
    for (std::size_t v = 0; v < spec.n_pubs; ++v) {
        if (v > 0) {
            const std::size_t want =
                spec.min_refs +
                static_cast<std::size_t>(rng.next_below(
                    static_cast<std::uint64_t>(spec.max_refs - spec.min_refs + 1)));
            const std::size_t k = std::min(want, v);
            targets.clear();
            if (k == v) {
                for (std::size_t u = 0; u < v; ++u) targets.push_back(static_cast<NodeIndex>(u));
            } else {
                while (targets.size() < k) {
                    const double u = rng.next_double() * weights.total();
                    const auto pick = static_cast<NodeIndex>(weights.find(u));
                    if (pick >= v) continue;  // rounding artifact at the total
                    if (std::find(targets.begin(), targets.end(), pick) == targets.end())
                        targets.push_back(pick);
                }
            }
            for (NodeIndex t : targets) {
                builder.add_edge(static_cast<NodeIndex>(v), t);
                const double before = weight_of(in_degree[t]);
                ++in_degree[t];
                weights.add(t, weight_of(in_degree[t]) - before);
            }
        }
        weights.add(v, weight_of(0));
    }
    return builder.build();
}

}  // namespace cocite
