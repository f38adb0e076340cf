#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocite/copairs.hpp"
#include "cocite/distfit.hpp"

namespace cocite {

// One chi-squared bin covering the integer interval [lo, hi]; hi is
// kNoUpperBound for the rightmost bin. `values` are the observed unique
// frequencies assigned to the bin, in construction (descending) order.
struct Bin {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<std::int64_t> values;
    double observed = 0.0;
    double expected = 0.0;
};

struct BinSet {
    std::vector<Bin> bins;  // construction order: extreme right tail first
    double e_min = 0.0;
    std::int64_t n_total = 0;
    int violations = 0;  // bins with expected < e_min
};

// Reverse-order bin construction: unique observed frequencies are folded in
// descending order into the open bin, which closes once its expected count
// reaches e_min. Bins cover integer intervals, so expected counts account
// for unobserved support and sum to N over [x_min, inf).
BinSet build_bins(const TailSample& t, const TailDistribution& dist, double e_min);

enum class GofTest { chi2, ks, kl_obs_fit, kl_fit_obs, independence };
enum class Verdict { fit, no_fit, insufficient_data };

std::string to_string(Verdict v);

struct GofReport {
    GofTest test = GofTest::chi2;
    double statistic = 0.0;
    std::optional<double> p_value;
    std::optional<int> df;
    std::optional<Verdict> verdict;
};

// Pearson statistic over the bins; df = k - 1 - n_fitted_params.
GofReport chi2_test(const BinSet& bins, int n_fitted_params);

// max_x |F_obs - F_dist| over all integers in [x_min, max observed].
double ks_statistic(const TailSample& t, const TailDistribution& dist);

enum class KsVariant {
    two_sample_simulation,  // null from pairs of simulated samples
    one_sample_simulation,  // classical parametric simulation, for comparison
};

// Simulation K-S test: p is the fraction of simulated null statistics at or
// above the observed one, so n_sim = 100 gives 1% resolution. Deterministic
// given the seed for any worker count.
GofReport ks_test(const TailSample& t, const TailDistribution& dist, int n_sim,
                  std::uint64_t seed, KsVariant variant = KsVariant::two_sample_simulation,
                  int workers = 1);

enum class KlDirection { obs_vs_fit, fit_vs_obs };

// Kullback-Leibler divergence over the observed support (descriptive only).
double kl_divergence(const TailSample& t, const TailDistribution& dist, KlDirection dir);

// Chi-squared independence test of theta strata vs co-citation frequency.
// Frequency bins start as {[10,100), [100,1000), [1000,10^4), [10^4, inf)}
// and collapse to {[10,100), [100, inf)} when any expected count drops
// below 5.
GofReport independence_test(const std::vector<CoPair>& pairs);

struct GridConfig {
    std::vector<double> theta_edges = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<std::int64_t> x_min_values = {10, 25, 50, 100, 200};
    std::vector<double> e_min_values = {10.0, 20.0, 50.0, 70.0};
    int ks_replicates = 100;
    std::uint64_t seed = 0;
    int workers = 1;
    std::int64_t min_obs = 10;  // fewer observations marks the cell insufficient
};

struct FamilyCellResult {
    bool fitted = false;
    double param1 = 0.0;  // alpha or mu
    double param2 = 0.0;  // unused or sigma
    double loglik = 0.0;
    double ks_p = 0.0;
    std::vector<double> chi2_p;  // aligned with e_min_values; NaN when df < 1
    double kl_obs_fit = 0.0;
    double kl_fit_obs = 0.0;
    bool fits = false;  // K-S p > 0.05, or at least two chi2 p > 0.05
};

struct GridCell {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    bool connected = false;
    std::int64_t x_min = 0;
    std::int64_t n_obs = 0;
    std::size_t n_distinct = 0;
    FamilyCellResult powerlaw;
    FamilyCellResult lognormal;
    bool both_fit = false;
    std::string verdict;  // powerlaw | lognormal | neither | insufficient
};

// Stratified fit grid over (theta bin, connectedness, x_min) cells; only
// pairs with a defined theta participate.
std::vector<GridCell> fit_grid(const std::vector<CoPair>& pairs, const GridConfig& config);

}  // namespace cocite
