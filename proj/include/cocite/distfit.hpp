#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cocite/rng.hpp"

namespace cocite {

// Hurwitz zeta: sum_{k>=0} (k + x_min)^(-alpha), alpha > 1. Euler-Maclaurin
// tail correction keeps the absolute error below 1e-12 over the fitting
// range. hurwitz_zeta_deriv is the derivative in alpha.
double hurwitz_zeta(double alpha, double x_min);
double hurwitz_zeta_deriv(double alpha, double x_min);

// Unnormalized discrete lognormal cell: integral of the lognormal density
// over [x-0.5, x+0.5], evaluated through the normal CDF.
double lognormal_cell(std::int64_t x, double mu, double sigma);

// Tail-normalized pmfs on [x_min, inf).
double lognormal_pmf(std::int64_t x, double mu, double sigma, std::int64_t x_min);
double powerlaw_pmf(std::int64_t x, double alpha, std::int64_t x_min);

// A frequency multiset restricted to values >= x_min.
class TailSample {
public:
    static TailSample restrict(const std::vector<std::int64_t>& frequencies, std::int64_t x_min);
    static TailSample from_counts(std::map<std::int64_t, std::int64_t> counts,
                                  std::int64_t x_min);

    std::int64_t x_min() const { return x_min_; }
    std::int64_t total() const { return total_; }
    std::size_t distinct() const { return counts_.size(); }
    std::int64_t max_value() const { return counts_.rbegin()->first; }
    const std::map<std::int64_t, std::int64_t>& counts() const { return counts_; }

    // Observed tail pmf n(x)/N; zero off the observed support.
    double observed_pmf(std::int64_t x) const;
    // Weighted mean and population stdev of ln x over the sample.
    double mean_log() const;
    double stdev_log() const;

private:
    std::map<std::int64_t, std::int64_t> counts_;
    std::int64_t x_min_ = 1;
    std::int64_t total_ = 0;
};

constexpr std::int64_t kNoUpperBound = INT64_MAX;

// A fitted right-tail distribution on the integers >= x_min().
class TailDistribution {
public:
    virtual ~TailDistribution() = default;
    virtual double pmf(std::int64_t x) const = 0;
    virtual double log_pmf(std::int64_t x) const = 0;
    // P(lo <= X <= hi); hi = kNoUpperBound means the unbounded tail.
    virtual double interval_mass(std::int64_t lo, std::int64_t hi) const = 0;
    // Draw from the distribution conditioned on X >= from; exact.
    virtual std::int64_t sample_tail(Rng& rng, std::int64_t from) const = 0;
    virtual std::int64_t x_min() const = 0;
    virtual int n_params() const = 0;
    virtual std::string family() const = 0;
    virtual std::unique_ptr<TailDistribution> clone() const = 0;

    // F_d(x | x_min): cumulative mass of [x_min, x].
    double cdf(std::int64_t x) const { return x < x_min() ? 0.0 : interval_mass(x_min(), x); }
};

class PowerLawDist final : public TailDistribution {
public:
    PowerLawDist(double alpha, std::int64_t x_min);
    double pmf(std::int64_t x) const override;
    double log_pmf(std::int64_t x) const override;
    double interval_mass(std::int64_t lo, std::int64_t hi) const override;
    std::int64_t sample_tail(Rng& rng, std::int64_t from) const override;
    std::int64_t x_min() const override { return x_min_; }
    int n_params() const override { return 1; }
    std::string family() const override { return "powerlaw"; }
    std::unique_ptr<TailDistribution> clone() const override {
        return std::make_unique<PowerLawDist>(*this);
    }
    double alpha() const { return alpha_; }

private:
    double alpha_;
    std::int64_t x_min_;
    double zeta_;      // zeta(alpha, x_min)
    double log_zeta_;
};

class LognormalDist final : public TailDistribution {
public:
    LognormalDist(double mu, double sigma, std::int64_t x_min);
    double pmf(std::int64_t x) const override;
    double log_pmf(std::int64_t x) const override;
    double interval_mass(std::int64_t lo, std::int64_t hi) const override;
    std::int64_t sample_tail(Rng& rng, std::int64_t from) const override;
    std::int64_t x_min() const override { return x_min_; }
    int n_params() const override { return 2; }
    std::string family() const override { return "lognormal"; }
    std::unique_ptr<TailDistribution> clone() const override {
        return std::make_unique<LognormalDist>(*this);
    }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }

private:
    double z(double v) const;  // standardized log coordinate
    double mu_;
    double sigma_;
    std::int64_t x_min_;
    double denom_;      // sum of cells over [x_min, inf), telescoped
    double log_denom_;
};

struct PowerLawFit {
    double alpha = 0.0;
    std::int64_t x_min = 1;
    double loglik = 0.0;
    double residual = 0.0;  // first-order-condition residual at the root
    int iterations = 0;
};

struct LognormalFit {
    double mu = 0.0;
    double sigma = 0.0;
    std::int64_t x_min = 1;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    double simplex_diameter = 0.0;
};

// Maximum-likelihood exponent via bisection on the first-order condition
//   zeta'(alpha, x_min)/zeta(alpha, x_min) = -mean(ln x).
PowerLawFit fit_powerlaw(const TailSample& t);

// Maximum-likelihood (mu, sigma) via Nelder-Mead simplex with one restart.
LognormalFit fit_lognormal(const TailSample& t);

// Shared log-likelihood: sum_x n(x) ln f_d(x).
double loglik(const TailSample& t, const TailDistribution& dist);

}  // namespace cocite
