#include "cocite/distfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cocite/errors.hpp"
#include "cocite/special_functions.hpp"

namespace cocite {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// B_{2j} / (2j)! for j = 1..8.
constexpr std::array<double, 8> kBernFact = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
};

struct ZetaPair {
    double zeta;
    double deriv;
};

// Euler-Maclaurin evaluation of the Hurwitz zeta and its s-derivative.
// Direct terms are summed until a + N >= max(25, 1.6 s), after which the
// integral term, the half-term, and eight Bernoulli corrections leave an
// absolute error far below 1e-12 for s in (1, 400].
ZetaPair hurwitz_zeta_pair(double s, double a) {
    if (!(s > 1.0)) throw DomainError("hurwitz_zeta: series diverges for alpha <= 1");
    if (!(a > 0.0)) throw DomainError("hurwitz_zeta: require x_min > 0");

    const double target = std::max(25.0, 1.6 * s);
    const long n_direct = a >= target ? 0 : static_cast<long>(std::ceil(target - a));

    double sum = 0.0, dsum = 0.0;
    for (long k = n_direct - 1; k >= 0; --k) {  // ascending magnitude
        const double base = a + static_cast<double>(k);
        const double lb = std::log(base);
        const double term = std::exp(-s * lb);
        sum += term;
        dsum -= lb * term;
    }

    const double u = a + static_cast<double>(n_direct);
    const double lu = std::log(u);
    const double inv = std::exp(-s * lu);  // u^{-s}

    // Integral term u^{1-s}/(s-1) and its derivative.
    const double integral = u * inv / (s - 1.0);
    sum += integral;
    dsum += integral * (-lu - 1.0 / (s - 1.0));

    // Half-term u^{-s}/2.
    sum += 0.5 * inv;
    dsum -= 0.5 * lu * inv;

    // Bernoulli corrections: B_{2j}/(2j)! * poch(s, 2j-1) * u^{-s-2j+1}.
    double poch = s;          // poch(s, 1)
    double psum = 1.0 / s;    // sum_{i<2j-1} 1/(s+i)
    double upow = inv / u;    // u^{-s-1}
    for (std::size_t j = 0; j < kBernFact.size(); ++j) {
        if (j > 0) {  // poch(s, 2j+1) = poch(s, 2j-1) * (s+2j-1)(s+2j)
            const double f1 = s + 2.0 * j - 1.0;
            const double f2 = s + 2.0 * j;
            poch *= f1 * f2;
            psum += 1.0 / f1 + 1.0 / f2;
            upow /= u * u;
        }
        const double term = kBernFact[j] * poch * upow;
        sum += term;
        dsum += term * (psum - lu);
    }
    return {sum, dsum};
}

}  // namespace

double hurwitz_zeta(double alpha, double x_min) {
    return hurwitz_zeta_pair(alpha, x_min).zeta;
}

double hurwitz_zeta_deriv(double alpha, double x_min) {
    return hurwitz_zeta_pair(alpha, x_min).deriv;
}

namespace {

// log of the standard normal survival function, safe far into the tail.
double log_normal_sf(double zval) {
    const double sf = normal_sf(zval);
    if (sf > 0.0) return std::log(sf);
    // Asymptotic head for z beyond erfc underflow (z > ~38.5).
    return -0.5 * zval * zval - std::log(zval) - 0.5 * kLog2Pi + std::log1p(-1.0 / (zval * zval));
}

}  // namespace

double lognormal_cell(std::int64_t x, double mu, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("lognormal_cell: sigma must be positive");
    if (x < 1) throw DomainError("lognormal_cell: x must be >= 1");
    const double xd = static_cast<double>(x);
    const double zlo = (std::log(xd - 0.5) - mu) / sigma;
    const double zhi = (std::log(xd + 0.5) - mu) / sigma;
    // Evaluate through the tail where erfc is accurate.
    if (zlo + zhi > 0.0) return normal_sf(zlo) - normal_sf(zhi);
    return normal_cdf(zhi) - normal_cdf(zlo);
}

double lognormal_pmf(std::int64_t x, double mu, double sigma, std::int64_t x_min) {
    if (x < x_min) throw DomainError("lognormal_pmf: x below x_min");
    return LognormalDist(mu, sigma, x_min).pmf(x);
}

double powerlaw_pmf(std::int64_t x, double alpha, std::int64_t x_min) {
    if (x < x_min) throw DomainError("powerlaw_pmf: x below x_min");
    return PowerLawDist(alpha, x_min).pmf(x);
}

TailSample TailSample::restrict(const std::vector<std::int64_t>& frequencies,
                                std::int64_t x_min) {
    if (x_min < 1) throw DomainError("tail_restrict: x_min must be >= 1");
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t v : frequencies)
        if (v >= x_min) ++counts[v];
    return from_counts(std::move(counts), x_min);
}

TailSample TailSample::from_counts(std::map<std::int64_t, std::int64_t> counts,
                                   std::int64_t x_min) {
    if (x_min < 1) throw DomainError("tail sample: x_min must be >= 1");
    TailSample t;
    t.x_min_ = x_min;
    for (const auto& [v, n] : counts) {
        if (v < x_min) throw DomainError("tail sample: value below x_min");
        if (n < 0) throw DomainError("tail sample: negative multiplicity");
        if (n > 0) t.total_ += n;
    }
    std::erase_if(counts, [](const auto& kv) { return kv.second == 0; });
    if (counts.empty() || t.total_ == 0) throw DataError("tail sample: no values at or above x_min");
    t.counts_ = std::move(counts);
    return t;
}

double TailSample::observed_pmf(std::int64_t x) const {
    auto it = counts_.find(x);
    if (it == counts_.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total_);
}

double TailSample::mean_log() const {
    double s = 0.0;
    for (const auto& [v, n] : counts_)
        s += static_cast<double>(n) * std::log(static_cast<double>(v));
    return s / static_cast<double>(total_);
}

double TailSample::stdev_log() const {
    const double m = mean_log();
    double s = 0.0;
    for (const auto& [v, n] : counts_) {
        const double d = std::log(static_cast<double>(v)) - m;
        s += static_cast<double>(n) * d * d;
    }
    return std::sqrt(s / static_cast<double>(total_));
}

// ---------------------------------------------------------------------------
// Power law

PowerLawDist::PowerLawDist(double alpha, std::int64_t x_min) : alpha_(alpha), x_min_(x_min) {
    if (!(alpha > 1.0)) throw DomainError("powerlaw: alpha must exceed 1");
    if (x_min < 1) throw DomainError("powerlaw: x_min must be >= 1");
    zeta_ = hurwitz_zeta(alpha_, static_cast<double>(x_min_));
    log_zeta_ = std::log(zeta_);
}

double PowerLawDist::pmf(std::int64_t x) const {
    if (x < x_min_) throw DomainError("powerlaw pmf: x below x_min");
    return std::exp(-alpha_ * std::log(static_cast<double>(x))) / zeta_;
}

double PowerLawDist::log_pmf(std::int64_t x) const {
    if (x < x_min_) throw DomainError("powerlaw pmf: x below x_min");
    return -alpha_ * std::log(static_cast<double>(x)) - log_zeta_;
}

double PowerLawDist::interval_mass(std::int64_t lo, std::int64_t hi) const {
    lo = std::max(lo, x_min_);
    if (hi != kNoUpperBound && hi < lo) return 0.0;
    if (hi == kNoUpperBound)
        return hurwitz_zeta(alpha_, static_cast<double>(lo)) / zeta_;
    if (hi - lo <= 4096) {  // direct summation avoids zeta cancellation
        double s = 0.0;
        for (std::int64_t x = hi; x >= lo; --x)
            s += std::exp(-alpha_ * std::log(static_cast<double>(x)));
        return s / zeta_;
    }
    return (hurwitz_zeta(alpha_, static_cast<double>(lo)) -
            hurwitz_zeta(alpha_, static_cast<double>(hi + 1))) /
           zeta_;
}

std::int64_t PowerLawDist::sample_tail(Rng& rng, std::int64_t from) const {
    from = std::max(from, x_min_);
    const double w = static_cast<double>(from) - 0.5;
    const double inv_exp = -1.0 / (alpha_ - 1.0);
    while (true) {
        // Continuous Pareto proposal on [from - 0.5, inf), rounded to the
        // nearest integer; the midpoint rule makes the acceptance ratio <= 1.
        const double v = w * std::pow(1.0 - rng.next_double(), inv_exp);
        if (!(v < 4.6e18)) continue;  // int64 overflow guard; vanishing mass
        const double xd = std::floor(v + 0.5);
        const std::int64_t x = static_cast<std::int64_t>(xd);
        const double cell = (std::pow(xd - 0.5, 1.0 - alpha_) - std::pow(xd + 0.5, 1.0 - alpha_)) /
                            (alpha_ - 1.0);
        const double accept = std::pow(xd, -alpha_) / cell;
        if (rng.next_double() < accept) return x;
    }
}

// ---------------------------------------------------------------------------
// Discrete lognormal

LognormalDist::LognormalDist(double mu, double sigma, std::int64_t x_min)
    : mu_(mu), sigma_(sigma), x_min_(x_min) {
    if (!(sigma > 0.0)) throw DomainError("lognormal: sigma must be positive");
    if (x_min < 1) throw DomainError("lognormal: x_min must be >= 1");
    // The cell sum over [x_min, inf) telescopes to the continuous upper tail
    // beyond ln(x_min - 0.5); x_min = 1 lands on ln(0.5), which is finite.
    const double zmin = z(static_cast<double>(x_min_) - 0.5);
    denom_ = normal_sf(zmin);
    log_denom_ = log_normal_sf(zmin);
}

double LognormalDist::z(double v) const { return (std::log(v) - mu_) / sigma_; }

double LognormalDist::pmf(std::int64_t x) const {
    if (x < x_min_) throw DomainError("lognormal pmf: x below x_min");
    return lognormal_cell(x, mu_, sigma_) / denom_;
}

double LognormalDist::log_pmf(std::int64_t x) const {
    if (x < x_min_) throw DomainError("lognormal pmf: x below x_min");
    const double cell = lognormal_cell(x, mu_, sigma_);
    if (cell > 0.0) return std::log(cell) - log_denom_;
    // Both endpoints underflowed; expand around the lower endpoint.
    const double zlo = z(static_cast<double>(x) - 0.5);
    const double zhi = z(static_cast<double>(x) + 0.5);
    const double la = log_normal_sf(zlo);
    const double lb = log_normal_sf(zhi);
    return la + std::log1p(-std::exp(lb - la)) - log_denom_;
}

double LognormalDist::interval_mass(std::int64_t lo, std::int64_t hi) const {
    lo = std::max(lo, x_min_);
    if (hi != kNoUpperBound && hi < lo) return 0.0;
    const double upper = hi == kNoUpperBound ? 0.0 : normal_sf(z(static_cast<double>(hi) + 0.5));
    return (normal_sf(z(static_cast<double>(lo) - 0.5)) - upper) / denom_;
}

std::int64_t LognormalDist::sample_tail(Rng& rng, std::int64_t from) const {
    from = std::max(from, x_min_);
    // Rounding a continuous lognormal draw reproduces the cell integrals
    // exactly, so conditioning on V >= from - 0.5 needs no rejection.
    const double sf_w = normal_sf(z(static_cast<double>(from) - 0.5));
    while (true) {
        const double s = sf_w * (1.0 - rng.next_double());
        if (s <= 0.0) continue;
        const double zval = -normal_quantile(s);
        const double v = std::exp(mu_ + sigma_ * zval);
        if (!(v < 4.6e18)) continue;  // int64 overflow guard; vanishing mass
        return static_cast<std::int64_t>(std::floor(v + 0.5));
    }
}

// ---------------------------------------------------------------------------
// Fitting

double loglik(const TailSample& t, const TailDistribution& dist) {
    if (dist.x_min() > t.x_min()) throw DomainError("loglik: sample extends below distribution domain");
    double s = 0.0;
    for (const auto& [v, n] : t.counts()) s += static_cast<double>(n) * dist.log_pmf(v);
    return s;
}

PowerLawFit fit_powerlaw(const TailSample& t) {
    const double a = static_cast<double>(t.x_min());
    const double mean_ln = t.mean_log();
    if (!(mean_ln > std::log(a) + 1e-12))
        throw NonIdentifiableError(
            "fit_powerlaw: all observations at x_min; exponent is unbounded");

    // h(alpha) = zeta'/zeta + mean_ln is increasing with a unique root.
    auto h = [&](double alpha) {
        const auto zp = hurwitz_zeta_pair(alpha, a);
        return zp.deriv / zp.zeta + mean_ln;
    };

    double lo = 1.0 + 1e-6;
    double hi = 50.0;
    if (h(lo) >= 0.0)
        throw NumericalError("fit_powerlaw: no root above alpha = 1");
    int expand = 0;
    while (h(hi) < 0.0) {
        hi *= 2.0;
        if (++expand > 12) throw NumericalError("fit_powerlaw: bracket expansion failed");
    }

    PowerLawFit fit;
    fit.x_min = t.x_min();
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        fit.iterations = it + 1;
        fit.residual = hm;
        if (std::fabs(hm) < 1e-9 || (hi - lo) < 1e-13 * std::max(1.0, mid)) break;
        if (hm < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    if (std::fabs(fit.residual) >= 1e-9 && (hi - lo) >= 1e-13 * std::max(1.0, mid))
        throw NumericalError("fit_powerlaw: bisection failed to converge");
    fit.alpha = mid;
    fit.loglik = loglik(t, PowerLawDist(fit.alpha, fit.x_min));
    return fit;
}

namespace {

struct SimplexResult {
    double mu = 0.0;
    double sigma = 0.0;
    double value = 0.0;  // minimized objective
    int iterations = 0;
    double diameter = 0.0;
    bool converged = false;
};

// Nelder-Mead on (mu, sigma), standard coefficients, terminating when the
// simplex diameter falls below tol.
template <typename F>
SimplexResult nelder_mead(F&& f, double mu0, double sigma0, double tol, int max_iter) {
    struct Vertex {
        double p[2];
        double v;
    };
    std::array<Vertex, 3> s;
    const double dmu = std::max(0.1, 0.1 * std::fabs(mu0));
    const double dsg = std::max(0.05, 0.1 * sigma0);
    s[0] = {{mu0, sigma0}, 0.0};
    s[1] = {{mu0 + dmu, sigma0}, 0.0};
    s[2] = {{mu0, sigma0 + dsg}, 0.0};
    for (auto& vx : s) vx.v = f(vx.p[0], vx.p[1]);

    auto diameter = [&] {
        double d = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double du = s[i].p[0] - s[j].p[0];
                const double dv = s[i].p[1] - s[j].p[1];
                d = std::max(d, std::sqrt(du * du + dv * dv));
            }
        return d;
    };

    SimplexResult out;
    int it = 0;
    for (; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
        out.diameter = diameter();
        if (out.diameter < tol) {
            out.converged = true;
            break;
        }
        const double cx = 0.5 * (s[0].p[0] + s[1].p[0]);
        const double cy = 0.5 * (s[0].p[1] + s[1].p[1]);
        auto point = [&](double coef) {
            return Vertex{{cx + coef * (cx - s[2].p[0]), cy + coef * (cy - s[2].p[1])}, 0.0};
        };
        Vertex refl = point(1.0);
        refl.v = f(refl.p[0], refl.p[1]);
        if (refl.v < s[0].v) {
            Vertex expd = point(2.0);
            expd.v = f(expd.p[0], expd.p[1]);
            s[2] = expd.v < refl.v ? expd : refl;
        } else if (refl.v < s[1].v) {
            s[2] = refl;
        } else {
            Vertex contr = point(refl.v < s[2].v ? 0.5 : -0.5);
            contr.v = f(contr.p[0], contr.p[1]);
            if (contr.v < std::min(refl.v, s[2].v)) {
                s[2] = contr;
            } else {  // shrink toward the best vertex
                for (int i = 1; i < 3; ++i) {
                    s[i].p[0] = s[0].p[0] + 0.5 * (s[i].p[0] - s[0].p[0]);
                    s[i].p[1] = s[0].p[1] + 0.5 * (s[i].p[1] - s[0].p[1]);
                    s[i].v = f(s[i].p[0], s[i].p[1]);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    out.mu = s[0].p[0];
    out.sigma = s[0].p[1];
    out.value = s[0].v;
    out.iterations = it;
    return out;
}

}  // namespace

LognormalFit fit_lognormal(const TailSample& t) {
    if (t.distinct() < 2)
        throw NonIdentifiableError("fit_lognormal: need at least two distinct values");

    auto objective = [&](double mu, double sigma) {
        if (!(sigma > 1e-12)) return 1e300 * (1.0 + std::fabs(sigma));
        const LognormalDist d(mu, sigma, t.x_min());
        double s = 0.0;
        for (const auto& [v, n] : t.counts()) s -= static_cast<double>(n) * d.log_pmf(v);
        return std::isfinite(s) ? s : 1e300;
    };

    const double mu0 = t.mean_log();
    const double sg0 = std::max(t.stdev_log(), 1e-3);
    constexpr double kTol = 1e-8;
    constexpr int kMaxIter = 4000;

    SimplexResult best = nelder_mead(objective, mu0, sg0, kTol, kMaxIter);
    // One restart from a perturbed optimum guards against a local trap.
    SimplexResult second = nelder_mead(objective, best.mu + 0.05 * (1.0 + std::fabs(best.mu)),
                                       best.sigma * 1.1 + 0.01, kTol, kMaxIter);
    const int total_iter = best.iterations + second.iterations;
    if (second.value < best.value) best = second;

    LognormalFit fit;
    fit.mu = best.mu;
    fit.sigma = best.sigma;
    fit.x_min = t.x_min();
    fit.loglik = -best.value;
    fit.converged = best.converged;
    fit.iterations = total_iter;
    fit.simplex_diameter = best.diameter;
    if (!fit.converged)
        throw NumericalError("fit_lognormal: simplex did not converge; best (mu, sigma) = (" +
                             std::to_string(fit.mu) + ", " + std::to_string(fit.sigma) + ")");
    return fit;
}

}  // namespace cocite
