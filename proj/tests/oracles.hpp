#pragma once

// Independent reference implementations used by tests only. These stay
// deliberately naive (string sets, direct series, plain quadrature) so they
// share no code path with the library.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "cocite/citation_graph.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Set-algebra theta

struct OracleGraph {
    std::map<std::string, std::set<std::string>> refs;
    std::map<std::string, int> year;

    static OracleGraph from(const cocite::CitationGraph& g) {
        OracleGraph o;
        for (cocite::NodeIndex v = 0; v < g.node_count(); ++v) {
            const auto& id = g.id_of(v);
            o.year[id] = g.year_of(v);
            auto& r = o.refs[id];
            for (cocite::NodeIndex u : g.out_neighbors(v)) r.insert(g.id_of(u));
        }
        return o;
    }
};

struct BruteTheta {
    long long edges = 0;
    long long nx = 0;
    long long ny = 0;
    bool defined = false;
};

inline BruteTheta brute_theta(const OracleGraph& g, const std::string& x, const std::string& y,
                              int cutoff) {
    std::set<std::string> nx, ny;
    for (const auto& [a, refs] : g.refs) {
        if (g.year.at(a) > cutoff) continue;
        if (refs.count(x) && !refs.count(y)) nx.insert(a);
        if (refs.count(y) && !refs.count(x)) ny.insert(a);
    }
    BruteTheta b;
    b.nx = static_cast<long long>(nx.size());
    b.ny = static_cast<long long>(ny.size());
    if (nx.empty() || ny.empty()) return b;
    b.defined = true;
    for (const auto& a : nx)
        for (const auto& t : ny) {
            if (g.refs.at(a).count(t)) ++b.edges;
            if (g.refs.at(t).count(a)) ++b.edges;
        }
    return b;
}

// ---------------------------------------------------------------------------
// Long-summation Hurwitz zeta (long double, Kahan-free direct series)

inline long double zeta_longsum(long double s, long double a, long n_terms) {
    long double sum = 0.0L;
    for (long k = n_terms - 1; k >= 0; --k) sum += powl(a + static_cast<long double>(k), -s);
    const long double u = a + static_cast<long double>(n_terms);
    return sum + powl(u, 1.0L - s) / (s - 1.0L) + 0.5L * powl(u, -s);
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, fm, flm, 0.5 * eps, depth - 1) +
           simpson(f, m, b, fm, fb, frm, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    return simpson(f, a, b, f(a), f(b), f(0.5 * (a + b)), eps, 40);
}

inline double lognormal_density(double q, double mu, double sigma) {
    const double d = std::log(q) - mu;
    return std::exp(-d * d / (2.0 * sigma * sigma)) /
           (q * sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace oracle
