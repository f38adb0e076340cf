#include "cocite/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cocite/errors.hpp"
#include "cocite/kinetics.hpp"
#include "cocite/parallel.hpp"
#include "cocite/theta.hpp"

namespace cocite {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kPairsSchema = "cocite.pairs.v1";
constexpr const char* kThetaSchema = "cocite.theta.v1";
constexpr const char* kGridSchema = "cocite.fitgrid.v1";
constexpr const char* kKineticsSchema = "cocite.kinetics.v1";

std::string join(const RunConfig& c, const char* name) {
    return (fs::path(c.output_dir) / name).string();
}

// Writes through a .partial file; the final name appears only on success.
void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& body) {
    const std::string partial = path + ".partial";
    {
        std::ofstream out(partial, std::ios::binary);
        if (!out) throw DataError("cannot write " + partial);
        body(out);
        out.flush();
        if (!out) throw DataError("write failed for " + partial);
    }
    fs::rename(partial, path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    return in;
}

void expect_schema(std::istream& in, const std::string& schema, const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line != "# schema=" + schema)
        throw DataError(path + ": expected schema header '" + schema + "'");
}

CitationGraph load_snapshot(const RunConfig& c) {
    auto in = open_input(graph_snapshot_path(c));
    return CitationGraph::load(in);
}

YearRange effective_range(const RunConfig& c, const CitationGraph& g) {
    return YearRange{c.year_from.value_or(g.min_year()), c.year_to.value_or(g.max_year())};
}

}  // namespace

std::string graph_snapshot_path(const RunConfig& c) { return join(c, "graph.bin"); }
std::string pairs_csv_path(const RunConfig& c) { return join(c, "pairs.csv"); }
std::string theta_csv_path(const RunConfig& c) { return join(c, "theta.csv"); }
std::string fit_json_path(const RunConfig& c) { return join(c, "fit.json"); }
std::string grid_json_path(const RunConfig& c) { return join(c, "fit_grid.json"); }
std::string grid_csv_path(const RunConfig& c) { return join(c, "fit_grid.csv"); }
std::string kinetics_csv_path(const RunConfig& c) { return join(c, "kinetics.csv"); }
std::string manifest_path(const RunConfig& c) { return join(c, "manifest.json"); }

void stage_ingest(const RunConfig& c, StageCounts& counts) {
    auto nodes = open_input(c.nodes_path);
    auto edges = open_input(c.edges_path);
    DsvReader::Options opts;
    opts.delimiter = c.delimiter;
    opts.skip_header = c.skip_header;
    CitationGraph g = CitationGraph::ingest(nodes, edges, opts, &counts.ingest);
    fs::create_directories(c.output_dir);
    atomic_write(graph_snapshot_path(c), [&](std::ostream& out) { g.save(out); });
}

void stage_pairs(const RunConfig& c, StageCounts& counts) {
    const CitationGraph g = load_snapshot(c);
    const HighlyCitedSet hcs = build_highly_cited(g, c.percentile_cutoff);
    counts.highly_cited = hcs.size;
    const std::vector<CoPair> pairs =
        build_copairs(g, hcs, effective_range(c, g), c.min_refs, c.workers);
    counts.pairs_total = pairs.size();
    for (const CoPair& p : pairs)
        if (p.frequency >= c.min_frequency) ++counts.pairs_min_frequency;

    atomic_write(pairs_csv_path(c), [&](std::ostream& out) {
        out << "# schema=" << kPairsSchema << "\n";
        out << "x,y,frequency,connected,first_year\n";
        for (const CoPair& p : pairs)
            out << p.x << ',' << p.y << ',' << p.frequency << ',' << (p.connected ? 1 : 0) << ','
                << p.first_year << '\n';
    });

    if (!pairs.empty()) {
        const auto quantiles = frequency_quantiles(pairs, c.quantile_probs);
        atomic_write(join(c, "quantiles.csv"), [&](std::ostream& out) {
            out << "# schema=cocite.quantiles.v1\n";
            out << "prob,frequency\n";
            for (std::size_t i = 0; i < quantiles.size(); ++i)
                out << format_double(c.quantile_probs[i]) << ',' << quantiles[i] << '\n';
        });

        // Connectedness by frequency percentile (pairs at min_frequency and
        // above), percentile from the Hazen position of each frequency.
        std::vector<const CoPair*> eligible;
        for (const CoPair& p : pairs)
            if (p.frequency >= c.min_frequency) eligible.push_back(&p);
        if (!eligible.empty()) {
            std::vector<std::int64_t> freqs;
            freqs.reserve(eligible.size());
            for (const CoPair* p : eligible) freqs.push_back(p->frequency);
            const auto pct = hazen_percentiles(freqs);
            struct BinAgg {
                std::int64_t n = 0;
                std::int64_t connected = 0;
            };
            std::map<int, BinAgg> bins;
            for (std::size_t i = 0; i < eligible.size(); ++i) {
                const int bin = std::min(99, static_cast<int>(pct[i] * 100.0)) + 1;
                ++bins[bin].n;
                if (eligible[i]->connected) ++bins[bin].connected;
            }
            atomic_write(join(c, "connectedness_by_percentile.csv"), [&](std::ostream& out) {
                out << "# schema=cocite.connectedness.v1\n";
                out << "percentile,n_pairs,n_connected,proportion\n";
                for (const auto& [bin, agg] : bins)
                    out << bin << ',' << agg.n << ',' << agg.connected << ','
                        << format_double(static_cast<double>(agg.connected) /
                                         static_cast<double>(agg.n))
                        << '\n';
            });
        }
    }
}

std::vector<CoPair> read_pairs_csv(const std::string& path) {
    auto in = open_input(path);
    expect_schema(in, kPairsSchema, path);
    DsvReader reader(in, {.delimiter = ',', .skip_header = true});
    std::vector<CoPair> pairs;
    while (auto row = reader.next()) {
        if (row->size() != 5) throw IngestError(path + ": expected 5 columns", reader.line_number());
        CoPair p;
        p.x = (*row)[0];
        p.y = (*row)[1];
        p.frequency = parse_int((*row)[2], reader.line_number());
        p.connected = parse_int((*row)[3], reader.line_number()) != 0;
        p.first_year = static_cast<int>(parse_int((*row)[4], reader.line_number()));
        pairs.push_back(std::move(p));
    }
    return pairs;
}

void stage_theta(const RunConfig& c, StageCounts& counts) {
    const CitationGraph g = load_snapshot(c);
    std::vector<CoPair> pairs = read_pairs_csv(pairs_csv_path(c));
    std::erase_if(pairs, [&](const CoPair& p) { return p.frequency < c.min_frequency; });
    const std::vector<ThetaResult> results = theta_batch(g, pairs, c.batch_size, c.workers);

    for (const ThetaResult& r : results) {
        if (r.status == ThetaStatus::ok) {
            ++counts.theta_ok;
            if (r.clamped) ++counts.theta_clamped;
        } else {
            ++counts.theta_undefined;
        }
    }

    atomic_write(theta_csv_path(c), [&](std::ostream& out) {
        out << "# schema=" << kThetaSchema << "\n";
        out << "x,y,theta,raw_theta,edge_count,nx_size,ny_size,clamped,status\n";
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const ThetaResult& r = results[i];
            out << pairs[i].x << ',' << pairs[i].y << ',';
            if (r.status == ThetaStatus::ok)
                out << format_double(r.theta) << ',' << format_double(r.raw_theta);
            else
                out << ',';
            out << ',' << r.edge_count << ',' << r.nx_size << ',' << r.ny_size << ','
                << (r.clamped ? 1 : 0) << ',' << to_string(r.status) << '\n';
        }
    });

    // Plot data: per-pair (theta, frequency) and pair counts per theta bin.
    atomic_write(join(c, "theta_frequency.csv"), [&](std::ostream& out) {
        out << "# schema=cocite.theta_frequency.v1\n";
        out << "theta,frequency,connected\n";
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (results[i].status == ThetaStatus::ok)
                out << format_double(results[i].theta) << ',' << pairs[i].frequency << ','
                    << (pairs[i].connected ? 1 : 0) << '\n';
    });
    atomic_write(join(c, "theta_interval_counts.csv"), [&](std::ostream& out) {
        out << "# schema=cocite.theta_intervals.v1\n";
        out << "theta_lo,theta_hi,n_pairs\n";
        for (std::size_t b = 0; b + 1 < c.theta_edges.size(); ++b) {
            const double lo = c.theta_edges[b];
            const double hi = c.theta_edges[b + 1];
            const bool last = b + 2 == c.theta_edges.size();
            std::int64_t n = 0;
            for (const ThetaResult& r : results)
                if (r.status == ThetaStatus::ok && r.theta >= lo &&
                    (r.theta < hi || (last && r.theta <= hi)))
                    ++n;
            out << format_double(lo) << ',' << format_double(hi) << ',' << n << '\n';
        }
    });
}

void read_theta_csv(const std::string& path, std::vector<CoPair>& pairs) {
    auto in = open_input(path);
    expect_schema(in, kThetaSchema, path);
    DsvReader reader(in, {.delimiter = ',', .skip_header = true});
    std::map<std::pair<std::string, std::string>, double> theta;
    while (auto row = reader.next()) {
        if (row->size() != 9) throw IngestError(path + ": expected 9 columns", reader.line_number());
        if ((*row)[8] != "ok") continue;
        theta[{(*row)[0], (*row)[1]}] = std::stod((*row)[2]);
    }
    for (CoPair& p : pairs) {
        auto it = theta.find({p.x, p.y});
        if (it != theta.end()) p.theta = it->second;
    }
}

namespace {

ordered_json family_json(const FamilyCellResult& f, const RunConfig& c, bool powerlaw) {
    ordered_json j;
    j["fitted"] = f.fitted;
    if (!f.fitted) return j;
    if (powerlaw) {
        j["alpha"] = f.param1;
    } else {
        j["mu"] = f.param1;
        j["sigma"] = f.param2;
    }
    j["loglik"] = f.loglik;
    j["ks_p"] = f.ks_p;
    ordered_json chi2 = ordered_json::object();
    for (std::size_t i = 0; i < c.e_min_values.size(); ++i) {
        const std::string key = format_double(c.e_min_values[i]);
        if (std::isnan(f.chi2_p[i]))
            chi2[key] = nullptr;
        else
            chi2[key] = f.chi2_p[i];
    }
    j["chi2_p"] = chi2;
    j["kl_obs_fit"] = f.kl_obs_fit;
    j["kl_fit_obs"] = f.kl_fit_obs;
    j["fits"] = f.fits;
    return j;
}

}  // namespace

void stage_gof(const RunConfig& c, StageCounts& counts) {
    std::vector<CoPair> pairs = read_pairs_csv(pairs_csv_path(c));
    std::erase_if(pairs, [&](const CoPair& p) { return p.frequency < c.min_frequency; });
    read_theta_csv(theta_csv_path(c), pairs);

    GridConfig gc;
    gc.theta_edges = c.theta_edges;
    gc.x_min_values = c.x_min_values;
    gc.e_min_values = c.e_min_values;
    gc.ks_replicates = c.ks_replicates;
    gc.seed = c.seed;
    gc.workers = c.workers;
    const std::vector<GridCell> cells = fit_grid(pairs, gc);
    const GofReport independence = independence_test(pairs);

    counts.grid_cells = cells.size();
    for (const GridCell& cell : cells) {
        if (cell.verdict == "powerlaw") ++counts.grid_powerlaw;
        else if (cell.verdict == "lognormal") ++counts.grid_lognormal;
        else if (cell.verdict == "neither") ++counts.grid_neither;
        else ++counts.grid_insufficient;
    }

    atomic_write(grid_json_path(c), [&](std::ostream& out) {
        ordered_json root;
        root["schema"] = kGridSchema;
        ordered_json indep;
        indep["statistic"] = independence.statistic;
        if (independence.p_value) indep["p_value"] = *independence.p_value;
        if (independence.df) indep["df"] = *independence.df;
        if (independence.verdict) indep["verdict"] = to_string(*independence.verdict);
        root["theta_independence"] = indep;
        ordered_json arr = ordered_json::array();
        for (const GridCell& cell : cells) {
            ordered_json j;
            j["theta_lo"] = cell.theta_lo;
            j["theta_hi"] = cell.theta_hi;
            j["connected"] = cell.connected;
            j["x_min"] = cell.x_min;
            j["n_obs"] = cell.n_obs;
            j["verdict"] = cell.verdict;
            j["both_fit"] = cell.both_fit;
            j["powerlaw"] = family_json(cell.powerlaw, c, true);
            j["lognormal"] = family_json(cell.lognormal, c, false);
            arr.push_back(j);
        }
        root["cells"] = arr;
        out << root.dump(2) << '\n';
    });

    atomic_write(grid_csv_path(c), [&](std::ostream& out) {
        out << "# schema=" << kGridSchema << "\n";
        out << "theta_lo,theta_hi,connected,x_min,n_obs,verdict,both_fit,pl_alpha,pl_ks_p";
        for (double e : c.e_min_values) out << ",pl_chi2_p_" << format_double(e);
        out << ",ln_mu,ln_sigma,ln_ks_p";
        for (double e : c.e_min_values) out << ",ln_chi2_p_" << format_double(e);
        out << "\n";
        auto emit_p = [&](double v) {
            out << ',';
            if (!std::isnan(v)) out << format_double(v);
        };
        for (const GridCell& cell : cells) {
            out << format_double(cell.theta_lo) << ',' << format_double(cell.theta_hi) << ','
                << (cell.connected ? 1 : 0) << ',' << cell.x_min << ',' << cell.n_obs << ','
                << cell.verdict << ',' << (cell.both_fit ? 1 : 0);
            if (cell.powerlaw.fitted) {
                out << ',' << format_double(cell.powerlaw.param1);
                emit_p(cell.powerlaw.ks_p);
                for (double p : cell.powerlaw.chi2_p) emit_p(p);
            } else {
                for (std::size_t i = 0; i < 2 + c.e_min_values.size(); ++i) out << ',';
            }
            if (cell.lognormal.fitted) {
                out << ',' << format_double(cell.lognormal.param1) << ','
                    << format_double(cell.lognormal.param2);
                emit_p(cell.lognormal.ks_p);
                for (double p : cell.lognormal.chi2_p) emit_p(p);
            } else {
                for (std::size_t i = 0; i < 3 + c.e_min_values.size(); ++i) out << ',';
            }
            out << '\n';
        }
    });
}

void stage_fit(const RunConfig& c, std::int64_t x_min) {
    std::vector<CoPair> pairs = read_pairs_csv(pairs_csv_path(c));
    std::vector<std::int64_t> freqs;
    for (const CoPair& p : pairs) freqs.push_back(p.frequency);
    const TailSample t = TailSample::restrict(freqs, x_min);

    ordered_json root;
    root["schema"] = "cocite.fit.v1";
    root["x_min"] = x_min;
    root["n_obs"] = t.total();
    try {
        const PowerLawFit fit = fit_powerlaw(t);
        ordered_json j;
        j["family"] = "powerlaw";
        j["x_min"] = fit.x_min;
        j["params"] = {{"alpha", fit.alpha}};
        j["loglik"] = fit.loglik;
        j["n_obs"] = t.total();
        j["convergence"] = {{"iterations", fit.iterations}, {"residual", fit.residual}};
        root["powerlaw"] = j;
    } catch (const NumericalError& e) {
        root["powerlaw"] = {{"error", e.what()}};
    }
    try {
        const LognormalFit fit = fit_lognormal(t);
        ordered_json j;
        j["family"] = "lognormal";
        j["x_min"] = fit.x_min;
        j["params"] = {{"mu", fit.mu}, {"sigma", fit.sigma}};
        j["loglik"] = fit.loglik;
        j["n_obs"] = t.total();
        j["convergence"] = {{"iterations", fit.iterations},
                            {"converged", fit.converged},
                            {"simplex_diameter", fit.simplex_diameter}};
        root["lognormal"] = j;
    } catch (const NumericalError& e) {
        root["lognormal"] = {{"error", e.what()}};
    }
    atomic_write(fit_json_path(c), [&](std::ostream& out) { out << root.dump(2) << '\n'; });
}

void stage_kinetics(const RunConfig& c, StageCounts& counts) {
    const CitationGraph g = load_snapshot(c);
    std::vector<CoPair> pairs = read_pairs_csv(pairs_csv_path(c));
    std::erase_if(pairs, [&](const CoPair& p) { return p.frequency < c.min_frequency; });

    struct Row {
        CoTimeline tl;
        double beauty = 0.0;
        int lag = 0;
        bool valid = false;
    };
    std::vector<Row> rows(pairs.size());
    parallel_for(pairs.size(), c.workers, [&](std::size_t i) {
        const auto x = g.find(pairs[i].x);
        const auto y = g.find(pairs[i].y);
        if (!x || !y) return;
        Row& r = rows[i];
        r.tl = cocitation_timeline(g, *x, *y);
        if (r.tl.counts.empty()) return;
        r.beauty = beauty_coefficient(r.tl);
        r.lag = timelag(r.tl);
        r.valid = true;
    });

    atomic_write(kinetics_csv_path(c), [&](std::ostream& out) {
        out << "# schema=" << kKineticsSchema << "\n";
        out << "x,y,t0,c0,peak_year,beauty,timelag,frequency,connected\n";
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (!rows[i].valid) continue;
            const Row& r = rows[i];
            out << pairs[i].x << ',' << pairs[i].y << ',' << r.tl.t0 << ',' << r.tl.c0 << ','
                << r.tl.peak_year << ',' << format_double(r.beauty) << ',' << r.lag << ','
                << pairs[i].frequency << ',' << (pairs[i].connected ? 1 : 0) << '\n';
            ++counts.kinetics_rows;
            counts.kinetics_dropped_pre_t0 += r.tl.dropped_pre_t0;
        }
    });
}

void stage_simulate(const RunConfig& c, const CorpusSpec& corpus) {
    const CitationGraph g = gen_citation_corpus(corpus);
    fs::create_directories(c.output_dir);
    atomic_write(c.nodes_path, [&](std::ostream& out) {
        for (NodeIndex v = 0; v < g.node_count(); ++v)
            out << g.id_of(v) << ',' << g.year_of(v) << '\n';
    });
    atomic_write(c.edges_path, [&](std::ostream& out) {
        for (NodeIndex v = 0; v < g.node_count(); ++v)
            for (NodeIndex u : g.out_neighbors(v)) out << g.id_of(v) << ',' << g.id_of(u) << '\n';
    });
    ordered_json j;
    j["schema"] = "cocite.synth_manifest.v1";
    j["n_pubs"] = corpus.n_pubs;
    j["year_from"] = corpus.year_from;
    j["year_to"] = corpus.year_to;
    j["attach_exponent"] = corpus.attach_exponent;
    j["min_refs"] = corpus.min_refs;
    j["max_refs"] = corpus.max_refs;
    j["seed"] = corpus.seed;
    atomic_write(join(c, "synth_manifest.json"),
                 [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

void write_manifest(const RunConfig& c, const StageCounts& counts) {
    ordered_json j;
    j["schema"] = "cocite.manifest.v1";
    j["version"] = "0.1.0";
    ordered_json cfg;
    cfg["min_frequency"] = c.min_frequency;
    cfg["percentile_cutoff"] = c.percentile_cutoff;
    cfg["min_refs"] = c.min_refs;
    if (c.year_from) cfg["year_from"] = *c.year_from;
    if (c.year_to) cfg["year_to"] = *c.year_to;
    cfg["x_min_values"] = c.x_min_values;
    cfg["theta_edges"] = c.theta_edges;
    cfg["e_min_values"] = c.e_min_values;
    cfg["ks_replicates"] = c.ks_replicates;
    cfg["batch_size"] = c.batch_size;
    cfg["seed"] = c.seed;
    j["config"] = cfg;
    ordered_json n;
    n["nodes"] = counts.ingest.nodes;
    n["edges"] = counts.ingest.edges;
    n["dropped_self_loops"] = counts.ingest.dropped_self_loops;
    n["dropped_unknown_endpoint"] = counts.ingest.dropped_unknown_endpoint;
    n["duplicate_edges"] = counts.ingest.duplicate_edges;
    n["highly_cited"] = counts.highly_cited;
    n["pairs_total"] = counts.pairs_total;
    n["pairs_min_frequency"] = counts.pairs_min_frequency;
    n["theta_ok"] = counts.theta_ok;
    n["theta_undefined"] = counts.theta_undefined;
    n["theta_clamped"] = counts.theta_clamped;
    n["grid_cells"] = counts.grid_cells;
    n["grid_powerlaw"] = counts.grid_powerlaw;
    n["grid_lognormal"] = counts.grid_lognormal;
    n["grid_neither"] = counts.grid_neither;
    n["grid_insufficient"] = counts.grid_insufficient;
    n["kinetics_rows"] = counts.kinetics_rows;
    n["kinetics_dropped_pre_t0"] = counts.kinetics_dropped_pre_t0;
    j["counts"] = n;
    atomic_write(manifest_path(c), [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

void run_pipeline(const RunConfig& c) {
    StageCounts counts;
    stage_ingest(c, counts);
    stage_pairs(c, counts);
    stage_theta(c, counts);
    stage_gof(c, counts);
    stage_kinetics(c, counts);
    write_manifest(c, counts);
}

}  // namespace cocite
