// cocite: co-citation frequency analysis pipeline.
//
// Subcommands: ingest, pairs, theta, fit, gof, kinetics, simulate, pipeline.
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "cocite/errors.hpp"
#include "cocite/pipeline.hpp"

using namespace cocite;

int main(int argc, char** argv) {
    CLI::App app{"co-citation frequency analysis"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    CorpusSpec corpus;
    std::int64_t fit_x_min = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", cfg.output_dir, "output directory")->envname("COCITE_OUT");
        cmd->add_option("--seed", cfg.seed, "master random seed")->envname("COCITE_SEED");
        cmd->add_option("--workers", cfg.workers, "worker thread count")
            ->envname("COCITE_WORKERS");
    };
    auto add_inputs = [&](CLI::App* cmd) {
        cmd->add_option("--nodes", cfg.nodes_path, "nodes CSV/TSV (id, year)")
            ->envname("COCITE_NODES");
        cmd->add_option("--edges", cfg.edges_path, "edges CSV/TSV (citing_id, cited_id)")
            ->envname("COCITE_EDGES");
        cmd->add_option("--delimiter", cfg.delimiter, "field delimiter (default: auto)");
        cmd->add_flag("--skip-header", cfg.skip_header, "drop the first row of each input");
    };
    auto add_analysis = [&](CLI::App* cmd) {
        cmd->add_option("--min-frequency", cfg.min_frequency,
                        "minimum co-citation frequency for theta/gof/kinetics");
        cmd->add_option("--cutoff", cfg.percentile_cutoff, "highly-cited percentile cutoff");
        cmd->add_option("--min-refs", cfg.min_refs, "minimum references per citing article");
        cmd->add_option("--year-from", [&](const CLI::results_t& r) {
            cfg.year_from = std::stoi(r[0]);
            return true;
        }, "first citing year (default: graph minimum)");
        cmd->add_option("--year-to", [&](const CLI::results_t& r) {
            cfg.year_to = std::stoi(r[0]);
            return true;
        }, "last citing year (default: graph maximum)");
        cmd->add_option("--x-min", cfg.x_min_values, "right-tail cutoffs to sweep");
        cmd->add_option("--theta-edges", cfg.theta_edges, "theta bin edges");
        cmd->add_option("--e-min", cfg.e_min_values, "chi-squared minimum expected counts");
        cmd->add_option("--ks-replicates", cfg.ks_replicates, "K-S simulation replicates");
        cmd->add_option("--batch-size", cfg.batch_size, "theta batch size");
    };

    CLI::App* c_ingest = app.add_subcommand("ingest", "load the citation graph snapshot");
    add_common(c_ingest);
    add_inputs(c_ingest);

    CLI::App* c_pairs = app.add_subcommand("pairs", "build co-cited pairs from the snapshot");
    add_common(c_pairs);
    add_analysis(c_pairs);

    CLI::App* c_theta = app.add_subcommand("theta", "compute theta for eligible pairs");
    add_common(c_theta);
    add_analysis(c_theta);

    CLI::App* c_fit = app.add_subcommand("fit", "fit both families to the frequency tail");
    add_common(c_fit);
    add_analysis(c_fit);
    c_fit->add_option("--fit-x-min", fit_x_min, "tail start for the single fit report");

    CLI::App* c_gof = app.add_subcommand("gof", "stratified fit grid and independence test");
    add_common(c_gof);
    add_analysis(c_gof);

    CLI::App* c_kin = app.add_subcommand("kinetics", "beauty coefficients and timelags");
    add_common(c_kin);
    add_analysis(c_kin);

    CLI::App* c_sim = app.add_subcommand("simulate", "generate a synthetic citation corpus");
    add_common(c_sim);
    add_inputs(c_sim);
    c_sim->add_option("--n-pubs", corpus.n_pubs, "publications to generate");
    c_sim->add_option("--attach-exponent", corpus.attach_exponent, "attachment exponent");
    c_sim->add_option("--sim-year-from", corpus.year_from, "first publication year");
    c_sim->add_option("--sim-year-to", corpus.year_to, "last publication year");
    c_sim->add_option("--sim-min-refs", corpus.min_refs, "minimum references per article");
    c_sim->add_option("--sim-max-refs", corpus.max_refs, "maximum references per article");

    CLI::App* c_pipe = app.add_subcommand("pipeline", "run every stage in order");
    add_common(c_pipe);
    add_inputs(c_pipe);
    add_analysis(c_pipe);

    CLI11_PARSE(app, argc, argv);

    try {
        StageCounts counts;
        if (c_ingest->parsed()) {
            stage_ingest(cfg, counts);
        } else if (c_pairs->parsed()) {
            stage_pairs(cfg, counts);
        } else if (c_theta->parsed()) {
            stage_theta(cfg, counts);
        } else if (c_fit->parsed()) {
            stage_fit(cfg, fit_x_min > 0 ? fit_x_min : cfg.min_frequency);
        } else if (c_gof->parsed()) {
            stage_gof(cfg, counts);
        } else if (c_kin->parsed()) {
            stage_kinetics(cfg, counts);
        } else if (c_sim->parsed()) {
            if (cfg.nodes_path.empty()) cfg.nodes_path = cfg.output_dir + "/nodes.csv";
            if (cfg.edges_path.empty()) cfg.edges_path = cfg.output_dir + "/edges.csv";
            corpus.seed = cfg.seed;
            stage_simulate(cfg, corpus);
        } else if (c_pipe->parsed()) {
            run_pipeline(cfg);
        }
    } catch (const DomainError& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
