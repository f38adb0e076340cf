#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocite/citation_graph.hpp"
#include "cocite/copairs.hpp"
#include "cocite/gof.hpp"
#include "cocite/synth.hpp"

namespace cocite {

// Shared configuration of the pipeline and its stage subcommands. Stages
// communicate exclusively through files under output_dir, so running them
// separately is equivalent to one pipeline run.
struct RunConfig {
    std::string nodes_path;
    std::string edges_path;
    std::string output_dir = ".";
    char delimiter = 0;        // 0 = auto-detect
    bool skip_header = false;

    std::int64_t min_frequency = 10;
    double percentile_cutoff = 0.99;
    int min_refs = 5;
    std::optional<int> year_from;
    std::optional<int> year_to;

    std::vector<std::int64_t> x_min_values = {10, 25, 50, 100, 200};
    std::vector<double> theta_edges = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> e_min_values = {10.0, 20.0, 50.0, 70.0};
    std::vector<double> quantile_probs = {0.9, 0.95, 0.99, 0.999};
    int ks_replicates = 100;
    int batch_size = 50;
    std::uint64_t seed = 1;
    int workers = 1;
};

// Output file names within output_dir.
std::string graph_snapshot_path(const RunConfig& c);
std::string pairs_csv_path(const RunConfig& c);
std::string theta_csv_path(const RunConfig& c);
std::string fit_json_path(const RunConfig& c);
std::string grid_json_path(const RunConfig& c);
std::string grid_csv_path(const RunConfig& c);
std::string kinetics_csv_path(const RunConfig& c);
std::string manifest_path(const RunConfig& c);

struct StageCounts {
    IngestStats ingest;
    std::size_t highly_cited = 0;
    std::size_t pairs_total = 0;
    std::size_t pairs_min_frequency = 0;
    std::size_t theta_ok = 0;
    std::size_t theta_undefined = 0;
    std::size_t theta_clamped = 0;
    std::size_t grid_cells = 0;
    std::size_t grid_powerlaw = 0;
    std::size_t grid_lognormal = 0;
    std::size_t grid_neither = 0;
    std::size_t grid_insufficient = 0;
    std::size_t kinetics_rows = 0;
    std::int64_t kinetics_dropped_pre_t0 = 0;
};

// Stages. Each reads its inputs from files (or the passed config), writes
// its outputs atomically (partial output keeps a .partial suffix), and
// returns counters for the manifest.
void stage_ingest(const RunConfig& c, StageCounts& counts);
void stage_pairs(const RunConfig& c, StageCounts& counts);
void stage_theta(const RunConfig& c, StageCounts& counts);
void stage_fit(const RunConfig& c, std::int64_t x_min);
void stage_gof(const RunConfig& c, StageCounts& counts);
void stage_kinetics(const RunConfig& c, StageCounts& counts);
void stage_simulate(const RunConfig& c, const CorpusSpec& corpus);
void write_manifest(const RunConfig& c, const StageCounts& counts);

// ingest -> pairs -> theta -> gof -> kinetics -> manifest.
void run_pipeline(const RunConfig& c);

// Readers for the intermediate files (schema-checked).
std::vector<CoPair> read_pairs_csv(const std::string& path);
void read_theta_csv(const std::string& path, std::vector<CoPair>& pairs);  // joins theta in

}  // namespace cocite
