#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cocite/pipeline.hpp"

using namespace cocite;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("pipeline");

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file ", p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cocite_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunConfig small_config(const fs::path& dir) {
    RunConfig cfg;
    cfg.output_dir = dir.string();
    cfg.nodes_path = (dir / "nodes.csv").string();
    cfg.edges_path = (dir / "edges.csv").string();
    cfg.min_frequency = 3;
    cfg.percentile_cutoff = 0.95;
    cfg.x_min_values = {3, 5};
    cfg.ks_replicates = 50;
    cfg.seed = 424242;
    cfg.workers = 2;
    return cfg;
}

void make_corpus(const RunConfig& cfg) {
    CorpusSpec corpus;
    corpus.n_pubs = 3000;
    corpus.seed = cfg.seed;
    stage_simulate(cfg, corpus);
}

const std::vector<std::string> kOutputs = {
    "pairs.csv",       "theta.csv",         "fit_grid.json",
    "fit_grid.csv",    "kinetics.csv",      "quantiles.csv",
    "theta_frequency.csv", "theta_interval_counts.csv", "manifest.json"};

}  // namespace

TEST_CASE("pairs stage reproduces a hand-enumerated corpus exactly") {
    const auto dir = fresh_dir("hand");
    RunConfig cfg;
    cfg.output_dir = dir.string();
    cfg.nodes_path = (dir / "nodes.csv").string();
    cfg.edges_path = (dir / "edges.csv").string();
    cfg.percentile_cutoff = 0.5;
    cfg.min_refs = 5;
    {
        std::ofstream nodes(cfg.nodes_path);
        nodes << "a,1980\nb,1980\nc,1980\nd,1980\ne,1980\nf,1980\ng,1980\nh,1980\n"
                 "w1,1990\nw2,1990\nw3,1990\n";
        std::ofstream edges(cfg.edges_path);
        edges << "w1,a\nw1,b\nw1,c\nw1,d\nw1,e\n"
                 "w2,a\nw2,b\nw2,c\nw2,f\nw2,g\n"
                 "w3,a\nw3,b\nw3,f\nw3,g\nw3,h\n";
    }
    StageCounts counts;
    stage_ingest(cfg, counts);
    stage_pairs(cfg, counts);

    // Highly cited at the 0.5 cutoff: {a,b} (deg 3), {c,f,g} (deg 2), and
    // the three uncited 1990 articles. Pair frequencies enumerate by hand.
    const std::string expected =
        "# schema=cocite.pairs.v1\n"
        "x,y,frequency,connected,first_year\n"
        "a,b,3,0,1990\n"
        "a,c,2,0,1990\n"
        "a,f,2,0,1990\n"
        "a,g,2,0,1990\n"
        "b,c,2,0,1990\n"
        "b,f,2,0,1990\n"
        "b,g,2,0,1990\n"
        "c,f,1,0,1990\n"
        "c,g,1,0,1990\n"
        "f,g,2,0,1990\n";
    CHECK(slurp(pairs_csv_path(cfg)) == expected);
    CHECK(counts.pairs_total == 10);
}

TEST_CASE("pipeline smoke on a synthetic corpus") {
    const auto dir = fresh_dir("smoke");
    auto cfg = small_config(dir);
    make_corpus(cfg);
    run_pipeline(cfg);
    for (const auto& name : kOutputs) CHECK(fs::exists(dir / name));
    CHECK_FALSE(fs::exists(dir / "pairs.csv.partial"));

    SUBCASE("pairs round-trip through the CSV") {
        const auto pairs = read_pairs_csv(pairs_csv_path(cfg));
        CHECK(!pairs.empty());
        auto with_theta = pairs;
        std::erase_if(with_theta,
                      [&](const CoPair& p) { return p.frequency < cfg.min_frequency; });
        read_theta_csv(theta_csv_path(cfg), with_theta);
        std::size_t defined = 0;
        for (const auto& p : with_theta)
            if (p.theta) ++defined;
        CHECK(defined > 0);
    }
}

TEST_CASE("same seed gives byte-identical outputs; workers do not matter") {
    const auto dir1 = fresh_dir("det1");
    const auto dir2 = fresh_dir("det2");
    const auto dir3 = fresh_dir("det3");

    auto cfg1 = small_config(dir1);
    make_corpus(cfg1);
    run_pipeline(cfg1);

    auto cfg2 = small_config(dir2);
    make_corpus(cfg2);
    run_pipeline(cfg2);

    auto cfg3 = small_config(dir3);
    cfg3.workers = 8;
    make_corpus(cfg3);
    run_pipeline(cfg3);

    for (const auto& name : kOutputs) {
        CHECK_MESSAGE(slurp(dir1 / name) == slurp(dir2 / name), "rerun differs: ", name);
        CHECK_MESSAGE(slurp(dir1 / name) == slurp(dir3 / name), "worker count leaked: ", name);
    }
}

TEST_CASE("stages run separately equal the fused pipeline") {
    const auto dir_all = fresh_dir("stagea");
    const auto dir_sep = fresh_dir("stageb");

    auto cfg_all = small_config(dir_all);
    make_corpus(cfg_all);
    run_pipeline(cfg_all);

    auto cfg_sep = small_config(dir_sep);
    make_corpus(cfg_sep);
    StageCounts counts;
    stage_ingest(cfg_sep, counts);
    stage_pairs(cfg_sep, counts);
    stage_theta(cfg_sep, counts);
    stage_gof(cfg_sep, counts);
    stage_kinetics(cfg_sep, counts);
    write_manifest(cfg_sep, counts);

    for (const auto& name : kOutputs)
        CHECK_MESSAGE(slurp(dir_all / name) == slurp(dir_sep / name), "stage split differs: ",
                      name);
}

TEST_CASE("cli binary drives the same pipeline") {
    const char* cli = std::getenv("COCITE_CLI");
    if (!cli) {
        MESSAGE("COCITE_CLI not set; skipping CLI process test");
        return;
    }
    const auto dir = fresh_dir("cli");
    const std::string base = std::string(cli);
    auto run = [&](const std::string& args) {
        const std::string cmd = base + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    const std::string common = " --out " + dir.string() + " --seed 424242 --workers 2";
    CHECK(run("simulate --n-pubs 2500" + common) == 0);
    CHECK(run("pipeline --nodes " + dir.string() + "/nodes.csv --edges " + dir.string() +
              "/edges.csv --min-frequency 3 --x-min 3 5 --ks-replicates 50" + common) == 0);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "fit_grid.csv"));

    SUBCASE("usage errors exit with 1") {
        CHECK(run("pairs --cutoff 1.5" + common) == 1);
    }
    SUBCASE("missing inputs exit with 2") {
        CHECK(run("pipeline --nodes /nonexistent.csv --edges /nope.csv" + common) == 2);
    }
}

TEST_SUITE_END();
