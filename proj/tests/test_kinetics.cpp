#include <doctest.h>

#include "cocite/copairs.hpp"
#include "cocite/errors.hpp"
#include "cocite/kinetics.hpp"
#include "cocite/synth.hpp"
#include "helpers.hpp"

using namespace cocite;
using testutil::make_graph;

TEST_SUITE_BEGIN("kinetics");

namespace {

CoTimeline timeline_of(std::map<int, std::int64_t> counts, int t0) {
    CoTimeline tl;
    tl.t0 = t0;
    tl.counts = std::move(counts);
    auto it0 = tl.counts.find(t0);
    tl.c0 = it0 == tl.counts.end() ? 0 : it0->second;
    tl.peak_year = t0;
    std::int64_t peak = tl.c0;
    for (const auto& [year, c] : tl.counts)
        if (c > peak) {
            peak = c;
            tl.peak_year = year;
        }
    return tl;
}

}  // namespace

TEST_CASE("timeline from the graph") {
    const auto g = make_graph("x,1980\ny,1985\nu,1985\nv,1987\nw,1987\nz,1990\n",
                              "u,x\nu,y\nv,x\nv,y\nw,x\nw,y\nz,x\n");
    const auto tl = cocitation_timeline(g, "x", "y");
    CHECK(tl.t0 == 1985);
    CHECK(tl.c0 == 1);
    REQUIRE(tl.counts.size() == 2);
    CHECK(tl.counts.at(1985) == 1);
    CHECK(tl.counts.at(1987) == 2);
    CHECK(tl.peak_year == 1987);

    SUBCASE("no co-citers") {
        const auto none = cocitation_timeline(g, "x", "z");
        CHECK(none.counts.empty());
        CHECK(none.c0 == 0);
        CHECK_THROWS_AS(timelag(none), DataError);
    }
    SUBCASE("unknown id") {
        CHECK_THROWS_AS(cocitation_timeline(g, "x", "nope"), NotFoundError);
    }
}

TEST_CASE("pre-t0 co-citers are dropped with a count") {
    // v is dated before y; citing both members predates the pair, which is a
    // data inconsistency rather than a timeline event.
    const auto g = make_graph("x,1980\ny,1990\nv,1985\nu,1991\n", "v,x\nv,y\nu,x\nu,y\n");
    const auto tl = cocitation_timeline(g, "x", "y");
    CHECK(tl.dropped_pre_t0 == 1);
    CHECK(tl.counts.size() == 1);
    CHECK(tl.counts.at(1991) == 1);
}

TEST_CASE("timeline equals a full scan of reference sets") {
    const auto g = gen_citation_corpus({.n_pubs = 1000, .seed = 61});
    cocite::Rng rng(62);
    for (int trial = 0; trial < 25; ++trial) {
        const NodeIndex x = static_cast<NodeIndex>(rng.next_below(g.node_count()));
        NodeIndex y = x;
        while (y == x) y = static_cast<NodeIndex>(rng.next_below(g.node_count()));
        const auto tl = cocitation_timeline(g, x, y);

        std::map<int, std::int64_t> oracle;
        const int t0 = std::max(g.year_of(x), g.year_of(y));
        for (NodeIndex a = 0; a < g.node_count(); ++a) {
            const auto refs = g.out_neighbors(a);
            const bool cites_both = std::binary_search(refs.begin(), refs.end(), x) &&
                                    std::binary_search(refs.begin(), refs.end(), y);
            if (cites_both && g.year_of(a) >= t0) ++oracle[g.year_of(a)];
        }
        CHECK(tl.t0 == t0);
        CHECK(tl.counts == oracle);
    }
}

TEST_CASE("beauty coefficient fixtures") {
    SUBCASE("exact linear growth gives zero") {
        const auto tl = timeline_of({{2000, 2}, {2001, 5}, {2002, 8}, {2003, 11}}, 2000);
        CHECK(beauty_coefficient(tl) == doctest::Approx(0.0));
    }
    SUBCASE("dormant-then-burst hand evaluation") {
        const auto tl = timeline_of({{2000, 0}, {2001, 0}, {2002, 10}}, 2000);
        CHECK(beauty_coefficient(tl) == doctest::Approx(5.0));
    }
    SUBCASE("peak at t0 degenerates to zero") {
        const auto tl = timeline_of({{2000, 4}, {2001, 2}}, 2000);
        CHECK(tl.peak_year == 2000);
        CHECK(beauty_coefficient(tl) == doctest::Approx(0.0));
    }
    SUBCASE("missing interior years count as zero") {
        // Same burst with the zero year absent from the map.
        const auto tl = timeline_of({{2000, 0}, {2002, 10}}, 2000);
        CHECK(beauty_coefficient(tl) == doctest::Approx(5.0));
    }
}

TEST_CASE("beauty coefficient properties") {
    cocite::Rng rng(45);
    for (int trial = 0; trial < 50; ++trial) {
        // Random dormant-then-burst family: below-line years then a peak.
        std::map<int, std::int64_t> counts;
        const int t0 = 1990;
        const int span = 2 + static_cast<int>(rng.next_below(10));
        const std::int64_t peak = 5 + static_cast<std::int64_t>(rng.next_below(50));
        counts[t0] = 0;
        for (int t = t0 + 1; t < t0 + span; ++t)
            counts[t] = static_cast<std::int64_t>(rng.next_below(2));  // dormancy: 0 or 1
        counts[t0 + span] = peak;
        const auto tl = timeline_of(counts, t0);
        const double b = beauty_coefficient(tl);
        CHECK(b >= 0.0);
        if (peak > 2 * span) CHECK(b > 0.0);

        // Appending post-peak years (at or below the peak) changes nothing.
        auto extended = counts;
        for (int t = t0 + span + 1; t < t0 + span + 4; ++t)
            extended[t] = static_cast<std::int64_t>(rng.next_below(
                static_cast<std::uint64_t>(peak) + 1));
        CHECK(beauty_coefficient(timeline_of(extended, t0)) == doctest::Approx(b));
    }
}

TEST_CASE("timelag") {
    SUBCASE("co-citation in t0 itself") {
        const auto tl = timeline_of({{1985, 2}, {1990, 1}}, 1985);
        CHECK(timelag(tl) == 0);
    }
    SUBCASE("eight dormant years") {
        const auto tl = timeline_of({{1993, 1}}, 1985);
        CHECK(timelag(tl) == 8);
    }
    SUBCASE("zero iff co-cited in the first possible year") {
        cocite::Rng rng(46);
        for (int trial = 0; trial < 30; ++trial) {
            std::map<int, std::int64_t> counts;
            const int first = 1980 + static_cast<int>(rng.next_below(30));
            counts[first] = 1 + static_cast<std::int64_t>(rng.next_below(5));
            const auto tl = timeline_of(counts, 1980);
            CHECK(timelag(tl) >= 0);
            CHECK((timelag(tl) == 0) == (tl.c0 > 0));
        }
    }
}

TEST_CASE("timeline counts sum to the pair frequency") {
    const auto g = gen_citation_corpus({.n_pubs = 800, .seed = 67});
    const auto hcs = build_highly_cited(g, 0.9);
    const auto pairs = build_copairs(g, hcs, {g.min_year(), g.max_year()}, 5, 1);
    REQUIRE(!pairs.empty());
    for (std::size_t i = 0; i < std::min<std::size_t>(pairs.size(), 200); ++i) {
        const auto& p = pairs[i];
        const auto tl = cocitation_timeline(g, p.x, p.y);
        std::int64_t sum = tl.dropped_pre_t0;
        for (const auto& [year, c] : tl.counts) sum += c;
        CHECK(sum == p.frequency);
    }
}

TEST_SUITE_END();
