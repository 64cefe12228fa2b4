#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "rcp/harris.hpp"

using namespace rcp;

TEST_CASE("lattice indexing round-trips") {
    Lattice box(2, {-2, 0}, {1, 3});
    CHECK(box.site_count() == 16);
    for (std::int64_t s = 0; s < box.site_count(); ++s)
        CHECK(box.index_of(box.coord_of(s)) == s);
    CHECK_THROWS_AS(box.index_of({5, 0}), std::out_of_range);
    CHECK_THROWS_AS(Lattice(1, {3}, {2}), std::invalid_argument);

    // every edge is an ordered l1-neighbour pair, both directions present
    auto edges = box.directed_edges();
    CHECK(edges.size() == 2 * (2 * (3 * 4) + 2 * (4 * 3)) / 2);  // 48 ordered pairs
    for (auto [u, v] : edges) {
        auto cu = box.coord_of(u), cv = box.coord_of(v);
        int dist = std::abs(cu[0] - cv[0]) + std::abs(cu[1] - cv[1]);
        CHECK(dist == 1);
        CHECK(std::find(edges.begin(), edges.end(), std::make_pair(v, u)) != edges.end());
    }
}

TEST_CASE("build is reproducible and seed-sensitive") {
    const auto law = InterarrivalLaw::exponential(1.0);
    const auto box = Lattice::line(0, 10);
    auto a = build_harris(box, 0.0, 20.0, law, 1.0, 42);
    auto b = build_harris(box, 0.0, 20.0, law, 1.0, 42);
    CHECK(a.total_arrow_count() == b.total_arrow_count());
    for (std::size_t e = 0; e < a.arrows.size(); ++e) {
        REQUIRE(a.arrows[e].size() == b.arrows[e].size());
        for (std::size_t i = 0; i < a.arrows[e].size(); ++i) {
            CHECK(a.arrows[e][i].time == b.arrows[e][i].time);
            CHECK(a.arrows[e][i].mark == b.arrows[e][i].mark);
        }
    }
    for (std::size_t s = 0; s < a.trains.size(); ++s) CHECK(a.trains[s].marks == b.trains[s].marks);

    auto c = build_harris(box, 0.0, 20.0, law, 1.0, 43);
    CHECK(a.trains[0].marks != c.trains[0].marks);
}

TEST_CASE("arrow streams and marks are well formed") {
    auto sys = build_harris(Lattice::line(0, 5), 1.0, 30.0, InterarrivalLaw::exponential(1.0),
                            2.0, 7);
    for (const auto& list : sys.arrows) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            CHECK(list[i].time > 1.0);
            CHECK(list[i].time <= 30.0);
            CHECK(list[i].mark >= 0.0);
            CHECK(list[i].mark < 1.0);
            if (i > 0) CHECK(list[i].time > list[i - 1].time);
        }
    }
    for (const auto& tr : sys.trains) {
        CHECK(tr.start == 1.0);
        CHECK(tr.horizon == 30.0);
    }
}

TEST_CASE("active arrow sets are nested in lambda") {
    auto sys = build_harris(Lattice::line(0, 20), 0.0, 30.0, InterarrivalLaw::exponential(1.0),
                            1.0, 11);
    auto lo = active_arrow_times(sys, 0.3);
    auto hi = active_arrow_times(sys, 0.7);
    for (std::size_t e = 0; e < lo.size(); ++e)
        for (double t : lo[e]) CHECK(std::binary_search(hi[e].begin(), hi[e].end(), t));
    CHECK_THROWS_AS(active_arrow_times(sys, 1.5), std::out_of_range);
    CHECK_THROWS_AS(active_arrow_times(sys, -0.1), std::out_of_range);
    // lambda = lambda_max activates everything
    auto all = active_arrow_times(sys, 1.0);
    std::int64_t n = 0;
    for (const auto& e : all) n += static_cast<std::int64_t>(e.size());
    CHECK(n == sys.total_arrow_count());
}

TEST_CASE("capacity cap") {
    const auto law = InterarrivalLaw::exponential(1.0);
    CHECK_THROWS_AS(build_harris(Lattice::line(0, 1000), 0.0, 1000.0, law, 1.0, 1,
                                 StartAllAtWindowLow{}, 1000),
                    CapacityError);
    set_max_events_cap(1000);
    CHECK_THROWS_AS(build_harris(Lattice::line(0, 1000), 0.0, 1000.0, law, 1.0, 1), CapacityError);
    set_max_events_cap(0);  // restore default
    CHECK(max_events_cap() == kDefaultMaxEvents);
}

TEST_CASE("start policies") {
    const auto law = InterarrivalLaw::exponential(1.0);
    const auto box = Lattice::line(0, 5);
    auto sys = build_harris(box, 0.0, 10.0, law, 0.5, 3, StartUniformOffset{4.0});
    for (const auto& tr : sys.trains) {
        CHECK(tr.start <= 0.0);
        CHECK(tr.start >= -4.0);
    }
    auto per = build_harris(box, 0.0, 10.0, law, 0.5, 3, StartPerSite{{-1, -2, -3, 0, 0, 0}});
    CHECK(per.trains[2].start == -3.0);
    CHECK_THROWS_AS(build_harris(box, 0.0, 10.0, law, 0.5, 3, StartPerSite{{-1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_harris(box, 0.0, 10.0, law, 0.5, 3, StartPerSite{{1, 0, 0, 0, 0, 0}}),
                    std::invalid_argument);
}

TEST_CASE("dump and restore round-trip") {
    auto sys = build_harris(Lattice::line(-3, 3), 0.5, 25.0,
                            InterarrivalLaw::shifted_pareto(1.5, 1.0), 0.8, 123);
    std::stringstream buf;
    dump_system(sys, buf);
    auto back = restore_system(buf);
    CHECK(back.lattice == sys.lattice);
    CHECK(back.t_lo == sys.t_lo);
    CHECK(back.t_hi == sys.t_hi);
    CHECK(back.law == sys.law);
    CHECK(back.lambda_max == sys.lambda_max);
    CHECK(back.master_seed == sys.master_seed);
    REQUIRE(back.arrows.size() == sys.arrows.size());
    for (std::size_t e = 0; e < sys.arrows.size(); ++e) {
        REQUIRE(back.arrows[e].size() == sys.arrows[e].size());
        for (std::size_t i = 0; i < sys.arrows[e].size(); ++i) {
            CHECK(back.arrows[e][i].time == sys.arrows[e][i].time);
            CHECK(back.arrows[e][i].mark == sys.arrows[e][i].mark);
        }
    }
    for (std::size_t s = 0; s < sys.trains.size(); ++s)
        CHECK(back.trains[s].marks == sys.trains[s].marks);
}

TEST_CASE("restore rejects bad dumps") {
    auto sys = build_harris(Lattice::line(0, 2), 0.0, 5.0, InterarrivalLaw::exponential(1.0),
                            0.5, 9);
    std::stringstream buf;
    dump_system(sys, buf);
    const std::string bytes = buf.str();

    {
        std::stringstream bad(std::string("XXXX") + bytes.substr(4));
        CHECK_THROWS_WITH_AS(restore_system(bad), "restore_system: bad magic", std::runtime_error);
    }
    {
        std::string versioned = bytes;
        versioned[4] = 9;  // fake version 9
        std::stringstream bad(versioned);
        try {
            restore_system(bad);
            FAIL("expected version mismatch");
        } catch (const std::runtime_error& e) {
            // refusal names both versions
            CHECK(std::string(e.what()).find("v9") != std::string::npos);
            CHECK(std::string(e.what()).find("v1") != std::string::npos);
        }
    }
    {
        std::stringstream bad(bytes.substr(0, bytes.size() / 2));
        CHECK_THROWS_AS(restore_system(bad), std::runtime_error);
    }
}
