#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <agentclass/dataset.hpp>
#include <agentclass/errors.hpp>
#include <agentclass/pwla.hpp>
#include <agentclass/smffnn.hpp>
#include <agentclass/zones.hpp>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace agentclass;

namespace {

std::size_t count_mains(const std::vector<ZoneRecord>& zones) {
    std::size_t k = 0;
    for (const auto& z : zones) k += (z.label && *z.label == 1) ? 1 : 0;
    return k;
}

}  // namespace

TEST_CASE("zone ids render as fixed-width z-prefixed strings") {
    CHECK(zone_id_str(1) == "z000001");
    CHECK(zone_id_str(42) == "z000042");
    CHECK(zone_id_str(999999) == "z999999");
}

TEST_CASE("generation is deterministic per seed") {
    const auto a = generate_zones(40, 4, 7);
    const auto b = generate_zones(40, 4, 7);
    CHECK(a == b);
    CHECK(generate_zones(40, 4, 8) != a);
}

TEST_CASE("generation places exactly k_main class-1 zones") {
    const auto zones = generate_zones(40, 4, 1);
    REQUIRE(zones.size() == 40);
    CHECK(count_mains(zones) == 4);
    for (std::size_t i = 0; i < zones.size(); ++i) {
        CHECK(zones[i].zone_id == i + 1);
        REQUIRE(zones[i].label.has_value());
    }
}

TEST_CASE("generation rejects unusable counts") {
    auto bad = [](std::size_t n, std::size_t k) {
        return testutil::error_name_of([&] { generate_zones(n, k, 1); });
    };
    CHECK(bad(2, 2) == "BadCounts");
    CHECK(bad(5, 0) == "BadCounts");
    CHECK(bad(1, 1) == "BadCounts");
    CHECK(bad(1000000, 4) == "BadCounts");
    CHECK(bad(2, 1) == "(none)");
}

TEST_CASE("attribute draws stay inside the class bands") {
    const auto zones = generate_zones(60, 7, 99);
    const auto& specs = zone_attribute_specs();
    const Dataset ds = zones_to_dataset(zones);
    for (std::size_t i = 0; i < zones.size(); ++i) {
        const ZoneRecord& z = zones[i];
        CHECK(z.x >= 0.0);
        CHECK(z.x <= 1000.0);
        CHECK(z.y >= 0.0);
        CHECK(z.y <= 1000.0);
        for (std::size_t a = 0; a < specs.size(); ++a) {
            const AttributeBand& band = *z.label == 1 ? specs[a].main : specs[a].dep;
            const double v = ds.values.at(i, a);
            CHECK(v >= band.lo);
            CHECK(v <= band.hi);
            if (specs[a].integer) CHECK(v == std::floor(v));
        }
    }
}

TEST_CASE("every generated scenario trains to full accuracy") {
    // main bands sit strictly above depended bands on all eight attributes,
    // so any reduction policy leaves a separating score
    for (std::uint64_t seed : {1, 2, 3, 11, 500}) {
        const auto zones = generate_zones(40, 4, seed);
        const Dataset ds = zones_to_dataset(zones);
        const NormalizedMatrix nm = normalize(ds);
        PotentialWeights pw = potential_weights(nm);
        pw = reduce(std::move(pw), ReductionPolicy::by_mean());
        const NormalizedMatrix proj = project(nm, pw.strong);

        TrainInfo info;
        const SmffnnModel model = train(proj, pw, *ds.labels, &info);
        CHECK(model.train_accuracy == 1.0);
        CHECK(info.score_evaluations == ds.n());

        // brute force over every candidate threshold agrees that a perfect
        // split exists
        std::vector<double> scores(ds.n());
        for (std::size_t i = 0; i < ds.n(); ++i) {
            double s = 0.0;
            for (std::size_t p = 0; p < pw.strong.size(); ++p)
                s += pw.w[pw.strong[p]] * proj.values.at(i, p);
            scores[i] = s;
        }
        const auto best = testoracle::oracle_best_threshold(scores, *ds.labels);
        CHECK(best.best_correct == ds.n());
    }
}

TEST_CASE("coverage matches the brute-force nearest-main oracle") {
    DetRng rng(404);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 5 + rng.uniform_int(0, 55);
        const std::size_t k = 1 + rng.uniform_int(0, static_cast<std::int64_t>(n) - 2);
        const auto zones = generate_zones(n, k, 1000 + rep);
        const CoveragePlan plan = plan_coverage(zones);
        const auto expect = testoracle::oracle_nearest_main(zones);
        CHECK(plan.assignments == expect);
        CHECK(plan.assignments.size() == n - k);
        for (const auto& z : zones) {
            REQUIRE(plan.chart.count(z.zone_id) == 1);
            CHECK(plan.chart.at(z.zone_id) == (*z.label == 1 ? 'A' : 'B'));
        }
    }
}

TEST_CASE("equidistant zones go to the lower main id") {
    std::vector<ZoneRecord> zones(3);
    zones[0].zone_id = 1;
    zones[0].x = 0.0;
    zones[0].label = 1;
    zones[1].zone_id = 2;
    zones[1].x = 10.0;
    zones[1].label = 1;
    zones[2].zone_id = 3;
    zones[2].x = 5.0;
    zones[2].label = 2;
    const CoveragePlan plan = plan_coverage(zones);
    CHECK(plan.assignments.at(3) == 1);
}

TEST_CASE("a single main zone covers everything") {
    const auto zones = generate_zones(30, 1, 5);
    const CoveragePlan plan = plan_coverage(zones);
    std::uint64_t main_id = 0;
    for (const auto& z : zones)
        if (*z.label == 1) main_id = z.zone_id;
    REQUIRE(plan.assignments.size() == 29);
    for (const auto& [dep, main] : plan.assignments) CHECK(main == main_id);
}

TEST_CASE("coverage requires labels and at least one main") {
    auto zones = generate_zones(10, 2, 3);
    for (auto& z : zones) z.label = 2;
    CHECK(testutil::error_name_of([&] { plan_coverage(zones); }) == "NoMainZone");
    zones = generate_zones(10, 2, 3);
    zones[4].label.reset();
    CHECK(testutil::error_name_of([&] { plan_coverage(zones); }) == "MissingLabel");
}

TEST_CASE("exported scenario is one header plus one line per zone") {
    const auto dir = testutil::scratch_dir("zones");
    const auto zones = generate_zones(40, 4, 1);
    const std::string path = (dir / "bare.csv").string();
    export_scenario(zones, path);
    std::istringstream in(testutil::read_text_file(path));
    std::string line;
    std::size_t lines = 0;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "zone_id,x,y,city_population,rural_population,area,neighbor_count,"
          "distance_to_capital,local_employees,insured_persons,health_center_count,label");
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 40);
}

TEST_CASE("exported scenario ingests back bit for bit") {
    const auto dir = testutil::scratch_dir("zones-roundtrip");
    const auto zones = generate_zones(25, 3, 77);
    const std::string path = (dir / "scenario.csv").string();
    export_scenario(zones, path, scenario_comments(25, 3, 77));

    SchemaSelection sel;
    sel.label_column = "label";
    sel.id_column = "zone_id";
    const Dataset back = ingest_csv(path, sel);
    REQUIRE(back.n() == 25);
    REQUIRE(back.d() == 10);
    CHECK(back.attributes[0].name == "x");
    CHECK(back.attributes[1].name == "y");
    for (std::size_t i = 0; i < zones.size(); ++i) {
        CHECK(back.instance_ids[i] == zone_id_str(zones[i].zone_id));
        CHECK(back.values.at(i, 0) == zones[i].x);
        CHECK(back.values.at(i, 1) == zones[i].y);
        CHECK(back.values.at(i, 2) == zones[i].city_population);
        CHECK(back.values.at(i, 9) == zones[i].health_center_count);
        CHECK((*back.labels)[i] == *zones[i].label);
    }
    const std::string text = testutil::read_text_file(path);
    CHECK(text.rfind("# synthetic clinical-zone scenario", 0) == 0);
    CHECK(text.find("# n=25 k_main=3 seed=77\n") != std::string::npos);
}

TEST_CASE("zone table carries the eight attributes and zone ids") {
    auto zones = generate_zones(12, 2, 9);
    const Dataset ds = zones_to_dataset(zones);
    REQUIRE(ds.d() == 8);
    CHECK(ds.attributes.front().name == "city_population");
    CHECK(ds.attributes.back().name == "health_center_count");
    CHECK(ds.instance_ids.front() == "z000001");
    CHECK(ds.instance_ids.back() == "z000012");
    REQUIRE(ds.labels.has_value());

    // labels are all-or-none
    zones[3].label.reset();
    CHECK(testutil::error_name_of([&] { zones_to_dataset(zones); }) == "MissingLabel");
    for (auto& z : zones) z.label.reset();
    CHECK(zones_to_dataset(zones).labels.has_value() == false);
    CHECK(testutil::error_name_of([] { zones_to_dataset({}); }) == "EmptyDataset");
}
