#include "agentclass/zones.hpp"

#include <algorithm>
#include <cmath>

#include "agentclass/errors.hpp"
#include "agentclass/numfmt.hpp"
#include "agentclass/rng.hpp"

namespace agentclass {

const std::array<ZoneAttributeSpec, 8>& zone_attribute_specs() {
    static const std::array<ZoneAttributeSpec, 8> specs = {{
        {"city_population", {20000, 140000}, {500000, 900000}, false},
        {"rural_population", {5000, 60000}, {80000, 200000}, false},
        {"area", {50, 400}, {600, 1500}, false},
        {"neighbor_count", {1, 4}, {6, 10}, true},
        {"distance_to_capital", {5, 80}, {120, 400}, false},
        {"local_employees", {50, 800}, {2000, 8000}, false},
        {"insured_persons", {10000, 90000}, {150000, 600000}, false},
        {"health_center_count", {1, 5}, {8, 20}, true},
    }};
    return specs;
}

std::vector<std::string> zone_attribute_names() {
    std::vector<std::string> names;
    for (const auto& spec : zone_attribute_specs()) names.emplace_back(spec.name);
    return names;
}

std::string zone_id_str(std::uint64_t zone_id) {
    std::string digits = std::to_string(zone_id);
    if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
    return "z" + digits;
}

std::vector<ZoneRecord> generate_zones(std::size_t n, std::size_t k_main, std::uint64_t seed) {
    if (n < 2 || k_main < 1 || k_main >= n)
        throw DomainError("BadCounts", "need 1 <= k_main < n and n >= 2, got n=" +
                                           std::to_string(n) + " k_main=" + std::to_string(k_main));
    if (n > 999999) throw DomainError("BadCounts", "n capped at 999999");

    DetRng rng(seed_stream(seed, "zone-scenario"));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<char> is_main(n, 0);
    for (std::size_t i = 0; i < k_main; ++i) is_main[order[i]] = 1;

    std::vector<ZoneRecord> zones(n);
    for (std::size_t i = 0; i < n; ++i) {
        ZoneRecord& z = zones[i];
        z.zone_id = static_cast<std::uint64_t>(i + 1);
        z.label = is_main[i] ? 1 : 2;
        z.x = rng.uniform(0.0, 1000.0);
        z.y = rng.uniform(0.0, 1000.0);
        double* fields[8] = {&z.city_population,     &z.rural_population, &z.area,
                             &z.neighbor_count,      &z.distance_to_capital, &z.local_employees,
                             &z.insured_persons,     &z.health_center_count};
        const auto& specs = zone_attribute_specs();
        for (std::size_t a = 0; a < specs.size(); ++a) {
            const AttributeBand& band = is_main[i] ? specs[a].main : specs[a].dep;
            if (specs[a].integer) {
                *fields[a] = static_cast<double>(rng.uniform_int(
                    static_cast<std::int64_t>(band.lo), static_cast<std::int64_t>(band.hi)));
            } else {
                *fields[a] = rng.uniform(band.lo, band.hi);
            }
        }
    }
    return zones;
}

CoveragePlan plan_coverage(const std::vector<ZoneRecord>& zones) {
    std::vector<const ZoneRecord*> mains;
    for (const auto& z : zones) {
        if (!z.label) throw DomainError("MissingLabel", "zone " + std::to_string(z.zone_id) +
                                                            " has no class label");
        if (*z.label == 1) mains.push_back(&z);
    }
    if (mains.empty()) throw DomainError("NoMainZone", "no class-1 zone to cover from");
    std::sort(mains.begin(), mains.end(), [](const ZoneRecord* a, const ZoneRecord* b) {
        return a->zone_id < b->zone_id;
    });

    CoveragePlan plan;
    for (const auto& z : zones) {
        plan.chart[z.zone_id] = (*z.label == 1) ? 'A' : 'B';
        if (*z.label == 1) continue;
        const ZoneRecord* best = nullptr;
        double best_d2 = 0.0;
        for (const ZoneRecord* m : mains) {
            const double dx = z.x - m->x;
            const double dy = z.y - m->y;
            const double d2 = dx * dx + dy * dy;
            // strict < over mains in ascending id keeps the lower id on ties
            if (!best || d2 < best_d2) {
                best = m;
                best_d2 = d2;
            }
        }
        plan.assignments[z.zone_id] = best->zone_id;
    }
    return plan;
}

std::vector<std::string> scenario_comments(std::size_t n, std::size_t k_main, std::uint64_t seed) {
    std::vector<std::string> lines;
    lines.push_back("synthetic clinical-zone scenario");
    lines.push_back("n=" + std::to_string(n) + " k_main=" + std::to_string(k_main) +
                    " seed=" + std::to_string(seed));
    lines.push_back("positions: x,y uniform in [0,1000]");
    lines.push_back("attribute ranges (depended | main), integer attributes drawn whole:");
    for (const auto& spec : zone_attribute_specs()) {
        lines.push_back(std::string(spec.name) + ": [" + fmt_shortest(spec.dep.lo) + "," +
                        fmt_shortest(spec.dep.hi) + "] | [" + fmt_shortest(spec.main.lo) + "," +
                        fmt_shortest(spec.main.hi) + "]" + (spec.integer ? " (integer)" : ""));
    }
    return lines;
}

void export_scenario(const std::vector<ZoneRecord>& zones, const std::string& path,
                     const std::vector<std::string>& comments) {
    Dataset ds = zones_to_dataset(zones);
    // positions travel as extra columns so coverage planning can be re-run
    // from the file alone
    Dataset with_pos;
    with_pos.attributes.push_back({"x", AttributeKind::numeric, ""});
    with_pos.attributes.push_back({"y", AttributeKind::numeric, ""});
    for (const auto& a : ds.attributes) with_pos.attributes.push_back(a);
    with_pos.instance_ids = ds.instance_ids;
    with_pos.labels = ds.labels;
    with_pos.values = Matrix(ds.n(), ds.d() + 2);

    std::vector<const ZoneRecord*> by_id;
    for (const auto& z : zones) by_id.push_back(&z);
    std::sort(by_id.begin(), by_id.end(), [](const ZoneRecord* a, const ZoneRecord* b) {
        return a->zone_id < b->zone_id;
    });
    for (std::size_t i = 0; i < by_id.size(); ++i) {
        with_pos.values.at(i, 0) = by_id[i]->x;
        with_pos.values.at(i, 1) = by_id[i]->y;
        for (std::size_t j = 0; j < ds.d(); ++j) with_pos.values.at(i, j + 2) = ds.values.at(i, j);
    }
    validate(with_pos);
    export_csv(with_pos, path, comments, "zone_id");
}

Dataset zones_to_dataset(const std::vector<ZoneRecord>& zones) {
    if (zones.empty()) throw DomainError("EmptyDataset", "no zones to convert");
    std::vector<const ZoneRecord*> by_id;
    for (const auto& z : zones) by_id.push_back(&z);
    std::sort(by_id.begin(), by_id.end(), [](const ZoneRecord* a, const ZoneRecord* b) {
        return a->zone_id < b->zone_id;
    });

    Dataset ds;
    for (const auto& name : zone_attribute_names())
        ds.attributes.push_back({name, AttributeKind::numeric, ""});
    ds.values = Matrix(zones.size(), 8);
    bool any_label = false;
    std::vector<int> labels;
    for (std::size_t i = 0; i < by_id.size(); ++i) {
        const ZoneRecord& z = *by_id[i];
        ds.instance_ids.push_back(zone_id_str(z.zone_id));
        const double row[8] = {z.city_population,     z.rural_population, z.area,
                               z.neighbor_count,      z.distance_to_capital, z.local_employees,
                               z.insured_persons,     z.health_center_count};
        for (std::size_t j = 0; j < 8; ++j) ds.values.at(i, j) = row[j];
        if (z.label) any_label = true;
        labels.push_back(z.label.value_or(0));
    }
    if (any_label) {
        for (int c : labels)
            if (c != 1 && c != 2)
                throw DomainError("MissingLabel", "either all zones carry labels or none");
        ds.labels = std::move(labels);
    }
    validate(ds);
    return ds;
}

}  // namespace agentclass
