#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agentclass/dataset.hpp"

namespace agentclass {

// One clinical zone: a map position plus the eight numeric attributes the
// classifier works on. label 1 = main zone (big hospital), 2 = depended zone
// (health center).
struct ZoneRecord {
    std::uint64_t zone_id = 0;  // 1-based
    double x = 0.0;
    double y = 0.0;
    double city_population = 0.0;
    double rural_population = 0.0;
    double area = 0.0;
    double neighbor_count = 0.0;  // integer-valued
    double distance_to_capital = 0.0;
    double local_employees = 0.0;
    double insured_persons = 0.0;
    double health_center_count = 0.0;  // integer-valued
    std::optional<int> label;

    bool operator==(const ZoneRecord&) const = default;
};

struct AttributeBand {
    double lo = 0.0;
    double hi = 0.0;
};

// Generation ranges per attribute. The main band sits strictly above the
// depended band on every attribute, so any positive weighting of any subset of
// attributes separates the classes after min-max normalization. That keeps the
// 100%-training-accuracy regime reachable by construction.
struct ZoneAttributeSpec {
    const char* name;
    AttributeBand dep;
    AttributeBand main;
    bool integer;  // drawn as whole numbers
};

const std::array<ZoneAttributeSpec, 8>& zone_attribute_specs();
std::vector<std::string> zone_attribute_names();

struct CoveragePlan {
    std::map<std::uint64_t, std::uint64_t> assignments;  // depended zone -> main zone
    std::map<std::uint64_t, char> chart;                 // 'A' for class 1, 'B' for class 2

    bool operator==(const CoveragePlan&) const = default;
};

// Deterministic for a seed: class membership by shuffle, then per zone the
// draws are x, y, and the eight attributes in declared order. Exactly k_main
// zones get label 1. BadCounts unless 1 <= k_main < n.
std::vector<ZoneRecord> generate_zones(std::size_t n, std::size_t k_main, std::uint64_t seed);

// Assigns every class-2 zone to its geometrically nearest class-1 zone
// (Euclidean on positions, ties to the lower zone_id) and maps classes to
// chart types. NoMainZone when no class-1 zone exists; every zone needs a
// label (MissingLabel).
CoveragePlan plan_coverage(const std::vector<ZoneRecord>& zones);

// Comment header lines recording the generation parameters and ranges, for
// embedding in exported scenario files.
std::vector<std::string> scenario_comments(std::size_t n, std::size_t k_main, std::uint64_t seed);

// Tabular file: zone_id,x,y,<eight attributes>,label. Round-trips through
// ingest_csv (id_column zone_id, label column label) bit for bit.
void export_scenario(const std::vector<ZoneRecord>& zones, const std::string& path,
                     const std::vector<std::string>& comments = {});

// The eight attribute columns plus labels; ids are the zone_id strings used by
// export_scenario. Positions are deliberately not attributes.
Dataset zones_to_dataset(const std::vector<ZoneRecord>& zones);

std::string zone_id_str(std::uint64_t zone_id);

}  // namespace agentclass
