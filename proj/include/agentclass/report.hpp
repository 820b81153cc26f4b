#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agentclass/smffnn.hpp"

namespace agentclass {

struct WeightRow {
    std::string name;
    double weight = 0.0;
    bool strong = false;

    bool operator==(const WeightRow&) const = default;
};

struct AssignmentRow {
    std::string id;
    double score = 0.0;
    int cls = 0;

    bool operator==(const AssignmentRow&) const = default;
};

// What delivery hands to the organization head: weight table sorted by weight
// descending (ties by name), model summary, one assignment per ingested
// instance in id order, the class-to-chart mapping, and the approval status.
// A failed run keeps run_id and status ("failed:<ErrorName>") and leaves the
// model fields empty.
struct Report {
    std::string run_id;
    std::vector<WeightRow> weights;
    std::optional<double> threshold;
    std::optional<Orientation> orientation;
    std::optional<double> train_accuracy;
    std::optional<double> holdout_accuracy;
    std::vector<AssignmentRow> assignments;
    std::map<int, char> recommendations;  // class -> chart type, always both classes
    std::string status = "pending";       // pending | approved | failed:<Name>

    bool operator==(const Report&) const = default;
};

// Fixed section order (header, [weights], [model], [assignments],
// [recommendations], [approval]); numeric fields use shortest round-trip form
// so parse_report(format_report(r)) == r byte-stably.
std::string format_report(const Report& report);
Report parse_report(const std::string& text);

void write_report(const Report& report, const std::string& path);
Report read_report(const std::string& path);

}  // namespace agentclass
