#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agentclass/dataset.hpp"
#include "agentclass/pwla.hpp"
#include "agentclass/report.hpp"
#include "agentclass/runtime.hpp"

namespace agentclass {

// Scripted organization head: answers the i-th approval request with
// feedbacks[i] while any remain, then approves. A feedback payload may carry
// {"selection": [attribute names]} to steer the next acquisition cycle.
struct HeadPolicy {
    std::vector<Json> feedbacks;

    // "approve" | "feedback:N" (N content-free feedback rounds, then approve)
    static HeadPolicy parse(const std::string& text);
};

struct PipelineConfig {
    std::string data_path;
    SchemaSelection selection;
    ReductionPolicy reduction = ReductionPolicy::by_mean();
    double test_fraction = 0.3;  // 0 disables the split: train and evaluate on everything
    std::uint64_t seed = 1;
    std::string report_path = "report.txt";
    HeadPolicy head;
    std::size_t max_cycles = 5;   // acquisition runs before the feedback loop is cut off
    std::size_t max_steps = 1000;  // scheduler budget
};

// The interaction rules of the organization: delivery requests approval from
// the head, the head answers approve or feedback, feedback flows back to
// acquisition, and the data path runs acquisition -> modeling -> delivery.
Protocol pipeline_protocol();

struct PipelineResult {
    Report report;
    std::vector<TraceRecord> trace;
};

// Wires head + acquisition/modeling/delivery (plus the two inert placeholder
// roles) onto a fresh runtime, injects the initial percept, and runs to
// quiescence. Dataset and training failures come back as a report with status
// "failed:<Name>"; exhausted feedback cycles or scheduler budget raise
// StepLimitExceeded with the partial trace.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace agentclass
