#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "agentclass/dataset.hpp"
#include "agentclass/pwla.hpp"

namespace agentclass {

// Which side of the threshold is class 1. Learned during training; scores
// exactly equal to the threshold take the orientation's "above" class.
enum class Orientation { class1_above, class1_below };

std::string orientation_str(Orientation o);
Orientation parse_orientation(const std::string& text);

// Binary-step linear classifier over the retained attributes. The retained
// attributes act as the single hidden layer: values pass through unchanged and
// the output node computes the weighted sum plus a step at `threshold`.
// Immutable after training, safe to share across threads.
struct SmffnnModel {
    std::vector<std::string> attribute_names;
    std::vector<double> weights;
    std::vector<double> col_min;  // training normalization stats, per retained column
    std::vector<double> col_max;
    double threshold = 0.0;
    Orientation orientation = Orientation::class1_above;
    double train_accuracy = 0.0;

    std::size_t d() const { return weights.size(); }

    bool operator==(const SmffnnModel&) const = default;
};

struct Evaluation {
    double accuracy = 0.0;
    std::array<std::array<std::size_t, 2>, 2> confusion{};  // [true class - 1][predicted - 1]
    std::vector<double> scores;  // per instance, dataset row order

    bool operator==(const Evaluation&) const = default;
};

// Filled by train() so tests can hold it to the one-epoch contract.
struct TrainInfo {
    std::size_t score_evaluations = 0;  // exactly n, one per training instance
    std::size_t candidate_count = 0;    // distinct-score midpoints plus the two sentinels
};

// Weighted sum over an already-normalized instance, columns left to right.
double score(const SmffnnModel& model, const std::vector<double>& normalized_instance);

// Single-pass training: scores every instance once, then picks the threshold
// from the midpoints between consecutive distinct sorted scores plus one
// candidate below the minimum and one above the maximum. Selection maximizes
// training accuracy; ties prefer the larger margin (min distance from the
// threshold to any score), then class1_above, then the smaller threshold.
// `pw` must be reduced with nm projected to its strong columns, or unreduced
// with w already matching nm's width.
SmffnnModel train(const NormalizedMatrix& nm, const PotentialWeights& pw,
                  const std::vector<int>& labels, TrainInfo* info = nullptr);

// Normalizes a raw instance with the stored stats (clamped into [0,1]), scores
// it, and applies the step.
int predict(const SmffnnModel& model, const std::vector<double>& raw_instance);

// The score predict() decides on, for callers that need both.
double raw_score(const SmffnnModel& model, const std::vector<double>& raw_instance);

// Per-instance predict over a labeled dataset whose columns are exactly the
// model's retained attributes, in order.
Evaluation evaluate(const SmffnnModel& model, const Dataset& test);

std::string format_model(const SmffnnModel& model);
SmffnnModel parse_model(const std::string& text);
void save_model(const SmffnnModel& model, const std::string& path);
SmffnnModel load_model(const std::string& path);

}  // namespace agentclass
