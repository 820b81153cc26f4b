#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agentclass/dataset.hpp"
#include "agentclass/matrix.hpp"

namespace agentclass {

// Output of the preprocessing phase: per-column min-max rescaling into [0,1]
// plus the statistics needed to transform future instances the same way.
// global_mean is the mean over all n*d entries of `values`.
struct NormalizedMatrix {
    std::vector<std::string> attribute_names;
    Matrix values;
    std::vector<double> col_min;
    std::vector<double> col_max;
    std::vector<std::size_t> constant_cols;  // sorted; these columns are all 0 in `values`
    double global_mean = 0.0;

    std::size_t n() const { return values.rows; }
    std::size_t d() const { return values.cols; }

    bool operator==(const NormalizedMatrix&) const = default;
};

enum class ReductionRule { mean_threshold, top_k, fraction_of_max };

// Cutoff rule splitting attributes into strong (kept) and weak (pruned).
struct ReductionPolicy {
    ReductionRule rule = ReductionRule::mean_threshold;
    std::size_t k = 0;    // top_k only
    double tau = 0.0;     // fraction_of_max only, in (0,1]

    static ReductionPolicy by_mean();
    static ReductionPolicy by_top_k(std::size_t k);
    static ReductionPolicy by_fraction(double tau);

    // "mean" | "topk:K" | "frac:T"
    static ReductionPolicy parse(const std::string& text);
    std::string str() const;

    bool operator==(const ReductionPolicy&) const = default;
};

// Per-attribute deviation mass from the global mean. `strong`/`weak` are empty
// until reduce() fills them; both are ordered by original column index.
struct PotentialWeights {
    std::vector<double> w;
    std::vector<std::size_t> strong;
    std::vector<std::size_t> weak;
    std::optional<ReductionPolicy> policy;

    bool reduced() const { return policy.has_value(); }

    bool operator==(const PotentialWeights&) const = default;
};

NormalizedMatrix normalize(const Dataset& ds);

// Transforms one raw instance with the stored column statistics, clamping the
// result into [0,1]; constant columns map to 0.
std::vector<double> apply_normalization(const NormalizedMatrix& nm,
                                        const std::vector<double>& raw_instance);

// w[j] = sum_i |values[i][j] - global_mean|, forced to 0 for columns recorded
// as constant. Deterministic, no randomness anywhere.
PotentialWeights potential_weights(const NormalizedMatrix& nm);

// Fills strong/weak. Only columns with positive weight are ever kept, so
// constant (zero-weight) columns are always pruned. AllWeightsZero when no
// column has positive weight.
PotentialWeights reduce(PotentialWeights pw, const ReductionPolicy& policy);

// Column-subset copy; statistics are subset accordingly and global_mean is
// recomputed over the projected matrix.
NormalizedMatrix project(const NormalizedMatrix& nm, const std::vector<std::size_t>& strong);

// One line per attribute: name, min, max, weight, strong flag. Round-trips
// through parse_weights_snapshot with exact values.
struct WeightsSnapshotRow {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    double weight = 0.0;
    bool strong = false;

    bool operator==(const WeightsSnapshotRow&) const = default;
};

std::string weights_snapshot(const NormalizedMatrix& nm, const PotentialWeights& pw);
std::vector<WeightsSnapshotRow> parse_weights_snapshot(const std::string& text);

}  // namespace agentclass
