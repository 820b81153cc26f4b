// Release gate for the whole toolkit: eight end-to-end checks, one printed
// line each, nonzero exit when any of them fails. Tolerances and budgets are
// pinned here on purpose; loosening them is a release decision, not a test
// edit.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <agentclass/dataset.hpp>
#include <agentclass/pipeline.hpp>
#include <agentclass/pwla.hpp>
#include <agentclass/rng.hpp>
#include <agentclass/smffnn.hpp>
#include <agentclass/zones.hpp>

#include "oracles.hpp"
#include "testutil.hpp"

namespace {

using namespace agentclass;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_secs(double s) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << s << "s";
    return out.str();
}

std::string fmt_millis(double s) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << s * 1000.0 << "ms";
    return out.str();
}

// Attribute order by weight descending, original index on ties. Both weight
// forms must produce exactly this permutation.
std::vector<std::size_t> ranking(const std::vector<double>& w) {
    std::vector<std::size_t> idx(w.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (w[a] != w[b]) return w[a] > w[b];
        return a < b;
    });
    return idx;
}

int run_command(const std::string& cmd) {
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 1: the normalized-deviation weights agree with a naive reimplementation to
// 1e-12 across 1000 random tables, inside 5 seconds.
bool weight_oracle_equivalence(std::string& detail) {
    const auto t0 = Clock::now();
    DetRng rng(101);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.below(30));
        const std::size_t d = 1 + static_cast<std::size_t>(rng.below(10));
        Matrix m = testutil::random_matrix(rng, n, d);
        if (rep % 4 == 0) {
            const std::size_t j = static_cast<std::size_t>(rng.below(static_cast<int>(d)));
            for (std::size_t i = 0; i < n; ++i) m.at(i, j) = 3.25;
        }
        const PotentialWeights pw = potential_weights(normalize(testutil::make_dataset(m)));
        const auto oracle = testoracle::oracle_weights(m);
        for (std::size_t j = 0; j < d; ++j) {
            if (std::fabs(pw.w[j] - oracle.weights[j]) > 1e-12) {
                detail = "dataset " + std::to_string(rep) + " column " + std::to_string(j) +
                         " off by " + std::to_string(pw.w[j] - oracle.weights[j]);
                return false;
            }
        }
    }
    const double secs = seconds_since(t0);
    detail = "1000 datasets within 1e-12, " + fmt_secs(secs);
    return secs < 5.0;
}

// 2: one-epoch training always lands on a best-possible threshold, checked
// exhaustively over every label pattern for n <= 8 and on 500 random tables.
bool threshold_optimality(std::string& detail) {
    const auto t0 = Clock::now();
    DetRng rng(202);
    std::size_t trained = 0;

    auto agrees = [&](const Matrix& m, const std::vector<int>& labels) {
        const NormalizedMatrix nm = normalize(testutil::make_dataset(m, labels));
        const PotentialWeights pw = potential_weights(nm);
        const SmffnnModel model = train(nm, pw, labels);
        std::vector<double> scores(nm.n(), 0.0);
        for (std::size_t i = 0; i < nm.n(); ++i)
            for (std::size_t j = 0; j < nm.d(); ++j) scores[i] += pw.w[j] * nm.values.at(i, j);
        const auto best = testoracle::oracle_best_threshold(scores, labels);
        ++trained;
        return model.train_accuracy ==
               static_cast<double>(best.best_correct) / static_cast<double>(labels.size());
    };

    for (std::size_t n = 2; n <= 8; ++n) {
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
            std::vector<int> labels(n);
            for (std::size_t i = 0; i < n; ++i) labels[i] = (mask >> i) & 1 ? 1 : 2;
            if (!agrees(testutil::random_matrix(rng, n, 2), labels)) {
                detail = "exhaustive case n=" + std::to_string(n) +
                         " mask=" + std::to_string(mask);
                return false;
            }
        }
    }
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.below(199));
        if (!agrees(testutil::random_matrix(rng, n, 2), testutil::random_labels(rng, n))) {
            detail = "random case " + std::to_string(rep);
            return false;
        }
    }
    const double secs = seconds_since(t0);
    detail = std::to_string(trained) + " trainings optimal, " + fmt_secs(secs);
    return secs < 30.0;
}

// 3: the synthetic zone regime trains to exactly 1.0 on the full data in all
// 50 scenarios, and a 0.3 holdout stays >= 0.95 in at least 45 (a degenerate
// split counts as a miss).
bool separable_regime(std::string& detail) {
    const auto t0 = Clock::now();
    int perfect = 0;
    int holdout_hits = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Dataset ds = zones_to_dataset(generate_zones(40, 4, seed));
        const NormalizedMatrix nm = normalize(ds);
        const PotentialWeights pw = reduce(potential_weights(nm), ReductionPolicy::by_mean());
        const NormalizedMatrix proj = project(nm, pw.strong);
        const SmffnnModel full = train(proj, pw, *ds.labels);
        if (full.train_accuracy == 1.0) ++perfect;

        std::vector<std::string> strong_names;
        for (std::size_t j : pw.strong) strong_names.push_back(nm.attribute_names[j]);
        const Dataset raw_strong = restrict_columns(ds, strong_names);
        try {
            const auto parts = split_train_test(raw_strong, 0.3, seed);
            std::map<std::string, std::size_t> row_of;
            for (std::size_t i = 0; i < raw_strong.n(); ++i)
                row_of[raw_strong.instance_ids[i]] = i;
            NormalizedMatrix train_nm = proj;
            train_nm.values = Matrix(parts.first.n(), proj.d());
            for (std::size_t i = 0; i < parts.first.n(); ++i) {
                const std::size_t src = row_of.at(parts.first.instance_ids[i]);
                for (std::size_t j = 0; j < proj.d(); ++j)
                    train_nm.values.at(i, j) = proj.values.at(src, j);
            }
            const SmffnnModel model = train(train_nm, pw, *parts.first.labels);
            if (evaluate(model, parts.second).accuracy >= 0.95) ++holdout_hits;
        } catch (const DomainError&) {
            // unusable split, counts against the hit total
        }
    }
    const double secs = seconds_since(t0);
    detail = std::to_string(perfect) + "/50 perfect, " + std::to_string(holdout_hits) +
             "/50 holdout hits, " + fmt_secs(secs);
    return perfect == 50 && holdout_hits >= 45 && secs < 10.0;
}

// 4: training scores each instance exactly once, and wall time across
// n = 1e3, 1e4, 1e5 grows no faster than twice the n*log(n) model curve.
bool one_epoch_scaling(std::string& detail) {
    DetRng rng(404);
    const std::vector<std::size_t> sizes = {1000, 10000, 100000};
    const std::vector<int> reps = {9, 5, 3};
    std::vector<double> med_secs;

    for (std::size_t s = 0; s < sizes.size(); ++s) {
        const std::size_t n = sizes[s];
        NormalizedMatrix nm;
        for (int j = 0; j < 8; ++j) {
            nm.attribute_names.push_back("a" + std::to_string(j));
            nm.col_min.push_back(0.0);
            nm.col_max.push_back(1.0);
        }
        nm.values = Matrix(n, 8);
        for (double& v : nm.values.data) v = rng.unit();
        PotentialWeights pw;
        pw.w.assign(8, 1.0);
        const std::vector<int> labels = testutil::random_labels(rng, n);

        std::vector<double> times;
        for (int r = 0; r < reps[s]; ++r) {
            TrainInfo info;
            const auto t0 = Clock::now();
            train(nm, pw, labels, &info);
            times.push_back(seconds_since(t0));
            if (info.score_evaluations != n) {
                detail = "n=" + std::to_string(n) + " scored " +
                         std::to_string(info.score_evaluations) + " times";
                return false;
            }
        }
        std::sort(times.begin(), times.end());
        med_secs.push_back(times[times.size() / 2]);
    }

    std::string ratios;
    for (std::size_t s = 1; s < sizes.size(); ++s) {
        const double n_prev = static_cast<double>(sizes[s - 1]);
        const double n_cur = static_cast<double>(sizes[s]);
        const double model_ratio = (n_cur * std::log(n_cur)) / (n_prev * std::log(n_prev));
        const double measured = med_secs[s] / std::max(med_secs[s - 1], 1e-9);
        ratios += (ratios.empty() ? "" : ", ") + fmt_millis(med_secs[s - 1]) + "->" +
                  fmt_millis(med_secs[s]) + " ratio " + std::to_string(measured).substr(0, 5);
        if (measured > 2.0 * model_ratio) {
            detail = "ratio " + std::to_string(measured) + " exceeds 2x model " +
                     std::to_string(model_ratio) + " at n=" + std::to_string(sizes[s]);
            return false;
        }
    }
    detail = "each instance scored once; " + ratios;
    return true;
}

// 5: two identical command-line pipeline runs leave byte-identical report and
// trace files behind.
bool run_determinism(std::string& detail) {
    const auto dir = testutil::scratch_dir("acceptance-determinism");
    const std::string scenario = (dir / "s.csv").string();
    const std::string report = (dir / "run.report").string();
    const std::string trace = (dir / "run.trace").string();
    const std::string quiet = " >/dev/null 2>&1";

    if (run_command(std::string(AGENTCLASS_BIN) + " scenario --n 40 --main 4 --seed 11 --out " +
                    scenario + quiet) != 0) {
        detail = "scenario generation failed";
        return false;
    }
    const std::string cmd = std::string(AGENTCLASS_BIN) + " pipeline --scenario " + scenario +
                            " --head-policy feedback:1 --report " + report + " --trace " + trace +
                            quiet;
    if (run_command(cmd) != 0) {
        detail = "first pipeline run failed";
        return false;
    }
    const std::string report_bytes = testutil::read_text_file(report);
    const std::string trace_bytes = testutil::read_text_file(trace);
    if (run_command(cmd) != 0) {
        detail = "second pipeline run failed";
        return false;
    }
    if (testutil::read_text_file(report) != report_bytes) {
        detail = "report bytes changed between runs";
        return false;
    }
    if (testutil::read_text_file(trace) != trace_bytes) {
        detail = "trace bytes changed between runs";
        return false;
    }
    detail = "report and trace byte-identical across reruns";
    return true;
}

// 6: 100 randomized head schedules (feedback counts and selection revisions)
// all run to approval with the runtime's conversation checks clean: replies
// complete, per-pair FIFO order, no lost events, belief versions monotone.
// run_pipeline throws on any check violation, and the belief versions are
// re-derived here from the trace.
bool protocol_suite(std::string& detail) {
    const auto dir = testutil::scratch_dir("acceptance-protocol");
    const std::string scenario = (dir / "s.csv").string();
    const std::vector<std::string> names = zone_attribute_names();
    DetRng rng(606);

    for (int rep = 0; rep < 100; ++rep) {
        export_scenario(generate_zones(40, 4, 700 + static_cast<std::uint64_t>(rep)), scenario);
        const int feedback_count = static_cast<int>(rng.below(4));
        PipelineConfig config;
        config.data_path = scenario;
        config.selection.selected = names;
        config.selection.label_column = "label";
        config.selection.id_column = "zone_id";
        config.report_path = (dir / "run.report").string();
        config.seed = static_cast<std::uint64_t>(rep);
        config.max_cycles = static_cast<std::size_t>(feedback_count) + 1;
        for (int f = 0; f < feedback_count; ++f) {
            if (rng.below(2) == 0) {
                std::vector<std::string> subset = names;
                rng.shuffle(subset);
                subset.resize(1 + static_cast<std::size_t>(rng.below(8)));
                std::sort(subset.begin(), subset.end());
                config.head.feedbacks.push_back(Json{{"selection", subset}});
            } else {
                config.head.feedbacks.push_back(Json::object());
            }
        }

        try {
            const PipelineResult result = run_pipeline(config);
            if (result.report.status != "approved") {
                detail = "schedule " + std::to_string(rep) + " ended " + result.report.status;
                return false;
            }
            const std::string want_suffix = "-c" + std::to_string(feedback_count + 1);
            if (result.report.run_id.size() < want_suffix.size() ||
                result.report.run_id.substr(result.report.run_id.size() - want_suffix.size()) !=
                    want_suffix) {
                detail = "schedule " + std::to_string(rep) + " ran wrong cycle count";
                return false;
            }
            std::map<std::string, std::uint64_t> versions;
            for (const auto& record : result.trace) {
                for (const auto& action : record.actions) {
                    if (action.rfind("belief:", 0) != 0) continue;
                    const auto at = action.rfind("@v");
                    const std::string key = action.substr(7, at - 7);
                    const std::uint64_t v = std::stoull(action.substr(at + 2));
                    if (v != versions[key] + 1) {
                        detail = "schedule " + std::to_string(rep) + " belief " + key +
                                 " jumped to v" + std::to_string(v);
                        return false;
                    }
                    versions[key] = v;
                }
            }
        } catch (const std::exception& e) {
            detail = "schedule " + std::to_string(rep) + " raised: " + e.what();
            return false;
        }
    }
    detail = "100 schedules approved, all conversation checks clean";
    return true;
}

// 7: across 200 random scenarios every depended zone is assigned to its true
// nearest main zone per the brute-force distance oracle.
bool coverage_correctness(std::string& detail) {
    DetRng rng(707);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.below(79));
        const std::size_t k = 1 + static_cast<std::size_t>(rng.below(static_cast<int>(n) - 1));
        const auto zones = generate_zones(n, k, 3000 + static_cast<std::uint64_t>(rep));
        const CoveragePlan plan = plan_coverage(zones);
        if (plan.assignments != testoracle::oracle_nearest_main(zones)) {
            detail = "scenario " + std::to_string(rep) + " (n=" + std::to_string(n) +
                     " k=" + std::to_string(k) + ") disagrees with the oracle";
            return false;
        }
    }
    detail = "200 scenarios, zero assignment violations";
    return true;
}

// 8: deviation-form and ratio-form weights rank attributes identically and
// pick identical top-k strong sets on 500 random tables with positive global
// mean (the forms differ by the constant factor 1/g).
bool ranking_invariance(std::string& detail) {
    DetRng rng(808);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.below(39));
        const std::size_t d = 2 + static_cast<std::size_t>(rng.below(9));
        Matrix m = testutil::random_matrix(rng, n, d, 0.0, 50.0);
        if (rep % 5 == 0 && d >= 3) {
            const std::size_t j = static_cast<std::size_t>(rng.below(static_cast<int>(d)));
            for (std::size_t i = 0; i < n; ++i) m.at(i, j) = 7.5;
        }
        const auto oracle = testoracle::oracle_weights(m);
        if (!(oracle.global_mean > 0.0)) {
            detail = "dataset " + std::to_string(rep) + " has non-positive global mean";
            return false;
        }
        const std::vector<double> ratio = testoracle::oracle_ratio_weights(oracle);
        if (ranking(oracle.weights) != ranking(ratio)) {
            detail = "dataset " + std::to_string(rep) + " ranks attributes differently";
            return false;
        }

        const std::size_t k = 1 + static_cast<std::size_t>(rng.below(static_cast<int>(d)));
        const PotentialWeights dev_pw = potential_weights(normalize(testutil::make_dataset(m)));
        PotentialWeights ratio_pw;
        ratio_pw.w = ratio;
        const auto dev_strong = reduce(dev_pw, ReductionPolicy::by_top_k(k)).strong;
        const auto ratio_strong = reduce(ratio_pw, ReductionPolicy::by_top_k(k)).strong;
        if (dev_strong != ratio_strong) {
            detail = "dataset " + std::to_string(rep) + " top-" + std::to_string(k) +
                     " sets differ";
            return false;
        }
    }
    detail = "500 datasets, identical rankings and top-k sets";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*run)(std::string&);
    };
    const std::vector<Criterion> criteria = {
        {"weight-oracle equivalence", weight_oracle_equivalence},
        {"threshold optimality", threshold_optimality},
        {"separable-regime accuracy", separable_regime},
        {"one-epoch scaling", one_epoch_scaling},
        {"run determinism", run_determinism},
        {"agent protocol suite", protocol_suite},
        {"coverage correctness", coverage_correctness},
        {"ranking invariance", ranking_invariance},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("unexpected exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": "
                  << criteria[i].name << " (" << detail << ")\n";
        failures += ok ? 0 : 1;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 8 criteria passed\n";
    return 0;
}
