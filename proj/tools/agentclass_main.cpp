// Command-line front end: ingestion, attribute weighting, one-epoch training,
// classification, the full organization pipeline, and scenario generation.
// Exit codes: 0 success, 2 domain error (error name on stderr), 3 step/limit.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agentclass/dataset.hpp"
#include "agentclass/manifest.hpp"
#include "agentclass/numfmt.hpp"
#include "agentclass/pipeline.hpp"
#include "agentclass/pwla.hpp"
#include "agentclass/report.hpp"
#include "agentclass/smffnn.hpp"
#include "agentclass/zones.hpp"

namespace {

using namespace agentclass;

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("FileError", "cannot write '" + path + "'");
    out << text;
    if (!out) throw DomainError("FileError", "write failed for '" + path + "'");
}

struct WeightsArgs {
    std::string data;
    std::string select;
    std::string label;
    std::string id;
    std::string policy = "mean";
    std::string out = "weights.txt";
    std::string manifest;
};

struct TrainArgs {
    std::string data;
    std::string select;
    std::string label;
    std::string id;
    std::string policy = "mean";
    double test_fraction = 0.3;
    std::uint64_t seed = 1;
    std::string out;
    std::string manifest;
};

struct ClassifyArgs {
    std::string model;
    std::string data;
    std::string id;
    std::string manifest;
};

struct PipelineArgs {
    std::string scenario;
    std::string head_policy = "approve";
    std::string trace;
    std::string report = "report.txt";
    std::string select;
    std::string label = "label";
    std::string id = "zone_id";
    std::string policy = "mean";
    double test_fraction = 0.3;
    std::uint64_t seed = 1;
    std::size_t max_cycles = 5;
    std::size_t max_steps = 1000;
    std::string manifest;
};

struct ScenarioArgs {
    std::size_t n = 40;
    std::size_t k_main = 4;
    std::uint64_t seed = 1;
    std::string out;
    std::string manifest;
};

SchemaSelection make_selection(const std::string& select, const std::string& label,
                               const std::string& id) {
    SchemaSelection sel;
    sel.selected = split_csv_list(select);
    if (!label.empty()) sel.label_column = label;
    if (!id.empty()) sel.id_column = id;
    return sel;
}

void maybe_write_manifest(const std::string& path, const std::string& command,
                          const std::string& config, const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs) {
    if (path.empty()) return;
    RunManifest m;
    m.command = command;
    m.config = config;
    for (const auto& p : inputs) add_input(m, p);
    for (const auto& p : outputs) add_output(m, p);
    write_manifest(m, path);
}

int cmd_weights(const WeightsArgs& args) {
    const SchemaSelection sel = make_selection(args.select, args.label, args.id);
    const ReductionPolicy policy = ReductionPolicy::parse(args.policy);
    const Dataset ds = ingest_csv(args.data, sel);
    const NormalizedMatrix nm = normalize(ds);
    const PotentialWeights pw = reduce(potential_weights(nm), policy);

    struct Row {
        std::string name;
        double weight;
        bool strong;
    };
    std::vector<Row> rows;
    std::vector<char> strong(nm.d(), 0);
    for (std::size_t j : pw.strong) strong[j] = 1;
    for (std::size_t j = 0; j < nm.d(); ++j)
        rows.push_back({nm.attribute_names[j], pw.w[j], strong[j] != 0});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.name < b.name;
    });

    std::size_t name_w = std::string("attribute").size();
    for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
    std::cout << pad_right("attribute", name_w) << "  " << pad_left("weight", 12) << "  strong\n";
    for (const auto& r : rows)
        std::cout << pad_right(r.name, name_w) << "  " << pad_left(fmt_fixed(r.weight, 6), 12)
                  << "  " << (r.strong ? "1" : "0") << "\n";

    write_text_file(args.out, weights_snapshot(nm, pw));
    maybe_write_manifest(args.manifest, "weights",
                         "data=" + args.data + " select=" + args.select + " label=" + args.label +
                             " id=" + args.id + " policy=" + policy.str() + " out=" + args.out,
                         {args.data}, {args.out});
    return 0;
}

int cmd_train(const TrainArgs& args) {
    const SchemaSelection sel = make_selection(args.select, args.label, args.id);
    if (!sel.label_column) throw DomainError("UnlabeledDataset", "--label is required");
    const ReductionPolicy policy = ReductionPolicy::parse(args.policy);
    if (args.test_fraction < 0.0 || args.test_fraction >= 1.0)
        throw DomainError("BadFraction", "--test-fraction must be in [0,1)");

    const Dataset ds = ingest_csv(args.data, sel);
    const NormalizedMatrix nm = normalize(ds);
    const PotentialWeights pw = reduce(potential_weights(nm), policy);
    const NormalizedMatrix projected = project(nm, pw.strong);
    std::vector<std::string> strong_names;
    for (std::size_t j : pw.strong) strong_names.push_back(nm.attribute_names[j]);
    const Dataset raw_strong = restrict_columns(ds, strong_names);

    Dataset train_ds = raw_strong;
    Dataset eval_ds = raw_strong;
    if (args.test_fraction > 0.0) {
        auto parts = split_train_test(raw_strong, args.test_fraction, args.seed);
        train_ds = std::move(parts.first);
        eval_ds = std::move(parts.second);
    }
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < raw_strong.n(); ++i) row_of[raw_strong.instance_ids[i]] = i;
    NormalizedMatrix train_nm = projected;
    train_nm.values = Matrix(train_ds.n(), projected.d());
    for (std::size_t i = 0; i < train_ds.n(); ++i) {
        const std::size_t src = row_of.at(train_ds.instance_ids[i]);
        for (std::size_t j = 0; j < projected.d(); ++j)
            train_nm.values.at(i, j) = projected.values.at(src, j);
    }

    std::vector<double> strong_w;
    for (std::size_t j : pw.strong) strong_w.push_back(pw.w[j]);
    PotentialWeights flat;
    flat.w = std::move(strong_w);
    const SmffnnModel model = train(train_nm, flat, *train_ds.labels);
    const Evaluation holdout = evaluate(model, eval_ds);

    save_model(model, args.out);
    std::cout << "train_accuracy " << fmt_fixed(model.train_accuracy, 3) << "\n";
    std::cout << "holdout_accuracy " << fmt_fixed(holdout.accuracy, 3) << "\n";
    maybe_write_manifest(args.manifest, "train",
                         "data=" + args.data + " select=" + args.select + " label=" + args.label +
                             " id=" + args.id + " policy=" + policy.str() +
                             " tf=" + fmt_shortest(args.test_fraction) +
                             " seed=" + std::to_string(args.seed) + " out=" + args.out,
                         {args.data}, {args.out});
    return 0;
}

int cmd_classify(const ClassifyArgs& args) {
    const SmffnnModel model = load_model(args.model);
    SchemaSelection sel;
    sel.selected = model.attribute_names;
    if (!args.id.empty()) sel.id_column = args.id;
    const Dataset ds = ingest_csv(args.data, sel);

    std::size_t id_w = std::string("id").size();
    for (const auto& id : ds.instance_ids) id_w = std::max(id_w, id.size());
    std::cout << pad_right("id", id_w) << "  " << pad_left("score", 12) << "  class\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        std::vector<double> raw(ds.values.row(i), ds.values.row(i) + ds.d());
        std::cout << pad_right(ds.instance_ids[i], id_w) << "  "
                  << pad_left(fmt_fixed(raw_score(model, raw), 6), 12) << "  "
                  << predict(model, raw) << "\n";
    }
    maybe_write_manifest(args.manifest, "classify",
                         "model=" + args.model + " data=" + args.data + " id=" + args.id,
                         {args.model, args.data}, {});
    return 0;
}

int cmd_pipeline(const PipelineArgs& args) {
    std::string select = args.select;
    if (select.empty()) {
        for (const auto& name : zone_attribute_names()) {
            if (!select.empty()) select += ',';
            select += name;
        }
    }
    PipelineConfig config;
    config.data_path = args.scenario;
    config.selection = make_selection(select, args.label, args.id);
    config.reduction = ReductionPolicy::parse(args.policy);
    config.test_fraction = args.test_fraction;
    config.seed = args.seed;
    config.report_path = args.report;
    config.head = HeadPolicy::parse(args.head_policy);
    config.max_cycles = args.max_cycles;
    config.max_steps = args.max_steps;

    PipelineResult result;
    try {
        result = run_pipeline(config);
    } catch (const StepLimitExceeded& e) {
        if (!args.trace.empty()) write_text_file(args.trace, format_trace(e.partial_trace()));
        throw;
    }
    if (!args.trace.empty()) write_text_file(args.trace, format_trace(result.trace));

    std::cout << "run_id " << result.report.run_id << "\n";
    std::cout << "status " << result.report.status << "\n";
    if (result.report.status.rfind("failed:", 0) == 0) {
        std::cerr << result.report.status.substr(7) << ": pipeline reported a failure\n";
        return 2;
    }
    std::cout << "train_accuracy " << fmt_fixed(result.report.train_accuracy.value_or(0.0), 3)
              << "\n";
    std::cout << "holdout_accuracy " << fmt_fixed(result.report.holdout_accuracy.value_or(0.0), 3)
              << "\n";

    std::vector<std::string> outputs = {args.report};
    if (!args.trace.empty()) outputs.push_back(args.trace);
    maybe_write_manifest(args.manifest, "pipeline",
                         "scenario=" + args.scenario + " head=" + args.head_policy +
                             " select=" + args.select + " label=" + args.label + " id=" + args.id +
                             " policy=" + args.policy + " tf=" + fmt_shortest(args.test_fraction) +
                             " seed=" + std::to_string(args.seed) +
                             " max_cycles=" + std::to_string(args.max_cycles) +
                             " report=" + args.report + " trace=" + args.trace,
                         {args.scenario}, outputs);
    return 0;
}

int cmd_scenario(const ScenarioArgs& args) {
    const auto zones = generate_zones(args.n, args.k_main, args.seed);
    export_scenario(zones, args.out, scenario_comments(args.n, args.k_main, args.seed));
    std::cout << "wrote " << zones.size() << " zones to " << args.out << "\n";
    maybe_write_manifest(args.manifest, "scenario",
                         "n=" + std::to_string(args.n) + " main=" + std::to_string(args.k_main) +
                             " seed=" + std::to_string(args.seed) + " out=" + args.out,
                         {}, {args.out});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"organizational classification toolkit"};
    app.require_subcommand(1);

    WeightsArgs wa;
    CLI::App* weights = app.add_subcommand("weights", "attribute weight table + snapshot");
    weights->add_option("--data", wa.data, "input table")->required();
    weights->add_option("--select", wa.select, "comma-separated attribute columns")->required();
    weights->add_option("--label", wa.label, "label column (ignored for weighting)");
    weights->add_option("--id", wa.id, "instance id column");
    weights->add_option("--policy", wa.policy, "mean | topk:K | frac:T");
    weights->add_option("--out", wa.out, "snapshot file (default weights.txt)");
    weights->add_option("--manifest", wa.manifest, "write a run manifest here");

    TrainArgs ta;
    CLI::App* train = app.add_subcommand("train", "one-epoch training + evaluation");
    train->add_option("--data", ta.data, "labeled input table")->required();
    train->add_option("--select", ta.select, "attribute columns (default: all but label/id)");
    train->add_option("--label", ta.label, "label column")->required();
    train->add_option("--id", ta.id, "instance id column");
    train->add_option("--policy", ta.policy, "mean | topk:K | frac:T");
    train->add_option("--test-fraction", ta.test_fraction, "held-out fraction, 0 disables");
    train->add_option("--seed", ta.seed, "split seed");
    train->add_option("--out", ta.out, "model snapshot file")->required();
    train->add_option("--manifest", ta.manifest, "write a run manifest here");

    ClassifyArgs ca;
    CLI::App* classify = app.add_subcommand("classify", "assignments for a trained model");
    classify->add_option("--model", ca.model, "model snapshot")->required();
    classify->add_option("--data", ca.data, "input table")->required();
    classify->add_option("--id", ca.id, "instance id column");
    classify->add_option("--manifest", ca.manifest, "write a run manifest here");

    PipelineArgs pa;
    CLI::App* pipeline = app.add_subcommand("pipeline", "full organization pipeline");
    pipeline->add_option("--scenario", pa.scenario, "scenario/data file")->required();
    pipeline->add_option("--head-policy", pa.head_policy, "approve | feedback:N");
    pipeline->add_option("--trace", pa.trace, "write the dispatch trace here")->required();
    pipeline->add_option("--report", pa.report, "report file (default report.txt)");
    pipeline->add_option("--select", pa.select, "attribute columns (default: zone attributes)");
    pipeline->add_option("--label", pa.label, "label column (default label)");
    pipeline->add_option("--id", pa.id, "id column (default zone_id)");
    pipeline->add_option("--policy", pa.policy, "mean | topk:K | frac:T");
    pipeline->add_option("--test-fraction", pa.test_fraction, "held-out fraction");
    pipeline->add_option("--seed", pa.seed, "split seed");
    pipeline->add_option("--max-cycles", pa.max_cycles, "feedback cycle cap");
    pipeline->add_option("--max-steps", pa.max_steps, "scheduler budget");
    pipeline->add_option("--manifest", pa.manifest, "write a run manifest here");

    ScenarioArgs sa;
    CLI::App* scenario = app.add_subcommand("scenario", "generate a synthetic zone scenario");
    scenario->add_option("--n", sa.n, "zone count");
    scenario->add_option("--main", sa.k_main, "main (class 1) zone count");
    scenario->add_option("--seed", sa.seed, "generation seed");
    scenario->add_option("--out", sa.out, "scenario file")->required();
    scenario->add_option("--manifest", sa.manifest, "write a run manifest here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (weights->parsed()) return cmd_weights(wa);
        if (train->parsed()) return cmd_train(ta);
        if (classify->parsed()) return cmd_classify(ca);
        if (pipeline->parsed()) return cmd_pipeline(pa);
        if (scenario->parsed()) return cmd_scenario(sa);
    } catch (const StepLimitExceeded& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
