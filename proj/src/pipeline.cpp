#include "agentclass/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "agentclass/numfmt.hpp"
#include "agentclass/smffnn.hpp"

namespace agentclass {

namespace {

// Mutable state shared by the plan closures of one run.
struct PipelineState {
    PipelineConfig config;
    std::string base_run_id;
    SchemaSelection current_selection;
    std::size_t cycles_started = 0;
    std::size_t feedbacks_given = 0;
    std::optional<Report> last_report;
};

using StatePtr = std::shared_ptr<PipelineState>;

std::string cycle_run_id(const PipelineState& st) {
    return st.base_run_id + "-c" + std::to_string(st.cycles_started);
}

Json weight_table_json(const std::vector<std::string>& names, const PotentialWeights& pw) {
    std::vector<char> strong(names.size(), 0);
    for (std::size_t j : pw.strong) strong[j] = 1;
    Json table = Json::array();
    for (std::size_t j = 0; j < names.size(); ++j)
        table.push_back(Json{{"name", names[j]}, {"weight", pw.w[j]}, {"strong", strong[j] != 0}});
    return table;
}

Json matrix_json(const Matrix& m) {
    return Json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const Json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    m.data = j.at("data").get<std::vector<double>>();
    return m;
}

// Everything modeling needs to train and evaluate without touching the file.
Json inform_payload(const PipelineState& st, const Dataset& raw_strong,
                    const NormalizedMatrix& projected, const std::vector<std::string>& all_names,
                    const PotentialWeights& pw) {
    Json payload;
    payload["run_id"] = cycle_run_id(st);
    payload["cycle"] = st.cycles_started;
    payload["weight_table"] = weight_table_json(all_names, pw);
    payload["projected"] = Json{{"attribute_names", projected.attribute_names},
                                {"col_min", projected.col_min},
                                {"col_max", projected.col_max},
                                {"constant_cols", projected.constant_cols},
                                {"global_mean", projected.global_mean},
                                {"values", matrix_json(projected.values)}};
    payload["raw_strong"] = Json{{"ids", raw_strong.instance_ids},
                                 {"labels", *raw_strong.labels},
                                 {"values", matrix_json(raw_strong.values)}};
    return payload;
}

Json failure_payload(const std::string& run_id, const DomainError& e) {
    return Json{{"kind", "failure"}, {"run_id", run_id}, {"error", e.name()}, {"detail", e.what()}};
}

std::vector<Plan> acquisition_plans(const StatePtr& st) {
    auto trigger = [](const Event& ev) {
        if (ev.kind == EventKind::percept_arrived) return true;
        return ev.kind == EventKind::message_arrived &&
               ev.message->performative == Performative::feedback;
    };
    auto prepare = [st](AgentContext& ctx) {
        if (ctx.event().kind == EventKind::percept_arrived) {
            st->cycles_started = 1;
        } else {
            if (st->cycles_started >= st->config.max_cycles)
                throw StepLimitExceeded("feedback loop exceeded max_cycles=" +
                                            std::to_string(st->config.max_cycles),
                                        {});
            ++st->cycles_started;
            const Json& payload = ctx.event().message->payload;
            if (payload.is_object() && payload.contains("selection")) {
                st->current_selection.selected =
                    payload.at("selection").get<std::vector<std::string>>();
                ctx.note("selection-revised:" +
                         std::to_string(st->current_selection.selected.size()) + "-columns");
            }
        }
        ctx.note("cycle:" + std::to_string(st->cycles_started));
    };
    auto run_pwla = [st](AgentContext& ctx) {
        try {
            const Dataset ds = ingest_csv(st->config.data_path, st->current_selection);
            if (!ds.labels)
                throw DomainError("UnlabeledDataset", "pipeline needs a label column");
            const NormalizedMatrix nm = normalize(ds);
            const PotentialWeights pw = reduce(potential_weights(nm), st->config.reduction);
            const NormalizedMatrix projected = project(nm, pw.strong);
            std::vector<std::string> strong_names;
            for (std::size_t j : pw.strong) strong_names.push_back(nm.attribute_names[j]);
            const Dataset raw_strong = restrict_columns(ds, strong_names);

            ctx.update_belief("data/normalized",
                              Json{{"instances", nm.n()},
                                   {"attributes", nm.attribute_names},
                                   {"global_mean", nm.global_mean}});
            ctx.update_belief("data/weights", Json{{"weights", pw.w},
                                                   {"strong", strong_names},
                                                   {"policy", st->config.reduction.str()}});
            ctx.send(Performative::inform, "modeling",
                     inform_payload(*st, raw_strong, projected, nm.attribute_names, pw));
        } catch (const DomainError& e) {
            ctx.note("acquisition-failed:" + e.name());
            ctx.send(Performative::report, "delivery", failure_payload(cycle_run_id(*st), e));
        }
    };
    return {Plan{"acquire-and-weight",
                 "turn the raw file into weighted, reduced training data",
                 trigger,
                 {{"prepare-cycle", prepare}, {"run-pwla", run_pwla}}}};
}

std::vector<Plan> modeling_plans(const StatePtr& st) {
    auto trigger = [](const Event& ev) {
        return ev.kind == EventKind::message_arrived &&
               ev.message->performative == Performative::inform;
    };
    auto train_evaluate = [st](AgentContext& ctx) {
        const Json& payload = ctx.event().message->payload;
        const std::string run_id = payload.at("run_id").get<std::string>();
        try {
            const Json& pj = payload.at("projected");
            NormalizedMatrix projected;
            projected.attribute_names = pj.at("attribute_names").get<std::vector<std::string>>();
            projected.col_min = pj.at("col_min").get<std::vector<double>>();
            projected.col_max = pj.at("col_max").get<std::vector<double>>();
            projected.constant_cols = pj.at("constant_cols").get<std::vector<std::size_t>>();
            projected.global_mean = pj.at("global_mean").get<double>();
            projected.values = matrix_from_json(pj.at("values"));

            Dataset raw_strong;
            for (const auto& name : projected.attribute_names)
                raw_strong.attributes.push_back({name, AttributeKind::numeric, ""});
            raw_strong.instance_ids =
                payload.at("raw_strong").at("ids").get<std::vector<std::string>>();
            raw_strong.labels = payload.at("raw_strong").at("labels").get<std::vector<int>>();
            raw_strong.values = matrix_from_json(payload.at("raw_strong").at("values"));
            validate(raw_strong);

            PotentialWeights pw;
            for (const auto& row : payload.at("weight_table"))
                if (row.at("strong").get<bool>()) pw.w.push_back(row.at("weight").get<double>());

            // Normalization stats stay the acquisition-phase full-data stats;
            // the split only chooses which rows train and which evaluate.
            Dataset train_ds = raw_strong;
            Dataset eval_ds = raw_strong;
            if (st->config.test_fraction > 0.0) {
                auto parts = split_train_test(raw_strong, st->config.test_fraction,
                                              st->config.seed);
                train_ds = std::move(parts.first);
                eval_ds = std::move(parts.second);
            }
            std::map<std::string, std::size_t> row_of;
            for (std::size_t i = 0; i < raw_strong.n(); ++i)
                row_of[raw_strong.instance_ids[i]] = i;
            NormalizedMatrix train_nm = projected;
            train_nm.values = Matrix(train_ds.n(), projected.d());
            for (std::size_t i = 0; i < train_ds.n(); ++i) {
                const std::size_t src = row_of.at(train_ds.instance_ids[i]);
                for (std::size_t j = 0; j < projected.d(); ++j)
                    train_nm.values.at(i, j) = projected.values.at(src, j);
            }

            const SmffnnModel model = train(train_nm, pw, *train_ds.labels);
            const Evaluation holdout = evaluate(model, eval_ds);

            Json assignments = Json::array();
            for (std::size_t i = 0; i < raw_strong.n(); ++i) {
                std::vector<double> raw(raw_strong.values.row(i),
                                        raw_strong.values.row(i) + raw_strong.d());
                assignments.push_back(Json{{"id", raw_strong.instance_ids[i]},
                                           {"score", raw_score(model, raw)},
                                           {"class", predict(model, raw)}});
            }

            ctx.update_belief("model/current",
                              Json{{"threshold", model.threshold},
                                   {"orientation", orientation_str(model.orientation)},
                                   {"train_accuracy", model.train_accuracy},
                                   {"holdout_accuracy", holdout.accuracy}});
            Json out{{"kind", "model"},
                     {"run_id", run_id},
                     {"weight_table", payload.at("weight_table")},
                     {"model", Json{{"threshold", model.threshold},
                                    {"orientation", orientation_str(model.orientation)},
                                    {"train_accuracy", model.train_accuracy},
                                    {"holdout_accuracy", holdout.accuracy}}},
                     {"assignments", std::move(assignments)}};
            ctx.send(Performative::report, "delivery", std::move(out));
        } catch (const DomainError& e) {
            ctx.note("modeling-failed:" + e.name());
            ctx.send(Performative::report, "delivery", failure_payload(run_id, e));
        }
    };
    return {Plan{"train-and-evaluate",
                 "fit the one-epoch classifier and measure it",
                 trigger,
                 {{"train-evaluate", train_evaluate}}}};
}

Report report_from_model_payload(const Json& payload) {
    Report report;
    report.run_id = payload.at("run_id").get<std::string>();
    for (const auto& row : payload.at("weight_table"))
        report.weights.push_back({row.at("name").get<std::string>(),
                                  row.at("weight").get<double>(), row.at("strong").get<bool>()});
    std::sort(report.weights.begin(), report.weights.end(),
              [](const WeightRow& a, const WeightRow& b) {
                  if (a.weight != b.weight) return a.weight > b.weight;
                  return a.name < b.name;
              });
    const Json& mj = payload.at("model");
    report.threshold = mj.at("threshold").get<double>();
    report.orientation = parse_orientation(mj.at("orientation").get<std::string>());
    report.train_accuracy = mj.at("train_accuracy").get<double>();
    report.holdout_accuracy = mj.at("holdout_accuracy").get<double>();
    for (const auto& row : payload.at("assignments"))
        report.assignments.push_back({row.at("id").get<std::string>(),
                                      row.at("score").get<double>(),
                                      row.at("class").get<int>()});
    report.recommendations = {{1, 'A'}, {2, 'B'}};
    report.status = "pending";
    return report;
}

std::vector<Plan> delivery_plans(const StatePtr& st) {
    auto is_report = [](const Event& ev, const char* kind) {
        return ev.kind == EventKind::message_arrived &&
               ev.message->performative == Performative::report &&
               ev.message->payload.is_object() &&
               ev.message->payload.value("kind", "model") == kind;
    };
    auto write_current = [st](AgentContext& ctx) {
        try {
            write_report(*st->last_report, st->config.report_path);
            ctx.note("report-written:" + st->last_report->status);
        } catch (const DomainError& e) {
            // keep going: the head still gets the report inline
            ctx.note("report-write-failed:" + e.name());
        }
    };

    auto build_model_report = [st, write_current](AgentContext& ctx) {
        st->last_report = report_from_model_payload(ctx.event().message->payload);
        write_current(ctx);
    };
    auto request_approval = [st](AgentContext& ctx) {
        ctx.send(Performative::request, "head",
                 Json{{"run_id", st->last_report->run_id},
                      {"report", format_report(*st->last_report)}});
    };

    auto build_failure_report = [st, write_current](AgentContext& ctx) {
        const Json& payload = ctx.event().message->payload;
        Report report;
        report.run_id = payload.at("run_id").get<std::string>();
        report.recommendations = {{1, 'A'}, {2, 'B'}};
        report.status = "failed:" + payload.at("error").get<std::string>();
        st->last_report = std::move(report);
        write_current(ctx);
    };

    auto finalize = [st, write_current](AgentContext& ctx) {
        st->last_report->status = "approved";
        write_current(ctx);
        ctx.update_belief("rules/active-plan", Json{{"run_id", st->last_report->run_id},
                                                    {"report_path", st->config.report_path}});
    };
    auto forward_feedback = [](AgentContext& ctx) {
        ctx.send(Performative::feedback, "acquisition", ctx.event().message->payload);
    };

    auto msg_perf = [](const Event& ev, Performative p) {
        return ev.kind == EventKind::message_arrived && ev.message->performative == p;
    };
    return {
        Plan{"deliver-model-report",
             "publish the classification report and ask the head",
             [is_report](const Event& ev) { return is_report(ev, "model"); },
             {{"build-and-write", build_model_report}, {"request-approval", request_approval}}},
        Plan{"deliver-failure-report",
             "publish a failure report",
             [is_report](const Event& ev) { return is_report(ev, "failure"); },
             {{"build-and-write", build_failure_report}}},
        Plan{"handle-approval",
             "activate the approved plan",
             [msg_perf](const Event& ev) { return msg_perf(ev, Performative::approve); },
             {{"finalize", finalize}}},
        Plan{"handle-feedback",
             "route head feedback back to acquisition",
             [msg_perf](const Event& ev) { return msg_perf(ev, Performative::feedback); },
             {{"forward", forward_feedback}}},
    };
}

std::vector<Plan> head_plans(const StatePtr& st) {
    auto trigger = [](const Event& ev) {
        return ev.kind == EventKind::message_arrived &&
               ev.message->performative == Performative::request;
    };
    auto decide = [st](AgentContext& ctx) {
        if (st->feedbacks_given < st->config.head.feedbacks.size()) {
            ctx.reply(Performative::feedback, st->config.head.feedbacks[st->feedbacks_given]);
            ++st->feedbacks_given;
        } else {
            ctx.reply(Performative::approve, Json::object());
        }
    };
    return {Plan{"review-report", "approve or push back", trigger, {{"decide", decide}}}};
}

std::string config_echo(const PipelineConfig& config) {
    std::string sel;
    for (const auto& name : config.selection.selected) sel += name + ",";
    return "sel=" + sel + " label=" + config.selection.label_column.value_or("-") +
           " id=" + config.selection.id_column.value_or("-") +
           " policy=" + config.reduction.str() + " tf=" + fmt_shortest(config.test_fraction) +
           " seed=" + std::to_string(config.seed);
}

}  // namespace

HeadPolicy HeadPolicy::parse(const std::string& text) {
    if (text == "approve") return {};
    if (text.rfind("feedback:", 0) == 0) {
        std::uint64_t n = 0;
        if (!try_parse_u64(std::string_view(text).substr(9), n))
            throw DomainError("BadHeadPolicy", "unreadable count in '" + text + "'");
        HeadPolicy policy;
        for (std::uint64_t i = 0; i < n; ++i) policy.feedbacks.push_back(Json::object());
        return policy;
    }
    throw DomainError("BadHeadPolicy", "expected approve | feedback:N, got '" + text + "'");
}

Protocol pipeline_protocol() {
    Protocol p;
    p.name = "org-pipeline";
    p.open = false;
    p.allowed = {
        {Performative::inform, "acquisition", "modeling"},
        {Performative::report, "modeling", "delivery"},
        {Performative::report, "acquisition", "delivery"},
        {Performative::request, "delivery", "head"},
        {Performative::approve, "head", "delivery"},
        {Performative::feedback, "head", "delivery"},
        {Performative::feedback, "delivery", "acquisition"},
    };
    p.requires_reply = {Performative::request};
    return p;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    if (config.test_fraction < 0.0 || config.test_fraction >= 1.0)
        throw DomainError("BadFraction", "test_fraction must be in [0,1)");
    if (config.max_cycles == 0) throw DomainError("BadCounts", "max_cycles must be >= 1");
    if (config.max_steps == 0) throw DomainError("BadStepLimit", "max_steps must be >= 1");

    std::ifstream in(config.data_path, std::ios::binary);
    if (!in) throw DomainError("FileError", "cannot read '" + config.data_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    auto st = std::make_shared<PipelineState>();
    st->config = config;
    st->current_selection = config.selection;
    st->base_run_id = hex64(fnv1a64(buf.str() + "|" + config_echo(config)));

    Runtime rt(pipeline_protocol());
    rt.register_agent("acquisition", "acquisition", acquisition_plans(st));
    rt.register_agent("modeling", "modeling", modeling_plans(st));
    rt.register_agent("delivery", "delivery", delivery_plans(st));
    rt.register_agent("head", "head", head_plans(st));
    // named in the org chart but out of scope: they consume nothing and do nothing
    rt.register_agent("staff_management", "staff_management", {});
    rt.register_agent("facilities_management", "facilities_management", {});

    rt.inject_percept("acquisition", Json{{"path", config.data_path}});
    rt.run_until_quiescent(config.max_steps);

    using Check = std::vector<std::string> (*)(const Runtime&);
    for (Check check : {Check(check_protocol_safety), Check(check_reply_completeness),
                        Check(check_no_lost_events), Check(check_pairwise_fifo),
                        Check(check_belief_monotonicity)}) {
        const auto issues = check(rt);
        if (!issues.empty()) throw DomainError("ProtocolViolation", issues.front());
    }
    if (!st->last_report) throw DomainError("NoReport", "pipeline reached quiescence without a report");
    return {*st->last_report, rt.trace()};
}

}  // namespace agentclass
