#include "agentclass/smffnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "agentclass/errors.hpp"
#include "agentclass/numfmt.hpp"

namespace agentclass {

namespace {

// Distance from theta to the nearest score; used as the tie-break margin.
double margin_at(const std::vector<double>& sorted_scores, double theta) {
    const auto it = std::lower_bound(sorted_scores.begin(), sorted_scores.end(), theta);
    double m = std::numeric_limits<double>::infinity();
    if (it != sorted_scores.begin()) m = std::min(m, theta - *(it - 1));
    if (it != sorted_scores.end()) m = std::min(m, *it - theta);
    return m;
}

// Stored-stats min-max rescale with clamping; degenerate columns map to 0.
std::vector<double> normalize_raw(const SmffnnModel& model, const std::vector<double>& raw) {
    std::vector<double> norm(model.d(), 0.0);
    for (std::size_t j = 0; j < model.d(); ++j) {
        if (model.col_min[j] == model.col_max[j]) continue;
        const double v = (raw[j] - model.col_min[j]) / (model.col_max[j] - model.col_min[j]);
        norm[j] = std::min(1.0, std::max(0.0, v));
    }
    return norm;
}

int step_class(const SmffnnModel& model, double s) {
    const bool above = s >= model.threshold;
    if (model.orientation == Orientation::class1_above) return above ? 1 : 2;
    return above ? 2 : 1;
}

struct Candidate {
    std::size_t correct = 0;
    double margin = 0.0;
    Orientation orientation = Orientation::class1_above;
    double theta = 0.0;
};

// True when a beats b under the selection order: more correct, then larger
// margin, then class1_above, then smaller theta.
bool beats(const Candidate& a, const Candidate& b) {
    if (a.correct != b.correct) return a.correct > b.correct;
    if (a.margin != b.margin) return a.margin > b.margin;
    if (a.orientation != b.orientation) return a.orientation == Orientation::class1_above;
    return a.theta < b.theta;
}

}  // namespace

std::string orientation_str(Orientation o) {
    return o == Orientation::class1_above ? "class1_above" : "class1_below";
}

Orientation parse_orientation(const std::string& text) {
    if (text == "class1_above") return Orientation::class1_above;
    if (text == "class1_below") return Orientation::class1_below;
    throw DomainError("BadSnapshot", "unknown orientation '" + text + "'");
}

double score(const SmffnnModel& model, const std::vector<double>& normalized_instance) {
    if (normalized_instance.size() != model.d())
        throw DomainError("DimensionMismatch",
                          "instance has " + std::to_string(normalized_instance.size()) +
                              " values, model expects " + std::to_string(model.d()));
    double s = 0.0;
    for (std::size_t j = 0; j < model.d(); ++j) s += model.weights[j] * normalized_instance[j];
    return s;
}

SmffnnModel train(const NormalizedMatrix& nm, const PotentialWeights& pw,
                  const std::vector<int>& labels, TrainInfo* info) {
    const std::size_t n = nm.n();
    if (labels.size() != n)
        throw DomainError("ShapeMismatch", "label count does not match instance count");
    if (n == 0) throw DomainError("EmptyDataset", "cannot train on zero instances");

    SmffnnModel model;
    model.attribute_names = nm.attribute_names;
    model.col_min = nm.col_min;
    model.col_max = nm.col_max;
    if (pw.reduced()) {
        if (pw.strong.size() != nm.d())
            throw DomainError("ShapeMismatch", "matrix is not projected to the strong columns");
        for (std::size_t j : pw.strong) model.weights.push_back(pw.w[j]);
    } else {
        if (pw.w.size() != nm.d())
            throw DomainError("ShapeMismatch", "weight vector does not match matrix width");
        model.weights = pw.w;
    }

    std::size_t total1 = 0;
    for (int c : labels) {
        if (c != 1 && c != 2) throw DomainError("InvalidLabel", "labels must be 1 or 2");
        if (c == 1) ++total1;
    }
    const std::size_t total2 = n - total1;
    if (total1 == 0 || total2 == 0)
        throw DomainError("SingleClassTraining", "both classes must appear in the training set");

    // The single epoch: every instance is scored exactly once.
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(nm.values.row(i), nm.values.row(i) + nm.d());
        scores[i] = score(model, row);
        if (info) ++info->score_evaluations;
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return a < b;
    });
    std::vector<double> sorted(n);
    std::vector<std::size_t> prefix1(n + 1, 0);  // class-1 count among the p smallest scores
    for (std::size_t p = 0; p < n; ++p) {
        sorted[p] = scores[order[p]];
        prefix1[p + 1] = prefix1[p] + (labels[order[p]] == 1 ? 1 : 0);
    }

    std::vector<double> candidates;
    candidates.push_back(sorted.front() - 1.0);
    for (std::size_t p = 1; p < n; ++p)
        if (sorted[p] != sorted[p - 1]) candidates.push_back(sorted[p - 1] + (sorted[p] - sorted[p - 1]) / 2.0);
    candidates.push_back(sorted.back() + 1.0);
    if (info) info->candidate_count = candidates.size();

    bool have_best = false;
    Candidate best;
    for (double theta : candidates) {
        // p = scores strictly below theta, the exact complement of the step's
        // s >= theta, so counted accuracy matches predict bit for bit.
        const std::size_t p = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), theta) - sorted.begin());
        const std::size_t below1 = prefix1[p];
        const std::size_t below2 = p - below1;
        const std::size_t above1 = total1 - below1;
        const std::size_t above2 = total2 - below2;
        const double margin = margin_at(sorted, theta);
        const Candidate cand_above{above1 + below2, margin, Orientation::class1_above, theta};
        const Candidate cand_below{below1 + above2, margin, Orientation::class1_below, theta};
        for (const Candidate& c : {cand_above, cand_below}) {
            if (!have_best || beats(c, best)) {
                best = c;
                have_best = true;
            }
        }
    }

    model.threshold = best.theta;
    model.orientation = best.orientation;
    model.train_accuracy = static_cast<double>(best.correct) / static_cast<double>(n);
    return model;
}

int predict(const SmffnnModel& model, const std::vector<double>& raw_instance) {
    if (raw_instance.size() != model.d())
        throw DomainError("DimensionMismatch",
                          "instance has " + std::to_string(raw_instance.size()) +
                              " values, model expects " + std::to_string(model.d()));
    return step_class(model, score(model, normalize_raw(model, raw_instance)));
}

double raw_score(const SmffnnModel& model, const std::vector<double>& raw_instance) {
    if (raw_instance.size() != model.d())
        throw DomainError("DimensionMismatch",
                          "instance has " + std::to_string(raw_instance.size()) +
                              " values, model expects " + std::to_string(model.d()));
    return score(model, normalize_raw(model, raw_instance));
}

Evaluation evaluate(const SmffnnModel& model, const Dataset& test) {
    if (test.n() == 0) throw DomainError("EmptyTestSet", "evaluation needs at least one instance");
    if (!test.labels) throw DomainError("UnlabeledDataset", "evaluation needs class labels");
    if (test.d() != model.d())
        throw DomainError("DimensionMismatch", "dataset has " + std::to_string(test.d()) +
                                                   " columns, model expects " +
                                                   std::to_string(model.d()));
    for (std::size_t j = 0; j < model.d(); ++j)
        if (test.attributes[j].name != model.attribute_names[j])
            throw DomainError("DimensionMismatch",
                              "column " + std::to_string(j) + " is '" + test.attributes[j].name +
                                  "', model expects '" + model.attribute_names[j] + "'");

    Evaluation ev;
    ev.scores.reserve(test.n());
    for (std::size_t i = 0; i < test.n(); ++i) {
        std::vector<double> raw(test.values.row(i), test.values.row(i) + test.d());
        const double s = score(model, normalize_raw(model, raw));
        const int pred = step_class(model, s);
        ev.scores.push_back(s);
        const int actual = (*test.labels)[i];
        ev.confusion[static_cast<std::size_t>(actual - 1)][static_cast<std::size_t>(pred - 1)]++;
    }
    ev.accuracy = static_cast<double>(ev.confusion[0][0] + ev.confusion[1][1]) /
                  static_cast<double>(test.n());
    return ev;
}

std::string format_model(const SmffnnModel& model) {
    if (model.d() == 0) throw DomainError("BadSnapshot", "model has no attributes");
    std::string out = "agentclass model v1\n";
    out += "orientation " + orientation_str(model.orientation) + "\n";
    out += "threshold " + fmt_shortest(model.threshold) + "\n";
    out += "train_accuracy " + fmt_shortest(model.train_accuracy) + "\n";
    out += "attributes " + std::to_string(model.d()) + "\n";
    for (std::size_t j = 0; j < model.d(); ++j) {
        out += model.attribute_names[j];
        out += ' ';
        out += fmt_shortest(model.col_min[j]);
        out += ' ';
        out += fmt_shortest(model.col_max[j]);
        out += ' ';
        out += fmt_shortest(model.weights[j]);
        out += '\n';
    }
    return out;
}

SmffnnModel parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw DomainError("BadSnapshot", std::string("missing ") + what);
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    auto field_after = [&](const std::string& key, const char* what) {
        next_line(what);
        if (line.rfind(key + " ", 0) != 0)
            throw DomainError("BadSnapshot", "expected '" + key + "', got '" + line + "'");
        return line.substr(key.size() + 1);
    };

    next_line("header");
    if (line != "agentclass model v1")
        throw DomainError("BadSnapshot", "missing 'agentclass model v1' header");

    SmffnnModel model;
    model.orientation = parse_orientation(field_after("orientation", "orientation"));
    if (!try_parse_double(field_after("threshold", "threshold"), model.threshold) ||
        !std::isfinite(model.threshold))
        throw DomainError("BadSnapshot", "unreadable threshold");
    if (!try_parse_double(field_after("train_accuracy", "train_accuracy"), model.train_accuracy))
        throw DomainError("BadSnapshot", "unreadable train_accuracy");
    std::uint64_t k = 0;
    if (!try_parse_u64(field_after("attributes", "attribute count"), k) || k == 0)
        throw DomainError("BadSnapshot", "attribute count must be a positive integer");

    for (std::uint64_t j = 0; j < k; ++j) {
        next_line("attribute row");
        std::istringstream ls(line);
        std::string name, mn, mx, w;
        if (!(ls >> name >> mn >> mx >> w) || (ls >> std::ws, !ls.eof()))
            throw DomainError("BadSnapshot", "expected 4 fields: '" + line + "'");
        double dmn = 0.0, dmx = 0.0, dw = 0.0;
        if (!try_parse_double(mn, dmn) || !try_parse_double(mx, dmx) || !try_parse_double(w, dw))
            throw DomainError("BadSnapshot", "unreadable number in '" + line + "'");
        model.attribute_names.push_back(name);
        model.col_min.push_back(dmn);
        model.col_max.push_back(dmx);
        model.weights.push_back(dw);
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) throw DomainError("BadSnapshot", "trailing content: '" + line + "'");
    }
    return model;
}

void save_model(const SmffnnModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("FileError", "cannot write '" + path + "'");
    out << format_model(model);
    if (!out) throw DomainError("FileError", "write failed for '" + path + "'");
}

SmffnnModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("FileError", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

}  // namespace agentclass
