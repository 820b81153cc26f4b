#include "agentclass/report.hpp"

#include <fstream>
#include <sstream>

#include "agentclass/errors.hpp"
#include "agentclass/numfmt.hpp"

namespace agentclass {

namespace {

std::string opt_num(const std::optional<double>& v) {
    return v ? fmt_shortest(*v) : std::string("-");
}

std::optional<double> parse_opt_num(const std::string& s, const char* what) {
    if (s == "-") return std::nullopt;
    double v = 0.0;
    if (!try_parse_double(s, v))
        throw DomainError("BadReport", std::string("unreadable ") + what + ": '" + s + "'");
    return v;
}

}  // namespace

std::string format_report(const Report& report) {
    std::string out = "agentclass report v1\n";
    out += "run_id " + report.run_id + "\n";

    out += "[weights]\n";
    for (const auto& row : report.weights)
        out += row.name + " " + fmt_shortest(row.weight) + " " + (row.strong ? "1" : "0") + "\n";

    out += "[model]\n";
    out += "threshold " + opt_num(report.threshold) + "\n";
    out += "orientation " +
           (report.orientation ? orientation_str(*report.orientation) : std::string("-")) + "\n";
    out += "train_accuracy " + opt_num(report.train_accuracy) + "\n";
    out += "holdout_accuracy " + opt_num(report.holdout_accuracy) + "\n";

    out += "[assignments]\n";
    for (const auto& row : report.assignments)
        out += row.id + " " + fmt_shortest(row.score) + " " + std::to_string(row.cls) + "\n";

    out += "[recommendations]\n";
    for (const auto& [cls, chart] : report.recommendations)
        out += std::to_string(cls) + " " + std::string(1, chart) + "\n";

    out += "[approval]\n";
    out += report.status + "\n";
    return out;
}

Report parse_report(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next = [&]() {
        if (!std::getline(in, line)) throw DomainError("BadReport", "truncated report");
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    next();
    if (line != "agentclass report v1")
        throw DomainError("BadReport", "missing 'agentclass report v1' header");
    next();
    if (line.rfind("run_id ", 0) != 0) throw DomainError("BadReport", "missing run_id");
    Report report;
    report.run_id = line.substr(7);

    next();
    if (line != "[weights]") throw DomainError("BadReport", "expected [weights]");
    for (next(); line != "[model]"; next()) {
        std::istringstream ls(line);
        WeightRow row;
        std::string w, flag;
        if (!(ls >> row.name >> w >> flag) || (ls >> std::ws, !ls.eof()))
            throw DomainError("BadReport", "bad weight row: '" + line + "'");
        if (!try_parse_double(w, row.weight))
            throw DomainError("BadReport", "unreadable weight: '" + line + "'");
        if (flag != "0" && flag != "1")
            throw DomainError("BadReport", "strong flag must be 0 or 1: '" + line + "'");
        row.strong = flag == "1";
        report.weights.push_back(std::move(row));
    }

    auto kv = [&](const std::string& key) {
        next();
        if (line.rfind(key + " ", 0) != 0)
            throw DomainError("BadReport", "expected '" + key + "', got '" + line + "'");
        return line.substr(key.size() + 1);
    };
    report.threshold = parse_opt_num(kv("threshold"), "threshold");
    const std::string orient = kv("orientation");
    if (orient != "-") {
        try {
            report.orientation = parse_orientation(orient);
        } catch (const DomainError&) {
            throw DomainError("BadReport", "unreadable orientation: '" + orient + "'");
        }
    }
    report.train_accuracy = parse_opt_num(kv("train_accuracy"), "train_accuracy");
    report.holdout_accuracy = parse_opt_num(kv("holdout_accuracy"), "holdout_accuracy");

    next();
    if (line != "[assignments]") throw DomainError("BadReport", "expected [assignments]");
    for (next(); line != "[recommendations]"; next()) {
        std::istringstream ls(line);
        AssignmentRow row;
        std::string score, cls;
        if (!(ls >> row.id >> score >> cls) || (ls >> std::ws, !ls.eof()))
            throw DomainError("BadReport", "bad assignment row: '" + line + "'");
        if (!try_parse_double(score, row.score))
            throw DomainError("BadReport", "unreadable score: '" + line + "'");
        if (cls == "1") {
            row.cls = 1;
        } else if (cls == "2") {
            row.cls = 2;
        } else {
            throw DomainError("BadReport", "class must be 1 or 2: '" + line + "'");
        }
        report.assignments.push_back(std::move(row));
    }

    for (next(); line != "[approval]"; next()) {
        std::istringstream ls(line);
        std::string cls, chart;
        if (!(ls >> cls >> chart) || (ls >> std::ws, !ls.eof()) || chart.size() != 1)
            throw DomainError("BadReport", "bad recommendation row: '" + line + "'");
        if (cls != "1" && cls != "2")
            throw DomainError("BadReport", "recommendation class must be 1 or 2: '" + line + "'");
        report.recommendations[cls == "1" ? 1 : 2] = chart[0];
    }

    next();
    if (line != "pending" && line != "approved" && line.rfind("failed:", 0) != 0)
        throw DomainError("BadReport", "unknown approval status '" + line + "'");
    report.status = line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) throw DomainError("BadReport", "trailing content: '" + line + "'");
    }
    return report;
}

void write_report(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("FileError", "cannot write '" + path + "'");
    out << format_report(report);
    if (!out) throw DomainError("FileError", "write failed for '" + path + "'");
}

Report read_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("FileError", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_report(buf.str());
}

}  // namespace agentclass
