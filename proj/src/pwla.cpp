#include "agentclass/pwla.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "agentclass/errors.hpp"
#include "agentclass/kernels.hpp"
#include "agentclass/numfmt.hpp"

namespace agentclass {

namespace {

std::vector<char> constant_mask(const NormalizedMatrix& nm) {
    std::vector<char> is_const(nm.d(), 0);
    for (std::size_t j : nm.constant_cols) {
        if (j >= nm.d()) throw DomainError("BadIndex", "constant column index out of range");
        is_const[j] = 1;
    }
    return is_const;
}

}  // namespace

ReductionPolicy ReductionPolicy::by_mean() { return {ReductionRule::mean_threshold, 0, 0.0}; }

ReductionPolicy ReductionPolicy::by_top_k(std::size_t k) {
    if (k == 0) throw DomainError("BadPolicy", "top-k needs k >= 1");
    return {ReductionRule::top_k, k, 0.0};
}

ReductionPolicy ReductionPolicy::by_fraction(double tau) {
    if (!(tau > 0.0) || !(tau <= 1.0)) throw DomainError("BadPolicy", "fraction must be in (0,1]");
    return {ReductionRule::fraction_of_max, 0, tau};
}

ReductionPolicy ReductionPolicy::parse(const std::string& text) {
    if (text == "mean") return by_mean();
    if (text.rfind("topk:", 0) == 0) {
        std::uint64_t k = 0;
        if (!try_parse_u64(std::string_view(text).substr(5), k))
            throw DomainError("BadPolicy", "unreadable k in '" + text + "'");
        return by_top_k(static_cast<std::size_t>(k));
    }
    if (text.rfind("frac:", 0) == 0) {
        double tau = 0.0;
        if (!try_parse_double(std::string_view(text).substr(5), tau))
            throw DomainError("BadPolicy", "unreadable fraction in '" + text + "'");
        return by_fraction(tau);
    }
    throw DomainError("BadPolicy", "expected mean | topk:K | frac:T, got '" + text + "'");
}

std::string ReductionPolicy::str() const {
    switch (rule) {
        case ReductionRule::mean_threshold: return "mean";
        case ReductionRule::top_k: return "topk:" + std::to_string(k);
        case ReductionRule::fraction_of_max: return "frac:" + fmt_shortest(tau);
    }
    return "mean";
}

NormalizedMatrix normalize(const Dataset& ds) {
    validate(ds);
    NormalizedMatrix nm;
    nm.attribute_names.reserve(ds.d());
    for (const auto& a : ds.attributes) nm.attribute_names.push_back(a.name);

    kernels::col_min_max_parallel(ds.values, nm.col_min, nm.col_max);
    nm.values = Matrix(ds.n(), ds.d());
    kernels::normalize_columns_parallel(ds.values, nm.col_min, nm.col_max, nm.values);
    for (std::size_t j = 0; j < ds.d(); ++j)
        if (nm.col_min[j] == nm.col_max[j]) nm.constant_cols.push_back(j);

    const auto sums = kernels::col_sums_parallel(nm.values);
    nm.global_mean = kernels::mean_from_col_sums(sums, ds.n() * ds.d());
    return nm;
}

std::vector<double> apply_normalization(const NormalizedMatrix& nm,
                                        const std::vector<double>& raw_instance) {
    if (raw_instance.size() != nm.d())
        throw DomainError("DimensionMismatch",
                          "instance has " + std::to_string(raw_instance.size()) +
                              " values, expected " + std::to_string(nm.d()));
    const auto is_const = constant_mask(nm);
    std::vector<double> out(nm.d(), 0.0);
    for (std::size_t j = 0; j < nm.d(); ++j) {
        if (is_const[j]) continue;
        const double v = (raw_instance[j] - nm.col_min[j]) / (nm.col_max[j] - nm.col_min[j]);
        out[j] = std::min(1.0, std::max(0.0, v));
    }
    return out;
}

PotentialWeights potential_weights(const NormalizedMatrix& nm) {
    PotentialWeights pw;
    pw.w = kernels::deviation_weights_parallel(nm.values, nm.global_mean);
    // Constant columns are zero by membership, not by inspecting values, so a
    // hand-built matrix that never went through normalize() still follows the
    // declared statistics.
    for (std::size_t j : nm.constant_cols) {
        if (j >= pw.w.size()) throw DomainError("BadIndex", "constant column index out of range");
        pw.w[j] = 0.0;
    }
    return pw;
}

PotentialWeights reduce(PotentialWeights pw, const ReductionPolicy& policy) {
    std::vector<std::size_t> candidates;  // ascending; zero-weight columns never qualify
    for (std::size_t j = 0; j < pw.w.size(); ++j)
        if (pw.w[j] > 0.0) candidates.push_back(j);
    if (candidates.empty())
        throw DomainError("AllWeightsZero", "no attribute deviates from the global mean");

    std::vector<std::size_t> strong;
    switch (policy.rule) {
        case ReductionRule::mean_threshold: {
            double sum = 0.0;
            for (std::size_t j : candidates) sum += pw.w[j];
            const double cut = sum / static_cast<double>(candidates.size());
            for (std::size_t j : candidates)
                if (pw.w[j] >= cut) strong.push_back(j);
            break;
        }
        case ReductionRule::top_k: {
            if (policy.k == 0) throw DomainError("BadPolicy", "top-k needs k >= 1");
            std::vector<std::size_t> order = candidates;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (pw.w[a] != pw.w[b]) return pw.w[a] > pw.w[b];
                return a < b;  // ties keep the lower column index first
            });
            order.resize(std::min(policy.k, order.size()));
            std::sort(order.begin(), order.end());
            strong = std::move(order);
            break;
        }
        case ReductionRule::fraction_of_max: {
            if (!(policy.tau > 0.0) || !(policy.tau <= 1.0))
                throw DomainError("BadPolicy", "fraction must be in (0,1]");
            double wmax = 0.0;
            for (std::size_t j : candidates) wmax = std::max(wmax, pw.w[j]);
            const double cut = policy.tau * wmax;
            for (std::size_t j : candidates)
                if (pw.w[j] >= cut) strong.push_back(j);
            break;
        }
    }

    pw.strong = std::move(strong);
    pw.weak.clear();
    std::size_t si = 0;
    for (std::size_t j = 0; j < pw.w.size(); ++j) {
        if (si < pw.strong.size() && pw.strong[si] == j) {
            ++si;
        } else {
            pw.weak.push_back(j);
        }
    }
    pw.policy = policy;
    return pw;
}

NormalizedMatrix project(const NormalizedMatrix& nm, const std::vector<std::size_t>& strong) {
    if (strong.empty()) throw DomainError("BadIndex", "strong set is empty");
    for (std::size_t i = 0; i < strong.size(); ++i) {
        if (strong[i] >= nm.d())
            throw DomainError("BadIndex", "column " + std::to_string(strong[i]) +
                                              " out of range for d=" + std::to_string(nm.d()));
        if (i > 0 && strong[i] <= strong[i - 1])
            throw DomainError("BadIndex", "strong indices must be strictly ascending");
    }

    const auto is_const = constant_mask(nm);
    NormalizedMatrix out;
    out.values = Matrix(nm.n(), strong.size());
    for (std::size_t p = 0; p < strong.size(); ++p) {
        const std::size_t j = strong[p];
        out.attribute_names.push_back(nm.attribute_names[j]);
        out.col_min.push_back(nm.col_min[j]);
        out.col_max.push_back(nm.col_max[j]);
        if (is_const[j]) out.constant_cols.push_back(p);
        for (std::size_t i = 0; i < nm.n(); ++i) out.values.at(i, p) = nm.values.at(i, j);
    }
    const auto sums = kernels::col_sums_parallel(out.values);
    out.global_mean = kernels::mean_from_col_sums(sums, out.values.rows * out.values.cols);
    return out;
}

std::string weights_snapshot(const NormalizedMatrix& nm, const PotentialWeights& pw) {
    if (pw.w.size() != nm.d())
        throw DomainError("ShapeMismatch", "weight vector does not match matrix width");
    std::vector<char> is_strong(nm.d(), 1);  // unreduced means nothing pruned yet
    if (pw.reduced()) {
        std::fill(is_strong.begin(), is_strong.end(), 0);
        for (std::size_t j : pw.strong) is_strong[j] = 1;
    }
    std::string out = "agentclass weights v1\n";
    for (std::size_t j = 0; j < nm.d(); ++j) {
        out += nm.attribute_names[j];
        out += ' ';
        out += fmt_shortest(nm.col_min[j]);
        out += ' ';
        out += fmt_shortest(nm.col_max[j]);
        out += ' ';
        out += fmt_shortest(pw.w[j]);
        out += ' ';
        out += is_strong[j] ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<WeightsSnapshotRow> parse_weights_snapshot(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "agentclass weights v1")
        throw DomainError("BadSnapshot", "missing 'agentclass weights v1' header");
    std::vector<WeightsSnapshotRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        WeightsSnapshotRow row;
        std::string mn, mx, w, flag;
        if (!(ls >> row.name >> mn >> mx >> w >> flag) || (ls >> std::ws, !ls.eof()))
            throw DomainError("BadSnapshot", "expected 5 fields: '" + line + "'");
        if (!try_parse_double(mn, row.min) || !try_parse_double(mx, row.max) ||
            !try_parse_double(w, row.weight))
            throw DomainError("BadSnapshot", "unreadable number in '" + line + "'");
        if (flag == "1") {
            row.strong = true;
        } else if (flag == "0") {
            row.strong = false;
        } else {
            throw DomainError("BadSnapshot", "strong flag must be 0 or 1 in '" + line + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DomainError("BadSnapshot", "no attribute rows");
    return rows;
}

}  // namespace agentclass
