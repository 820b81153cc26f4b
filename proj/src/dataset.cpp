#include "agentclass/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "agentclass/numfmt.hpp"
#include "agentclass/rng.hpp"

namespace agentclass {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

int parse_label_value(double v, std::size_t row) {
    if (v == 1.0) return 1;
    if (v == 2.0) return 2;
    throw DomainError("InvalidLabel",
                      "row " + std::to_string(row) + " has label " + fmt_shortest(v) +
                          ", expected 1 or 2");
}

// Reorders rows (and labels) into sorted-instance-id order.
void canonicalize_rows(Dataset& ds) {
    const std::size_t n = ds.n();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ds.instance_ids[a] < ds.instance_ids[b];
    });

    Matrix values(n, ds.d());
    std::vector<std::string> ids(n);
    std::optional<std::vector<int>> labels;
    if (ds.labels) labels.emplace(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        ids[i] = ds.instance_ids[src];
        for (std::size_t j = 0; j < ds.d(); ++j) values.at(i, j) = ds.values.at(src, j);
        if (labels) (*labels)[i] = (*ds.labels)[src];
    }
    ds.values = std::move(values);
    ds.instance_ids = std::move(ids);
    ds.labels = std::move(labels);
}

}  // namespace

void validate(const Dataset& ds) {
    if (ds.d() == 0) throw DomainError("EmptyDataset", "dataset has no attributes");
    if (ds.n() == 0) throw DomainError("EmptyDataset", "dataset has no instances");
    if (ds.values.rows != ds.n() || ds.values.cols != ds.d())
        throw DomainError("ShapeMismatch", "value matrix does not match ids/attributes");

    std::set<std::string> names;
    for (const auto& a : ds.attributes) {
        if (a.name.empty()) throw DomainError("InvalidAttribute", "attribute with empty name");
        if (a.name.find_first_of(", \t\n") != std::string::npos)
            throw DomainError("InvalidAttribute", "attribute name '" + a.name + "' contains separators");
        if (!names.insert(a.name).second)
            throw DomainError("DuplicateAttribute", a.name);
    }

    std::set<std::string> ids;
    for (const auto& id : ds.instance_ids) {
        if (id.empty()) throw DomainError("InvalidId", "empty instance id");
        if (!ids.insert(id).second) throw DomainError("DuplicateId", id);
    }

    for (double v : ds.values.data)
        if (!std::isfinite(v)) throw DomainError("NonFiniteValue", "dataset contains a non-finite value");

    if (ds.labels) {
        if (ds.labels->size() != ds.n())
            throw DomainError("ShapeMismatch", "label count does not match instance count");
        for (int l : *ds.labels)
            if (l != 1 && l != 2)
                throw DomainError("InvalidLabel", "label " + std::to_string(l) + " outside {1,2}");
    }
}

Dataset ingest_csv(const std::string& path, const SchemaSelection& selection) {
    std::ifstream in(path);
    if (!in) throw DomainError("FileError", "cannot open '" + path + "'");

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        header = split_fields(line);
        break;
    }
    if (header.empty()) throw DomainError("EmptyDataset", "'" + path + "' has no header row");

    std::map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < header.size(); ++i) col_index.emplace(header[i], i);

    auto resolve = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end()) throw DomainError("MissingColumn", name);
        return it->second;
    };

    // An empty selection means every column except the label and id columns,
    // in header order.
    std::vector<std::string> selected = selection.selected;
    if (selected.empty()) {
        for (const auto& name : header)
            if (name != selection.label_column.value_or("") && name != selection.id_column.value_or(""))
                selected.push_back(name);
        if (selected.empty()) throw DomainError("EmptySelection", "no columns selected");
    }

    std::vector<std::size_t> value_cols;
    for (const auto& name : selected) value_cols.push_back(resolve(name));
    std::optional<std::size_t> label_col;
    if (selection.label_column) label_col = resolve(*selection.label_column);
    std::optional<std::size_t> id_col;
    if (selection.id_column) id_col = resolve(*selection.id_column);

    Dataset ds;
    for (const auto& name : selected)
        ds.attributes.push_back({name, AttributeKind::numeric, ""});

    std::vector<double> flat;
    std::vector<int> labels;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ++row;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw DomainError("RaggedRow", "row " + std::to_string(row) + " has " +
                                               std::to_string(fields.size()) + " fields, header has " +
                                               std::to_string(header.size()));
        for (std::size_t k = 0; k < value_cols.size(); ++k) {
            double v;
            if (!try_parse_double(fields[value_cols[k]], v) || !std::isfinite(v))
                throw DomainError("NonNumericCell", "row " + std::to_string(row) + ", column '" +
                                                        selected[k] + "': '" +
                                                        fields[value_cols[k]] + "'");
            flat.push_back(v);
        }
        if (label_col) {
            double v;
            if (!try_parse_double(fields[*label_col], v))
                throw DomainError("InvalidLabel", "row " + std::to_string(row) + ": '" +
                                                      fields[*label_col] + "'");
            labels.push_back(parse_label_value(v, row));
        }
        if (id_col) {
            ds.instance_ids.push_back(fields[*id_col]);
        } else {
            // zero-padded ordinal so sorted-id order equals file order
            std::string id = std::to_string(row);
            ds.instance_ids.push_back(std::string(8 - std::min<std::size_t>(8, id.size()), '0') + id);
        }
    }
    if (row == 0) throw DomainError("EmptyDataset", "'" + path + "' has no data rows");

    ds.values = Matrix(row, selected.size());
    ds.values.data = std::move(flat);
    if (label_col) ds.labels = std::move(labels);

    canonicalize_rows(ds);
    validate(ds);
    return ds;
}

void export_csv(const Dataset& ds, const std::string& path,
                const std::vector<std::string>& comment_lines, const std::string& id_header) {
    validate(ds);
    std::ofstream out(path);
    if (!out) throw DomainError("FileError", "cannot write '" + path + "'");

    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << id_header;
    for (const auto& a : ds.attributes) out << "," << a.name;
    if (ds.labels) out << ",label";
    out << "\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        out << ds.instance_ids[i];
        for (std::size_t j = 0; j < ds.d(); ++j) out << "," << fmt_shortest(ds.values.at(i, j));
        if (ds.labels) out << "," << (*ds.labels)[i];
        out << "\n";
    }
    if (!out) throw DomainError("FileError", "failed writing '" + path + "'");
}

Dataset join_sources(const std::vector<std::pair<std::string, Dataset>>& tables,
                     const SchemaSelection& selection) {
    if (tables.empty()) throw DomainError("EmptyDataset", "no tables to join");
    if (selection.selected.empty()) throw DomainError("EmptySelection", "no columns selected");

    // the union of ids must be present in every table
    std::set<std::string> all_ids;
    for (const auto& [tag, ds] : tables)
        all_ids.insert(ds.instance_ids.begin(), ds.instance_ids.end());
    for (const auto& [tag, ds] : tables) {
        std::set<std::string> ids(ds.instance_ids.begin(), ds.instance_ids.end());
        for (const auto& id : all_ids)
            if (!ids.count(id)) throw DomainError("IdMismatch", "id '" + id + "' missing from table '" + tag + "'");
    }

    // attribute name -> (table index, column index); names must be unique across tables
    std::map<std::string, std::pair<std::size_t, std::size_t>> where;
    for (std::size_t t = 0; t < tables.size(); ++t) {
        const Dataset& ds = tables[t].second;
        for (std::size_t j = 0; j < ds.d(); ++j) {
            if (!where.emplace(ds.attributes[j].name, std::make_pair(t, j)).second)
                throw DomainError("DuplicateAttribute", ds.attributes[j].name);
        }
    }

    int labeled_tables = 0;
    std::size_t labeled_at = 0;
    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (tables[t].second.labels) {
            ++labeled_tables;
            labeled_at = t;
        }
    }
    if (selection.label_column && labeled_tables > 0)
        throw DomainError("DuplicateAttribute",
                          "label_column given but an input table already carries labels");
    if (!selection.label_column && labeled_tables > 1)
        throw DomainError("DuplicateAttribute", "more than one input table carries labels");

    std::vector<std::string> ids(all_ids.begin(), all_ids.end());  // sorted

    // per-table id -> row lookup
    std::vector<std::map<std::string, std::size_t>> row_of(tables.size());
    for (std::size_t t = 0; t < tables.size(); ++t)
        for (std::size_t i = 0; i < tables[t].second.n(); ++i)
            row_of[t].emplace(tables[t].second.instance_ids[i], i);

    auto locate = [&](const std::string& name) {
        auto it = where.find(name);
        if (it == where.end()) throw DomainError("MissingColumn", name);
        return it->second;
    };

    Dataset out;
    std::vector<std::pair<std::size_t, std::size_t>> sources;
    for (const auto& name : selection.selected) {
        auto [t, j] = locate(name);
        AttributeSpec spec = tables[t].second.attributes[j];
        spec.source_table = tables[t].first;
        out.attributes.push_back(spec);
        sources.emplace_back(t, j);
    }

    out.instance_ids = ids;
    out.values = Matrix(ids.size(), sources.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t k = 0; k < sources.size(); ++k) {
            const auto [t, j] = sources[k];
            out.values.at(i, k) = tables[t].second.values.at(row_of[t].at(ids[i]), j);
        }
    }

    if (selection.label_column) {
        auto [t, j] = locate(*selection.label_column);
        std::vector<int> labels(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const double v = tables[t].second.values.at(row_of[t].at(ids[i]), j);
            labels[i] = parse_label_value(v, i + 1);
        }
        out.labels = std::move(labels);
    } else if (labeled_tables == 1) {
        const Dataset& src = tables[labeled_at].second;
        std::vector<int> labels(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i)
            labels[i] = (*src.labels)[row_of[labeled_at].at(ids[i])];
        out.labels = std::move(labels);
    }

    validate(out);
    return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
    validate(ds);
    if (!ds.labels) throw DomainError("UnlabeledDataset", "split requires labels");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DomainError("DegenerateSplit", "test_fraction must be in (0,1)");

    const std::size_t n = ds.n();
    std::size_t test_n = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    if (test_n < 1) test_n = 1;
    if (test_n > n - 1) {
        if (n < 2) throw DomainError("DegenerateSplit", "need at least 2 instances");
        test_n = n - 1;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    DetRng rng(seed_stream(seed, "train-test-split"));
    rng.shuffle(order);

    auto take = [&](std::size_t from, std::size_t count) {
        Dataset part;
        part.attributes = ds.attributes;
        part.values = Matrix(count, ds.d());
        part.instance_ids.resize(count);
        part.labels.emplace(count);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t src = order[from + i];
            part.instance_ids[i] = ds.instance_ids[src];
            for (std::size_t j = 0; j < ds.d(); ++j) part.values.at(i, j) = ds.values.at(src, j);
            (*part.labels)[i] = (*ds.labels)[src];
        }
        canonicalize_rows(part);
        return part;
    };

    Dataset test = take(0, test_n);
    Dataset train = take(test_n, n - test_n);

    bool has1 = false, has2 = false;
    for (int l : *train.labels) (l == 1 ? has1 : has2) = true;
    if (!has1 || !has2)
        throw DomainError("DegenerateSplit", "train part contains a single class");

    validate(train);
    validate(test);
    return {train, test};
}

Dataset restrict_columns(const Dataset& ds, const std::vector<std::string>& names) {
    std::map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < ds.d(); ++j) index.emplace(ds.attributes[j].name, j);

    Dataset out;
    std::vector<std::size_t> cols;
    for (const auto& name : names) {
        auto it = index.find(name);
        if (it == index.end()) throw DomainError("MissingColumn", name);
        cols.push_back(it->second);
        out.attributes.push_back(ds.attributes[it->second]);
    }
    out.instance_ids = ds.instance_ids;
    out.labels = ds.labels;
    out.values = Matrix(ds.n(), cols.size());
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t k = 0; k < cols.size(); ++k)
            out.values.at(i, k) = ds.values.at(i, cols[k]);
    validate(out);
    return out;
}

}  // namespace agentclass
