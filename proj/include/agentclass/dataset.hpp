#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agentclass/errors.hpp"
#include "agentclass/matrix.hpp"

namespace agentclass {

enum class AttributeKind { numeric };

struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::string source_table;  // tag of the originating logical database, may be empty

    bool operator==(const AttributeSpec&) const = default;
};

// Which columns of a tabular file become the dataset. An empty `selected`
// means every column except the label and id columns. `id_column` names the
// instance-id column; when absent, ids are generated from the row position.
struct SchemaSelection {
    std::vector<std::string> selected;
    std::optional<std::string> label_column;
    std::optional<std::string> id_column;
};

// Named-attribute numeric table with optional binary class labels. Rows are
// always kept in sorted-instance-id order so every downstream computation is
// reproducible byte for byte.
struct Dataset {
    std::vector<AttributeSpec> attributes;
    std::vector<std::string> instance_ids;
    Matrix values;  // n x d, finite
    std::optional<std::vector<int>> labels;  // entries in {1,2}

    std::size_t n() const { return instance_ids.size(); }
    std::size_t d() const { return attributes.size(); }

    bool operator==(const Dataset&) const = default;
};

// Throws DomainError if any Dataset invariant is broken. Run by every
// constructor-style operation before it returns.
void validate(const Dataset& ds);

// Comma-separated file, first row = header, '.' decimal point, no quoting.
// Lines starting with '#' are comments (scenario files carry their generation
// parameters that way). Errors: MissingColumn, NonNumericCell, EmptyDataset,
// InvalidLabel, RaggedRow, DuplicateId, FileError.
Dataset ingest_csv(const std::string& path, const SchemaSelection& selection);

// Same dialect as ingest_csv; leading comment lines are written verbatim.
// The instance-id column is written first as "instance_id" unless the dataset
// was ingested with another id column name (pass it via id_header).
void export_csv(const Dataset& ds, const std::string& path,
                const std::vector<std::string>& comment_lines = {},
                const std::string& id_header = "instance_id");

// Inner join of id-keyed tables. Every id must be present in every table
// (IdMismatch otherwise); attribute names must stay unique after tagging
// (DuplicateAttribute). Column order follows `selection.selected`; labels come
// either from selection.label_column or from the single labeled input table.
Dataset join_sources(const std::vector<std::pair<std::string, Dataset>>& tables,
                     const SchemaSelection& selection);

// Deterministic labeled split; the test part gets round(n * test_fraction)
// rows clamped to [1, n-1]. DegenerateSplit if a part would be empty or the
// train part ends up single-class.
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

// Column-subset copy (labels and ids kept). Names must all resolve.
Dataset restrict_columns(const Dataset& ds, const std::vector<std::string>& names);

}  // namespace agentclass
