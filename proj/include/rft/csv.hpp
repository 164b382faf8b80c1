#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rft/dataset.hpp"

namespace rft {

struct CsvOptions {
    std::string label_column;  // required unless `reference` is set
    std::vector<std::string> categorical_columns;
    // When set, columns, categories and classes are mapped through this schema;
    // values it does not know are errors. Extra CSV columns are ignored.
    std::optional<Schema> reference;
    char delimiter = ',';
};

/// Reads a headed CSV into a typed dataset. Categorical enumerations and
/// class names are built from the observed values in sorted order.
Dataset load_csv(std::istream& in, const CsvOptions& options);
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

void write_csv(std::ostream& out, const Dataset& data);

}  // namespace rft
