#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chartensor/chart_extract.hpp"

namespace chartensor {

/// Ordered (key, value) pairs written as the table's provenance header.
using Provenance = std::vector<std::pair<std::string, std::string>>;

/// CSV with `# key: value` header lines, then `x,height` (bars, histograms)
/// or `x,y` (scatter) and one row per table row.
std::string table_csv(const DataTable& table, const Provenance& provenance = {});
std::string table_json(const DataTable& table, const Provenance& provenance = {});

/// Reads a table CSV. The chart type comes from a `# chart_type:` header
/// when present, otherwise from the column names. Throws Error(kParse).
DataTable parse_table_csv(const std::string& text);

}  // namespace chartensor
