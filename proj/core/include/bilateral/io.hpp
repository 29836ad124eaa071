#pragma once

#include <string>
#include <vector>

#include "bilateral/grid.hpp"

namespace bilateral {

/// One named nodal column of a CSV dump.
struct NodalColumn {
  std::string name;
  Vector values;
};

NodalColumn column(std::string name, const GridFunction& f);
NodalColumn column(std::string name, const NodeMask& mask);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Writes `node,x[,y],<columns...>` with one row per interior node. Throws
/// IoError when the file cannot be written.
void write_nodal_csv(const std::string& path, const Grid& grid,
                     const std::vector<NodalColumn>& columns);

/// Same rows as write_nodal_csv, returned as text.
std::string nodal_csv(const Grid& grid, const std::vector<NodalColumn>& columns);

/// Reads the named column of a file written by write_nodal_csv. Throws IoError
/// on missing files, missing columns or a row count that does not match grid.
GridFunction read_nodal_column(const std::string& path, const Grid& grid,
                               const std::string& name);

}  // namespace bilateral
