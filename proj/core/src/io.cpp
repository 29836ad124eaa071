#include "bilateral/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bilateral/errors.hpp"

namespace bilateral {

NodalColumn column(std::string name, const GridFunction& f) {
  return NodalColumn{std::move(name), f.values()};
}

NodalColumn column(std::string name, const NodeMask& mask) {
  Vector v(static_cast<Eigen::Index>(mask.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) v[static_cast<Eigen::Index>(i)] = mask[i] ? 1.0 : 0.0;
  return NodalColumn{std::move(name), std::move(v)};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string nodal_csv(const Grid& grid, const std::vector<NodalColumn>& columns) {
  for (const auto& c : columns) {
    if (static_cast<std::size_t>(c.values.size()) != grid.size()) {
      throw GridMismatch("CSV column '" + c.name + "' does not match the grid");
    }
  }
  std::ostringstream out;
  out << "node,x";
  if (grid.dim() == 2) out << ",y";
  for (const auto& c : columns) out << ',' << c.name;
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [x, y] = grid.coords(i);
    out << i << ',' << format_double(x);
    if (grid.dim() == 2) out << ',' << format_double(y);
    for (const auto& c : columns) out << ',' << format_double(c.values[static_cast<Eigen::Index>(i)]);
    out << '\n';
  }
  return out.str();
}

void write_nodal_csv(const std::string& path, const Grid& grid,
                     const std::vector<NodalColumn>& columns) {
  const std::string text = nodal_csv(grid, columns);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

GridFunction read_nodal_column(const std::string& path, const Grid& grid,
                               const std::string& name) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw IoError("'" + path + "' is empty");

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::size_t col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) col = j;
  }
  if (col == header.size()) throw IoError("'" + path + "' has no column '" + name + "'");

  GridFunction out(grid);
  std::size_t row = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (row >= grid.size()) throw IoError("'" + path + "' has more rows than grid nodes");
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t j = 0; j <= col; ++j) {
      if (!std::getline(ss, cell, ',')) throw IoError("short row in '" + path + "'");
    }
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc()) throw IoError("bad number '" + cell + "' in '" + path + "'");
    out[row++] = v;
  }
  if (row != grid.size()) throw IoError("'" + path + "' has fewer rows than grid nodes");
  return out;
}

}  // namespace bilateral
