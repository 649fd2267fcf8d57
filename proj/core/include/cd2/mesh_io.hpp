#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cd2/geometry.hpp"

namespace cd2 {

// Loaders throw ParseError (path + line) on malformed or non-finite data.

/// Wavefront OBJ: `v`, `f` and `l` records; polygons are fan-triangulated,
/// negative (relative) indices are accepted, `v/vt/vn` tokens use the
/// position index. A file with `l` records and no faces is read as a 2D
/// edge mesh and needs z = 0 everywhere. Other record types are ignored.
Mesh load_obj(const std::filesystem::path& path);
/// OFF (optionally with a leading comment block); polygons fan-triangulated.
Mesh load_off(const std::filesystem::path& path);
/// Dispatches on extension (.obj / .off).
Mesh load_mesh(const std::filesystem::path& path);

/// XYZ text: one point per line, 2 or 3 whitespace-separated columns.
PointSet load_xyz(const std::filesystem::path& path);
/// CSV: 2 or 3 comma-separated columns, optional non-numeric header row.
PointSet load_csv_points(const std::filesystem::path& path);
/// Dispatches on extension (.csv, otherwise XYZ).
PointSet load_points(const std::filesystem::path& path);

/// Writes `v`/`f` records (1-based). 2D meshes are written with z = 0 and
/// their segments as `l` records.
void write_obj(const Mesh& mesh, std::ostream& out);
void write_obj(const Mesh& mesh, const std::filesystem::path& path);
void write_xyz(const PointSet& points, const std::filesystem::path& path);

/// Parses the loader input from an in-memory buffer; `name` is used in errors.
Mesh parse_obj(const std::string& text, const std::string& name);
Mesh parse_off(const std::string& text, const std::string& name);
PointSet parse_xyz(const std::string& text, const std::string& name);
PointSet parse_csv_points(const std::string& text, const std::string& name);

}  // namespace cd2
