#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fif/attractor.hpp"
#include "fif/fif1d.hpp"
#include "fif/fis2d.hpp"
#include "fif/grid.hpp"
#include "fif/ifs1d.hpp"

namespace fif::io {

using Report = nlohmann::json;

// Shortest decimal that reads back to the same double; locale independent.
std::string format_double(double v);

// CSV with header `t,x`. CRLF and LF are equivalent; numbers may use exponents.
DataSet1D parse_dataset1d(std::string_view text);
std::string serialize_dataset1d(const DataSet1D &data);

// "0.3,0.2" or "[0.3, 0.2]"; a single value is returned as a one-element list.
std::vector<double> parse_number_list(std::string_view text);

// JSON {xs, ys, zs: [[z(x_0, y_0), z(x_0, y_1), ...], ...]} or CSV `x,y,z` triples
// forming a complete grid. The format is detected from the first non-blank character.
GridData2D parse_grid2d(std::string_view text);
std::string serialize_grid2d(const GridData2D &grid);

nlohmann::json to_json(const Ifs1D &ifs);
Ifs1D ifs1d_from_json(const nlohmann::json &j);
std::string serialize_ifs1d(const Ifs1D &ifs);
Ifs1D parse_ifs1d(std::string_view text);

nlohmann::json to_json(const Ifs2D &ifs);
Ifs2D ifs2d_from_json(const nlohmann::json &j);
std::string serialize_ifs2d(const Ifs2D &ifs);
Ifs2D parse_ifs2d(std::string_view text);

// Canonical JSON: sorted keys, round-trip precision, newline terminated.
std::string serialize_report(const Report &report);
Report parse_report(std::string_view text);

Report to_report(const ValidationReport &r);
Report to_report(const ComparisonReport &r);
Report to_report(const ViolationReport &r);
Report to_report(const CollinearityReport &r);
Report to_report(const std::map<std::string, double> &seams);

std::string grid_function_csv(const GridFunction1D &f);     // t,f
std::string point_set_csv(const PointSet &points);         // t,x
std::string surface_csv(const GridFunction2D &f);          // x,y,f

enum class PgmEncoding { Ascii, Binary }; // P2, P5

// Visit counts scaled to 0..255 with every occupied cell at least 1.
std::string raster_pgm(const Raster &raster, PgmEncoding enc);
// Min-max normalized heightmap, top row at y = y_M.
std::string heightmap_pgm(const GridFunction2D &f, PgmEncoding enc);

enum class DocumentKind { DataSet1D, Grid2D, Ifs1D, Ifs2D, Report };

struct Document {
    DocumentKind kind;
    std::variant<fif::DataSet1D, GridData2D, fif::Ifs1D, Ifs2D, Report> payload;

    bool operator==(const Document &) const = default;
};

std::string serialize(const Document &doc);
Document parse(DocumentKind kind, std::string_view text);

std::string read_file(const std::string &path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string &path, std::string_view content);

} // namespace fif::io
