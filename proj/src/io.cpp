#include "fif/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "fif/error.hpp"

namespace fif::io {

using nlohmann::json;

namespace {

struct Line {
    std::size_t number;
    std::string_view text;
};

// Splits on '\n', dropping a trailing '\r' and a leading UTF-8 byte-order mark.
std::vector<Line> split_lines(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
        text.remove_prefix(3);
    std::vector<Line> lines;
    std::size_t number = 1;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.push_back({number++, line});
        if (nl == std::string_view::npos)
            break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

struct Field {
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Field> split_fields(std::string_view line) {
    std::vector<Field> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back({line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start),
                          start + 1});
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s, std::size_t *offset = nullptr) {
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t'))
        ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t'))
        --e;
    if (offset)
        *offset = b;
    return s.substr(b, e - b);
}

double parse_number(const Field &field, std::size_t line) {
    std::size_t offset = 0;
    auto s = trim(field.text, &offset);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("malformed number '" + std::string(trim(field.text)) + "'", line, field.column + offset);
    if (!std::isfinite(v))
        throw ParseError("non-finite number", line, field.column + offset);
    return v;
}

void expect_header(const std::vector<Line> &lines, std::size_t &idx, std::string_view header) {
    while (idx < lines.size() && blank(lines[idx].text))
        ++idx;
    if (idx == lines.size())
        throw ParseError("empty input, expected header '" + std::string(header) + "'", 1, 1);
    std::string got;
    for (const auto &f : split_fields(lines[idx].text)) {
        if (!got.empty())
            got += ',';
        got += trim(f.text);
    }
    if (got != header)
        throw ParseError("expected header '" + std::string(header) + "'", lines[idx].number, 1);
    ++idx;
}

std::vector<double> json_numbers(const json &j, const char *what) {
    if (!j.is_array())
        throw ParseError(std::string(what) + " must be an array of numbers", 0, 0);
    std::vector<double> out;
    for (const auto &v : j) {
        if (!v.is_number())
            throw ParseError(std::string(what) + " must contain only numbers", 0, 0);
        out.push_back(v.get<double>());
    }
    return out;
}

const json &member(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing key '") + key + "'", 0, 0);
    return j.at(key);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0, 0);
    }
}

std::vector<AffineMap1D> affine_maps_from_json(const json &j, const char *what) {
    if (!j.is_array())
        throw ParseError(std::string(what) + " must be an array", 0, 0);
    std::vector<AffineMap1D> maps;
    for (const auto &m : j)
        maps.push_back({member(m, "a").get<double>(), member(m, "b").get<double>()});
    return maps;
}

json affine_maps_to_json(std::span<const AffineMap1D> maps) {
    json arr = json::array();
    for (const auto &m : maps)
        arr.push_back({{"a", m.a}, {"b", m.b}});
    return arr;
}

// Rethrows library validation errors raised while assembling a parsed document as parse errors.
template <class F> auto assemble(F &&f) {
    try {
        return f();
    } catch (const ParseError &) {
        throw;
    } catch (const json::exception &e) {
        throw ParseError(std::string("malformed document: ") + e.what(), 0, 0);
    } catch (const Error &e) {
        throw ParseError(e.what(), 0, 0);
    }
}

GridData2D parse_grid_json(std::string_view text) {
    const json j = parse_json(text);
    return assemble([&] {
        auto xs = json_numbers(member(j, "xs"), "xs");
        auto ys = json_numbers(member(j, "ys"), "ys");
        const json &rows = member(j, "zs");
        if (!rows.is_array() || rows.size() != xs.size())
            throw ParseError("zs must have one row per x knot", 0, 0);
        std::vector<double> zs;
        for (const auto &row : rows) {
            auto r = json_numbers(row, "zs row");
            if (r.size() != ys.size())
                throw ParseError("every zs row must have one entry per y knot", 0, 0);
            zs.insert(zs.end(), r.begin(), r.end());
        }
        return GridData2D(std::move(xs), std::move(ys), std::move(zs));
    });
}

GridData2D parse_grid_csv(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t idx = 0;
    expect_header(lines, idx, "x,y,z");

    struct Triple {
        double x, y, z;
        std::size_t line;
    };
    std::vector<Triple> triples;
    for (; idx < lines.size(); ++idx) {
        if (blank(lines[idx].text))
            continue;
        const auto fields = split_fields(lines[idx].text);
        if (fields.size() != 3)
            throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), lines[idx].number, 1);
        triples.push_back({parse_number(fields[0], lines[idx].number), parse_number(fields[1], lines[idx].number),
                           parse_number(fields[2], lines[idx].number), lines[idx].number});
    }
    if (triples.empty())
        throw ParseError("grid has no data rows", lines.empty() ? 1 : lines.back().number + 1, 1);

    std::set<double> xset, yset;
    for (const auto &t : triples) {
        xset.insert(t.x);
        yset.insert(t.y);
    }
    std::vector<double> xs(xset.begin(), xset.end()), ys(yset.begin(), yset.end());
    std::vector<double> zs(xs.size() * ys.size(), 0.0);
    std::vector<bool> seen(zs.size(), false);
    for (const auto &t : triples) {
        const auto n = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), t.x) - xs.begin());
        const auto m = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), t.y) - ys.begin());
        const std::size_t cell = n * ys.size() + m;
        if (seen[cell])
            throw ParseError("duplicate grid cell (x=" + format_double(t.x) + ",y=" + format_double(t.y) + ")", t.line,
                             1);
        seen[cell] = true;
        zs[cell] = t.z;
    }
    for (std::size_t n = 0; n < xs.size(); ++n)
        for (std::size_t m = 0; m < ys.size(); ++m)
            if (!seen[n * ys.size() + m])
                throw ParseError("missing grid cell (x=" + format_double(xs[n]) + ",y=" + format_double(ys[m]) + ")",
                                 0, 0);
    return assemble([&] { return GridData2D(std::move(xs), std::move(ys), std::move(zs)); });
}

std::string pgm_bytes(std::size_t width, std::size_t height, const std::vector<std::string> &comments,
                      const std::vector<unsigned char> &gray, PgmEncoding enc) {
    std::string out = enc == PgmEncoding::Ascii ? "P2\n" : "P5\n";
    for (const auto &c : comments)
        out += "# " + c + "\n";
    out += std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    if (enc == PgmEncoding::Binary) {
        out.append(reinterpret_cast<const char *>(gray.data()), gray.size());
        return out;
    }
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            if (c)
                out += ' ';
            out += std::to_string(static_cast<unsigned>(gray[r * width + c]));
        }
        out += '\n';
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        throw Error("cannot format number");
    return std::string(buf, ptr);
}

DataSet1D parse_dataset1d(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t idx = 0;
    expect_header(lines, idx, "t,x");

    std::vector<double> knots, values;
    for (; idx < lines.size(); ++idx) {
        const auto &line = lines[idx];
        if (blank(line.text))
            continue;
        const auto fields = split_fields(line.text);
        if (fields.size() != 2)
            throw ParseError("expected 2 fields, got " + std::to_string(fields.size()), line.number, 1);
        const double t = parse_number(fields[0], line.number);
        const double x = parse_number(fields[1], line.number);
        if (!knots.empty() && !(knots.back() < t))
            throw ParseError("knots must be strictly increasing", line.number, fields[0].column);
        knots.push_back(t);
        values.push_back(x);
    }
    if (knots.size() < 3)
        throw ParseError("need at least 3 data rows, got " + std::to_string(knots.size()),
                         lines.empty() ? 1 : lines.back().number + 1, 1);
    return assemble([&] { return DataSet1D(std::move(knots), std::move(values)); });
}

std::string serialize_dataset1d(const DataSet1D &data) {
    std::string out = "t,x\n";
    for (std::size_t i = 0; i < data.knots().size(); ++i)
        out += format_double(data.knots()[i]) + "," + format_double(data.values()[i]) + "\n";
    return out;
}

std::vector<double> parse_number_list(std::string_view text) {
    const auto body = trim(text);
    if (!body.empty() && body.front() == '[') {
        const json j = parse_json(body);
        return assemble([&] { return json_numbers(j, "scaling list"); });
    }
    // a one-line CSV row; a trailing newline is tolerated
    std::string_view row = body;
    while (!row.empty() && (row.back() == '\n' || row.back() == '\r'))
        row.remove_suffix(1);
    if (row.find('\n') != std::string_view::npos)
        throw ParseError("scaling list must be a single CSV row", 2, 1);
    std::vector<double> out;
    for (const auto &f : split_fields(row))
        out.push_back(parse_number(f, 1));
    return out;
}

GridData2D parse_grid2d(std::string_view text) {
    const auto body = trim(text);
    std::size_t i = 0;
    while (i < body.size() && (body[i] == '\n' || body[i] == '\r'))
        ++i;
    if (i < body.size() && body[i] == '{')
        return parse_grid_json(text);
    return parse_grid_csv(text);
}

std::string serialize_grid2d(const GridData2D &grid) {
    json rows = json::array();
    for (std::size_t n = 0; n < grid.xs().size(); ++n) {
        json row = json::array();
        for (std::size_t m = 0; m < grid.ys().size(); ++m)
            row.push_back(grid.z(n, m));
        rows.push_back(std::move(row));
    }
    json j{{"xs", std::vector<double>(grid.xs().begin(), grid.xs().end())},
           {"ys", std::vector<double>(grid.ys().begin(), grid.ys().end())},
           {"zs", std::move(rows)}};
    return j.dump() + "\n";
}

json to_json(const Ifs1D &ifs) {
    json vmaps = json::array();
    std::vector<double> alphas;
    for (const auto &v : ifs.vmaps()) {
        vmaps.push_back({{"alpha", v.alpha}, {"q1", v.q1}, {"q0", v.q0}});
        alphas.push_back(v.alpha);
    }
    const auto &d = ifs.data();
    return {{"knots", std::vector<double>(d.knots().begin(), d.knots().end())},
            {"values", std::vector<double>(d.values().begin(), d.values().end())},
            {"alphas", alphas},
            {"lmaps", affine_maps_to_json(ifs.lmaps())},
            {"vmaps", std::move(vmaps)}};
}

Ifs1D ifs1d_from_json(const json &j) {
    return assemble([&] {
        auto knots = json_numbers(member(j, "knots"), "knots");
        auto values = json_numbers(member(j, "values"), "values");
        const auto alphas = json_numbers(member(j, "alphas"), "alphas");
        auto lmaps = affine_maps_from_json(member(j, "lmaps"), "lmaps");
        const json &vj = member(j, "vmaps");
        if (!vj.is_array())
            throw ParseError("vmaps must be an array", 0, 0);
        std::vector<VerticalMap1D> vmaps;
        for (const auto &v : vj)
            vmaps.push_back({member(v, "alpha").get<double>(), member(v, "q1").get<double>(),
                             member(v, "q0").get<double>()});
        if (alphas.size() != vmaps.size())
            throw ParseError("alphas and vmaps differ in length", 0, 0);
        for (std::size_t i = 0; i < alphas.size(); ++i)
            if (alphas[i] != vmaps[i].alpha)
                throw ParseError("alphas[" + std::to_string(i) + "] disagrees with vmaps", 0, 0);
        return Ifs1D(DataSet1D(std::move(knots), std::move(values)), std::move(lmaps), std::move(vmaps));
    });
}

std::string serialize_ifs1d(const Ifs1D &ifs) { return to_json(ifs).dump() + "\n"; }

Ifs1D parse_ifs1d(std::string_view text) { return ifs1d_from_json(parse_json(text)); }

json to_json(const Ifs2D &ifs) {
    const auto &g = ifs.grid();
    json zs = json::array(), alphas = json::array(), qs = json::array();
    for (std::size_t n = 0; n < g.xs().size(); ++n) {
        json row = json::array();
        for (std::size_t m = 0; m < g.ys().size(); ++m)
            row.push_back(g.z(n, m));
        zs.push_back(std::move(row));
    }
    for (std::size_t c = 0; c < ifs.x_cells(); ++c) {
        json arow = json::array(), qrow = json::array();
        for (std::size_t d = 0; d < ifs.y_cells(); ++d) {
            arow.push_back(ifs.alpha(c, d));
            const auto &q = ifs.q(c, d);
            qrow.push_back({{"e", q.e}, {"f", q.f}, {"g", q.g}, {"k", q.k}});
        }
        alphas.push_back(std::move(arow));
        qs.push_back(std::move(qrow));
    }
    return {{"xs", std::vector<double>(g.xs().begin(), g.xs().end())},
            {"ys", std::vector<double>(g.ys().begin(), g.ys().end())},
            {"zs", std::move(zs)},
            {"alphas", std::move(alphas)},
            {"phis", affine_maps_to_json(ifs.phis())},
            {"psis", affine_maps_to_json(ifs.psis())},
            {"qcoeffs", std::move(qs)}};
}

Ifs2D ifs2d_from_json(const json &j) {
    return assemble([&] {
        const auto grid = parse_grid_json(json{{"xs", member(j, "xs")}, {"ys", member(j, "ys")}, {"zs", member(j, "zs")}}.dump());
        const std::size_t nx = grid.x_intervals(), ny = grid.y_intervals();
        const json &aj = member(j, "alphas");
        const json &qj = member(j, "qcoeffs");
        if (!aj.is_array() || aj.size() != nx || !qj.is_array() || qj.size() != nx)
            throw ParseError("alphas and qcoeffs need one row per x cell", 0, 0);
        std::vector<double> alphas;
        std::vector<BilinearCoeffs> qs;
        for (std::size_t c = 0; c < nx; ++c) {
            const auto arow = json_numbers(aj[c], "alphas row");
            if (arow.size() != ny || !qj[c].is_array() || qj[c].size() != ny)
                throw ParseError("alphas and qcoeffs rows need one entry per y cell", 0, 0);
            alphas.insert(alphas.end(), arow.begin(), arow.end());
            for (const auto &q : qj[c])
                qs.push_back({member(q, "e").get<double>(), member(q, "f").get<double>(), member(q, "g").get<double>(),
                              member(q, "k").get<double>()});
        }
        return Ifs2D(grid, affine_maps_from_json(member(j, "phis"), "phis"),
                     affine_maps_from_json(member(j, "psis"), "psis"), std::move(alphas), std::move(qs));
    });
}

std::string serialize_ifs2d(const Ifs2D &ifs) { return to_json(ifs).dump() + "\n"; }

Ifs2D parse_ifs2d(std::string_view text) { return ifs2d_from_json(parse_json(text)); }

std::string serialize_report(const Report &report) {
    // nlohmann objects are std::map backed, so keys come out sorted
    return report.dump() + "\n";
}

Report parse_report(std::string_view text) { return parse_json(text); }

Report to_report(const ValidationReport &r) {
    json maps = json::array();
    for (const auto &m : r.maps)
        maps.push_back({{"lmap_first", m.lmap_first},
                        {"lmap_last", m.lmap_last},
                        {"vmap_first", m.vmap_first},
                        {"vmap_last", m.vmap_last},
                        {"domain_factor", m.domain_factor},
                        {"vertical_factor", m.vertical_factor},
                        {"contractive", m.contractive()}});
    return {{"maps", std::move(maps)},
            {"tol", r.tol},
            {"max_residual", r.max_residual},
            {"contractive", r.contractive},
            {"pass", r.pass}};
}

Report to_report(const ComparisonReport &r) {
    return {{"sup_diff", r.sup_diff}, {"w_f", r.w_f},           {"alpha_inf", r.alpha_inf},
            {"f_inf", r.f_inf},       {"bound_rhs", r.bound_rhs}, {"bound_holds", r.bound_holds}};
}

Report to_report(const ViolationReport &r) {
    return {{"knot_residual", r.knot_residual}, {"max_jump", r.max_jump}, {"integral_shift", r.integral_shift}};
}

Report to_report(const CollinearityReport &r) {
    return {{"left", r.left}, {"right", r.right}, {"bottom", r.bottom}, {"top", r.top},
            {"max_deviation", r.max_deviation()}, {"tol", r.tol}, {"pass", r.pass}};
}

Report to_report(const std::map<std::string, double> &seams) {
    Report r = Report::object();
    for (const auto &[k, v] : seams)
        r[k] = v;
    return r;
}

std::string grid_function_csv(const GridFunction1D &f) {
    std::string out = "t,f\n";
    for (std::size_t i = 0; i <= f.intervals(); ++i)
        out += format_double(f.abscissa(i)) + "," + format_double(f[i]) + "\n";
    return out;
}

std::string point_set_csv(const PointSet &points) {
    std::string out = "t,x\n";
    for (const auto &p : points)
        out += format_double(p.t) + "," + format_double(p.x) + "\n";
    return out;
}

std::string surface_csv(const GridFunction2D &f) {
    std::string out = "x,y,f\n";
    for (std::size_t i = 0; i <= f.x_intervals(); ++i)
        for (std::size_t j = 0; j <= f.y_intervals(); ++j)
            out += format_double(f.x(i)) + "," + format_double(f.y(j)) + "," + format_double(f.value(i, j)) + "\n";
    return out;
}

std::string raster_pgm(const Raster &raster, PgmEncoding enc) {
    const double top = raster.max_count();
    std::vector<unsigned char> gray(raster.cells().size());
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const auto c = raster.cells()[i];
        if (c == 0)
            continue;
        const long v = std::lround(255.0 * static_cast<double>(c) / top);
        gray[i] = static_cast<unsigned char>(std::clamp<long>(v, 1, 255));
    }
    const auto &b = raster.bounds();
    return pgm_bytes(raster.width(), raster.height(),
                     {"bbox " + format_double(b.t0) + " " + format_double(b.t1) + " " + format_double(b.x0) + " " +
                      format_double(b.x1)},
                     gray, enc);
}

std::string heightmap_pgm(const GridFunction2D &f, PgmEncoding enc) {
    const auto s = f.samples();
    const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
    const double lo = *lo_it, hi = *hi_it;
    const std::size_t width = f.x_intervals() + 1, height = f.y_intervals() + 1;
    std::vector<unsigned char> gray(width * height);
    for (std::size_t r = 0; r < height; ++r) {
        const std::size_t j = height - 1 - r;
        for (std::size_t i = 0; i < width; ++i) {
            const double t = hi > lo ? (f.value(i, j) - lo) / (hi - lo) : 0.0;
            gray[r * width + i] = static_cast<unsigned char>(std::clamp<long>(std::lround(255.0 * t), 0, 255));
        }
    }
    const Rect &d = f.domain();
    return pgm_bytes(width, height,
                     {"bbox " + format_double(d.x0) + " " + format_double(d.x1) + " " + format_double(d.y0) + " " +
                          format_double(d.y1),
                      "range " + format_double(lo) + " " + format_double(hi)},
                     gray, enc);
}

std::string serialize(const Document &doc) {
    return std::visit(
        [](const auto &p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, fif::DataSet1D>)
                return serialize_dataset1d(p);
            else if constexpr (std::is_same_v<T, GridData2D>)
                return serialize_grid2d(p);
            else if constexpr (std::is_same_v<T, fif::Ifs1D>)
                return serialize_ifs1d(p);
            else if constexpr (std::is_same_v<T, Ifs2D>)
                return serialize_ifs2d(p);
            else
                return serialize_report(p);
        },
        doc.payload);
}

Document parse(DocumentKind kind, std::string_view text) {
    switch (kind) {
    case DocumentKind::DataSet1D:
        return {kind, parse_dataset1d(text)};
    case DocumentKind::Grid2D:
        return {kind, parse_grid2d(text)};
    case DocumentKind::Ifs1D:
        return {kind, parse_ifs1d(text)};
    case DocumentKind::Ifs2D:
        return {kind, parse_ifs2d(text)};
    case DocumentKind::Report:
        return {kind, parse_report(text)};
    }
    throw Error("unknown document kind");
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string &path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot move output into place at " + path);
    }
}

} // namespace fif::io
