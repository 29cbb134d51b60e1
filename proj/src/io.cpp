#include "infoflow/io.hpp"

#include "infoflow/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace infoflow::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty())
        return false;
    if (s.front() == '+')
        s.remove_prefix(1);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t at = line.find(sep, start);
        if (at == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, at - start));
        start = at + 1;
    }
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.push_back(line);
    }
    return out;
}

[[noreturn]] void parse_error(std::string_view what, std::size_t line) {
    std::ostringstream os;
    os << what << " (line " << line << ")";
    fail(ErrorKind::io, os.str());
}

std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Viridis anchors, interpolated linearly.
std::string color(double f) {
    static constexpr std::array<std::array<double, 3>, 5> anchors{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    f = std::clamp(f, 0.0, 1.0) * 4.0;
    const std::size_t k = std::min<std::size_t>(3, static_cast<std::size_t>(f));
    const double u = f - static_cast<double>(k);
    char buf[8];
    int rgb[3];
    for (std::size_t c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(anchors[k][c] + u * (anchors[k + 1][c] - anchors[k][c])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

} // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
        fail(ErrorKind::io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f)
        fail(ErrorKind::io, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        fail(ErrorKind::io, "cannot open " + path.string() + " for reading");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string trajectory_csv(const Trajectory& traj, std::string_view value_name) {
    std::string out = "t," + std::string(value_name) + "\n";
    for (std::size_t i = 0; i < traj.size(); ++i)
        out += format_number(traj.times[i]) + "," + format_number(traj.values[i]) + "\n";
    return out;
}

std::string prob_trajectory_csv(const ProbTrajectory& traj) {
    std::string out = "t,p1,p2,p3";
    if (traj.has_standard_errors())
        out += ",se1,se2,se3";
    out += "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out += format_number(traj.times[k]);
        for (std::size_t i = 0; i < 3; ++i)
            out += "," + format_number(traj.states[k][i]);
        if (traj.has_standard_errors())
            for (std::size_t i = 0; i < 3; ++i)
                out += "," + format_number(traj.standard_errors[k][i]);
        out += "\n";
    }
    return out;
}

std::string phase_grid_csv(const PhaseGrid& grid) {
    grid.validate();
    std::string out = grid.axis1.name + "\\" + grid.axis2.name;
    for (double v : grid.axis2.values)
        out += "," + format_number(v);
    out += "\n";
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        out += format_number(grid.axis1.values[i]);
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            out += ",";
            if (grid.is_valid(i, j))
                out += format_number(grid.at(i, j));
        }
        out += "\n";
    }
    return out;
}

PhaseGrid read_phase_grid_csv(std::string_view text) {
    auto lines = lines_of(text);
    while (!lines.empty() && trim(lines.back()).empty())
        lines.pop_back();
    if (lines.size() < 2)
        fail(ErrorKind::io, "grid CSV needs a header row and at least one data row");
    const auto header = split(lines[0], ',');
    const std::string_view corner = header[0];
    const std::size_t slash = corner.find('\\');
    if (slash == std::string_view::npos)
        parse_error("grid CSV corner cell must read '<axis1>\\<axis2>'", 1);
    Axis a1{std::string(corner.substr(0, slash)), {}};
    Axis a2{std::string(corner.substr(slash + 1)), {}};
    for (std::size_t j = 1; j < header.size(); ++j) {
        double v = 0.0;
        if (!parse_double(header[j], v))
            parse_error("bad axis value in grid CSV header", 1);
        a2.values.push_back(v);
    }
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    bool masked = false;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto fields = split(lines[l], ',');
        if (fields.size() != header.size())
            parse_error("grid CSV row has the wrong number of fields", l + 1);
        double v = 0.0;
        if (!parse_double(fields[0], v))
            parse_error("bad axis value in grid CSV", l + 1);
        a1.values.push_back(v);
        for (std::size_t j = 1; j < fields.size(); ++j) {
            if (trim(fields[j]).empty()) {
                values.push_back(0.0);
                valid.push_back(0);
                masked = true;
            } else if (parse_double(fields[j], v)) {
                values.push_back(v);
                valid.push_back(1);
            } else {
                parse_error("bad cell value in grid CSV", l + 1);
            }
        }
    }
    PhaseGrid grid(std::move(a1), std::move(a2));
    grid.values = std::move(values);
    if (masked)
        grid.valid = std::move(valid);
    grid.validate();
    return grid;
}

nlohmann::json phase_grid_json(const PhaseGrid& grid) {
    nlohmann::json j = grid.meta;
    j["axis1"] = {{"name", grid.axis1.name}, {"values", grid.axis1.values}};
    j["axis2"] = {{"name", grid.axis2.name}, {"values", grid.axis2.values}};
    j["shape"] = {grid.rows(), grid.cols()};
    j["masked_cells"] = grid.valid.empty()
                            ? 0
                            : static_cast<std::size_t>(std::count(grid.valid.begin(), grid.valid.end(), 0));
    return j;
}

nlohmann::json backflow_json(const BackflowResult& r) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : r.intervals)
        intervals.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}, {"rise", iv.rise}});
    return {{"n_i", r.n_i}, {"epsilon", r.epsilon}, {"total_fall", r.total_fall}, {"intervals", intervals}};
}

Trajectory read_trajectory_csv(std::string_view text) {
    Trajectory traj;
    bool first = true;
    std::size_t n = 0;
    for (auto line : lines_of(text)) {
        ++n;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const auto fields = split(line, ',');
        double t = 0.0, v = 0.0;
        const bool ok = fields.size() >= 2 && parse_double(fields[0], t) && parse_double(fields[1], v);
        if (!ok) {
            if (first) {
                first = false;
                continue;
            }
            parse_error("expected two numeric columns (t, I)", n);
        }
        first = false;
        traj.times.push_back(t);
        traj.values.push_back(v);
    }
    traj.validate();
    return traj;
}

Matrix3 parse_generator(std::string_view text) {
    std::vector<std::array<double, 3>> rows;
    std::size_t n = 0;
    for (auto line : lines_of(text)) {
        ++n;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::string cleaned(line);
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream is(cleaned);
        std::vector<double> entries;
        std::string token;
        while (is >> token) {
            double v = 0.0;
            if (!parse_double(token, v))
                parse_error("bad number '" + token + "' in generator file", n);
            entries.push_back(v);
        }
        if (entries.empty())
            continue;
        if (entries.size() != 3)
            parse_error("generator rows need exactly three entries", n);
        rows.push_back({entries[0], entries[1], entries[2]});
    }
    if (rows.size() != 3)
        fail(ErrorKind::io, "generator file must contain exactly three rows");
    Matrix3 k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            k(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return k;
}

SimplexPoint parse_simplex_point(std::string_view text) {
    const auto fields = split(text, ',');
    std::array<double, 3> p{};
    if (fields.size() != 3)
        fail(ErrorKind::usage, "expected three comma-separated probabilities, got '" + std::string(text) + "'");
    for (std::size_t i = 0; i < 3; ++i)
        if (!parse_double(fields[i], p[i]))
            fail(ErrorKind::usage, "bad probability '" + std::string(fields[i]) + "'");
    return SimplexPoint(p);
}

std::string svg_heatmap(const PhaseGrid& grid, std::string_view title) {
    grid.validate();
    constexpr int cell = 16;
    constexpr int left = 90, top = 50, right = 130, bottom = 70;
    const int nx = static_cast<int>(grid.cols());
    const int ny = static_cast<int>(grid.rows());
    const int width = left + nx * cell + right;
    const int height = top + ny * cell + bottom;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < grid.rows(); ++i)
        for (std::size_t j = 0; j < grid.cols(); ++j)
            if (grid.is_valid(i, j)) {
                lo = std::min(lo, grid.at(i, j));
                hi = std::max(hi, grid.at(i, j));
            }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
       << "\" width=\"" << width << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
       << "</text>\n";
    // axis1 runs bottom to top, axis2 left to right.
    for (int i = 0; i < ny; ++i) {
        for (int j = 0; j < nx; ++j) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            if (!grid.is_valid(ui, uj))
                continue;
            const int x = left + j * cell;
            const int y = top + (ny - 1 - i) * cell;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
               << "\" fill=\"" << color((grid.at(ui, uj) - lo) / span) << "\"><title>"
               << format_number(grid.at(ui, uj)) << "</title></rect>\n";
        }
    }
    const int x_step = std::max(1, nx / 6);
    for (int j = 0; j < nx; j += x_step)
        os << "<text x=\"" << left + j * cell + cell / 2 << "\" y=\"" << top + ny * cell + 16
           << "\" text-anchor=\"middle\">" << short_number(grid.axis2.values[static_cast<std::size_t>(j)])
           << "</text>\n";
    const int y_step = std::max(1, ny / 6);
    for (int i = 0; i < ny; i += y_step)
        os << "<text x=\"" << left - 6 << "\" y=\"" << top + (ny - 1 - i) * cell + cell / 2 + 4
           << "\" text-anchor=\"end\">" << short_number(grid.axis1.values[static_cast<std::size_t>(i)])
           << "</text>\n";
    os << "<text x=\"" << left + nx * cell / 2 << "\" y=\"" << top + ny * cell + 40
       << "\" text-anchor=\"middle\">" << xml_escape(grid.axis2.name) << "</text>\n";
    os << "<text x=\"20\" y=\"" << top + ny * cell / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << top + ny * cell / 2 << ")\">" << xml_escape(grid.axis1.name) << "</text>\n";

    constexpr int bar_steps = 64;
    const int bar_x = left + nx * cell + 30;
    const int bar_h = ny * cell;
    for (int s = 0; s < bar_steps; ++s) {
        const int y0 = top + bar_h - (s + 1) * bar_h / bar_steps;
        const int y1 = top + bar_h - s * bar_h / bar_steps;
        os << "<rect x=\"" << bar_x << "\" y=\"" << y0 << "\" width=\"16\" height=\"" << y1 - y0 << "\" fill=\""
           << color((s + 0.5) / bar_steps) << "\"/>\n";
    }
    os << "<text x=\"" << bar_x + 22 << "\" y=\"" << top + bar_h << "\">" << short_number(lo) << "</text>\n";
    os << "<text x=\"" << bar_x + 22 << "\" y=\"" << top + 10 << "\">" << short_number(hi) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace infoflow::io
