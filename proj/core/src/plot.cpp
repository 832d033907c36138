// Copyright 2026 The photinject Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "photinject/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace photinject {

namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

double parse_number(const std::string &cell, const std::string &column) {
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw PlotError("column '" + column + "' holds non-numeric value '" + cell + "'");
    }
    return v;
}

std::vector<Series> collect(const CsvTable &table, const PlotSpec &spec) {
    if (table.header().empty()) {
        return {};
    }
    const int xi = table.column(spec.x);
    const int yi = table.column(spec.y);
    if (xi < 0) {
        throw PlotError("csv has no column '" + spec.x + "'");
    }
    if (yi < 0) {
        throw PlotError("csv has no column '" + spec.y + "'");
    }
    int si = -1;
    if (spec.series) {
        si = table.column(*spec.series);
        if (si < 0) {
            throw PlotError("csv has no column '" + *spec.series + "'");
        }
    } else {
        si = table.column("variant");
    }
    std::vector<Series> out;
    std::map<std::string, std::size_t> by_name;
    for (const auto &row : table.rows()) {
        const std::string name = si >= 0 ? row[static_cast<std::size_t>(si)] : spec.y;
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            it = by_name.emplace(name, out.size()).first;
            out.push_back(Series{name, {}});
        }
        out[it->second].points.emplace_back(
            parse_number(row[static_cast<std::size_t>(xi)], spec.x),
            parse_number(row[static_cast<std::size_t>(yi)], spec.y));
    }
    return out;
}

std::string num(double v) {
    // Two decimals are plenty for pixel coordinates.
    const double r = std::round(v * 100.0) / 100.0;
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), r == 0.0 ? 0.0 : r);
    return std::string(buf.data(), res.ptr);
}

std::string escape(const std::string &s) {
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

double nice_step(double span) {
    if (span <= 0.0) {
        return 1.0;
    }
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

constexpr std::array<const char *, 8> kPalette = {"#1f77b4", "#2ca02c", "#d62728", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string render_svg(const CsvTable &table, const PlotSpec &spec) {
    const auto series = collect(table, spec);
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto &s : series) {
        for (const auto &[x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    }
    if (xmax == xmin) {
        xmax = xmin + 1.0;
    }
    if (ymax == ymin) {
        ymax = ymin + 1.0;
    }
    const double xstep = nice_step(xmax - xmin);
    const double ystep = nice_step(ymax - ymin);
    xmin = std::floor(xmin / xstep) * xstep;
    xmax = std::ceil(xmax / xstep) * xstep;
    ymin = std::floor(ymin / ystep) * ystep;
    ymax = std::ceil(ymax / ystep) * ystep;

    constexpr double width = 720, height = 440;
    constexpr double left = 70, right = 160, top = 40, bottom = 60;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!spec.title.empty()) {
        svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
               escape(spec.title) + "</text>\n";
    }
    svg += "<g stroke=\"#ddd\">\n";
    for (double t = xmin; t <= xmax + xstep * 1e-9; t += xstep) {
        svg += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(top) + "\" x2=\"" + num(px(t)) +
               "\" y2=\"" + num(top + ph) + "\"/>\n";
    }
    for (double t = ymin; t <= ymax + ystep * 1e-9; t += ystep) {
        svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(left + pw) +
               "\" y2=\"" + num(py(t)) + "\"/>\n";
    }
    svg += "</g>\n<g>\n";
    for (double t = xmin; t <= xmax + xstep * 1e-9; t += xstep) {
        svg += "<text x=\"" + num(px(t)) + "\" y=\"" + num(top + ph + 18) +
               "\" text-anchor=\"middle\">" + num(t) + "</text>\n";
    }
    for (double t = ymin; t <= ymax + ystep * 1e-9; t += ystep) {
        svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(t) + 4) +
               "\" text-anchor=\"end\">" + num(t) + "</text>\n";
    }
    svg += "</g>\n";
    svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 16) +
           "\" text-anchor=\"middle\">" + escape(spec.x) + "</text>\n";
    svg += "<text transform=\"translate(18 " + num(top + ph / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y) + "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char *color = kPalette[i % kPalette.size()];
        std::string pts;
        for (const auto &[x, y] : series[i].points) {
            if (!pts.empty()) {
                pts += ' ';
            }
            pts += num(px(x)) + "," + num(py(y));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
        const double ly = top + 16 + 20 * static_cast<double>(i);
        svg += "<line x1=\"" + num(left + pw + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(left + pw + 36) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(left + pw + 42) + "\" y=\"" + num(ly + 4) + "\">" +
               escape(series[i].name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

GnuplotFiles render_gnuplot(const CsvTable &table, const PlotSpec &spec,
                            const std::string &data_name) {
    const auto series = collect(table, spec);
    GnuplotFiles files;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0) {
            files.data += "\n\n";
        }
        files.data += "# " + series[i].name + "\n";
        for (const auto &[x, y] : series[i].points) {
            files.data += format_double(x) + " " + format_double(y) + "\n";
        }
    }
    files.script += "set xlabel \"" + spec.x + "\"\n";
    files.script += "set ylabel \"" + spec.y + "\"\n";
    if (!spec.title.empty()) {
        files.script += "set title \"" + spec.title + "\"\n";
    }
    files.script += "set key outside right\n";
    if (series.empty()) {
        files.script += "set xrange [0:1]\nset yrange [0:1]\nplot NaN notitle\n";
        return files;
    }
    files.script += "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0) {
            files.script += ", \\\n     ";
        }
        files.script += "\"" + data_name + "\" index " + std::to_string(i) +
                        " using 1:2 with linespoints title \"" + series[i].name + "\"";
    }
    files.script += "\n";
    return files;
}

void emit_plot(const std::filesystem::path &csv, const std::filesystem::path &out,
               const PlotSpec &spec) {
    const CsvTable table = CsvTable::parse(read_file(csv));
    if (spec.format == PlotFormat::kSvg) {
        write_file_atomic(out, render_svg(table, spec));
        return;
    }
    auto data_path = out;
    data_path += ".dat";
    const auto files = render_gnuplot(table, spec, data_path.filename().string());
    write_file_atomic(data_path, files.data);
    write_file_atomic(out, files.script);
}

}  // namespace photinject
