#pragma once

// Files written for a batch of RunRecords:
//
//   results.csv                    one row per run, columns as in results_header()
//   forecasts/<experiment>/<run>.csv   step,forecast,truth
//   <experiment>.svg               static chart: DTW against frequency for the
//                                  sine sweep, runtime scatter for the benchmark,
//                                  forecast against truth otherwise
//
// `score` is experiment-specific: final forecast value (trend), fraction of
// forecast values inside the widened bands (shape), empty otherwise.

#include "abbalstm/harness/data_io.hpp"
#include "abbalstm/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace abbalstm::harness {

[[nodiscard]] inline std::vector<std::string> results_header() {
    return {"experiment", "series",   "model",          "mode",          "forecast_mode", "seed",
            "param",      "k",        "euclidean",      "dtw",           "euclidean_diff", "dtw_diff",
            "smape",      "score",    "symbols",        "alphabet",      "epochs",        "best_epoch",
            "build_seconds", "train_seconds", "forecast_seconds", "total_seconds", "error"};
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

// Empty for NaN (missing) values.
inline std::string number_field(double v) { return std::isnan(v) ? std::string{} : format_double(v); }

inline std::string join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        if (j) line += ',';
        line += csv_field(fields[j]);
    }
    return line;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

} // namespace detail

[[nodiscard]] inline std::string result_row(const RunRecord& r) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto metric = [&](double v) { return detail::number_field(r.has_truth ? v : nan); };
    return detail::join({r.experiment,
                         r.series,
                         r.model,
                         r.mode,
                         r.forecast_mode,
                         std::to_string(r.seed),
                         detail::number_field(r.param),
                         std::to_string(r.k),
                         metric(r.report.euclidean),
                         metric(r.report.dtw),
                         metric(r.report.euclidean_diff),
                         metric(r.report.dtw_diff),
                         metric(r.report.smape),
                         detail::number_field(r.score),
                         std::to_string(r.symbols),
                         std::to_string(r.alphabet),
                         std::to_string(r.epochs),
                         std::to_string(r.best_epoch),
                         format_double(r.seconds.build),
                         format_double(r.seconds.train),
                         format_double(r.seconds.forecast),
                         format_double(r.seconds.total()),
                         r.error});
}

inline void write_results_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
    auto out = detail::open_output(path);
    out << detail::join(results_header()) << '\n';
    for (const auto& r : records) out << result_row(r) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

[[nodiscard]] inline std::string run_file_stem(const RunRecord& r) {
    std::string s = r.series + "_" + r.model + "_" + r.mode + "_seed" + std::to_string(r.seed);
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') c = '_';
    }
    return s;
}

inline void write_forecast_csv(const RunRecord& r, const std::filesystem::path& path) {
    auto out = detail::open_output(path);
    out << "step,forecast,truth\n";
    for (std::size_t j = 0; j < r.forecast.size(); ++j) {
        out << j + 1 << ',' << format_double(r.forecast[j]) << ','
            << (j < r.truth.size() ? format_double(r.truth[j]) : std::string{}) << '\n';
    }
}

// ---------------------------------------------------------------------------
// SVG

struct Polyline {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    bool points_only = false;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Polyline> lines;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        default: o += c;
        }
    }
    return o;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace detail

/// Panels stacked vertically, each with its own axes and legend.
[[nodiscard]] inline std::string render_svg(const std::string& title, const std::vector<Panel>& panels) {
    constexpr double W = 760, H = 260, left = 70, right = 150, top = 30, bottom = 40;
    const double total_h = 40 + H * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << total_h
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << detail::xml_escape(title)
      << "</text>\n";
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        const double y0 = 40 + H * static_cast<double>(p);
        const double pw = W - left - right, ph = H - top - bottom;
        double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
        for (const auto& l : panel.lines) {
            for (std::size_t j = 0; j < l.x.size(); ++j) {
                if (!std::isfinite(l.x[j]) || !std::isfinite(l.y[j])) continue;
                xmin = std::min(xmin, l.x[j]);
                xmax = std::max(xmax, l.x[j]);
                ymin = std::min(ymin, l.y[j]);
                ymax = std::max(ymax, l.y[j]);
            }
        }
        if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
        if (xmax == xmin) xmax = xmin + 1;
        if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
        const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
        const auto py = [&](double y) { return y0 + top + (ymax - y) / (ymax - ymin) * ph; };

        s << "<g>\n<text x=\"" << left + pw / 2 << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">"
          << detail::xml_escape(panel.title) << "</text>\n";
        s << "<rect x=\"" << left << "\" y=\"" << y0 + top << "\" width=\"" << pw << "\" height=\"" << ph
          << "\" fill=\"none\" stroke=\"#888\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double fx = xmin + (xmax - xmin) * t / 4.0, fy = ymin + (ymax - ymin) * t / 4.0;
            s << "<text x=\"" << detail::fmt(px(fx)) << "\" y=\"" << y0 + top + ph + 14
              << "\" text-anchor=\"middle\">" << detail::tick(fx) << "</text>\n";
            s << "<text x=\"" << left - 6 << "\" y=\"" << detail::fmt(py(fy) + 4) << "\" text-anchor=\"end\">"
              << detail::tick(fy) << "</text>\n";
        }
        s << "<text x=\"" << left + pw / 2 << "\" y=\"" << y0 + H - 6 << "\" text-anchor=\"middle\">"
          << detail::xml_escape(panel.x_label) << "</text>\n";
        s << "<text transform=\"translate(14," << y0 + top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
          << detail::xml_escape(panel.y_label) << "</text>\n";
        for (std::size_t li = 0; li < panel.lines.size(); ++li) {
            const auto& l = panel.lines[li];
            if (l.points_only) {
                for (std::size_t j = 0; j < l.x.size(); ++j) {
                    if (!std::isfinite(l.x[j]) || !std::isfinite(l.y[j])) continue;
                    s << "<circle cx=\"" << detail::fmt(px(l.x[j])) << "\" cy=\"" << detail::fmt(py(l.y[j]))
                      << "\" r=\"2.5\" fill=\"" << l.color << "\"/>\n";
                }
            } else {
                s << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1.3\" points=\"";
                for (std::size_t j = 0; j < l.x.size(); ++j) {
                    if (std::isfinite(l.y[j])) s << detail::fmt(px(l.x[j])) << ',' << detail::fmt(py(l.y[j])) << ' ';
                }
                s << "\"/>\n";
            }
            const double ly = y0 + top + 12 + 16 * static_cast<double>(li);
            s << "<rect x=\"" << left + pw + 10 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\""
              << l.color << "\"/><text x=\"" << left + pw + 24 << "\" y=\"" << ly << "\">"
              << detail::xml_escape(l.label) << "</text>\n";
        }
        s << "</g>\n";
    }
    s << "</svg>\n";
    return s.str();
}

namespace detail {

inline const char* palette(std::size_t j) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors[j % 6];
}

inline std::vector<double> steps(std::size_t from, std::size_t count) {
    std::vector<double> x(count);
    for (std::size_t j = 0; j < count; ++j) x[j] = static_cast<double>(from + j);
    return x;
}

// History tail, truth and forecast of up to six runs.
inline std::vector<Panel> forecast_panels(const std::vector<RunRecord>& records) {
    std::vector<Panel> panels;
    for (const auto& r : records) {
        if (!r.error.empty() || panels.size() == 6) continue;
        Panel p;
        p.title = r.series + " / " + r.model + " / " + r.mode + " / seed " + std::to_string(r.seed);
        p.x_label = "time step";
        p.y_label = "value";
        const std::size_t n = r.history.size();
        const std::size_t shown = std::min(n, std::max<std::size_t>(2 * r.forecast.size(), 50));
        p.lines.push_back({"training", "#999999", steps(n - shown + 1, shown),
                           std::vector<double>(r.history.end() - static_cast<std::ptrdiff_t>(shown), r.history.end())});
        if (!r.truth.empty()) p.lines.push_back({"truth", "#000000", steps(n + 1, r.truth.size()), r.truth});
        p.lines.push_back({"forecast", r.model == "raw" ? "#d62728" : "#1f77b4", steps(n + 1, r.forecast.size()), r.forecast});
        panels.push_back(std::move(p));
    }
    return panels;
}

inline std::vector<Panel> sine_panels(const std::vector<RunRecord>& records) {
    std::map<std::string, Polyline> groups;
    for (const auto& r : records) {
        if (!r.error.empty() || !r.has_truth) continue;
        auto& g = groups[r.model + " " + r.mode];
        g.label = r.model + " " + r.mode;
        g.points_only = true;
        g.x.push_back(r.param);
        g.y.push_back(r.report.dtw);
    }
    Panel p{"DTW distance to the true continuation", "frequency n", "DTW", {}};
    std::size_t j = 0;
    for (auto& [name, line] : groups) {
        line.color = palette(j++);
        p.lines.push_back(std::move(line));
    }
    return {p};
}

inline std::vector<Panel> runtime_panels(const std::vector<RunRecord>& records) {
    // pair raw and abba runs of the same series, mode and seed
    std::map<std::string, std::pair<double, double>> pairs;
    for (const auto& r : records) {
        if (!r.error.empty()) continue;
        auto& p = pairs.try_emplace(r.series + "|" + r.mode + "|" + std::to_string(r.seed),
                                    std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN())
                      .first->second;
        (r.model == "raw" ? p.first : p.second) = r.seconds.total();
    }
    Polyline pts{"series", "#1f77b4", {}, {}, true};
    double top = 0.0;
    for (const auto& [key, p] : pairs) {
        if (std::isnan(p.first) || std::isnan(p.second)) continue;
        pts.x.push_back(p.first);
        pts.y.push_back(p.second);
        top = std::max({top, p.first, p.second});
    }
    Panel panel{"build + train + forecast time per series", "raw LSTM seconds", "ABBA-LSTM seconds", {}};
    panel.lines.push_back({"equal time", "#999999", {0.0, top}, {0.0, top}});
    panel.lines.push_back(std::move(pts));
    return {panel};
}

} // namespace detail

[[nodiscard]] inline std::string experiment_svg(ExperimentKind kind, const std::vector<RunRecord>& records) {
    switch (kind) {
    case ExperimentKind::sine: return render_svg("sine sweep", detail::sine_panels(records));
    case ExperimentKind::bench: return render_svg("benchmark runtimes", detail::runtime_panels(records));
    default: return render_svg(to_string(kind) + " forecasts", detail::forecast_panels(records));
    }
}

/// Writes results.csv, one forecast CSV per run and <experiment>.svg into `dir`.
inline void emit_outputs(ExperimentKind kind, const std::vector<RunRecord>& records, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir / "forecasts" / to_string(kind), ec);
    if (ec) throw std::runtime_error("cannot create " + (dir / "forecasts").string() + ": " + ec.message());
    write_results_csv(records, dir / "results.csv");
    for (const auto& r : records) {
        if (r.error.empty()) write_forecast_csv(r, dir / "forecasts" / to_string(kind) / (run_file_stem(r) + ".csv"));
    }
    auto out = detail::open_output(dir / (to_string(kind) + ".svg"));
    out << experiment_svg(kind, records);
}

} // namespace abbalstm::harness
