#include "sparq/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

namespace sparq {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

CurveStats curve_stats(const std::vector<std::vector<double>>& curves) {
    CurveStats s;
    if (curves.empty()) return s;
    std::size_t len = curves.front().size();
    for (const auto& c : curves) len = std::min(len, c.size());
    s.count = curves.size();
    s.mean.assign(len, 0.0);
    s.sd.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
        double m = 0.0;
        for (const auto& c : curves) m += c[t];
        m /= static_cast<double>(curves.size());
        double v = 0.0;
        for (const auto& c : curves) v += (c[t] - m) * (c[t] - m);
        s.mean[t] = m;
        s.sd[t] = curves.size() > 1 ? std::sqrt(v / static_cast<double>(curves.size() - 1)) : 0.0;
    }
    return s;
}

void write_summary_csv(const std::vector<RunResult>& runs, const fs::path& path) {
    auto out = open_out(path);
    out << "variant,name,seed,status,final_regret,queries,wall_time_s,error\n";
    for (const auto& r : runs) {
        double final_regret = 0.0;
        for (const auto& s : r.trace.steps) final_regret += s.regret;
        out << variant_name(r.variant) << ',' << r.policy << ',' << r.seed << ',' << (r.ok ? "ok" : "failed") << ','
            << (r.ok ? format_double(final_regret) : std::string()) << ',' << r.trace.total_queries() << ','
            << format_double(r.wall_time_s) << ',' << sanitize(r.error) << '\n';
    }
}

void write_curves_csv(const std::map<std::string, CurveStats>& curves, const fs::path& path) {
    auto out = open_out(path);
    out << "name,t,mean,sd,n\n";
    for (const auto& [name, c] : curves)
        for (std::size_t t = 0; t < c.mean.size(); ++t)
            out << name << ',' << t + 1 << ',' << format_double(c.mean[t]) << ',' << format_double(c.sd[t]) << ','
                << c.count << '\n';
}

void write_svg_plot(const std::map<std::string, CurveStats>& curves, const std::string& title, const fs::path& path) {
    constexpr double W = 720, H = 440, left = 70, right = 170, top = 40, bottom = 50;
    std::size_t len = 0;
    double ymax = 0.0;
    for (const auto& [name, c] : curves) {
        len = std::max(len, c.mean.size());
        for (std::size_t t = 0; t < c.mean.size(); ++t) ymax = std::max(ymax, c.mean[t] + c.sd[t]);
    }
    if (ymax <= 0.0) ymax = 1.0;
    const double xspan = std::max<double>(1.0, static_cast<double>(len) - 1.0);
    auto px = [&](double t) { return left + (W - left - right) * t / xspan; };
    auto py = [&](double v) { return H - bottom - (H - top - bottom) * v / ymax; };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n"
        << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = ymax * k / 4.0;
        out << "<text x=\"" << left - 8 << "\" y=\"" << py(v) + 4 << "\" font-family=\"sans-serif\" font-size=\"11\" "
            << "text-anchor=\"end\">" << std::round(v * 100.0) / 100.0 << "</text>\n";
        const double t = xspan * k / 4.0;
        out << "<text x=\"" << px(t) << "\" y=\"" << H - bottom + 18 << "\" font-family=\"sans-serif\" "
            << "font-size=\"11\" text-anchor=\"middle\">" << std::lround(t + 1.0) << "</text>\n";
    }
    out << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
    std::size_t k = 0;
    for (const auto& [name, c] : curves) {
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t t = 0; t < c.mean.size(); ++t) out << px(static_cast<double>(t)) << ',' << py(c.mean[t]) << ' ';
        out << "\"/>\n";
        const double ly = top + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << W - right + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 32 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << W - right + 38 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << name << "</text>\n";
        ++k;
    }
    out << "</svg>\n";
}

AnalysisReport analyze_traces(const fs::path& dir, const AnalyzeOptions& options) {
    if (!fs::is_directory(dir)) throw ConfigError("analyze: " + dir.string() + " is not a directory");
    const fs::path trace_dir = fs::is_directory(dir / "traces") ? dir / "traces" : dir;

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(trace_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    static const std::regex kName(R"((.+)_seed(\d+))");
    struct Loaded {
        std::string name;
        std::string seed;
        RunTrace trace;
    };
    std::vector<Loaded> loaded;
    AnalysisReport report;
    for (const auto& f : files) {
        try {
            RunTrace tr = read_trace_csv(f.string());
            if (tr.steps.empty()) throw InputError("no steps");
            for (std::size_t i = 0; i < tr.steps.size(); ++i)
                if (tr.steps[i].t != static_cast<long>(i) + 1) throw InputError("steps are not numbered 1..T");
            std::smatch m;
            const std::string stem = f.stem().string();
            Loaded l;
            if (std::regex_match(stem, m, kName)) {
                l.name = m[1];
                l.seed = m[2];
            } else {
                l.name = stem;
                l.seed = "0";
            }
            l.trace = std::move(tr);
            loaded.push_back(std::move(l));
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << f.string() << ": " << e.what() << "\n";
            ++report.skipped;
        }
    }
    report.traces = loaded.size();
    if (loaded.empty()) return report;

    const fs::path out = dir / "analysis";
    fs::create_directories(out);
    std::map<std::string, std::vector<std::vector<double>>> regret, rate;
    {
        auto cum = open_out(out / "cumulative_regret.csv");
        cum << "name,seed,t,cumulative_regret,queries_so_far\n";
        for (const auto& l : loaded) {
            const auto c = cumulative_regret(l.trace);
            std::vector<double> r;
            std::size_t q = 0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                q += l.trace.steps[i].queries;
                r.push_back(static_cast<double>(q) / static_cast<double>(i + 1));
                cum << l.name << ',' << l.seed << ',' << i + 1 << ',' << format_double(c[i]) << ',' << q << '\n';
            }
            regret[l.name].push_back(c);
            rate[l.name].push_back(std::move(r));
        }
    }
    for (auto& [name, cs] : regret) {
        report.policies.push_back(name);
        report.regret[name] = curve_stats(cs);
        report.query_rate[name] = curve_stats(rate[name]);
    }
    write_curves_csv(report.regret, out / "regret_mean.csv");
    write_curves_csv(report.query_rate, out / "query_rate.csv");

    if (options.overlays) {
        auto ov = open_out(out / "overlays.csv");
        ov << "name,kind,c,t,value\n";
        for (const auto& [name, stats] : report.regret) {
            const std::size_t T = stats.mean.size();
            const std::size_t ref = std::max<std::size_t>(1, T / 2);
            std::vector<double> horizons;
            for (std::size_t t = 1; t <= T; ++t) horizons.push_back(static_cast<double>(t));
            for (const auto kind : {OverlayKind::BanditUpper, OverlayKind::WSparqUpper, OverlayKind::BanditLowerSmall,
                                    OverlayKind::BanditLowerLarge}) {
                OverlayParams p = options.overlay;
                p.c = calibrate_overlay_constant(kind, p, static_cast<double>(ref), stats.mean[ref - 1]);
                const auto values = bound_overlay(kind, p, horizons);
                for (std::size_t t = 0; t < T; ++t)
                    ov << name << ',' << overlay_name(kind) << ',' << format_double(p.c) << ',' << t + 1 << ','
                       << format_double(values[t]) << '\n';
            }
        }
    }

    if (fs::is_directory(dir / "predictions")) {
        auto pe = open_out(out / "prediction_error.csv");
        pe << "name,grid_points,mean_sq_error,max_sq_error\n";
        std::vector<fs::path> preds;
        for (const auto& entry : fs::directory_iterator(dir / "predictions"))
            if (entry.is_regular_file() && entry.path().extension() == ".csv") preds.push_back(entry.path());
        std::sort(preds.begin(), preds.end());
        for (const auto& p : preds) {
            std::ifstream in(p);
            std::string line;
            std::getline(in, line);
            double sum = 0.0, mx = 0.0;
            std::size_t n = 0;
            bool bad = split_line(line).empty() || split_line(line).back() != "mean_sq_error";
            while (!bad && std::getline(in, line)) {
                if (line.empty()) continue;
                const auto cells = split_line(line);
                try {
                    const double v = std::stod(cells.back());
                    sum += v;
                    mx = std::max(mx, v);
                    ++n;
                } catch (const std::exception&) {
                    bad = true;
                }
            }
            if (bad || n == 0) {
                std::cerr << "warning: skipping prediction table " << p.string() << "\n";
                continue;
            }
            pe << p.stem().string() << ',' << n << ',' << format_double(sum / static_cast<double>(n)) << ','
               << format_double(mx) << '\n';
        }
    }
    return report;
}

}  // namespace sparq
