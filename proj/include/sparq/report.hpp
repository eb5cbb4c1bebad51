#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sparq/analysis.hpp"
#include "sparq/experiment.hpp"

namespace sparq {

struct CurveStats {
    std::vector<double> mean;
    std::vector<double> sd;  ///< sample standard deviation; 0 for a single curve
    std::size_t count = 0;
};

/// Pointwise mean and spread of equal-length curves.
CurveStats curve_stats(const std::vector<std::vector<double>>& curves);

void write_summary_csv(const std::vector<RunResult>& runs, const std::filesystem::path& path);
/// Long format: name,t,mean,sd,n
void write_curves_csv(const std::map<std::string, CurveStats>& curves, const std::filesystem::path& path);
/// Minimal standalone SVG line chart of mean curves.
void write_svg_plot(const std::map<std::string, CurveStats>& curves, const std::string& title,
                    const std::filesystem::path& path);

struct AnalyzeOptions {
    OverlayParams overlay;
    bool overlays = true;
};

struct AnalysisReport {
    std::size_t traces = 0;
    std::size_t skipped = 0;
    std::vector<std::string> policies;
    std::map<std::string, CurveStats> regret;
    std::map<std::string, CurveStats> query_rate;
};

/// Reads trace CSVs from dir/traces (or dir itself), skipping malformed files
/// with a warning, and writes tables under dir/analysis.
AnalysisReport analyze_traces(const std::filesystem::path& dir, const AnalyzeOptions& options = {});

}  // namespace sparq
