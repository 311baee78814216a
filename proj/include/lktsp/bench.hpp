#pragma once

#include <map>
#include <string>
#include <vector>

#include "lktsp/instance.hpp"
#include "lktsp/solver.hpp"

namespace lktsp {

struct BenchEntry {
    std::string path;   // .tsp file
    std::string group;  // family label for aggregation
    int size = 0;
    std::string opt_tour_path;  // optional .tour with a known optimum
};

// CSV: instance,group,size[,opt_tour]; '#' comments and blank lines skipped
std::vector<BenchEntry> parse_manifest(const std::string& path);

struct NamedConfig {
    std::string name;
    SolverConfig config;
};

// JSON array of config objects; unknown keys rejected
std::vector<NamedConfig> parse_configs_file(const std::string& path);
std::string configs_to_json(const std::vector<NamedConfig>& configs);

// (sum of solved times + 10*cutoff*unsolved) / runs; empty input is an error
double par10(const std::vector<RunRecord>& records, double cutoff_seconds);

struct BenchReport {
    std::vector<RunRecord> records;  // sorted by (instance, config, fold)
    std::map<std::string, std::string> group_of;  // instance -> family label
    std::map<std::string, int> size_of;
    std::vector<std::string> load_errors;  // failed entries, noted not fatal
    double cutoff_seconds = 0.0;
};

BenchReport run_matrix(const std::vector<BenchEntry>& entries,
                       const std::vector<NamedConfig>& configs, int folds,
                       double cutoff_seconds, int workers = 1, bool verbose = false);

void write_records_csv(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(const std::string& path);

// instance,group,par10_x,par10_y,missing_edges with configs x and y as axes
void export_scatter(const std::string& path, const BenchReport& report,
                    const std::string& config_x, const std::string& config_y,
                    double cutoff_seconds);

// group,size,missing_count,share; shares sum to 1 within a (group,size) block
void export_missing_histogram(const std::string& path, const BenchReport& report);

// group,size,config,mean_par10,timeout_count
void export_summary(const std::string& path, const BenchReport& report,
                    double cutoff_seconds);

// minimal standalone scatter plot of the two par10 axes
void export_scatter_svg(const std::string& path, const BenchReport& report,
                        const std::string& config_x, const std::string& config_y,
                        double cutoff_seconds);

} // namespace lktsp
