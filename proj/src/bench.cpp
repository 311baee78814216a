#include "lktsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace lktsp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

} // namespace

std::vector<BenchEntry> parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    const std::string dir = std::filesystem::path(path).parent_path().string();

    std::vector<BenchEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(t, ',');
        if (fields.size() < 3 || fields.size() > 4)
            throw ParseError(lineno, "manifest rows are instance,group,size[,opt_tour]");
        BenchEntry e;
        e.path = resolve(dir, trim(fields[0]));
        e.group = trim(fields[1]);
        try {
            e.size = std::stoi(trim(fields[2]));
        } catch (const std::exception&) {
            throw ParseError(lineno, "size is not an integer: " + fields[2]);
        }
        if (e.size < 3) throw ParseError(lineno, "size must be at least 3");
        if (fields.size() == 4) e.opt_tour_path = resolve(dir, trim(fields[3]));
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<NamedConfig> parse_configs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open configs file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error("configs file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array()) throw std::runtime_error("configs file must hold a JSON array");

    std::vector<NamedConfig> out;
    for (const auto& item : doc) {
        if (!item.is_object()) throw std::runtime_error("each config must be an object");
        NamedConfig nc;
        for (const auto& [key, value] : item.items()) {
            if (key == "name") nc.name = value.get<std::string>();
            else if (key == "strategy") nc.config.strategy = strategy_from_name(value.get<std::string>());
            else if (key == "kick") nc.config.kick = kick_from_name(value.get<std::string>());
            else if (key == "alpha_k") nc.config.alpha_k = value.get<int>();
            else if (key == "alpha_use_subgradient") nc.config.alpha_use_subgradient = value.get<bool>();
            else if (key == "union_m") nc.config.union_m = value.get<int>();
            else if (key == "pop_sample_fraction") nc.config.pop.sample_fraction = value.get<double>();
            else if (key == "pop_r") nc.config.pop.r = value.get<int>();
            else if (key == "pop_rebuild_rounds") nc.config.pop.rebuild_rounds = value.get<int>();
            else if (key == "pop_runs") nc.config.pop.runs_for_candidates = value.get<int>();
            else if (key == "trials") nc.config.trials = value.get<int>();
            else if (key == "runs") nc.config.runs = value.get<int>();
            else if (key == "budget_seconds") nc.config.budget_seconds = value.get<double>();
            else if (key == "include_candidate_time") nc.config.include_candidate_time = value.get<bool>();
            else if (key == "target_length") nc.config.target_length = value.get<double>();
            else if (key == "three_opt_breadth") nc.config.three_opt_breadth = value.get<int>();
            else throw std::runtime_error("unknown config key: " + key);
        }
        if (nc.name.empty()) throw std::runtime_error("every config needs a name");
        out.push_back(std::move(nc));
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (out[i].name == out[j].name)
                throw std::runtime_error("duplicate config name: " + out[i].name);
    return out;
}

std::string configs_to_json(const std::vector<NamedConfig>& configs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& nc : configs) {
        nlohmann::json o;
        o["name"] = nc.name;
        o["strategy"] = strategy_name(nc.config.strategy);
        o["kick"] = kick_name(nc.config.kick);
        o["alpha_k"] = nc.config.alpha_k;
        o["alpha_use_subgradient"] = nc.config.alpha_use_subgradient;
        o["union_m"] = nc.config.union_m;
        o["pop_sample_fraction"] = nc.config.pop.sample_fraction;
        o["pop_r"] = nc.config.pop.r;
        o["pop_rebuild_rounds"] = nc.config.pop.rebuild_rounds;
        o["pop_runs"] = nc.config.pop.runs_for_candidates;
        o["trials"] = nc.config.trials;
        o["runs"] = nc.config.runs;
        o["budget_seconds"] = nc.config.budget_seconds;
        o["include_candidate_time"] = nc.config.include_candidate_time;
        if (nc.config.target_length) o["target_length"] = *nc.config.target_length;
        o["three_opt_breadth"] = nc.config.three_opt_breadth;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

double par10(const std::vector<RunRecord>& records, double cutoff_seconds) {
    if (records.empty()) throw std::invalid_argument("par10 needs at least one record");
    if (cutoff_seconds <= 0.0) throw std::invalid_argument("cutoff must be positive");
    double total = 0.0;
    for (const RunRecord& r : records)
        total += r.solved ? r.elapsed_seconds : 10.0 * cutoff_seconds;
    return total / static_cast<double>(records.size());
}

BenchReport run_matrix(const std::vector<BenchEntry>& entries,
                       const std::vector<NamedConfig>& configs, int folds,
                       double cutoff_seconds, int workers, bool verbose) {
    if (entries.empty()) throw std::invalid_argument("no instances to run");
    if (configs.empty()) throw std::invalid_argument("no configs to run");
    if (folds < 1 || folds > 10) throw std::invalid_argument("folds must be in [1, 10]");
    if (cutoff_seconds <= 0.0) throw std::invalid_argument("cutoff must be positive");
    if (workers < 1) throw std::invalid_argument("workers must be positive");

    BenchReport report;
    report.cutoff_seconds = cutoff_seconds;

    struct Loaded {
        const BenchEntry* entry;
        Instance inst;
        std::optional<Tour> optimal;
    };
    std::vector<Loaded> loaded;
    for (const BenchEntry& e : entries) {
        try {
            Instance inst = parse_tsplib_file(e.path);
            std::optional<Tour> optimal;
            if (!e.opt_tour_path.empty())
                optimal = parse_tour_file_path(e.opt_tour_path, inst);
            report.group_of[inst.name()] = e.group;
            report.size_of[inst.name()] = inst.n();
            loaded.push_back({&e, std::move(inst), std::move(optimal)});
        } catch (const std::exception& ex) {
            report.load_errors.push_back(e.path + ": " + ex.what());
        }
    }

    struct Task {
        const Loaded* l;
        const NamedConfig* nc;
        int fold;
    };
    std::vector<Task> tasks;
    for (const Loaded& l : loaded)
        for (const NamedConfig& nc : configs)
            for (int f = 1; f <= folds; ++f) tasks.push_back({&l, &nc, f});

    std::vector<RunRecord> slots(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex io;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            SolverConfig cfg = t.nc->config;
            cfg.budget_seconds = cutoff_seconds;
            if (!cfg.target_length) {
                if (t.l->optimal)
                    cfg.target_length = t.l->optimal->length;
                else if (t.l->inst.optimum_length())
                    cfg.target_length = t.l->inst.optimum_length();
            }
            RunRecord rec = solve_record(t.l->inst, cfg, t.fold, t.l->optimal);
            rec.config = t.nc->name;
            slots[i] = std::move(rec);
            if (verbose) {
                std::lock_guard<std::mutex> lock(io);
                std::fprintf(stderr, "[bench] %s %s fold=%d %s %.3fs\n",
                             slots[i].instance.c_str(), slots[i].config.c_str(),
                             t.fold, slots[i].solved ? "solved" : "unsolved",
                             slots[i].elapsed_seconds);
            }
        }
    };

    const int nthreads = std::min<std::size_t>(workers, tasks.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    report.records = std::move(slots);
    std::sort(report.records.begin(), report.records.end(),
              [](const RunRecord& a, const RunRecord& b) {
                  if (a.instance != b.instance) return a.instance < b.instance;
                  if (a.config != b.config) return a.config < b.config;
                  return a.fold < b.fold;
              });
    return report;
}

void write_records_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << run_record_csv_header() << "\n";
    for (const RunRecord& r : records) out << run_record_csv_row(r) << "\n";
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty records file");
    ++lineno;
    if (trim(line) != run_record_csv_header())
        throw ParseError(1, "unexpected records header");

    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(trim(line), ',');
        if (f.size() != 10) throw ParseError(lineno, "expected 10 fields");
        try {
            RunRecord r;
            r.instance = f[0];
            r.config = f[1];
            r.fold = std::stoi(f[2]);
            r.seed = std::stoull(f[3]);
            r.solved = std::stoi(f[4]) != 0;
            r.elapsed_seconds = std::stod(f[5]);
            r.best_length = std::stod(f[6]);
            r.trials_executed = std::stoull(f[7]);
            r.restarts_used = std::stoi(f[8]);
            r.missing_edges_at_start = std::stoi(f[9]);
            records.push_back(std::move(r));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(lineno, "malformed record row");
        }
    }
    return records;
}

namespace {

struct Key {
    std::string instance, config;
    bool operator<(const Key& o) const {
        if (instance != o.instance) return instance < o.instance;
        return config < o.config;
    }
};

std::map<Key, std::vector<RunRecord>> by_instance_config(const BenchReport& report) {
    std::map<Key, std::vector<RunRecord>> groups;
    for (const RunRecord& r : report.records)
        groups[{r.instance, r.config}].push_back(r);
    return groups;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// scatter rows sorted by (group, size, instance); missing count taken from the
// x config's first fold
struct ScatterRow {
    std::string group;
    int size;
    std::string instance;
    double x, y;
    int missing;
};

std::vector<ScatterRow> scatter_rows(const BenchReport& report, const std::string& config_x,
                                     const std::string& config_y, double cutoff_seconds) {
    auto groups = by_instance_config(report);
    std::vector<ScatterRow> rows;
    for (const auto& [inst, grp] : report.group_of) {
        const auto x = groups.find({inst, config_x});
        const auto y = groups.find({inst, config_y});
        if (x == groups.end() || y == groups.end())
            throw std::invalid_argument("scatter config missing for instance " + inst);
        ScatterRow row;
        row.group = grp;
        row.size = report.size_of.at(inst);
        row.instance = inst;
        row.x = par10(x->second, cutoff_seconds);
        row.y = par10(y->second, cutoff_seconds);
        row.missing = x->second.front().missing_edges_at_start;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const ScatterRow& a, const ScatterRow& b) {
        if (a.group != b.group) return a.group < b.group;
        if (a.size != b.size) return a.size < b.size;
        return a.instance < b.instance;
    });
    return rows;
}

} // namespace

void export_scatter(const std::string& path, const BenchReport& report,
                    const std::string& config_x, const std::string& config_y,
                    double cutoff_seconds) {
    const auto rows = scatter_rows(report, config_x, config_y, cutoff_seconds);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "instance,group,par10_x,par10_y,missing_edges\n";
    for (const auto& r : rows)
        out << r.instance << ',' << r.group << ',' << fmt(r.x) << ',' << fmt(r.y) << ','
            << r.missing << "\n";
}

void export_missing_histogram(const std::string& path, const BenchReport& report) {
    // one sample per (instance, config): the restart-0 missing count
    std::map<std::pair<std::string, int>, std::map<int, int>> buckets;
    std::vector<std::string> skipped;
    std::set<std::pair<std::string, std::string>> seen;
    for (const RunRecord& r : report.records) {
        if (!seen.insert({r.instance, r.config}).second) continue;
        const auto grp = report.group_of.find(r.instance);
        const std::string group = grp == report.group_of.end() ? "?" : grp->second;
        const auto sz = report.size_of.find(r.instance);
        const int size = sz == report.size_of.end() ? 0 : sz->second;
        if (r.missing_edges_at_start < 0) {
            skipped.push_back(r.instance + "/" + r.config);
            continue;
        }
        ++buckets[{group, size}][r.missing_edges_at_start];
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "group,size,missing_count,share\n";
    for (const std::string& s : skipped) out << "# skipped " << s << ": no optimum\n";
    for (const auto& [key, hist] : buckets) {
        int total = 0;
        for (const auto& kv : hist) total += kv.second;
        for (const auto& [missing, cnt] : hist)
            out << key.first << ',' << key.second << ',' << missing << ','
                << fmt(static_cast<double>(cnt) / total) << "\n";
    }
}

void export_summary(const std::string& path, const BenchReport& report,
                    double cutoff_seconds) {
    if (report.records.empty()) throw std::invalid_argument("empty report");
    auto groups = by_instance_config(report);

    struct Block {
        double par10_sum = 0.0;
        int instances = 0;
        int timeouts = 0;
    };
    std::map<std::tuple<std::string, int, std::string>, Block> blocks;
    for (const auto& [key, recs] : groups) {
        const std::string group = report.group_of.count(key.instance)
                                      ? report.group_of.at(key.instance)
                                      : "?";
        const int size =
            report.size_of.count(key.instance) ? report.size_of.at(key.instance) : 0;
        Block& b = blocks[{group, size, key.config}];
        b.par10_sum += par10(recs, cutoff_seconds);
        b.instances += 1;
        for (const RunRecord& r : recs) b.timeouts += r.solved ? 0 : 1;
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "group,size,config,mean_par10,timeout_count\n";
    for (const auto& [key, b] : blocks)
        out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key)
            << ',' << fmt(b.par10_sum / b.instances) << ',' << b.timeouts << "\n";
}

void export_scatter_svg(const std::string& path, const BenchReport& report,
                        const std::string& config_x, const std::string& config_y,
                        double cutoff_seconds) {
    const auto rows = scatter_rows(report, config_x, config_y, cutoff_seconds);
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rows) {
        lo = std::min({lo, r.x, r.y});
        hi = std::max({hi, r.x, r.y});
    }
    if (rows.empty() || lo <= 0.0) {
        lo = 1e-3;
        hi = std::max(hi, 1.0);
    }
    if (hi <= lo) hi = lo * 10.0;
    const double llo = std::log10(lo), lhi = std::log10(hi);
    const double W = 640, H = 640, M = 60;
    const auto sx = [&](double v) {
        return M + (std::log10(v) - llo) / (lhi - llo) * (W - 2 * M);
    };
    const auto sy = [&](double v) {
        return H - M - (std::log10(v) - llo) / (lhi - llo) * (H - 2 * M);
    };
    const auto color = [](int missing) {
        if (missing < 0) return "#888888";
        if (missing == 0) return "#2a9d2a";
        if (missing <= 2) return "#e0a000";
        return "#d03030";
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << sx(lo) << "\" y1=\"" << sy(lo) << "\" x2=\"" << sx(hi)
        << "\" y2=\"" << sy(hi) << "\" stroke=\"#999\" stroke-dasharray=\"6,4\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 16
        << "\" text-anchor=\"middle\" font-size=\"14\">par10 " << config_x
        << " (log)</text>\n";
    out << "<text x=\"18\" y=\"" << H / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << H / 2 << ")\">par10 " << config_y << " (log)</text>\n";
    for (const auto& r : rows)
        out << "<circle cx=\"" << sx(r.x) << "\" cy=\"" << sy(r.y)
            << "\" r=\"5\" fill=\"" << color(r.missing)
            << "\" fill-opacity=\"0.75\"><title>" << r.instance << "</title></circle>\n";
    out << "</svg>\n";
}

} // namespace lktsp
