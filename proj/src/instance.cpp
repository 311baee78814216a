#include "lktsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lktsp/rng.hpp"

namespace lktsp {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Instance::Instance(std::string name, Metric metric,
                   std::vector<double> xs, std::vector<double> ys,
                   std::optional<double> optimum_length)
    : name_(std::move(name)),
      metric_(metric),
      xs_(std::move(xs)),
      ys_(std::move(ys)),
      optimum_length_(optimum_length) {
    if (xs_.size() != ys_.size()) throw std::invalid_argument("coordinate arrays differ in size");
    if (n() < 3) throw std::invalid_argument("instance needs at least 3 cities");
    for (int i = 0; i < n(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
            throw std::invalid_argument("non-finite coordinate at city " + std::to_string(i));
        }
    }
    if (optimum_length_ && *optimum_length_ < 0) {
        throw std::invalid_argument("negative optimum length");
    }
    if (n() <= kCacheMaxN) cache_cell_ = std::make_shared<Cache>();
}

const Instance::Cache* Instance::cache() const {
    if (!cache_cell_) return nullptr;
    Cache* c = cache_cell_.get();
    std::call_once(c->built, [this, c] {
        const int m = n();
        c->matrix.resize(static_cast<std::size_t>(m) * m);
        for (int i = 0; i < m; ++i) {
            kernels().dist_range(xs_.data(), ys_.data(), 0, m, xs_[i], ys_[i], metric_,
                                 c->matrix.data() + static_cast<std::size_t>(i) * m);
        }
    });
    return c;
}

void Instance::dist_row(int i, double* out) const {
    const double* row = cached_row(i);
    if (row) {
        std::copy(row, row + n(), out);
        return;
    }
    kernels().dist_range(xs_.data(), ys_.data(), 0, n(), xs_[i], ys_[i], metric_, out);
}

Instance make_instance(std::string name, Metric metric,
                       std::vector<double> xs, std::vector<double> ys,
                       std::optional<double> optimum_length) {
    return Instance(std::move(name), metric, std::move(xs), std::move(ys), optimum_length);
}

double distance(const Instance& inst, int i, int j) {
    if (i < 0 || j < 0 || i >= inst.n() || j >= inst.n()) {
        throw std::out_of_range("city index out of range");
    }
    return inst.dist(i, j);
}

bool is_permutation(const std::vector<int>& order, int n) {
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : order) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

double tour_length(const Instance& inst, const std::vector<int>& order) {
    if (!is_permutation(order, inst.n())) {
        throw std::invalid_argument("order is not a permutation of the instance's cities");
    }
    double sum = 0.0;
    const int n = inst.n();
    for (int k = 0; k < n; ++k) {
        sum += inst.dist(order[k], order[(k + 1) % n]);
    }
    return sum;
}

Tour make_tour(const Instance& inst, std::vector<int> order) {
    Tour t;
    t.length = tour_length(inst, order);
    t.order = std::move(order);
    return t;
}

namespace {

struct Line {
    int no;
    std::string text;
};

// splits "KEY : VALUE" / "KEY: VALUE" / bare "KEY"
bool split_keyword(const std::string& s, std::string& key, std::string& value) {
    auto colon = s.find(':');
    std::string head = (colon == std::string::npos) ? s : s.substr(0, colon);
    std::istringstream hs(head);
    if (!(hs >> key)) return false;
    std::string extra;
    if (hs >> extra) return false;  // multi-word head: a data line, not a keyword
    value = (colon == std::string::npos) ? "" : s.substr(colon + 1);
    auto b = value.find_first_not_of(" \t\r");
    auto e = value.find_last_not_of(" \t\r");
    value = (b == std::string::npos) ? "" : value.substr(b, e - b + 1);
    return true;
}

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(tok, &used);
        return used == tok.size();
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& tok, long& out) {
    try {
        std::size_t used = 0;
        out = std::stol(tok, &used);
        return used == tok.size();
    } catch (...) {
        return false;
    }
}

std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string s;
    int no = 0;
    while (std::getline(in, s)) {
        ++no;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        lines.push_back({no, s});
    }
    return lines;
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t") == std::string::npos;
}

} // namespace

Instance parse_tsplib(std::istream& in) {
    auto lines = read_lines(in);
    std::string name = "unnamed";
    std::optional<Metric> metric;
    std::optional<double> optimum;
    long dimension = -1;
    bool saw_type = false;
    std::size_t idx = 0;
    int coord_header_line = -1;

    for (; idx < lines.size(); ++idx) {
        const auto& [no, text] = lines[idx];
        if (blank(text)) continue;
        std::string key, value;
        if (!split_keyword(text, key, value)) {
            throw ParseError(no, "expected a keyword line before NODE_COORD_SECTION");
        }
        if (key == "NAME") {
            if (!value.empty()) name = value;
        } else if (key == "TYPE") {
            std::istringstream vs(value);
            std::string t;
            vs >> t;
            if (t != "TSP") throw ParseError(no, "unsupported TYPE '" + t + "' (only TSP)");
            saw_type = true;
        } else if (key == "COMMENT") {
            // ignored
        } else if (key == "DIMENSION") {
            if (!parse_int(value, dimension) || dimension < 1) {
                throw ParseError(no, "malformed DIMENSION value '" + value + "'");
            }
        } else if (key == "EDGE_WEIGHT_TYPE") {
            metric = metric_from_name(value);
            if (!metric) throw ParseError(no, "unsupported EDGE_WEIGHT_TYPE '" + value + "'");
        } else if (key == "OPTIMUM") {
            double v;
            if (!parse_double(value, v) || v < 0) {
                throw ParseError(no, "malformed OPTIMUM value '" + value + "'");
            }
            optimum = v;
        } else if (key == "NODE_COORD_SECTION") {
            coord_header_line = no;
            ++idx;
            break;
        } else if (key == "EOF") {
            throw ParseError(no, "EOF before NODE_COORD_SECTION");
        } else {
            throw ParseError(no, "unsupported keyword '" + key + "'");
        }
    }
    (void)saw_type;

    if (coord_header_line < 0) {
        throw ParseError(lines.empty() ? 1 : lines.back().no, "missing NODE_COORD_SECTION");
    }
    if (dimension < 0) throw ParseError(coord_header_line, "missing DIMENSION");
    if (dimension < 3) throw ParseError(coord_header_line, "DIMENSION must be at least 3");
    if (!metric) throw ParseError(coord_header_line, "missing EDGE_WEIGHT_TYPE");

    std::vector<double> xs(dimension), ys(dimension);
    std::vector<char> seen(dimension, 0);
    long filled = 0;
    for (; idx < lines.size(); ++idx) {
        const auto& [no, text] = lines[idx];
        if (blank(text)) continue;
        {
            std::string key, value;
            if (split_keyword(text, key, value) && (key == "EOF" || key == "DISPLAY_DATA_SECTION")) break;
        }
        std::istringstream ls(text);
        std::string tid, tx, ty, rest;
        if (!(ls >> tid >> tx >> ty)) throw ParseError(no, "malformed coordinate line");
        if (ls >> rest) throw ParseError(no, "trailing tokens on coordinate line");
        long id;
        double px, py;
        if (!parse_int(tid, id)) throw ParseError(no, "malformed city id '" + tid + "'");
        if (!parse_double(tx, px)) throw ParseError(no, "malformed x coordinate '" + tx + "'");
        if (!parse_double(ty, py)) throw ParseError(no, "malformed y coordinate '" + ty + "'");
        if (id < 1 || id > dimension) {
            throw ParseError(no, "city id " + std::to_string(id) + " out of range 1.." + std::to_string(dimension));
        }
        if (seen[id - 1]) throw ParseError(no, "duplicate city id " + std::to_string(id));
        seen[id - 1] = 1;
        xs[id - 1] = px;
        ys[id - 1] = py;
        ++filled;
    }
    if (filled != dimension) {
        throw ParseError(coord_header_line,
                         "DIMENSION is " + std::to_string(dimension) + " but " +
                         std::to_string(filled) + " coordinates were given");
    }
    return Instance(name, *metric, std::move(xs), std::move(ys), optimum);
}

Instance parse_tsplib_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_tsplib(in);
}

std::string write_tsplib(const Instance& inst) {
    std::ostringstream out;
    out << "NAME : " << inst.name() << "\n";
    out << "TYPE : TSP\n";
    out << "DIMENSION : " << inst.n() << "\n";
    out << "EDGE_WEIGHT_TYPE : " << metric_name(inst.metric()) << "\n";
    if (inst.optimum_length()) {
        out << "OPTIMUM : " << fmt_double(*inst.optimum_length()) << "\n";
    }
    out << "NODE_COORD_SECTION\n";
    for (int i = 0; i < inst.n(); ++i) {
        out << (i + 1) << " " << fmt_double(inst.x(i)) << " " << fmt_double(inst.y(i)) << "\n";
    }
    out << "EOF\n";
    return out.str();
}

Tour parse_tour_file(std::istream& in, const Instance& inst) {
    auto lines = read_lines(in);
    const int n = inst.n();
    std::size_t idx = 0;
    int section_line = -1;
    for (; idx < lines.size(); ++idx) {
        const auto& [no, text] = lines[idx];
        if (blank(text)) continue;
        std::string key, value;
        if (split_keyword(text, key, value)) {
            if (key == "TOUR_SECTION") {
                section_line = no;
                ++idx;
                break;
            }
            if (key == "NAME" || key == "TYPE" || key == "COMMENT" || key == "DIMENSION") continue;
            throw ParseError(no, "unsupported keyword '" + key + "' in tour file");
        }
        throw ParseError(no, "expected keyword line before TOUR_SECTION");
    }
    if (section_line < 0) {
        throw ParseError(lines.empty() ? 1 : lines.back().no, "missing TOUR_SECTION");
    }

    std::vector<int> order;
    std::vector<char> seen(n, 0);
    bool terminated = false;
    int last_line = section_line;
    for (; idx < lines.size() && !terminated; ++idx) {
        const auto& [no, text] = lines[idx];
        last_line = no;
        if (blank(text)) continue;
        std::istringstream ls(text);
        std::string tok;
        while (ls >> tok) {
            if (tok == "EOF") {
                throw ParseError(no, "EOF before -1 terminator");
            }
            long id;
            if (!parse_int(tok, id)) throw ParseError(no, "malformed tour entry '" + tok + "'");
            if (id == -1) {
                terminated = true;
                break;
            }
            if (id < 1 || id > n) {
                throw ParseError(no, "city id " + std::to_string(id) + " out of range 1.." + std::to_string(n));
            }
            if (seen[id - 1]) throw ParseError(no, "duplicate city id " + std::to_string(id));
            seen[id - 1] = 1;
            order.push_back(static_cast<int>(id - 1));
        }
    }
    if (!terminated) throw ParseError(last_line, "missing -1 terminator");
    if (static_cast<int>(order.size()) != n) {
        throw ParseError(last_line, "tour lists " + std::to_string(order.size()) +
                         " cities, instance has " + std::to_string(n));
    }
    return make_tour(inst, std::move(order));
}

Tour parse_tour_file_path(const std::string& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tour file: " + path);
    return parse_tour_file(in, inst);
}

std::string write_tour_file(const Instance& inst, const Tour& tour) {
    std::ostringstream out;
    out << "NAME : " << inst.name() << ".tour\n";
    out << "TYPE : TOUR\n";
    out << "COMMENT : length " << fmt_double(tour.length) << "\n";
    out << "DIMENSION : " << inst.n() << "\n";
    out << "TOUR_SECTION\n";
    for (int v : tour.order) out << (v + 1) << "\n";
    out << "-1\nEOF\n";
    return out.str();
}

Instance gen_random_uniform(int n, std::uint64_t seed, double box) {
    if (n < 3) throw std::invalid_argument("gen_random_uniform needs n >= 3");
    if (!(box > 0)) throw std::invalid_argument("box must be positive");
    Rng rng(seed);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rng.next_unit() * box;
        ys[i] = rng.next_unit() * box;
    }
    std::string name = "uniform-n" + std::to_string(n) + "-s" + std::to_string(seed);
    return Instance(name, Metric::EUC_2D_EXACT, std::move(xs), std::move(ys));
}

Instance gen_clustered(int n, int k_clusters, double spread, std::uint64_t seed) {
    if (k_clusters < 1) throw std::invalid_argument("gen_clustered needs k_clusters >= 1");
    if (n < k_clusters) throw std::invalid_argument("gen_clustered needs n >= k_clusters");
    if (n < 3) throw std::invalid_argument("gen_clustered needs n >= 3");
    if (spread < 0) throw std::invalid_argument("spread must be nonnegative");
    const double box = 1000.0;
    Rng rng(seed);
    std::vector<double> cx(k_clusters), cy(k_clusters);
    for (int c = 0; c < k_clusters; ++c) {
        cx[c] = rng.next_unit() * box;
        cy[c] = rng.next_unit() * box;
    }
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        int c = i % k_clusters;
        xs[i] = cx[c] + spread * rng.next_gaussian();
        ys[i] = cy[c] + spread * rng.next_gaussian();
    }
    std::string name = "clustered-n" + std::to_string(n) + "-k" + std::to_string(k_clusters) +
                       "-s" + std::to_string(seed);
    return Instance(name, Metric::EUC_2D_EXACT, std::move(xs), std::move(ys));
}

} // namespace lktsp
