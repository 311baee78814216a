#pragma once

#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lktsp/kernels.hpp"
#include "lktsp/types.hpp"

namespace lktsp {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

class Instance {
public:
    Instance(std::string name, Metric metric,
             std::vector<double> xs, std::vector<double> ys,
             std::optional<double> optimum_length = std::nullopt);

    const std::string& name() const { return name_; }
    Metric metric() const { return metric_; }
    int n() const { return static_cast<int>(xs_.size()); }
    double x(int i) const { return xs_[i]; }
    double y(int i) const { return ys_[i]; }
    const double* xs() const { return xs_.data(); }
    const double* ys() const { return ys_.data(); }
    std::optional<double> optimum_length() const { return optimum_length_; }
    void set_optimum_length(std::optional<double> v) { optimum_length_ = v; }

    double dist(int i, int j) const {
        const double* row = cached_row(i);
        if (row) return row[j];
        return point_dist(xs_[i], ys_[i], xs_[j], ys_[j], metric_);
    }

    // full distance row when the cache is active (n <= cache threshold),
    // nullptr otherwise
    const double* cached_row(int i) const {
        const Cache* c = cache();
        return c ? c->matrix.data() + static_cast<std::size_t>(i) * n() : nullptr;
    }

    // distances from city i to cities [0, n); writes through the kernel lane
    void dist_row(int i, double* out) const;

    static constexpr int kCacheMaxN = 4096;

private:
    struct Cache {
        std::once_flag built;
        std::vector<double> matrix;
    };
    const Cache* cache() const;

    std::string name_;
    Metric metric_;
    std::vector<double> xs_, ys_;
    std::optional<double> optimum_length_;
    std::shared_ptr<Cache> cache_cell_;
};

Instance make_instance(std::string name, Metric metric,
                       std::vector<double> xs, std::vector<double> ys,
                       std::optional<double> optimum_length = std::nullopt);

double distance(const Instance& inst, int i, int j);
double tour_length(const Instance& inst, const std::vector<int>& order);
bool is_permutation(const std::vector<int>& order, int n);
Tour make_tour(const Instance& inst, std::vector<int> order);

Instance parse_tsplib(std::istream& in);
Instance parse_tsplib_file(const std::string& path);
std::string write_tsplib(const Instance& inst);

Tour parse_tour_file(std::istream& in, const Instance& inst);
Tour parse_tour_file_path(const std::string& path, const Instance& inst);
std::string write_tour_file(const Instance& inst, const Tour& tour);

Instance gen_random_uniform(int n, std::uint64_t seed, double box);
Instance gen_clustered(int n, int k_clusters, double spread, std::uint64_t seed);

} // namespace lktsp
