#ifndef CITEFIT_NETSIM_HPP
#define CITEFIT_NETSIM_HPP

#include "citefit/corpus.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace citefit::netsim {

enum class FitnessDist { constant, uniform, custom };
enum class Attachment { degree, degree_times_fitness };

FitnessDist parse_fitness_dist(const std::string& name);
Attachment parse_attachment(const std::string& name);
std::string to_string(FitnessDist dist);
std::string to_string(Attachment attachment);

struct SimConfig {
    size_t n_final = 1000; // N; must exceed m
    size_t m = 3;          // edges per new node
    FitnessDist fitness = FitnessDist::constant;
    std::vector<double> custom_fitness; // per node, required size >= N when custom
    Attachment attachment = Attachment::degree;
    uint64_t seed = 1;
    std::vector<size_t> snapshot_steps; // extra degree snapshots; the final step is always kept
};

struct SimNode {
    size_t t_i = 0;     // entry step, 1-based (seed nodes occupy 1..m)
    double eta = 1.0;   // fitness
    long degree = 0;    // total degree, seed edges included
    long in_degree = 0; // citations received
};

struct Snapshot {
    size_t step = 0;
    std::vector<long> degrees; // one entry per node alive at `step`
};

// Growth record. The seed is a complete graph on m nodes (edges oriented
// later->earlier); each growth step adds one node with m distinct targets.
// Degree bookkeeping: sum of degrees == 2*m*(N - m) + m*(m - 1).
struct SimNetwork {
    SimConfig config;
    std::vector<SimNode> nodes;
    std::vector<std::pair<size_t, size_t>> edges; // (new, existing)
    std::vector<Snapshot> snapshots;              // ascending step; last is the final state
};

// Preferential-attachment growth, fully reproducible from config.seed.
// Targets are drawn with probability proportional to degree (or
// eta*degree); an all-zero weight vector (the m=1 seed) falls back to a
// uniform draw.
SimNetwork grow(const SimConfig& config);

// Slope of ln k_i on ln(t_final/t_i) over nodes with k_i > 0 in the last
// snapshot. Errors when no snapshot is present or fewer than 3 nodes
// qualify.
double estimate_beta(const SimNetwork& network);

// Synthetic corpus: node -> paper "n<t_i>" with one synthetic author, a
// single shared venue, year = base_year + floor((t_i - 1) * years_per_step),
// and the node's outgoing edges as references.
Corpus export_as_corpus(const SimNetwork& network, double years_per_step,
                        int base_year = 1970);

namespace detail {

// 53-bit uniform in [0,1); bit-identical across platforms.
double uniform01(std::mt19937_64& rng);

// Index draw proportional to weights; all-zero weights fall back to a
// uniform draw. Weights must be nonnegative.
size_t weighted_draw(const std::vector<double>& weights, std::mt19937_64& rng);

// m distinct indices via rejection on weighted_draw; m must not exceed
// the number of positive-probability outcomes available.
std::vector<size_t> draw_targets(const std::vector<double>& weights, size_t m,
                                 std::mt19937_64& rng);

} // namespace detail

} // namespace citefit::netsim

#endif
