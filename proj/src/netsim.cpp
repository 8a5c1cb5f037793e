#include "citefit/netsim.hpp"

#include "citefit/errors.hpp"
#include "citefit/inference.hpp"

#include <algorithm>
#include <cmath>

namespace citefit::netsim {

FitnessDist parse_fitness_dist(const std::string& name) {
    if (name == "constant") return FitnessDist::constant;
    if (name == "uniform") return FitnessDist::uniform;
    if (name == "custom") return FitnessDist::custom;
    throw config_error("unknown fitness distribution \"" + name +
                       "\" (expected constant, uniform or custom)");
}

Attachment parse_attachment(const std::string& name) {
    if (name == "degree") return Attachment::degree;
    if (name == "degree_times_fitness") return Attachment::degree_times_fitness;
    throw config_error("unknown attachment rule \"" + name +
                       "\" (expected degree or degree_times_fitness)");
}

std::string to_string(FitnessDist dist) {
    switch (dist) {
    case FitnessDist::constant: return "constant";
    case FitnessDist::uniform: return "uniform";
    case FitnessDist::custom: return "custom";
    }
    return "constant";
}

std::string to_string(Attachment attachment) {
    return attachment == Attachment::degree ? "degree" : "degree_times_fitness";
}

namespace detail {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

size_t pick_from_prefix(const std::vector<double>& prefix, std::mt19937_64& rng) {
    const double total = prefix.back();
    if (total <= 0.0)
        return static_cast<size_t>(uniform01(rng) * static_cast<double>(prefix.size()));
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
    if (it == prefix.end()) --it; // u == total cannot happen, but stay in range
    return static_cast<size_t>(it - prefix.begin());
}

std::vector<double> prefix_sums(const std::vector<double>& weights) {
    if (weights.empty()) throw domain_error("weighted draw over an empty set");
    std::vector<double> prefix(weights.size());
    double running = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw domain_error("negative attachment weight");
        running += weights[i];
        prefix[i] = running;
    }
    return prefix;
}

} // namespace

size_t weighted_draw(const std::vector<double>& weights, std::mt19937_64& rng) {
    return pick_from_prefix(prefix_sums(weights), rng);
}

std::vector<size_t> draw_targets(const std::vector<double>& weights, size_t m,
                                 std::mt19937_64& rng) {
    auto prefix = prefix_sums(weights);
    size_t available = 0;
    if (prefix.back() > 0.0) {
        for (double w : weights) available += w > 0.0;
    } else {
        available = weights.size();
    }
    if (m > available)
        throw domain_error("cannot draw " + std::to_string(m) + " distinct targets from " +
                           std::to_string(available) + " available");
    std::vector<size_t> targets;
    targets.reserve(m);
    while (targets.size() < m) {
        size_t pick = pick_from_prefix(prefix, rng);
        if (std::find(targets.begin(), targets.end(), pick) == targets.end())
            targets.push_back(pick);
    }
    return targets;
}

} // namespace detail

SimNetwork grow(const SimConfig& config) {
    if (config.m < 1) throw config_error("simulation needs m >= 1");
    if (config.n_final <= config.m)
        throw config_error("simulation needs more nodes than m (N=" +
                           std::to_string(config.n_final) + ", m=" + std::to_string(config.m) +
                           ")");
    if (config.fitness == FitnessDist::custom && config.custom_fitness.size() < config.n_final)
        throw config_error("custom fitness list holds " +
                           std::to_string(config.custom_fitness.size()) + " values, need " +
                           std::to_string(config.n_final));

    std::mt19937_64 rng(config.seed);
    auto fitness_of = [&](size_t i) {
        switch (config.fitness) {
        case FitnessDist::constant: return 1.0;
        case FitnessDist::uniform: return detail::uniform01(rng);
        case FitnessDist::custom: return config.custom_fitness[i];
        }
        return 1.0;
    };

    SimNetwork net;
    net.config = config;
    net.nodes.reserve(config.n_final);
    const size_t m = config.m;

    for (size_t i = 0; i < m; ++i) {
        SimNode node;
        node.t_i = i + 1;
        node.eta = fitness_of(i);
        node.degree = static_cast<long>(m - 1);
        node.in_degree = static_cast<long>(m - 1 - i);
        net.nodes.push_back(node);
    }
    for (size_t j = 1; j < m; ++j)
        for (size_t i = 0; i < j; ++i) net.edges.emplace_back(j, i);

    std::vector<size_t> snaps = config.snapshot_steps;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    auto want_snapshot = [&](size_t step) {
        return std::binary_search(snaps.begin(), snaps.end(), step);
    };
    auto take_snapshot = [&](size_t step) {
        Snapshot s;
        s.step = step;
        s.degrees.reserve(net.nodes.size());
        for (const auto& node : net.nodes) s.degrees.push_back(node.degree);
        net.snapshots.push_back(std::move(s));
    };
    if (want_snapshot(m)) take_snapshot(m);

    std::vector<double> weights;
    for (size_t idx = m; idx < config.n_final; ++idx) {
        SimNode node;
        node.t_i = idx + 1;
        node.eta = fitness_of(idx);
        net.nodes.push_back(node);

        weights.resize(idx);
        for (size_t j = 0; j < idx; ++j) {
            double w = static_cast<double>(net.nodes[j].degree);
            if (config.attachment == Attachment::degree_times_fitness) w *= net.nodes[j].eta;
            weights[j] = w;
        }
        for (size_t target : detail::draw_targets(weights, m, rng)) {
            net.edges.emplace_back(idx, target);
            ++net.nodes[target].degree;
            ++net.nodes[target].in_degree;
            ++net.nodes[idx].degree;
        }
        if (want_snapshot(idx + 1)) take_snapshot(idx + 1);
    }
    if (net.snapshots.empty() || net.snapshots.back().step != config.n_final)
        take_snapshot(config.n_final);
    return net;
}

double estimate_beta(const SimNetwork& network) {
    if (network.snapshots.empty())
        throw domain_error("beta estimation needs at least one degree snapshot");
    const Snapshot& snap = network.snapshots.back();
    if (snap.degrees.size() > network.nodes.size())
        throw domain_error("snapshot covers more nodes than the network holds");
    inference::DesignMatrix design;
    design.column_names = {"intercept", "ln_age_ratio"};
    design.columns.assign(2, {});
    design.response_name = "ln_k";
    const double t_final = static_cast<double>(snap.step);
    for (size_t i = 0; i < snap.degrees.size(); ++i) {
        if (snap.degrees[i] <= 0) continue;
        design.columns[0].push_back(1.0);
        design.columns[1].push_back(std::log(t_final / static_cast<double>(network.nodes[i].t_i)));
        design.response.push_back(std::log(static_cast<double>(snap.degrees[i])));
    }
    if (design.n_rows() < 3)
        throw domain_error("beta estimation needs at least 3 connected nodes, have " +
                           std::to_string(design.n_rows()));
    return inference::ols_fit(design).coefficients[1];
}

Corpus export_as_corpus(const SimNetwork& network, double years_per_step, int base_year) {
    if (years_per_step < 0.0) throw config_error("years_per_step must be nonnegative");
    std::vector<RawPaper> records;
    records.reserve(network.nodes.size());
    auto paper_id = [](const SimNode& node) { return "n" + std::to_string(node.t_i); };
    for (const auto& node : network.nodes) {
        RawPaper r;
        r.id = paper_id(node);
        r.year = base_year +
                 static_cast<int>(std::floor(static_cast<double>(node.t_i - 1) * years_per_step));
        r.venue = "simnet";
        r.raw_authors = {"scholar " + std::to_string(node.t_i)};
        records.push_back(std::move(r));
    }
    for (const auto& [from, to] : network.edges)
        records[from].references.push_back(paper_id(network.nodes[to]));
    return build_corpus(std::move(records)).first;
}

} // namespace citefit::netsim
