#include "citefit/distributions.hpp"

#include "citefit/errors.hpp"
#include "citefit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace citefit::distributions {

SeriesKind parse_series_kind(const std::string& name) {
    if (name == "discrete") return SeriesKind::discrete;
    if (name == "cumulative") return SeriesKind::cumulative;
    throw config_error("unknown series kind \"" + name + "\" (expected discrete or cumulative)");
}

Binning parse_binning(const std::string& name) {
    if (name == "unit") return Binning::unit;
    if (name == "log") return Binning::log;
    throw config_error("unknown binning \"" + name + "\" (expected unit or log)");
}

std::string to_string(SeriesKind kind) {
    return kind == SeriesKind::discrete ? "discrete" : "cumulative";
}

std::string to_string(Binning binning) { return binning == Binning::unit ? "unit" : "log"; }

FrequencySeries distribution(const std::vector<double>& scores, SeriesKind kind, Binning binning) {
    if (scores.empty()) throw domain_error("distribution of an empty score list");
    FrequencySeries out;
    out.kind = kind;
    out.binning = binning;
    out.population = scores.size();

    std::map<double, size_t> tally;
    for (double s : scores) {
        if (!std::isfinite(s)) throw domain_error("non-finite score in distribution input");
        if (binning == Binning::unit) {
            ++tally[std::floor(s)];
        } else {
            if (s <= 0.0) {
                ++out.zero_count;
                continue;
            }
            ++tally[std::exp2(std::floor(std::log2(s)))];
        }
    }

    out.points.reserve(tally.size());
    for (const auto& [x, count] : tally)
        out.points.push_back({x, static_cast<double>(count)});
    if (kind == SeriesKind::cumulative) {
        double running = 0.0;
        for (size_t i = out.points.size(); i-- > 0;) {
            running += out.points[i].y;
            out.points[i].y = running;
        }
    }
    return out;
}

TailFamily parse_tail_family(const std::string& name) {
    if (name == "power_law") return TailFamily::power_law;
    if (name == "exponential") return TailFamily::exponential;
    throw config_error("unknown tail family \"" + name +
                       "\" (expected power_law or exponential)");
}

std::string to_string(TailFamily family) {
    return family == TailFamily::power_law ? "power_law" : "exponential";
}

TailFit tail_fit(const FrequencySeries& series, TailFamily family) {
    inference::DesignMatrix design;
    design.column_names = {"intercept", family == TailFamily::power_law ? "ln_x" : "x"};
    design.columns.assign(2, {});
    design.response_name = "ln_y";
    for (const auto& p : series.points) {
        if (p.y <= 0.0) continue;
        if (family == TailFamily::power_law && p.x <= 0.0) continue;
        design.columns[0].push_back(1.0);
        design.columns[1].push_back(family == TailFamily::power_law ? std::log(p.x) : p.x);
        design.response.push_back(std::log(p.y));
    }
    if (design.n_rows() < 3)
        throw domain_error("tail fit needs at least 3 usable points, have " +
                           std::to_string(design.n_rows()));
    auto fit = inference::ols_fit(design);
    TailFit out;
    out.family = family;
    out.intercept = fit.coefficients[0];
    out.slope = fit.coefficients[1];
    out.r_squared = fit.r_squared;
    out.points_used = design.n_rows();
    return out;
}

Normalize parse_normalize(const std::string& name) {
    if (name == "none") return Normalize::none;
    if (name == "kt" || name == "k_t") return Normalize::k_t;
    if (name == "ktf" || name == "k_tf") return Normalize::k_tf;
    throw config_error("unknown normalization \"" + name + "\" (expected none, kt or ktf)");
}

std::string to_string(Normalize normalize) {
    switch (normalize) {
    case Normalize::none: return "none";
    case Normalize::k_t: return "kt";
    case Normalize::k_tf: return "ktf";
    }
    return "none";
}

TrendSeries trend_from_pairs(const std::vector<std::pair<int, double>>& year_scores) {
    TrendSeries out;
    if (year_scores.empty()) return out;
    int lo = year_scores.front().first, hi = lo;
    for (const auto& [year, score] : year_scores) {
        lo = std::min(lo, year);
        hi = std::max(hi, year);
    }
    out.years.resize(static_cast<size_t>(hi - lo + 1));
    for (size_t i = 0; i < out.years.size(); ++i) out.years[i].year = lo + static_cast<int>(i);
    for (const auto& [year, score] : year_scores)
        out.years[static_cast<size_t>(year - lo)].scores.push_back(score);
    for (auto& row : out.years) {
        if (row.scores.empty()) continue;
        double sum = 0.0;
        for (double s : row.scores) sum += s;
        row.mean = sum / static_cast<double>(row.scores.size());
    }
    return out;
}

TrendSeries trend(const Corpus& corpus, Normalize normalize,
                  const models::FittedFitnessModel* model) {
    std::vector<std::pair<int, double>> pairs;
    pairs.reserve(corpus.papers().size());
    if (normalize == Normalize::none) {
        for (const auto& p : corpus.papers())
            pairs.emplace_back(p.year, static_cast<double>(p.k));
    } else {
        if (!model) throw config_error("normalized trends need a fitted model");
        auto table = models::score_table(*model, corpus);
        for (const auto& row : table.rows) {
            auto idx = corpus.paper_index(row.key);
            if (!idx) continue; // scholar-model tables have no year axis
            pairs.emplace_back(corpus.papers()[*idx].year,
                               normalize == Normalize::k_t ? row.k_t : row.k_tf);
        }
    }
    return trend_from_pairs(pairs);
}

AuthorshipReport authorship_analysis(const Corpus& corpus,
                                     const models::FittedFitnessModel& model) {
    auto table = models::score_table(model, corpus);
    std::map<size_t, AuthorGroup> groups;
    for (const auto& row : table.rows) {
        auto idx = corpus.paper_index(row.key);
        if (!idx) continue;
        size_t authors = corpus.papers()[*idx].authors.size();
        AuthorGroup& g = groups[authors];
        g.authors = authors;
        ++g.n_papers;
        g.mean_k += row.k;
        g.mean_k_t += row.k_t;
        g.mean_k_tf += row.k_tf;
    }
    AuthorshipReport out;
    for (auto& [authors, g] : groups) {
        g.mean_k /= static_cast<double>(g.n_papers);
        g.mean_k_t /= static_cast<double>(g.n_papers);
        g.mean_k_tf /= static_cast<double>(g.n_papers);
        out.groups.push_back(g);
    }
    std::vector<std::pair<int, double>> team;
    team.reserve(corpus.papers().size());
    for (const auto& p : corpus.papers())
        team.emplace_back(p.year, static_cast<double>(p.authors.size()));
    out.team_size = trend_from_pairs(team);
    return out;
}

} // namespace citefit::distributions
