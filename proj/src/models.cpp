#include "citefit/models.hpp"

#include "citefit/errors.hpp"
#include "citefit/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace citefit::models {

namespace {

constexpr size_t kMinRows = 30;

std::string short_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// phi factor label under a given shift: "(phi_a+1)" or "phi_a".
std::string shifted_name(const std::string& base, double shift) {
    if (shift == 0.0) return base;
    return "(" + base + "+" + short_num(shift) + ")";
}

void push_row(DesignBuild& build, const std::string& key, double response,
              const std::vector<double>& predictors) {
    bool ok = std::isfinite(response);
    for (double v : predictors) ok = ok && std::isfinite(v);
    if (!ok) {
        ++build.rows_dropped;
        return;
    }
    build.keys.push_back(key);
    build.design.response.push_back(response);
    for (size_t j = 0; j < predictors.size(); ++j)
        build.design.columns[j].push_back(predictors[j]);
}

} // namespace

ModelKind parse_model_kind(const std::string& name) {
    if (name == "paper") return ModelKind::paper;
    if (name == "scholar") return ModelKind::scholar;
    throw config_error("unknown model kind \"" + name + "\" (expected paper or scholar)");
}

std::string to_string(ModelKind kind) {
    return kind == ModelKind::paper ? "paper" : "scholar";
}

DesignBuild build_paper_design(const std::vector<metrics::PaperFitnessVars>& vars,
                               const metrics::Conventions& conventions) {
    DesignBuild build;
    build.design.column_names = {"intercept", "ln_phi_a", "ln_phi_v", "ln_phi_r", "ln_tau"};
    build.design.columns.assign(5, {});
    build.design.response_name = "ln_k";
    const double s = conventions.zero_shift;
    for (const auto& v : vars) {
        push_row(build, v.paper_id, std::log(v.k + s),
                 {1.0, std::log(v.phi_a + s), std::log(v.phi_v + s), std::log(v.phi_r + s),
                  std::log(v.tau)});
    }
    return build;
}

DesignBuild build_scholar_design(const std::vector<metrics::ScholarFitnessVars>& vars,
                                 const metrics::Conventions& conventions) {
    DesignBuild build;
    build.design.column_names = {"intercept", "ln_phi_a", "ln_phi_v",
                                 "ln_phi_r", "ln_tau",   "ln_rho"};
    build.design.columns.assign(6, {});
    build.design.response_name = "ln_k_s";
    const double s = conventions.zero_shift;
    for (const auto& v : vars) {
        push_row(build, v.scholar_id, std::log(v.k_s + s),
                 {1.0, std::log(v.phi_a_bar), std::log(v.phi_v_bar), std::log(v.phi_r_bar),
                  std::log(v.tau_bar), std::log(static_cast<double>(v.rho))});
    }
    return build;
}

namespace {

FittedFitnessModel fit_from_build(ModelKind kind, DesignBuild build,
                                  const metrics::Conventions& conventions) {
    if (build.design.n_rows() < kMinRows)
        throw domain_error("need at least " + std::to_string(kMinRows) + " usable rows, have " +
                           std::to_string(build.design.n_rows()));
    FittedFitnessModel model;
    model.kind = kind;
    model.conventions = conventions;
    model.rows_used = build.design.n_rows();
    model.rows_dropped = build.rows_dropped;
    model.fit = inference::ols_fit(build.design);
    return model;
}

} // namespace

FittedFitnessModel fit_paper_model(const Corpus& corpus, const metrics::Conventions& conventions) {
    return fit_paper_model(metrics::paper_vars(corpus, conventions), conventions);
}

FittedFitnessModel fit_scholar_model(const Corpus& corpus,
                                     const metrics::Conventions& conventions) {
    auto pvars = metrics::paper_vars(corpus, conventions);
    return fit_scholar_model(metrics::scholar_vars(corpus, pvars, conventions), conventions);
}

FittedFitnessModel fit_paper_model(const std::vector<metrics::PaperFitnessVars>& vars,
                                   const metrics::Conventions& conventions) {
    return fit_from_build(ModelKind::paper, build_paper_design(vars, conventions), conventions);
}

FittedFitnessModel fit_scholar_model(const std::vector<metrics::ScholarFitnessVars>& vars,
                                     const metrics::Conventions& conventions) {
    return fit_from_build(ModelKind::scholar, build_scholar_design(vars, conventions),
                          conventions);
}

std::string FittedFitnessModel::multiplicative_form() const {
    const double s = conventions.zero_shift;
    const bool scholar = kind == ModelKind::scholar;
    std::string out = scholar ? "k_s" : "k";
    out += " = " + short_num(std::exp(fit.coefficient("intercept")));
    auto factor = [&](const std::string& column, const std::string& label) {
        out += " * " + label + "^" + short_num(fit.coefficient(column));
    };
    const std::string suffix = scholar ? "_bar" : "";
    // Scholar phi means already absorb the shift, so their labels stay bare.
    factor("ln_phi_a", scholar ? "phi_a_bar" : shifted_name("phi_a", s));
    factor("ln_phi_v", scholar ? "phi_v_bar" : shifted_name("phi_v", s));
    factor("ln_phi_r", scholar ? "phi_r_bar" : shifted_name("phi_r", s));
    factor("ln_tau", "tau" + suffix);
    if (scholar) factor("ln_rho", "rho");
    return out;
}

namespace {

nlohmann::json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double read_number(const nlohmann::json& j, double fallback = 0.0) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    return fallback;
}

} // namespace

std::string FittedFitnessModel::to_json() const {
    nlohmann::json j;
    j["model"] = models::to_string(kind);
    j["conventions"] = {{"tau_convention", metrics::to_string(conventions.tau)},
                        {"zero_shift", conventions.zero_shift}};
    j["n_obs"] = fit.n_obs;
    j["rows_used"] = rows_used;
    j["rows_dropped"] = rows_dropped;
    nlohmann::json coeffs = nlohmann::json::array();
    for (size_t i = 0; i < fit.names.size(); ++i) {
        coeffs.push_back({{"name", fit.names[i]},
                          {"estimate", fit.coefficients[i]},
                          {"std_error", fit.standard_errors[i]},
                          {"t_value", number_or_string(fit.t_values[i])},
                          {"p_value", fit.p_values[i]},
                          {"stars", inference::significance_stars(fit.p_values[i])}});
    }
    j["coefficients"] = coeffs;
    j["r_squared"] = fit.r_squared;
    j["adj_r_squared"] = fit.adj_r_squared;
    j["f_statistic"] = {{"value", number_or_string(fit.f.value)},
                        {"df1", fit.f.df1},
                        {"df2", fit.f.df2}};
    // Residual spread stands in for the unobserved noise term of the
    // multiplicative model; its two factors are not separately identifiable.
    j["residual_std"] = fit.residual_std;
    j["multiplicative_form"] = multiplicative_form();
    return j.dump(2);
}

FittedFitnessModel FittedFitnessModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw parse_error("bad model JSON", "fit report");
    FittedFitnessModel model;
    try {
        model.kind = parse_model_kind(j.at("model").get<std::string>());
        model.conventions.tau =
            metrics::parse_tau_convention(j.at("conventions").at("tau_convention"));
        model.conventions.zero_shift = j.at("conventions").at("zero_shift").get<double>();
        model.rows_used = j.value("rows_used", size_t{0});
        model.rows_dropped = j.value("rows_dropped", size_t{0});
        model.fit.n_obs = j.value("n_obs", size_t{0});
        for (const auto& c : j.at("coefficients")) {
            model.fit.names.push_back(c.at("name").get<std::string>());
            model.fit.coefficients.push_back(c.at("estimate").get<double>());
            model.fit.standard_errors.push_back(c.value("std_error", 0.0));
            model.fit.t_values.push_back(read_number(c.value("t_value", nlohmann::json())));
            model.fit.p_values.push_back(c.value("p_value", 0.0));
        }
        model.fit.r_squared = j.value("r_squared", 0.0);
        model.fit.adj_r_squared = j.value("adj_r_squared", 0.0);
        if (j.contains("f_statistic")) {
            model.fit.f.value = read_number(j["f_statistic"].value("value", nlohmann::json()));
            model.fit.f.df1 = j["f_statistic"].value("df1", size_t{0});
            model.fit.f.df2 = j["f_statistic"].value("df2", size_t{0});
        }
        model.fit.residual_std = j.value("residual_std", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad model JSON: ") + e.what(), "fit report");
    }
    return model;
}

namespace {

void score_entity(ScoreTable& table, const FittedFitnessModel& model, const std::string& key,
                  double k, double tau, double phi_a, double phi_v, double phi_r,
                  bool phis_already_shifted) {
    if (!(tau > 0.0)) return;
    const double s = phis_already_shifted ? 0.0 : model.conventions.zero_shift;
    const double time_factor = std::pow(tau, model.beta());
    const double fitness_factor = std::pow(phi_a + s, model.coefficient("ln_phi_a")) *
                                  std::pow(phi_v + s, model.coefficient("ln_phi_v")) *
                                  std::pow(phi_r + s, model.coefficient("ln_phi_r"));
    ScoreRow row;
    row.key = key;
    row.k = k;
    row.k_t = k / time_factor;
    row.k_tf = k / (time_factor * fitness_factor);
    table.rows.push_back(std::move(row));
}

} // namespace

ScoreTable score_table(const FittedFitnessModel& model, const Corpus& corpus,
                       const std::optional<Benchmark>& benchmark) {
    ScoreTable table;
    table.kind = model.kind;
    if (model.kind == ModelKind::paper) {
        auto vars = metrics::paper_vars(corpus, model.conventions);
        for (const auto& v : vars)
            score_entity(table, model, v.paper_id, v.k, v.tau, v.phi_a, v.phi_v, v.phi_r, false);
    } else {
        auto pvars = metrics::paper_vars(corpus, model.conventions);
        auto svars = metrics::scholar_vars(corpus, pvars, model.conventions);
        for (const auto& v : svars)
            score_entity(table, model, v.scholar_id, v.k_s, v.tau_bar, v.phi_a_bar, v.phi_v_bar,
                         v.phi_r_bar, true);
    }
    if (benchmark) {
        std::unordered_map<std::string, size_t> index;
        for (size_t i = 0; i < table.rows.size(); ++i) index.emplace(table.rows[i].key, i);
        for (const auto& [key, score] : *benchmark) {
            auto it = index.find(key);
            if (it == index.end())
                table.unmatched_benchmark_keys.push_back(key);
            else
                table.rows[it->second].k_acm = score;
        }
    }
    return table;
}

RankBy parse_rank_by(const std::string& name) {
    if (name == "k") return RankBy::k;
    if (name == "k_t") return RankBy::k_t;
    if (name == "k_tf") return RankBy::k_tf;
    throw config_error("unknown ranking column \"" + name + "\" (expected k, k_t or k_tf)");
}

std::string to_string(RankBy by) {
    switch (by) {
    case RankBy::k: return "k";
    case RankBy::k_t: return "k_t";
    case RankBy::k_tf: return "k_tf";
    }
    return "k";
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw domain_error("correlation inputs differ in length");
    const size_t n = x.size();
    if (n < 3) throw domain_error("correlation undefined for fewer than 3 points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw domain_error("correlation undefined for a constant column");
    return sxy / std::sqrt(sxx * syy);
}

RankResult rank_and_correlate(const ScoreTable& table, RankBy by, size_t top_n) {
    RankResult out;
    out.by = by;
    out.rows = table.rows;
    auto value_of = [by](const ScoreRow& r) {
        switch (by) {
        case RankBy::k: return r.k;
        case RankBy::k_t: return r.k_t;
        case RankBy::k_tf: return r.k_tf;
        }
        return r.k;
    };
    std::sort(out.rows.begin(), out.rows.end(), [&](const ScoreRow& a, const ScoreRow& b) {
        double va = value_of(a), vb = value_of(b);
        if (va != vb) return va > vb;
        return a.key < b.key;
    });
    if (out.rows.size() > top_n) out.rows.resize(top_n);

    bool have_benchmark = false;
    for (const auto& r : table.rows) have_benchmark = have_benchmark || r.k_acm.has_value();
    if (!have_benchmark) return out;

    std::vector<double> k, k_t, k_tf, acm;
    for (const auto& r : out.rows) {
        if (!r.k_acm) continue;
        k.push_back(r.k);
        k_t.push_back(r.k_t);
        k_tf.push_back(r.k_tf);
        acm.push_back(*r.k_acm);
    }
    if (acm.size() < 3)
        throw domain_error("correlation undefined: only " + std::to_string(acm.size()) +
                           " ranked rows carry a benchmark score");
    out.r_k = pearson(k, acm);
    out.r_k_t = pearson(k_t, acm);
    out.r_k_tf = pearson(k_tf, acm);
    return out;
}

} // namespace citefit::models
