#ifndef CITEFIT_MODELS_HPP
#define CITEFIT_MODELS_HPP

#include "citefit/corpus.hpp"
#include "citefit/inference.hpp"
#include "citefit/metrics.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace citefit::models {

enum class ModelKind { paper, scholar };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

// Design plus the entity key behind each retained row. Rows whose logs
// would be non-finite (tau <= 0 under the `age` convention, zero values
// under a zero shift) are dropped and counted.
struct DesignBuild {
    inference::DesignMatrix design;
    std::vector<std::string> keys;
    size_t rows_dropped = 0;
};

// Paper design: ln(k+s) on intercept, ln(phi_a+s), ln(phi_v+s),
// ln(phi_r+s), ln(tau). s = conventions.zero_shift; tau is never shifted.
DesignBuild build_paper_design(const std::vector<metrics::PaperFitnessVars>& vars,
                               const metrics::Conventions& conventions);

// Scholar design: ln(k_s+s) on intercept, ln(phi_a_bar), ln(phi_v_bar),
// ln(phi_r_bar), ln(tau_bar), ln(rho). The phi means already carry the
// shift (geometric means over shifted values), so no second shift here.
DesignBuild build_scholar_design(const std::vector<metrics::ScholarFitnessVars>& vars,
                                 const metrics::Conventions& conventions);

struct FittedFitnessModel {
    ModelKind kind = ModelKind::paper;
    inference::FitResult fit;
    metrics::Conventions conventions;
    size_t rows_used = 0;
    size_t rows_dropped = 0;

    double coefficient(const std::string& name) const { return fit.coefficient(name); }
    double beta() const { return fit.coefficient("ln_tau"); }

    // "k = 0.46 * (phi_a+1)^0.33 * ... * tau^0.57" rendering of the fit.
    std::string multiplicative_form() const;

    // Round-trippable report: coefficient table (estimate, SE, t, p,
    // stars), R^2, adjusted R^2, F with dfs, residual_std, conventions.
    std::string to_json() const;
    static FittedFitnessModel from_json(const std::string& text);
};

// Requires >= 30 usable rows after drops; propagates inference errors.
FittedFitnessModel fit_paper_model(const Corpus& corpus,
                                   const metrics::Conventions& conventions = {});
FittedFitnessModel fit_scholar_model(const Corpus& corpus,
                                     const metrics::Conventions& conventions = {});

// Same fits over precomputed variable tables (the `vars` artifact).
FittedFitnessModel fit_paper_model(const std::vector<metrics::PaperFitnessVars>& vars,
                                   const metrics::Conventions& conventions = {});
FittedFitnessModel fit_scholar_model(const std::vector<metrics::ScholarFitnessVars>& vars,
                                     const metrics::Conventions& conventions = {});

struct ScoreRow {
    std::string key;
    double k = 0.0;
    double k_t = 0.0;  // k / tau^beta
    double k_tf = 0.0; // k / (tau^beta * prod (phi+s)^gamma)
    std::optional<double> k_acm;
};

struct ScoreTable {
    ModelKind kind = ModelKind::paper;
    std::vector<ScoreRow> rows;
    std::vector<std::string> unmatched_benchmark_keys;
};

using Benchmark = std::vector<std::pair<std::string, double>>;

// Scores every entity with the model's own beta/gamma estimates. Scholar
// tables use tau_bar and the shifted phi means; rho never normalizes.
// Entities with tau <= 0 are skipped. Benchmark scores join by key;
// unmatched keys land in the warning list.
ScoreTable score_table(const FittedFitnessModel& model, const Corpus& corpus,
                       const std::optional<Benchmark>& benchmark = std::nullopt);

enum class RankBy { k, k_t, k_tf };

RankBy parse_rank_by(const std::string& name);
std::string to_string(RankBy by);

struct RankResult {
    RankBy by = RankBy::k;
    std::vector<ScoreRow> rows; // descending by the chosen column, ties by key
    // Pearson r of each score column against k_acm over the ranked rows
    // that carry a benchmark value; absent when no benchmark was joined.
    std::optional<double> r_k;
    std::optional<double> r_k_t;
    std::optional<double> r_k_tf;
};

// Fewer than 3 benchmarked rows among the top_n when a benchmark exists
// is a domain error (correlation undefined).
RankResult rank_and_correlate(const ScoreTable& table, RankBy by, size_t top_n = 20);

// Sample Pearson correlation; requires n >= 3 and nonzero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

} // namespace citefit::models

#endif
