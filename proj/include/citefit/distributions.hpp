#ifndef CITEFIT_DISTRIBUTIONS_HPP
#define CITEFIT_DISTRIBUTIONS_HPP

#include "citefit/corpus.hpp"
#include "citefit/models.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace citefit::distributions {

enum class SeriesKind { discrete, cumulative };
enum class Binning { unit, log };

SeriesKind parse_series_kind(const std::string& name);
Binning parse_binning(const std::string& name);
std::string to_string(SeriesKind kind);
std::string to_string(Binning binning);

struct FrequencyPoint {
    double x = 0.0;
    double y = 0.0;
};

// Binned frequency series. Unit binning tallies floor(score); log binning
// buckets positive scores by powers of two and diverts nonpositive scores
// into zero_count. Cumulative series hold survival counts P(X >= x), so
// y is nonincreasing and y(x_min) equals the binned population.
struct FrequencySeries {
    SeriesKind kind = SeriesKind::discrete;
    Binning binning = Binning::unit;
    std::vector<FrequencyPoint> points; // x strictly increasing
    size_t zero_count = 0;
    size_t population = 0;
};

// Nonempty scores required.
FrequencySeries distribution(const std::vector<double>& scores, SeriesKind kind, Binning binning);

enum class TailFamily { power_law, exponential };

TailFamily parse_tail_family(const std::string& name);
std::string to_string(TailFamily family);

struct TailFit {
    TailFamily family = TailFamily::power_law;
    double slope = 0.0;     // exponent (power_law) or rate (exponential)
    double intercept = 0.0; // intercept of the linearized fit (ln-scale)
    double r_squared = 0.0;
    size_t points_used = 0;
};

// Linearized least squares on the series points: ln y on ln x for
// power_law, ln y on x for exponential. Points with y <= 0 (and, for
// power_law, x <= 0) are unusable; fewer than 3 usable points is a
// domain error.
TailFit tail_fit(const FrequencySeries& series, TailFamily family);

// Score column selector shared by the distribution/trend entry points.
enum class Normalize { none, k_t, k_tf };

Normalize parse_normalize(const std::string& name);
std::string to_string(Normalize normalize);

struct TrendYear {
    int year = 0;
    std::vector<double> scores;
    std::optional<double> mean; // absent for years with no entities
};

// One row per year from the corpus's first to last publication year,
// empty years included.
struct TrendSeries {
    std::vector<TrendYear> years;
};

TrendSeries trend_from_pairs(const std::vector<std::pair<int, double>>& year_scores);

// Yearly per-paper scores plus arithmetic means. normalize != none needs
// the fitted model (its conventions drive the scoring); none plots raw k.
TrendSeries trend(const Corpus& corpus, Normalize normalize,
                  const models::FittedFitnessModel* model = nullptr);

struct AuthorGroup {
    size_t authors = 0;
    size_t n_papers = 0;
    double mean_k = 0.0;
    double mean_k_t = 0.0;
    double mean_k_tf = 0.0;
};

struct AuthorshipReport {
    std::vector<AuthorGroup> groups; // ascending author count
    TrendSeries team_size;           // yearly mean authors per paper
};

AuthorshipReport authorship_analysis(const Corpus& corpus,
                                     const models::FittedFitnessModel& model);

} // namespace citefit::distributions

#endif
