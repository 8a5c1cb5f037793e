#ifndef CITEFIT_METRICS_HPP
#define CITEFIT_METRICS_HPP

#include "citefit/corpus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace citefit::metrics {

// How the time factor is derived from publication years.
//   age_plus_one  tau = collection_year - year + 1   (default; tau >= 1)
//   age           tau = collection_year - year       (same-year papers get 0)
//   ratio         tau = (collection_year - base + 1) / (year - base + 1),
//                 base = earliest corpus year
enum class TauConvention { age_plus_one, age, ratio };

TauConvention parse_tau_convention(const std::string& name);
std::string to_string(TauConvention convention);

struct Conventions {
    TauConvention tau = TauConvention::age_plus_one;
    double zero_shift = 1.0; // added to k and each phi before any log; tau is never shifted
};

struct PaperFitnessVars {
    std::string paper_id;
    int year = 0;
    double k = 0.0;
    double tau = 0.0;
    double phi_a = 0.0;
    double phi_v = 0.0;
    double phi_r = 0.0;
};

struct ScholarFitnessVars {
    std::string scholar_id;
    double k_s = 0.0;
    size_t rho = 0;       // papers authored
    // Geometric means over authored papers. The phi means are taken over
    // zero-shifted values; tau is used as-is.
    double tau_bar = 0.0;
    double phi_a_bar = 0.0;
    double phi_v_bar = 0.0;
    double phi_r_bar = 0.0;
};

// base_year is only consulted by the ratio convention (callers pass the
// corpus's earliest year); omitting it there is a config error.
double compute_tau(const PaperRecord& paper, int collection_year, TauConvention convention,
                   std::optional<int> base_year = std::nullopt);

// Citations the paper's authors accrued before its publication year:
// summed per author over that author's strictly-earlier papers, counting
// only citations from papers themselves published strictly earlier.
double compute_phi_a(const Corpus& corpus, size_t paper_index);

// Mean prior citation count of strictly-earlier same-venue papers;
// 0 when the venue has no earlier papers.
double compute_phi_v(const Corpus& corpus, size_t paper_index);

// Total citations received before the paper's year by its in-corpus
// referenced works.
double compute_phi_r(const Corpus& corpus, size_t paper_index);

// One entry per paper, aligned with corpus.papers(). Per-paper work runs
// in parallel when CITEFIT_THREADS allows; output is deterministic.
std::vector<PaperFitnessVars> paper_vars(const Corpus& corpus, const Conventions& conventions);

// Fractional citation credit per scholar, aligned with corpus.scholars():
// k_s = sum over authored papers of k / author_count.
std::vector<double> fractional_scores(const Corpus& corpus);

// (prod v_i)^(1/n) in log space. Empty input or any v <= 0 is a domain error.
double geometric_mean(const std::vector<double>& values);

// One entry per scholar, aligned with corpus.scholars(). vars must be
// paper_vars(corpus, conventions) output (same conventions). Papers with
// tau <= 0 (possible under the `age` convention) are excluded from the
// geometric means; scholars left with no usable paper keep rho and k_s but
// carry tau_bar = 0 and must be filtered by the caller before any log.
std::vector<ScholarFitnessVars> scholar_vars(const Corpus& corpus,
                                             const std::vector<PaperFitnessVars>& vars,
                                             const Conventions& conventions);

} // namespace citefit::metrics

#endif
