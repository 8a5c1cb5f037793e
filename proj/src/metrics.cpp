#include "citefit/metrics.hpp"

#include "citefit/errors.hpp"
#include "citefit/util.hpp"

#include <cmath>

namespace citefit::metrics {

TauConvention parse_tau_convention(const std::string& name) {
    if (name == "age_plus_one") return TauConvention::age_plus_one;
    if (name == "age") return TauConvention::age;
    if (name == "ratio") return TauConvention::ratio;
    throw config_error("unknown tau convention \"" + name +
                       "\" (expected age_plus_one, age or ratio)");
}

std::string to_string(TauConvention convention) {
    switch (convention) {
    case TauConvention::age_plus_one: return "age_plus_one";
    case TauConvention::age: return "age";
    case TauConvention::ratio: return "ratio";
    }
    return "age_plus_one";
}

double compute_tau(const PaperRecord& paper, int collection_year, TauConvention convention,
                   std::optional<int> base_year) {
    if (paper.year > collection_year)
        throw domain_error("paper " + paper.id + " published in " + std::to_string(paper.year) +
                           ", after collection year " + std::to_string(collection_year));
    switch (convention) {
    case TauConvention::age_plus_one:
        return static_cast<double>(collection_year - paper.year + 1);
    case TauConvention::age:
        return static_cast<double>(collection_year - paper.year);
    case TauConvention::ratio: {
        if (!base_year)
            throw config_error("ratio tau convention needs the corpus base year");
        double t = static_cast<double>(collection_year - *base_year + 1);
        double t_i = static_cast<double>(paper.year - *base_year + 1);
        if (t_i <= 0.0)
            throw domain_error("paper " + paper.id + " precedes the base year");
        return t / t_i;
    }
    }
    throw config_error("unreachable tau convention");
}

double compute_phi_a(const Corpus& corpus, size_t paper_index) {
    const PaperRecord& paper = corpus.papers()[paper_index];
    long total = 0;
    for (const auto& author : paper.authors) {
        const ScholarRecord* scholar = corpus.find_scholar(author);
        if (!scholar) continue;
        for (size_t other : scholar->papers) {
            if (other == paper_index) continue;
            if (corpus.papers()[other].year >= paper.year) continue;
            total += corpus.citations_before(other, paper.year);
        }
    }
    return static_cast<double>(total);
}

double compute_phi_v(const Corpus& corpus, size_t paper_index) {
    const PaperRecord& paper = corpus.papers()[paper_index];
    long total = 0;
    size_t count = 0;
    for (size_t other : corpus.venue_papers(paper.venue)) {
        if (other == paper_index) continue;
        if (corpus.papers()[other].year >= paper.year) continue;
        total += corpus.citations_before(other, paper.year);
        ++count;
    }
    return count == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(count);
}

double compute_phi_r(const Corpus& corpus, size_t paper_index) {
    const PaperRecord& paper = corpus.papers()[paper_index];
    long total = 0;
    for (size_t target : corpus.resolved_references(paper_index))
        total += corpus.citations_before(target, paper.year);
    return static_cast<double>(total);
}

std::vector<PaperFitnessVars> paper_vars(const Corpus& corpus, const Conventions& conventions) {
    const auto& papers = corpus.papers();
    std::vector<PaperFitnessVars> out(papers.size());
    std::optional<int> base_year;
    if (conventions.tau == TauConvention::ratio && !corpus.empty())
        base_year = corpus.min_year();
    util::parallel_for(papers.size(), [&](size_t i) {
        const PaperRecord& p = papers[i];
        PaperFitnessVars& v = out[i];
        v.paper_id = p.id;
        v.year = p.year;
        v.k = static_cast<double>(p.k);
        v.tau = compute_tau(p, corpus.collection_year(), conventions.tau, base_year);
        v.phi_a = compute_phi_a(corpus, i);
        v.phi_v = compute_phi_v(corpus, i);
        v.phi_r = compute_phi_r(corpus, i);
    });
    return out;
}

std::vector<double> fractional_scores(const Corpus& corpus) {
    std::vector<double> out(corpus.scholars().size(), 0.0);
    for (size_t s = 0; s < corpus.scholars().size(); ++s) {
        for (size_t idx : corpus.scholars()[s].papers) {
            const PaperRecord& p = corpus.papers()[idx];
            out[s] += static_cast<double>(p.k) / static_cast<double>(p.authors.size());
        }
    }
    return out;
}

double geometric_mean(const std::vector<double>& values) {
    if (values.empty()) throw domain_error("geometric mean of an empty list");
    double log_sum = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) throw domain_error("geometric mean requires positive values");
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

std::vector<ScholarFitnessVars> scholar_vars(const Corpus& corpus,
                                             const std::vector<PaperFitnessVars>& vars,
                                             const Conventions& conventions) {
    if (vars.size() != corpus.papers().size())
        throw domain_error("paper variable table does not match the corpus");
    std::vector<double> shares = fractional_scores(corpus);
    std::vector<ScholarFitnessVars> out(corpus.scholars().size());
    const double shift = conventions.zero_shift;
    for (size_t s = 0; s < corpus.scholars().size(); ++s) {
        const ScholarRecord& scholar = corpus.scholars()[s];
        ScholarFitnessVars& v = out[s];
        v.scholar_id = scholar.id;
        v.rho = scholar.papers.size();
        v.k_s = shares[s];
        std::vector<double> taus, pas, pvs, prs;
        for (size_t idx : scholar.papers) {
            const PaperFitnessVars& pv = vars[idx];
            if (!(pv.tau > 0.0)) continue;
            taus.push_back(pv.tau);
            pas.push_back(pv.phi_a + shift);
            pvs.push_back(pv.phi_v + shift);
            prs.push_back(pv.phi_r + shift);
        }
        if (taus.empty()) continue; // tau_bar stays 0; caller filters
        v.tau_bar = geometric_mean(taus);
        v.phi_a_bar = geometric_mean(pas);
        v.phi_v_bar = geometric_mean(pvs);
        v.phi_r_bar = geometric_mean(prs);
    }
    return out;
}

} // namespace citefit::metrics
