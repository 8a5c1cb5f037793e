#include "citefit/corpus.hpp"

#include "citefit/errors.hpp"
#include "citefit/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <unordered_set>

namespace citefit {

std::string IngestReport::to_json() const {
    nlohmann::json j;
    j["records_read"] = records_read;
    j["papers_kept"] = papers_kept;
    j["scholars"] = scholars;
    j["venues"] = venues;
    j["references_kept"] = references_kept;
    j["dangling_references"] = dangling_references;
    j["duplicate_papers_dropped"] = duplicate_papers_dropped;
    j["duplicate_authors_removed"] = duplicate_authors_removed;
    j["duplicate_references_removed"] = duplicate_references_removed;
    j["self_references_removed"] = self_references_removed;
    j["references_rejected_strict"] = references_rejected_strict;
    j["dropped_authorless"] = dropped_authorless;
    j["dropped_year_window"] = dropped_year_window;
    auto& viol = j["year_violations"] = nlohmann::json::array();
    for (const auto& [citing, cited] : year_violations)
        viol.push_back({{"citing", citing}, {"cited", cited}});
    return j.dump(2);
}

const PaperRecord* Corpus::find_paper(const std::string& id) const {
    auto it = paper_index_.find(id);
    return it == paper_index_.end() ? nullptr : &papers_[it->second];
}

const ScholarRecord* Corpus::find_scholar(const std::string& id) const {
    auto it = scholar_index_.find(id);
    return it == scholar_index_.end() ? nullptr : &scholars_[it->second];
}

std::optional<size_t> Corpus::paper_index(const std::string& id) const {
    auto it = paper_index_.find(id);
    if (it == paper_index_.end()) return std::nullopt;
    return it->second;
}

int Corpus::citations_before(size_t paper_idx, int year) const {
    const auto& years = citing_years_[paper_idx];
    auto it = std::lower_bound(years.begin(), years.end(), year);
    return static_cast<int>(it - years.begin());
}

const std::vector<size_t>& Corpus::venue_papers(const std::string& venue) const {
    static const std::vector<size_t> kEmpty;
    auto it = venue_papers_.find(venue);
    return it == venue_papers_.end() ? kEmpty : it->second;
}

std::pair<Corpus, IngestReport> build_corpus(std::vector<RawPaper> records,
                                             const IngestOptions& options) {
    Corpus corpus;
    IngestReport report;
    report.records_read = records.size();

    // Pass 1: drop authorless records first, then fix the census year from
    // the survivors (a dropped record must not define it), then apply the
    // year window and normalize names.
    std::vector<RawPaper*> survivors;
    survivors.reserve(records.size());
    int max_year_seen = 0;
    for (auto& raw : records) {
        if (raw.raw_authors.empty()) {
            report.dropped_authorless.push_back(raw.id);
            continue;
        }
        if (survivors.empty() || raw.year > max_year_seen) max_year_seen = raw.year;
        survivors.push_back(&raw);
    }
    int collection_year = options.collection_year.value_or(max_year_seen);

    std::unordered_map<std::string, std::vector<std::string>> aliases_by_canonical;
    std::unordered_set<std::string> seen_ids;
    for (RawPaper* rawp : survivors) {
        RawPaper& raw = *rawp;
        if (raw.year > collection_year ||
            (options.min_year && raw.year < *options.min_year)) {
            report.dropped_year_window.push_back(raw.id);
            continue;
        }
        if (!seen_ids.insert(raw.id).second) {
            ++report.duplicate_papers_dropped;
            continue;
        }

        PaperRecord paper;
        paper.id = std::move(raw.id);
        paper.year = raw.year;
        paper.venue = raw.venue;
        std::unordered_set<std::string> author_set;
        for (const auto& name : raw.raw_authors) {
            std::string canonical = names::normalize(name, options.name_overrides);
            if (canonical.empty()) canonical = "(unnamed)";
            std::string trimmed = util::trim(name);
            if (trimmed != canonical) {
                auto& aliases = aliases_by_canonical[canonical];
                if (std::find(aliases.begin(), aliases.end(), trimmed) == aliases.end())
                    aliases.push_back(trimmed);
            }
            if (!author_set.insert(canonical).second) {
                ++report.duplicate_authors_removed;
                continue;
            }
            paper.authors.push_back(std::move(canonical));
        }
        std::unordered_set<std::string> ref_set;
        for (auto& ref : raw.references) {
            if (ref == paper.id) {
                ++report.self_references_removed;
                continue;
            }
            if (!ref_set.insert(ref).second) {
                ++report.duplicate_references_removed;
                continue;
            }
            paper.references.push_back(std::move(ref));
        }

        corpus.paper_index_[paper.id] = corpus.papers_.size();
        corpus.papers_.push_back(std::move(paper));
    }

    // Pass 2: resolve references, recompute citation counts, flag or drop
    // year violations, collect scholars and venues.
    size_t n = corpus.papers_.size();
    corpus.citing_years_.assign(n, {});
    corpus.resolved_refs_.assign(n, {});
    for (size_t i = 0; i < n; ++i) {
        auto& paper = corpus.papers_[i];
        std::vector<std::string> kept_refs;
        kept_refs.reserve(paper.references.size());
        for (const auto& ref : paper.references) {
            auto it = corpus.paper_index_.find(ref);
            if (it == corpus.paper_index_.end()) {
                ++report.dangling_references;
                kept_refs.push_back(ref);
                continue;
            }
            size_t target = it->second;
            if (corpus.papers_[target].year > paper.year) {
                report.year_violations.emplace_back(paper.id, ref);
                if (options.strict_years) {
                    ++report.references_rejected_strict;
                    continue;
                }
            }
            kept_refs.push_back(ref);
            corpus.resolved_refs_[i].push_back(target);
            corpus.citing_years_[target].push_back(paper.year);
        }
        paper.references = std::move(kept_refs);
        report.references_kept += paper.references.size();

        for (const auto& author : paper.authors) {
            auto [it, inserted] = corpus.scholar_index_.emplace(author, corpus.scholars_.size());
            if (inserted) {
                ScholarRecord s;
                s.id = author;
                s.normalized_name = author;
                if (auto ait = aliases_by_canonical.find(author); ait != aliases_by_canonical.end())
                    s.aliases = ait->second;
                corpus.scholars_.push_back(std::move(s));
            }
            corpus.scholars_[it->second].papers.push_back(i);
        }
        auto [vit, vinserted] = corpus.venue_papers_.emplace(paper.venue, std::vector<size_t>{});
        if (vinserted) corpus.venues_.push_back(paper.venue);
        vit->second.push_back(i);
    }

    for (size_t i = 0; i < n; ++i) {
        auto& years = corpus.citing_years_[i];
        std::sort(years.begin(), years.end());
        corpus.papers_[i].k = static_cast<int>(years.size());
        corpus.total_citations_ += corpus.papers_[i].k;
    }
    corpus.total_references_ = report.references_kept;

    if (n > 0) {
        auto [lo, hi] = std::minmax_element(
            corpus.papers_.begin(), corpus.papers_.end(),
            [](const PaperRecord& a, const PaperRecord& b) { return a.year < b.year; });
        corpus.min_year_ = lo->year;
        corpus.max_year_ = hi->year;
    }
    corpus.collection_year_ = n > 0 ? collection_year : options.collection_year.value_or(0);

    report.papers_kept = n;
    report.scholars = corpus.scholars_.size();
    report.venues = corpus.venues_.size();
    return {std::move(corpus), std::move(report)};
}

std::vector<YearRow> yearly_profile(const Corpus& corpus) {
    std::vector<YearRow> rows;
    if (corpus.empty()) return rows;
    int first = corpus.min_year(), last = corpus.max_year();
    rows.resize(static_cast<size_t>(last - first + 1));
    for (int y = first; y <= last; ++y) rows[static_cast<size_t>(y - first)].year = y;
    for (const auto& paper : corpus.papers()) {
        auto& row = rows[static_cast<size_t>(paper.year - first)];
        ++row.papers;
        row.references += paper.references.size();
        row.citations += paper.k;
    }
    return rows;
}

} // namespace citefit
