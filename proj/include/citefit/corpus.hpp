#pragma once

#include "citefit/names.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace citefit {

// One publication. `authors` holds canonical scholar keys in byline order;
// `references` may point at papers outside the corpus (kept as opaque keys).
// `k` is always recomputed from inbound in-corpus references, never read
// from input.
struct PaperRecord {
    std::string id;
    int year = 0;
    std::string venue;
    std::vector<std::string> authors;
    std::vector<std::string> references;
    int k = 0;
};

struct ScholarRecord {
    std::string id;              // canonical normalized name
    std::string normalized_name; // same string as id
    std::vector<std::string> aliases;
    std::vector<size_t> papers;  // indices into Corpus::papers()
};

// A record as read from disk, before normalization and validation.
struct RawPaper {
    std::string id;
    int year = 0;
    std::string venue;
    std::vector<std::string> raw_authors;
    std::vector<std::string> references;
};

struct IngestOptions {
    bool strict_years = false;               // drop references that cite into the future
    std::optional<int> collection_year;      // default: max publication year
    std::optional<int> min_year;             // papers before this are dropped
    names::Overrides name_overrides;
};

struct IngestReport {
    size_t records_read = 0;
    size_t papers_kept = 0;
    size_t scholars = 0;
    size_t venues = 0;
    size_t references_kept = 0;              // in- and out-of-corpus
    size_t dangling_references = 0;          // targets outside the corpus
    size_t duplicate_papers_dropped = 0;
    size_t duplicate_authors_removed = 0;
    size_t duplicate_references_removed = 0;
    size_t self_references_removed = 0;
    size_t references_rejected_strict = 0;   // dropped by strict year mode
    std::vector<std::string> dropped_authorless;
    std::vector<std::string> dropped_year_window;
    // citing paper -> cited paper pairs where the citing year precedes the
    // cited year; kept (flagged) unless strict mode dropped them.
    std::vector<std::pair<std::string, std::string>> year_violations;
    std::string to_json() const;
};

// Immutable citation corpus with recomputed citation counts and the
// lookup indexes the metric computations need. Construct via build_corpus;
// safe for concurrent reads afterwards.
class Corpus {
public:
    Corpus() = default;

    const std::vector<PaperRecord>& papers() const { return papers_; }
    const std::vector<ScholarRecord>& scholars() const { return scholars_; }
    const std::vector<std::string>& venues() const { return venues_; }
    int collection_year() const { return collection_year_; }
    bool empty() const { return papers_.empty(); }

    const PaperRecord* find_paper(const std::string& id) const;
    const ScholarRecord* find_scholar(const std::string& id) const;
    std::optional<size_t> paper_index(const std::string& id) const;

    // Publication years of in-corpus papers citing `paper_idx`, ascending.
    const std::vector<int>& citing_years(size_t paper_idx) const { return citing_years_[paper_idx]; }
    // Citations received by `paper_idx` from papers published strictly
    // before `year`.
    int citations_before(size_t paper_idx, int year) const;
    // Indices of same-venue papers, in corpus order.
    const std::vector<size_t>& venue_papers(const std::string& venue) const;
    // In-corpus reference targets of `paper_idx` as paper indices.
    const std::vector<size_t>& resolved_references(size_t paper_idx) const { return resolved_refs_[paper_idx]; }

    int min_year() const { return min_year_; }
    int max_year() const { return max_year_; }
    long total_citations() const { return total_citations_; }
    size_t total_references() const { return total_references_; }

private:
    friend std::pair<Corpus, IngestReport> build_corpus(std::vector<RawPaper>, const IngestOptions&);

    std::vector<PaperRecord> papers_;
    std::vector<ScholarRecord> scholars_;
    std::vector<std::string> venues_;
    std::unordered_map<std::string, size_t> paper_index_;
    std::unordered_map<std::string, size_t> scholar_index_;
    std::unordered_map<std::string, std::vector<size_t>> venue_papers_;
    std::vector<std::vector<int>> citing_years_;
    std::vector<std::vector<size_t>> resolved_refs_;
    int collection_year_ = 0;
    int min_year_ = 0;
    int max_year_ = 0;
    long total_citations_ = 0;
    size_t total_references_ = 0;
};

// Normalizes author names, drops invalid records (authorless papers, years
// outside the configured window), deduplicates, recomputes every paper's
// citation count, and wires the lookup indexes.
std::pair<Corpus, IngestReport> build_corpus(std::vector<RawPaper> records,
                                             const IngestOptions& options = {});

struct YearRow {
    int year = 0;
    size_t papers = 0;
    size_t references = 0; // references contained in that year's papers
    long citations = 0;    // citations received by that year's papers (any time)
};

// One row per year from the corpus's first to last publication year.
std::vector<YearRow> yearly_profile(const Corpus& corpus);

} // namespace citefit
