#pragma once

#include "citefit/corpus.hpp"

#include <string>
#include <vector>

namespace citefit::io {

enum class Format { xml, csv, jsonl };

Format parse_format(const std::string& name); // "xml" | "csv" | "jsonl"

// Readers produce raw records; build_corpus() does validation/normalization.
//
// XML: a document whose <publication> elements carry the record id (an `id`
// attribute or an <id>/<article_id> child), a <year>, a venue
// (<source>/<venue>/<conference>), <author> elements and <reference>/<ref>
// elements, optionally wrapped in <authors>/<references>.
std::vector<RawPaper> read_xml(const std::string& path);

// CSV: a directory with papers.csv (paper_id,year,venue),
// authors.csv (paper_id,position,author), refs.csv
// (citing_paper_id,cited_paper_id).
std::vector<RawPaper> read_csv_dir(const std::string& dir);

// JSONL: one object per line:
//   {"id": "...", "year": 1991, "venue": "...",
//    "authors": ["..."], "references": ["..."]}
std::vector<RawPaper> read_jsonl(const std::string& path);

std::vector<RawPaper> read_records(const std::string& path, Format format);

// Parses the input and assembles the corpus in one step.
std::pair<Corpus, IngestReport> ingest(const std::string& path, Format format,
                                       const IngestOptions& options = {});

// Writes papers/authors/refs/scholars CSVs plus meta.json into `dir`
// (created if needed). `header_comment` lines are prefixed to each CSV.
void save_corpus_csv(const Corpus& corpus, const std::string& dir,
                     const std::vector<std::string>& header_comment = {});
// Writes corpus.jsonl plus meta.json into `dir`.
void save_corpus_jsonl(const Corpus& corpus, const std::string& dir,
                       const std::vector<std::string>& header_comment = {});

// Loads a corpus directory written by either save function (or a bare
// user-supplied CSV triple). Honors meta.json's collection_year unless
// `options` overrides it.
Corpus load_corpus(const std::string& dir, IngestOptions options = {});

// Two-column benchmark file: key,score (header row optional).
std::vector<std::pair<std::string, double>> read_benchmark_csv(const std::string& path);

} // namespace citefit::io
