#include "citefit/corpus_io.hpp"

#include "citefit/csv.hpp"
#include "citefit/errors.hpp"
#include "citefit/util.hpp"
#include "citefit/xml.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace citefit::io {

namespace {

int parse_year(const std::string& text, const std::string& locus) {
    std::string t = util::trim(text);
    if (t.empty()) throw parse_error("missing year", locus);
    try {
        size_t used = 0;
        int y = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return y;
    } catch (...) {
        throw parse_error("bad year \"" + t + "\"", locus);
    }
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write file: " + path.string());
    return out;
}

void write_comments(std::ostream& os, const std::vector<std::string>& comments) {
    for (const auto& line : comments) os << "# " << line << '\n';
}

} // namespace

Format parse_format(const std::string& name) {
    if (name == "xml") return Format::xml;
    if (name == "csv") return Format::csv;
    if (name == "jsonl") return Format::jsonl;
    throw config_error("unknown format \"" + name + "\" (expected xml, csv or jsonl)");
}

std::vector<RawPaper> read_xml(const std::string& path) {
    xml::Element root = xml::parse_file(path);
    std::vector<const xml::Element*> pubs = root.name == "publication"
                                                ? std::vector<const xml::Element*>{&root}
                                                : root.descendants_named("publication");
    std::vector<RawPaper> records;
    records.reserve(pubs.size());
    for (const xml::Element* pub : pubs) {
        std::string locus = path + ":" + std::to_string(pub->line);
        RawPaper r;
        r.id = pub->attribute("id");
        if (r.id.empty()) {
            for (const char* tag : {"id", "article_id", "pubid"}) {
                if (const auto* el = pub->first_child(tag)) {
                    r.id = util::trim(el->text);
                    break;
                }
            }
        }
        if (r.id.empty()) throw parse_error("publication without id", locus);

        const auto* year_el = pub->first_child("year");
        if (!year_el) throw parse_error("publication " + r.id + " without year", locus);
        r.year = parse_year(year_el->text, locus);

        for (const char* tag : {"source", "venue", "conference"}) {
            if (const auto* el = pub->first_child(tag)) {
                r.venue = util::trim(el->text);
                break;
            }
        }

        for (const auto* el : pub->descendants_named("author")) {
            std::string name = util::trim(el->text);
            if (!name.empty()) r.raw_authors.push_back(std::move(name));
        }
        for (const char* tag : {"reference", "ref"}) {
            for (const auto* el : pub->descendants_named(tag)) {
                std::string ref = util::trim(el->text);
                if (ref.empty()) ref = el->attribute("id");
                if (!ref.empty()) r.references.push_back(std::move(ref));
            }
        }
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

size_t column_of(const csv::Row& header, std::string_view name, const std::string& file) {
    for (size_t i = 0; i < header.size(); ++i)
        if (util::to_lower(util::trim(header[i])) == name) return i;
    throw parse_error("missing column \"" + std::string(name) + "\"", file);
}

std::optional<size_t> optional_column_of(const csv::Row& header, std::string_view name) {
    for (size_t i = 0; i < header.size(); ++i)
        if (util::to_lower(util::trim(header[i])) == name) return i;
    return std::nullopt;
}

} // namespace

std::vector<RawPaper> read_csv_dir(const std::string& dir) {
    fs::path base(dir);
    auto papers_path = base / "papers.csv";
    auto authors_path = base / "authors.csv";
    auto refs_path = base / "refs.csv";
    if (!fs::exists(papers_path))
        throw error("no papers.csv under " + dir);

    auto paper_rows = csv::parse_file(papers_path.string());
    if (paper_rows.empty()) return {};
    const auto& ph = paper_rows.front();
    size_t c_id = column_of(ph, "paper_id", papers_path.string());
    size_t c_year = column_of(ph, "year", papers_path.string());
    size_t c_venue = column_of(ph, "venue", papers_path.string());

    std::vector<RawPaper> records;
    std::unordered_map<std::string, size_t> index;
    for (size_t i = 1; i < paper_rows.size(); ++i) {
        const auto& row = paper_rows[i];
        if (row.size() == 1 && row[0].empty()) continue;
        std::string locus = papers_path.string() + " row " + std::to_string(i + 1);
        if (row.size() <= std::max({c_id, c_year, c_venue}))
            throw parse_error("short row", locus);
        RawPaper r;
        r.id = util::trim(row[c_id]);
        if (r.id.empty()) throw parse_error("empty paper_id", locus);
        r.year = parse_year(row[c_year], locus);
        r.venue = util::trim(row[c_venue]);
        index.emplace(r.id, records.size());
        records.push_back(std::move(r));
    }

    if (fs::exists(authors_path)) {
        auto rows = csv::parse_file(authors_path.string());
        if (!rows.empty()) {
            const auto& h = rows.front();
            size_t c_pid = column_of(h, "paper_id", authors_path.string());
            size_t c_author = column_of(h, "author", authors_path.string());
            auto c_pos = optional_column_of(h, "position");
            // (paper, position or file order, name)
            std::vector<std::tuple<size_t, long, std::string>> entries;
            for (size_t i = 1; i < rows.size(); ++i) {
                const auto& row = rows[i];
                if (row.size() == 1 && row[0].empty()) continue;
                std::string locus = authors_path.string() + " row " + std::to_string(i + 1);
                if (row.size() <= std::max(c_pid, c_author)) throw parse_error("short row", locus);
                auto it = index.find(util::trim(row[c_pid]));
                if (it == index.end())
                    throw parse_error("authors.csv references unknown paper \"" + row[c_pid] + "\"", locus);
                long pos = static_cast<long>(i);
                if (c_pos && *c_pos < row.size() && !util::trim(row[*c_pos]).empty())
                    pos = std::stol(util::trim(row[*c_pos]));
                entries.emplace_back(it->second, pos, row[c_author]);
            }
            std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
                return std::get<1>(a) < std::get<1>(b);
            });
            for (auto& [pidx, pos, name] : entries)
                records[pidx].raw_authors.push_back(std::move(name));
        }
    }

    if (fs::exists(refs_path)) {
        auto rows = csv::parse_file(refs_path.string());
        if (!rows.empty()) {
            const auto& h = rows.front();
            size_t c_citing = column_of(h, "citing_paper_id", refs_path.string());
            size_t c_cited = column_of(h, "cited_paper_id", refs_path.string());
            for (size_t i = 1; i < rows.size(); ++i) {
                const auto& row = rows[i];
                if (row.size() == 1 && row[0].empty()) continue;
                std::string locus = refs_path.string() + " row " + std::to_string(i + 1);
                if (row.size() <= std::max(c_citing, c_cited)) throw parse_error("short row", locus);
                auto it = index.find(util::trim(row[c_citing]));
                if (it == index.end())
                    throw parse_error("refs.csv references unknown citing paper \"" + row[c_citing] + "\"", locus);
                records[it->second].references.push_back(util::trim(row[c_cited]));
            }
        }
    }
    return records;
}

std::vector<RawPaper> read_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    std::vector<RawPaper> records;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = util::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        std::string locus = path + ":" + std::to_string(lineno);
        nlohmann::json j = nlohmann::json::parse(trimmed, nullptr, false);
        if (j.is_discarded()) throw parse_error("bad JSON record", locus);
        RawPaper r;
        try {
            r.id = j.at("id").get<std::string>();
            r.year = j.at("year").get<int>();
            r.venue = j.value("venue", std::string());
            for (const auto& a : j.value("authors", nlohmann::json::array()))
                r.raw_authors.push_back(a.get<std::string>());
            for (const auto& ref : j.value("references", nlohmann::json::array()))
                r.references.push_back(ref.get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("bad record: ") + e.what(), locus);
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<RawPaper> read_records(const std::string& path, Format format) {
    switch (format) {
    case Format::xml: return read_xml(path);
    case Format::csv: return read_csv_dir(path);
    case Format::jsonl: return read_jsonl(path);
    }
    throw config_error("unreachable format");
}

std::pair<Corpus, IngestReport> ingest(const std::string& path, Format format,
                                       const IngestOptions& options) {
    return build_corpus(read_records(path, format), options);
}

namespace {

void write_meta(const Corpus& corpus, const fs::path& dir) {
    nlohmann::json meta;
    meta["collection_year"] = corpus.collection_year();
    meta["papers"] = corpus.papers().size();
    meta["scholars"] = corpus.scholars().size();
    meta["venues"] = corpus.venues().size();
    meta["references"] = corpus.total_references();
    meta["citations"] = corpus.total_citations();
    auto out = open_out(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

} // namespace

void save_corpus_csv(const Corpus& corpus, const std::string& dir,
                     const std::vector<std::string>& header_comment) {
    fs::create_directories(dir);
    fs::path base(dir);

    auto papers = open_out(base / "papers.csv");
    write_comments(papers, header_comment);
    csv::write_row(papers, {"paper_id", "year", "venue"});
    for (const auto& p : corpus.papers())
        csv::write_row(papers, {p.id, std::to_string(p.year), p.venue});

    auto authors = open_out(base / "authors.csv");
    write_comments(authors, header_comment);
    csv::write_row(authors, {"paper_id", "position", "author"});
    for (const auto& p : corpus.papers())
        for (size_t i = 0; i < p.authors.size(); ++i)
            csv::write_row(authors, {p.id, std::to_string(i + 1), p.authors[i]});

    auto refs = open_out(base / "refs.csv");
    write_comments(refs, header_comment);
    csv::write_row(refs, {"citing_paper_id", "cited_paper_id"});
    for (const auto& p : corpus.papers())
        for (const auto& ref : p.references)
            csv::write_row(refs, {p.id, ref});

    auto scholars = open_out(base / "scholars.csv");
    write_comments(scholars, header_comment);
    csv::write_row(scholars, {"scholar_id", "normalized_name", "aliases"});
    for (const auto& s : corpus.scholars()) {
        std::string aliases;
        for (size_t i = 0; i < s.aliases.size(); ++i) {
            if (i) aliases += '|';
            aliases += s.aliases[i];
        }
        csv::write_row(scholars, {s.id, s.normalized_name, aliases});
    }

    write_meta(corpus, base);
}

void save_corpus_jsonl(const Corpus& corpus, const std::string& dir,
                       const std::vector<std::string>& header_comment) {
    fs::create_directories(dir);
    fs::path base(dir);
    auto out = open_out(base / "corpus.jsonl");
    write_comments(out, header_comment);
    for (const auto& p : corpus.papers()) {
        nlohmann::json j;
        j["id"] = p.id;
        j["year"] = p.year;
        j["venue"] = p.venue;
        j["authors"] = p.authors;
        j["references"] = p.references;
        out << j.dump() << '\n';
    }
    write_meta(corpus, base);
}

Corpus load_corpus(const std::string& dir, IngestOptions options) {
    fs::path base(dir);
    if (!options.collection_year) {
        fs::path meta_path = base / "meta.json";
        if (fs::exists(meta_path)) {
            std::ifstream in(meta_path);
            nlohmann::json meta = nlohmann::json::parse(in, nullptr, false);
            if (!meta.is_discarded() && meta.contains("collection_year"))
                options.collection_year = meta["collection_year"].get<int>();
        }
    }
    std::vector<RawPaper> records;
    if (fs::exists(base / "papers.csv")) {
        records = read_csv_dir(dir);
    } else if (fs::exists(base / "corpus.jsonl")) {
        records = read_jsonl((base / "corpus.jsonl").string());
    } else {
        throw error("no corpus found under " + dir + " (expected papers.csv or corpus.jsonl)");
    }
    return build_corpus(std::move(records), options).first;
}

std::vector<std::pair<std::string, double>> read_benchmark_csv(const std::string& path) {
    auto rows = csv::parse_file(path);
    std::vector<std::pair<std::string, double>> out;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() < 2)
            throw parse_error("benchmark row needs two columns (key,score)",
                              path + " row " + std::to_string(i + 1));
        std::string key = util::trim(row[0]);
        std::string value = util::trim(row[1]);
        if (i == 0) { // optional header
            try {
                (void)std::stod(value);
            } catch (...) {
                continue;
            }
        }
        try {
            out.emplace_back(key, std::stod(value));
        } catch (...) {
            throw parse_error("bad benchmark score \"" + value + "\"",
                              path + " row " + std::to_string(i + 1));
        }
    }
    return out;
}

} // namespace citefit::io
