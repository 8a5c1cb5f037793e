#include "citefit/cli.hpp"

#include "citefit/corpus_io.hpp"
#include "citefit/csv.hpp"
#include "citefit/distributions.hpp"
#include "citefit/errors.hpp"
#include "citefit/models.hpp"
#include "citefit/netsim.hpp"
#include "citefit/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace citefit::cli {

metrics::Conventions RunConfig::conventions() const {
    if (zero_shift < 0.0) throw config_error("zero_shift must be nonnegative");
    return {metrics::parse_tau_convention(tau_convention), zero_shift};
}

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["tau_convention"] = tau_convention;
    j["zero_shift"] = zero_shift;
    j["strict_years"] = strict_years;
    j["top_n"] = top_n;
    j["seed"] = seed;
    j["output_format"] = output_format;
    if (collection_year) j["collection_year"] = *collection_year;
    if (!name_overrides.empty()) j["name_overrides"] = name_overrides;
    return j.dump();
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw config_error("config file is not valid JSON: " + path);
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "tau_convention") {
                cfg.tau_convention = value.get<std::string>();
                metrics::parse_tau_convention(cfg.tau_convention);
            } else if (key == "zero_shift") {
                cfg.zero_shift = value.get<double>();
            } else if (key == "strict_years") {
                cfg.strict_years = value.get<bool>();
            } else if (key == "top_n") {
                cfg.top_n = value.get<size_t>();
            } else if (key == "seed") {
                cfg.seed = value.get<uint64_t>();
            } else if (key == "output_format") {
                cfg.output_format = value.get<std::string>();
                if (cfg.output_format != "csv" && cfg.output_format != "json")
                    throw config_error("output_format must be csv or json");
            } else if (key == "collection_year") {
                cfg.collection_year = value.get<int>();
            } else if (key == "name_overrides") {
                cfg.name_overrides = value.get<std::string>();
            } else {
                throw config_error("unknown config key \"" + key + "\" in " + path);
            }
        } catch (const nlohmann::json::exception& e) {
            throw config_error("bad value for config key \"" + key + "\": " + e.what());
        }
    }
    return cfg;
}

namespace {

std::string fd(double v) { return util::format_double(v); }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_parent_dir(const std::string& path) {
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

std::ofstream open_artifact(const std::string& path) {
    ensure_parent_dir(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write file: " + path);
    return out;
}

struct Table {
    std::vector<std::string> comments; // emitted after the config echo
    csv::Row columns;
    std::vector<csv::Row> rows;
};

void write_table(const Table& table, const std::string& path, const RunConfig& cfg) {
    auto out = open_artifact(path);
    if (cfg.output_format == "json") {
        nlohmann::json j;
        j["config"] = nlohmann::json::parse(cfg.to_json());
        j["comments"] = table.comments;
        j["columns"] = table.columns;
        j["rows"] = table.rows;
        out << j.dump(2) << '\n';
        return;
    }
    out << "# config " << cfg.to_json() << '\n';
    for (const auto& c : table.comments) out << "# " << c << '\n';
    csv::write_row(out, table.columns);
    for (const auto& row : table.rows) csv::write_row(out, row);
}

void write_json_artifact(nlohmann::json j, const std::string& path, const RunConfig& cfg) {
    j["config"] = nlohmann::json::parse(cfg.to_json());
    auto out = open_artifact(path);
    out << j.dump(2) << '\n';
}

IngestOptions ingest_options(const RunConfig& cfg) {
    IngestOptions options;
    options.strict_years = cfg.strict_years;
    options.collection_year = cfg.collection_year;
    if (!cfg.name_overrides.empty())
        options.name_overrides = names::Overrides::load_csv(cfg.name_overrides);
    return options;
}

Corpus load(const RunConfig& cfg, const std::string& corpus_dir) {
    return io::load_corpus(corpus_dir, ingest_options(cfg));
}

models::FittedFitnessModel load_model(const std::string& fit_path) {
    return models::FittedFitnessModel::from_json(read_text(fit_path));
}

void cmd_ingest(const RunConfig& cfg, const std::string& input, const std::string& format,
                const std::string& out_dir, const std::string& save_format) {
    auto [corpus, report] = io::ingest(input, io::parse_format(format), ingest_options(cfg));
    std::vector<std::string> header = {"config " + cfg.to_json()};
    if (save_format == "jsonl")
        io::save_corpus_jsonl(corpus, out_dir, header);
    else
        io::save_corpus_csv(corpus, out_dir, header);
    write_json_artifact(nlohmann::json::parse(report.to_json()),
                        (fs::path(out_dir) / "ingest_report.json").string(), cfg);
    std::cout << "ingested " << corpus.papers().size() << " papers, " << corpus.scholars().size()
              << " scholars, " << corpus.total_references() << " references -> " << out_dir
              << "\n";
}

Table vars_table(const Corpus& corpus, const RunConfig& cfg) {
    auto conventions = cfg.conventions();
    auto pvars = metrics::paper_vars(corpus, conventions);
    auto svars = metrics::scholar_vars(corpus, pvars, conventions);
    Table t;
    t.comments = {"one row per paper (year..phi_r) and per scholar (rho..phi_r_bar)"};
    t.columns = {"kind", "key", "year", "k", "tau", "phi_a", "phi_v", "phi_r",
                 "rho",  "k_s", "tau_bar", "phi_a_bar", "phi_v_bar", "phi_r_bar"};
    for (const auto& v : pvars)
        t.rows.push_back({"paper", v.paper_id, std::to_string(v.year), fd(v.k), fd(v.tau),
                          fd(v.phi_a), fd(v.phi_v), fd(v.phi_r), "", "", "", "", "", ""});
    for (const auto& v : svars)
        t.rows.push_back({"scholar", v.scholar_id, "", "", "", "", "", "",
                          std::to_string(v.rho), fd(v.k_s), fd(v.tau_bar), fd(v.phi_a_bar),
                          fd(v.phi_v_bar), fd(v.phi_r_bar)});
    return t;
}

void cmd_vars(const RunConfig& cfg, const std::string& corpus_dir, const std::string& out) {
    Corpus corpus = load(cfg, corpus_dir);
    Table t = vars_table(corpus, cfg);
    write_table(t, out, cfg);
    std::cout << "wrote " << t.rows.size() << " variable rows -> " << out << "\n";
}

size_t require_column(const std::unordered_map<std::string, size_t>& index,
                      const std::string& name, const std::string& path) {
    auto it = index.find(name);
    if (it == index.end()) throw parse_error("missing column \"" + name + "\"", path);
    return it->second;
}

double cell_number(const csv::Row& row, size_t col, const std::string& locus) {
    try {
        return std::stod(row.at(col));
    } catch (...) {
        throw parse_error("bad numeric cell \"" + row.at(col) + "\"", locus);
    }
}

void check_vars_config(const std::vector<std::string>& comments, const RunConfig& cfg,
                       const std::string& path) {
    for (const auto& raw : comments) {
        std::string c = util::trim(raw);
        if (!util::starts_with(c, "config ")) continue;
        nlohmann::json j = nlohmann::json::parse(c.substr(7), nullptr, false);
        if (j.is_discarded()) continue;
        if (j.contains("zero_shift") && j["zero_shift"].get<double>() != cfg.zero_shift)
            throw config_error("vars file " + path + " was produced with zero_shift " +
                               fd(j["zero_shift"].get<double>()) + ", current config says " +
                               fd(cfg.zero_shift));
        if (j.contains("tau_convention") &&
            j["tau_convention"].get<std::string>() != cfg.tau_convention)
            throw config_error("vars file " + path + " was produced with tau convention " +
                               j["tau_convention"].get<std::string>() +
                               ", current config says " + cfg.tau_convention);
    }
}

void cmd_fit(const RunConfig& cfg, const std::string& vars_path, const std::string& model_name,
             const std::string& out) {
    auto conventions = cfg.conventions();
    std::vector<std::string> comments;
    auto rows = csv::parse_file(vars_path, &comments);
    if (rows.empty()) throw parse_error("empty vars file", vars_path);
    check_vars_config(comments, cfg, vars_path);

    std::unordered_map<std::string, size_t> col;
    for (size_t i = 0; i < rows[0].size(); ++i) col.emplace(util::trim(rows[0][i]), i);
    size_t c_kind = require_column(col, "kind", vars_path);
    size_t c_key = require_column(col, "key", vars_path);

    models::ModelKind kind = models::parse_model_kind(model_name);
    models::FittedFitnessModel model;
    if (kind == models::ModelKind::paper) {
        size_t c_year = require_column(col, "year", vars_path);
        size_t c_k = require_column(col, "k", vars_path);
        size_t c_tau = require_column(col, "tau", vars_path);
        size_t c_pa = require_column(col, "phi_a", vars_path);
        size_t c_pv = require_column(col, "phi_v", vars_path);
        size_t c_pr = require_column(col, "phi_r", vars_path);
        std::vector<metrics::PaperFitnessVars> vars;
        for (size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() < 2 || rows[i][c_kind] != "paper") continue;
            std::string locus = vars_path + " row " + std::to_string(i + 1);
            metrics::PaperFitnessVars v;
            v.paper_id = rows[i][c_key];
            v.year = static_cast<int>(cell_number(rows[i], c_year, locus));
            v.k = cell_number(rows[i], c_k, locus);
            v.tau = cell_number(rows[i], c_tau, locus);
            v.phi_a = cell_number(rows[i], c_pa, locus);
            v.phi_v = cell_number(rows[i], c_pv, locus);
            v.phi_r = cell_number(rows[i], c_pr, locus);
            vars.push_back(std::move(v));
        }
        model = models::fit_paper_model(vars, conventions);
    } else {
        size_t c_rho = require_column(col, "rho", vars_path);
        size_t c_ks = require_column(col, "k_s", vars_path);
        size_t c_tb = require_column(col, "tau_bar", vars_path);
        size_t c_ab = require_column(col, "phi_a_bar", vars_path);
        size_t c_vb = require_column(col, "phi_v_bar", vars_path);
        size_t c_rb = require_column(col, "phi_r_bar", vars_path);
        std::vector<metrics::ScholarFitnessVars> vars;
        for (size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() < 2 || rows[i][c_kind] != "scholar") continue;
            std::string locus = vars_path + " row " + std::to_string(i + 1);
            metrics::ScholarFitnessVars v;
            v.scholar_id = rows[i][c_key];
            v.rho = static_cast<size_t>(cell_number(rows[i], c_rho, locus));
            v.k_s = cell_number(rows[i], c_ks, locus);
            v.tau_bar = cell_number(rows[i], c_tb, locus);
            v.phi_a_bar = cell_number(rows[i], c_ab, locus);
            v.phi_v_bar = cell_number(rows[i], c_vb, locus);
            v.phi_r_bar = cell_number(rows[i], c_rb, locus);
            vars.push_back(std::move(v));
        }
        model = models::fit_scholar_model(vars, conventions);
    }
    write_json_artifact(nlohmann::json::parse(model.to_json()), out, cfg);
    std::cout << "fitted " << model_name << " model on " << model.rows_used << " rows, R^2 "
              << fd(model.fit.r_squared) << " -> " << out << "\n";
}

void cmd_rank(const RunConfig& cfg, const std::string& fit_path, const std::string& corpus_dir,
              const std::string& benchmark_path, const std::string& by, const std::string& out) {
    auto model = load_model(fit_path);
    Corpus corpus = load(cfg, corpus_dir);
    std::optional<models::Benchmark> benchmark;
    if (!benchmark_path.empty()) benchmark = io::read_benchmark_csv(benchmark_path);
    auto table = models::score_table(model, corpus, benchmark);
    auto result = models::rank_and_correlate(table, models::parse_rank_by(by), cfg.top_n);

    Table t;
    t.comments.push_back("model " + models::to_string(model.kind) + ", ranked by " + by +
                         ", top " + std::to_string(cfg.top_n));
    if (result.r_k) {
        t.comments.push_back("r_k " + fd(*result.r_k));
        t.comments.push_back("r_k_t " + fd(*result.r_k_t));
        t.comments.push_back("r_k_tf " + fd(*result.r_k_tf));
    }
    if (!table.unmatched_benchmark_keys.empty()) {
        std::string warn = "unmatched_benchmark_keys";
        for (const auto& key : table.unmatched_benchmark_keys) warn += " " + key;
        t.comments.push_back(warn);
    }
    t.columns = {"rank", "key", "k", "k_t", "k_tf", "k_acm"};
    for (size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        t.rows.push_back({std::to_string(i + 1), r.key, fd(r.k), fd(r.k_t), fd(r.k_tf),
                          r.k_acm ? fd(*r.k_acm) : ""});
    }
    write_table(t, out, cfg);
    std::cout << "ranked " << result.rows.size() << " entities by " << by << " -> " << out << "\n";
}

std::vector<double> select_scores(const Corpus& corpus, const std::string& fit_path,
                                  distributions::Normalize normalize, std::string& label) {
    std::vector<double> scores;
    if (normalize == distributions::Normalize::none) {
        label = "k";
        for (const auto& p : corpus.papers()) scores.push_back(static_cast<double>(p.k));
        return scores;
    }
    if (fit_path.empty())
        throw config_error("normalized scores need --fit pointing at a fitted model");
    auto model = load_model(fit_path);
    auto table = models::score_table(model, corpus);
    label = normalize == distributions::Normalize::k_t ? "k_t" : "k_tf";
    if (model.kind == models::ModelKind::scholar) label += " (scholars)";
    for (const auto& row : table.rows)
        scores.push_back(normalize == distributions::Normalize::k_t ? row.k_t : row.k_tf);
    return scores;
}

void cmd_dist(const RunConfig& cfg, const std::string& corpus_dir, const std::string& fit_path,
              const std::string& normalize_name, const std::string& kind_name,
              const std::string& binning_name, const std::string& tail_name,
              const std::string& out) {
    Corpus corpus = load(cfg, corpus_dir);
    auto normalize = distributions::parse_normalize(normalize_name);
    std::string label;
    auto scores = select_scores(corpus, fit_path, normalize, label);
    auto series = distributions::distribution(scores, distributions::parse_series_kind(kind_name),
                                              distributions::parse_binning(binning_name));
    Table t;
    t.comments.push_back("scores " + label + ", kind " + kind_name + ", binning " + binning_name);
    t.comments.push_back("population " + std::to_string(series.population) + ", zero_count " +
                         std::to_string(series.zero_count));
    if (tail_name != "none") {
        auto fit = distributions::tail_fit(series, distributions::parse_tail_family(tail_name));
        nlohmann::json j = {{"family", distributions::to_string(fit.family)},
                            {"slope", fit.slope},
                            {"intercept", fit.intercept},
                            {"r_squared", fit.r_squared},
                            {"points_used", fit.points_used}};
        t.comments.push_back("tail_fit " + j.dump());
    }
    t.columns = {"x", "y"};
    for (const auto& p : series.points) t.rows.push_back({fd(p.x), fd(p.y)});
    write_table(t, out, cfg);
    std::cout << "distribution over " << series.population << " scores, " << series.points.size()
              << " bins -> " << out << "\n";
}

void cmd_trend(const RunConfig& cfg, const std::string& corpus_dir, const std::string& fit_path,
               const std::string& normalize_name, const std::string& out) {
    Corpus corpus = load(cfg, corpus_dir);
    auto normalize = distributions::parse_normalize(normalize_name);
    std::optional<models::FittedFitnessModel> model;
    if (normalize != distributions::Normalize::none) {
        if (fit_path.empty())
            throw config_error("normalized trends need --fit pointing at a fitted model");
        model = load_model(fit_path);
    }
    auto series = distributions::trend(corpus, normalize, model ? &*model : nullptr);
    Table t;
    t.comments.push_back("normalize " + normalize_name +
                         "; kind=score rows are per-paper values, kind=mean rows are yearly "
                         "arithmetic means (empty when the year has no papers)");
    t.columns = {"year", "kind", "value"};
    for (const auto& row : series.years) {
        for (double s : row.scores)
            t.rows.push_back({std::to_string(row.year), "score", fd(s)});
        t.rows.push_back({std::to_string(row.year), "mean", row.mean ? fd(*row.mean) : ""});
    }
    write_table(t, out, cfg);
    std::cout << "trend over " << series.years.size() << " years -> " << out << "\n";
}

void cmd_authors(const RunConfig& cfg, const std::string& corpus_dir, const std::string& fit_path,
                 const std::string& out, const std::string& team_out_arg) {
    Corpus corpus = load(cfg, corpus_dir);
    auto model = load_model(fit_path);
    auto report = distributions::authorship_analysis(corpus, model);

    Table groups;
    groups.comments.push_back("mean scores per author-count group");
    groups.columns = {"authors", "n_papers", "mean_k", "mean_k_t", "mean_k_tf"};
    for (const auto& g : report.groups)
        groups.rows.push_back({std::to_string(g.authors), std::to_string(g.n_papers),
                               fd(g.mean_k), fd(g.mean_k_t), fd(g.mean_k_tf)});
    write_table(groups, out, cfg);

    std::string team_out = team_out_arg;
    if (team_out.empty()) {
        fs::path p(out);
        team_out = (p.parent_path() / (p.stem().string() + "_team" + p.extension().string()))
                       .string();
    }
    Table team;
    team.comments.push_back("mean authors per paper by year");
    team.columns = {"year", "papers", "mean_authors"};
    for (const auto& row : report.team_size.years)
        team.rows.push_back({std::to_string(row.year), std::to_string(row.scores.size()),
                             row.mean ? fd(*row.mean) : ""});
    write_table(team, team_out, cfg);
    std::cout << "authorship groups -> " << out << ", team sizes -> " << team_out << "\n";
}

struct SimFlags {
    size_t n = 1000;
    size_t m = 3;
    std::string fitness = "constant";
    std::string attachment = "degree";
    std::vector<size_t> snapshots;
    bool as_corpus = false;
    double years_per_step = 1.0;
    int base_year = 1970;
};

void cmd_simulate(const RunConfig& cfg, const SimFlags& flags, const std::string& out_dir) {
    netsim::SimConfig sim;
    sim.n_final = flags.n;
    sim.m = flags.m;
    sim.fitness = netsim::parse_fitness_dist(flags.fitness);
    if (sim.fitness == netsim::FitnessDist::custom)
        throw config_error("custom fitness lists are available through the library API only");
    sim.attachment = netsim::parse_attachment(flags.attachment);
    sim.seed = cfg.seed;
    sim.snapshot_steps = flags.snapshots;
    auto net = netsim::grow(sim);
    double beta = netsim::estimate_beta(net);

    fs::path base(out_dir);
    fs::create_directories(base);
    Table nodes;
    nodes.columns = {"node", "t_i", "eta", "degree", "in_degree"};
    for (const auto& n : net.nodes)
        nodes.rows.push_back({"n" + std::to_string(n.t_i), std::to_string(n.t_i), fd(n.eta),
                              std::to_string(n.degree), std::to_string(n.in_degree)});
    write_table(nodes, (base / "nodes.csv").string(), cfg);

    Table edges;
    edges.comments.push_back("directed new -> existing");
    edges.columns = {"from", "to"};
    for (const auto& [from, to] : net.edges)
        edges.rows.push_back({"n" + std::to_string(net.nodes[from].t_i),
                              "n" + std::to_string(net.nodes[to].t_i)});
    write_table(edges, (base / "edges.csv").string(), cfg);

    nlohmann::json j;
    j["sim"] = {{"n", sim.n_final},
                {"m", sim.m},
                {"fitness", netsim::to_string(sim.fitness)},
                {"attachment", netsim::to_string(sim.attachment)},
                {"seed", sim.seed}};
    j["n_nodes"] = net.nodes.size();
    j["n_edges"] = net.edges.size();
    j["beta_estimate"] = beta;
    write_json_artifact(std::move(j), (base / "sim.json").string(), cfg);

    if (flags.as_corpus) {
        Corpus corpus = netsim::export_as_corpus(net, flags.years_per_step, flags.base_year);
        io::save_corpus_csv(corpus, (base / "corpus").string(), {"config " + cfg.to_json()});
    }
    std::cout << "simulated " << net.nodes.size() << " nodes, " << net.edges.size()
              << " edges, beta estimate " << fd(beta) << " -> " << out_dir << "\n";
}

void cmd_pipeline(const RunConfig& cfg, const std::string& input, const std::string& format,
                  const std::string& benchmark_path, const std::string& out_dir) {
    fs::path base(out_dir);
    std::string corpus_dir = (base / "corpus").string();
    std::string vars_path = (base / "vars.csv").string();
    std::string fit_paper = (base / "fit_paper.json").string();
    std::string fit_scholar = (base / "fit_scholar.json").string();
    auto stage = [](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const error& e) {
            throw error(name + ": " + e.what());
        }
    };
    stage("ingest", [&] { cmd_ingest(cfg, input, format, corpus_dir, "csv"); });
    stage("vars", [&] { cmd_vars(cfg, corpus_dir, vars_path); });
    stage("fit", [&] { cmd_fit(cfg, vars_path, "paper", fit_paper); });
    stage("fit", [&] { cmd_fit(cfg, vars_path, "scholar", fit_scholar); });
    stage("rank", [&] {
        cmd_rank(cfg, fit_paper, corpus_dir, benchmark_path, "k_t", (base / "rank.csv").string());
    });
    stage("dist", [&] {
        cmd_dist(cfg, corpus_dir, "", "none", "discrete", "unit",
                 "none", (base / "dist_k.csv").string());
    });
    stage("dist", [&] {
        cmd_dist(cfg, corpus_dir, fit_paper, "ktf", "cumulative", "log", "none",
                 (base / "dist_ktf_cumulative.csv").string());
    });
    stage("trend", [&] { cmd_trend(cfg, corpus_dir, "", "none", (base / "trend_k.csv").string()); });
    stage("trend", [&] {
        cmd_trend(cfg, corpus_dir, fit_paper, "kt", (base / "trend_kt.csv").string());
    });
    stage("authors", [&] {
        cmd_authors(cfg, corpus_dir, fit_paper, (base / "authors.csv").string(), "");
    });
    std::cout << "pipeline artifacts -> " << out_dir << "\n";
}

void emit_error(const std::string& stage, const std::string& type, const std::string& message,
                const std::vector<std::string>& columns = {}) {
    nlohmann::json j;
    j["error"] = {{"stage", stage}, {"type", type}, {"message", message}};
    if (!columns.empty()) j["error"]["columns"] = columns;
    std::cerr << j.dump() << "\n";
}

} // namespace

int run(const std::vector<std::string>& args) {
    RunConfig cfg;
    try {
        std::string config_path;
        for (size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size())
                config_path = args[i + 1];
            else if (util::starts_with(args[i], "--config="))
                config_path = args[i].substr(9);
        }
        if (!config_path.empty()) cfg = RunConfig::from_json_file(config_path);
    } catch (const error& e) {
        emit_error("config", "config", e.what());
        return 1;
    }

    CLI::App app{"citation-network fitness analysis"};
    app.require_subcommand(1);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file; flags override its values");
    app.add_option("--tau", cfg.tau_convention, "tau convention: age_plus_one | age | ratio")
        ->check(CLI::IsMember({"age_plus_one", "age", "ratio"}));
    app.add_option("--shift", cfg.zero_shift, "zero shift added to k and phi before logs");
    app.add_flag("--strict-years,!--no-strict-years", cfg.strict_years,
                 "drop references that cite into the future");
    app.add_option("--top", cfg.top_n, "rows kept by rank");
    app.add_option("--seed", cfg.seed, "RNG seed for simulations");
    app.add_option("--output-format", cfg.output_format, "tabular artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
    int collection_year_flag = 0;
    auto* cy_opt = app.add_option("--collection-year", collection_year_flag,
                                  "census year override (default: latest publication year)");
    app.add_option("--name-overrides", cfg.name_overrides,
                   "CSV with raw,canonical author-name overrides");

    struct {
        std::string input, format = "xml", out, save_format = "csv";
    } ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "read publications and build a corpus");
    ingest_cmd->fallthrough();
    ingest_cmd->add_option("--input", ingest.input, "publication file (or CSV directory)")
        ->required();
    ingest_cmd->add_option("--format", ingest.format, "input format")
        ->check(CLI::IsMember({"xml", "csv", "jsonl"}));
    ingest_cmd->add_option("--out", ingest.out, "corpus output directory")->required();
    ingest_cmd->add_option("--save-format", ingest.save_format, "corpus storage format")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    struct {
        std::string corpus, out;
    } vars;
    auto* vars_cmd = app.add_subcommand("vars", "compute fitness variables per paper and scholar");
    vars_cmd->fallthrough();
    vars_cmd->add_option("--corpus", vars.corpus, "corpus directory")->required();
    vars_cmd->add_option("--out", vars.out, "variables table path")->required();

    struct {
        std::string vars, model, out;
    } fit;
    auto* fit_cmd = app.add_subcommand("fit", "fit a fitness model on a variables table");
    fit_cmd->fallthrough();
    fit_cmd->add_option("--vars", fit.vars, "variables table from `vars`")->required();
    fit_cmd->add_option("--model", fit.model, "model kind")
        ->required()
        ->check(CLI::IsMember({"paper", "scholar"}));
    fit_cmd->add_option("--out", fit.out, "fit report path (JSON)")->required();

    struct {
        std::string fit, corpus, benchmark, by = "k_t", out;
    } rank;
    auto* rank_cmd = app.add_subcommand("rank", "rank entities and correlate against a benchmark");
    rank_cmd->fallthrough();
    rank_cmd->add_option("--fit", rank.fit, "fit report from `fit`")->required();
    rank_cmd->add_option("--corpus", rank.corpus, "corpus directory")->required();
    rank_cmd->add_option("--benchmark", rank.benchmark, "key,score CSV joined by entity key");
    rank_cmd->add_option("--by", rank.by, "ranking column")
        ->check(CLI::IsMember({"k", "k_t", "k_tf"}));
    rank_cmd->add_option("--out", rank.out, "ranking table path")->required();

    struct {
        std::string corpus, fit, normalize = "none", kind = "discrete", binning = "unit",
                    tail = "none", out;
    } dist;
    auto* dist_cmd = app.add_subcommand("dist", "binned score distributions");
    dist_cmd->fallthrough();
    dist_cmd->add_option("--corpus", dist.corpus, "corpus directory")->required();
    dist_cmd->add_option("--fit", dist.fit, "fit report (needed for kt/ktf scores)");
    dist_cmd->add_option("--normalize", dist.normalize, "score column")
        ->check(CLI::IsMember({"none", "kt", "ktf"}));
    dist_cmd->add_option("--kind", dist.kind, "series kind")
        ->check(CLI::IsMember({"discrete", "cumulative"}));
    dist_cmd->add_option("--binning", dist.binning, "bin rule")
        ->check(CLI::IsMember({"unit", "log"}));
    dist_cmd->add_option("--tail", dist.tail, "also fit a tail family")
        ->check(CLI::IsMember({"none", "power_law", "exponential"}));
    dist_cmd->add_option("--out", dist.out, "series table path")->required();

    struct {
        std::string corpus, fit, normalize = "none", out;
    } trend;
    auto* trend_cmd = app.add_subcommand("trend", "yearly score series with means");
    trend_cmd->fallthrough();
    trend_cmd->add_option("--corpus", trend.corpus, "corpus directory")->required();
    trend_cmd->add_option("--fit", trend.fit, "fit report (needed for kt/ktf scores)");
    trend_cmd->add_option("--normalize", trend.normalize, "score column")
        ->check(CLI::IsMember({"none", "kt", "ktf"}));
    trend_cmd->add_option("--out", trend.out, "trend table path")->required();

    struct {
        std::string corpus, fit, out, team_out;
    } authors;
    auto* authors_cmd = app.add_subcommand("authors", "score summaries by author count");
    authors_cmd->fallthrough();
    authors_cmd->add_option("--corpus", authors.corpus, "corpus directory")->required();
    authors_cmd->add_option("--fit", authors.fit, "fit report")->required();
    authors_cmd->add_option("--out", authors.out, "group table path")->required();
    authors_cmd->add_option("--team-out", authors.team_out,
                            "team-size trend path (default: <out>_team)");

    SimFlags sim;
    std::string sim_out;
    auto* simulate_cmd = app.add_subcommand("simulate", "grow a preferential-attachment network");
    simulate_cmd->fallthrough();
    simulate_cmd->add_option("--n", sim.n, "final node count");
    simulate_cmd->add_option("--m", sim.m, "edges per new node");
    simulate_cmd->add_option("--fitness", sim.fitness, "fitness distribution")
        ->check(CLI::IsMember({"constant", "uniform"}));
    simulate_cmd->add_option("--attachment", sim.attachment, "attachment rule")
        ->check(CLI::IsMember({"degree", "degree_times_fitness"}));
    simulate_cmd->add_option("--snapshot", sim.snapshots, "extra degree snapshot steps");
    simulate_cmd->add_flag("--as-corpus", sim.as_corpus, "also export as a synthetic corpus");
    simulate_cmd->add_option("--years-per-step", sim.years_per_step,
                             "corpus export: years per growth step");
    simulate_cmd->add_option("--base-year", sim.base_year, "corpus export: year of node 1");
    simulate_cmd->add_option("--out", sim_out, "output directory")->required();

    struct {
        std::string input, format = "xml", benchmark, out;
    } pipeline;
    auto* pipeline_cmd = app.add_subcommand("pipeline", "ingest through reports in one run");
    pipeline_cmd->fallthrough();
    pipeline_cmd->add_option("--input", pipeline.input, "publication file (or CSV directory)")
        ->required();
    pipeline_cmd->add_option("--format", pipeline.format, "input format")
        ->check(CLI::IsMember({"xml", "csv", "jsonl"}));
    pipeline_cmd->add_option("--benchmark", pipeline.benchmark, "key,score CSV for rank");
    pipeline_cmd->add_option("--out", pipeline.out, "output directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        emit_error("usage", "usage", e.what());
        return 2;
    }
    if (cy_opt->count() > 0) cfg.collection_year = collection_year_flag;

    std::string stage = "run";
    try {
        if (ingest_cmd->parsed()) {
            stage = "ingest";
            cmd_ingest(cfg, ingest.input, ingest.format, ingest.out, ingest.save_format);
        } else if (vars_cmd->parsed()) {
            stage = "vars";
            cmd_vars(cfg, vars.corpus, vars.out);
        } else if (fit_cmd->parsed()) {
            stage = "fit";
            cmd_fit(cfg, fit.vars, fit.model, fit.out);
        } else if (rank_cmd->parsed()) {
            stage = "rank";
            cmd_rank(cfg, rank.fit, rank.corpus, rank.benchmark, rank.by, rank.out);
        } else if (dist_cmd->parsed()) {
            stage = "dist";
            cmd_dist(cfg, dist.corpus, dist.fit, dist.normalize, dist.kind, dist.binning,
                     dist.tail, dist.out);
        } else if (trend_cmd->parsed()) {
            stage = "trend";
            cmd_trend(cfg, trend.corpus, trend.fit, trend.normalize, trend.out);
        } else if (authors_cmd->parsed()) {
            stage = "authors";
            cmd_authors(cfg, authors.corpus, authors.fit, authors.out, authors.team_out);
        } else if (simulate_cmd->parsed()) {
            stage = "simulate";
            cmd_simulate(cfg, sim, sim_out);
        } else if (pipeline_cmd->parsed()) {
            stage = "pipeline";
            cmd_pipeline(cfg, pipeline.input, pipeline.format, pipeline.benchmark, pipeline.out);
        }
    } catch (const rank_deficiency_error& e) {
        emit_error(stage, "rank_deficiency", e.what(), e.columns());
        return 1;
    } catch (const parse_error& e) {
        emit_error(stage, "parse", e.what());
        return 1;
    } catch (const config_error& e) {
        emit_error(stage, "config", e.what());
        return 1;
    } catch (const domain_error& e) {
        emit_error(stage, "domain", e.what());
        return 1;
    } catch (const error& e) {
        emit_error(stage, "error", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error(stage, "internal", e.what());
        return 1;
    }
    return 0;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace citefit::cli
