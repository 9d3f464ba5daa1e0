#pragma once
// Command-line surface. Subcommands:
//   generate      run the hypothesis pipeline (scripted fixtures or live)
//   eval          bt | davidson | rasch | similarity | metrics
//   kg            import | query
//   fixtures      bake (write the bundled demo session to disk)
//   trace         show (summarize a run trace)
// Exit codes: 0 success, 1 operational error, 2 ran-but-everything-discarded.
// Config precedence, highest first: environment, command-line flags, config
// file, built-in defaults.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "case_study.hpp"
#include "core.hpp"
#include "date.hpp"
#include "embed.hpp"
#include "gateway.hpp"
#include "kg.hpp"
#include "literature.hpp"
#include "orchestrator.hpp"
#include "stats/bradley_terry.hpp"
#include "stats/classification.hpp"
#include "stats/quasi_variance.hpp"
#include "stats/rasch.hpp"
#include "stats/similarity.hpp"
#include "trace.hpp"

namespace hypoforge::cli {

namespace detail {

inline std::optional<std::string> env_value(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

// key=value lines; '#' starts a comment; unknown keys are an error so typos
// don't silently fall back to defaults.
inline void apply_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        try {
            if (key == "max_cycles") cfg.max_cycles = std::stoi(value);
            else if (key == "n_initial") cfg.n_initial_hypotheses = std::stoi(value);
            else if (key == "accept_threshold") cfg.accept_threshold = std::stoi(value);
            else if (key == "emit_floor") cfg.emit_floor = std::stoi(value);
            else if (key == "cutoff") cfg.temporal_cutoff = parse_date(value);
            else if (key == "temperature") cfg.temperature = std::stod(value);
            else if (key == "seed") cfg.seed = static_cast<unsigned>(std::stoul(value));
            else if (key == "token_limit") cfg.token_limit = std::stol(value);
            else if (key == "min_hits") cfg.relaxation_min_hits = std::stoi(value);
            else if (key == "emit_plan") cfg.emit_plan = value != "0" && value != "false";
            else
                throw InputError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad value for " + key);
        }
    }
}

inline void apply_env_overrides(PipelineConfig& cfg) {
    if (auto v = env_value("HYPOFORGE_SEED")) cfg.seed = static_cast<unsigned>(std::stoul(*v));
    if (auto v = env_value("HYPOFORGE_MAX_CYCLES")) cfg.max_cycles = std::stoi(*v);
    if (auto v = env_value("HYPOFORGE_ACCEPT_THRESHOLD")) cfg.accept_threshold = std::stoi(*v);
    if (auto v = env_value("HYPOFORGE_EMIT_FLOOR")) cfg.emit_floor = std::stoi(*v);
    if (auto v = env_value("HYPOFORGE_CUTOFF")) cfg.temporal_cutoff = parse_date(*v);
}

inline std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    for (auto& part : split(csv, ','))
        if (std::string t = trim(part); !t.empty()) out.push_back(t);
    return out;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

}  // namespace detail

// --------------------------------------------------------------------------
// generate
// --------------------------------------------------------------------------

struct GenerateArgs {
    std::string topic;
    std::string keywords_csv;
    std::string config_file;
    std::string scripted_dir;
    std::string graph_file;
    std::string cutoff;
    std::string out_dir = "runs";
    int max_cycles = -1;
    int accept_threshold = -1;
    int emit_floor = -1;
    long seed = -1;
};

inline int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
    PipelineConfig cfg;
    if (!args.config_file.empty()) detail::apply_config_file(cfg, args.config_file);
    if (args.max_cycles >= 0) cfg.max_cycles = args.max_cycles;
    if (args.accept_threshold >= 0) cfg.accept_threshold = args.accept_threshold;
    if (args.emit_floor >= 0) cfg.emit_floor = args.emit_floor;
    if (args.seed >= 0) cfg.seed = static_cast<unsigned>(args.seed);
    if (!args.cutoff.empty()) cfg.temporal_cutoff = parse_date(args.cutoff);
    detail::apply_env_overrides(cfg);
    cfg.validate();

    std::filesystem::create_directories(args.out_dir);
    TraceSink trace(args.out_dir + "/trace.jsonl");
    HashedTokenEmbedder embedder;
    Services services;
    services.trace = &trace;
    services.embedder = &embedder;

    // Owners for whichever backend/graph/literature trio gets wired up.
    std::unique_ptr<ChatBackend> backend;
    std::unique_ptr<SearchClient> literature;
    GraphStore graph;

    if (!args.scripted_dir.empty()) {
        backend = std::make_unique<ScriptedBackend>(args.scripted_dir + "/llm");
        graph = load_graph_file(args.scripted_dir + "/graph.tsv");
        literature =
            std::make_unique<CorpusSearchClient>(load_corpus_jsonl(args.scripted_dir + "/corpus.jsonl"));
    } else {
#ifdef HYPOFORGE_ENABLE_HTTPLIB
        LiveBackendConfig live_cfg;
        PubMedConfig pubmed_cfg;
        try {
            live_cfg = LiveBackendConfig::from_env();
            pubmed_cfg = PubMedConfig::from_env();
        } catch (const InputError& e) {
            err << "error: live mode needs credentials: " << e.what() << "\n"
                << "set HYPOFORGE_LLM_URL (and optionally HYPOFORGE_LLM_KEY, "
                   "HYPOFORGE_NCBI_KEY), or pass --scripted <dir>\n";
            return 1;
        }
        if (args.graph_file.empty()) {
            err << "error: live mode needs --graph <tsv>\n";
            return 1;
        }
        static HttplibTransport transport;  // shared by both live clients
        backend = std::make_unique<LiveBackend>(live_cfg, transport);
        graph = load_graph_file(args.graph_file);
        literature = std::make_unique<PubMedClient>(pubmed_cfg, transport);
#else
        err << "error: this build has no HTTP transport; use --scripted <dir>\n";
        return 1;
#endif
    }
    services.backend = backend.get();
    services.graph = &graph;
    services.literature = literature.get();

    RunResult result = run_pipeline(args.topic, cfg, services, detail::split_list(args.keywords_csv));

    {
        std::ofstream json_out(args.out_dir + "/run.json", std::ios::binary);
        json_out << run_result_to_json(result).dump(2) << "\n";
    }

    out << "run " << result.run_id << ": " << result.outputs.size() << " emitted, "
        << result.discarded.size() << " discarded\n";
    for (const auto& ranked : result.outputs) {
        const auto& h = ranked.hypothesis;
        const auto& s = ranked.scores;
        out << "[" << to_string(ranked.status) << "] " << h.id << " (generation " << h.generation
            << ")  novelty " << s.novelty << ", relevance " << s.relevance << ", significance "
            << s.significance << ", verifiability " << s.verifiability << " -> "
            << overall_score(s) << "/20\n    " << h.text << "\n";
    }
    out << "trace: " << result.trace_path << "\n"
        << "tokens: " << result.tokens_in << " in, " << result.tokens_out << " out\n";
    detail::print_warnings(result.warnings, err);
    return result.outputs.empty() ? 2 : 0;
}

// --------------------------------------------------------------------------
// eval
// --------------------------------------------------------------------------

inline std::vector<ComparisonRecord> read_comparisons_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open: " + path);
    return read_comparisons_csv(in);
}

inline int cmd_eval_bt(const std::string& in_path, const std::string& metric,
                       bool order_effect, bool log_scale, const std::string& out_path,
                       std::ostream& out, std::ostream& err) {
    auto records = read_comparisons_file(in_path);
    if (metric != "all") {
        Metric want = metric_from_string(metric);
        std::erase_if(records, [&](const ComparisonRecord& r) { return r.metric != want; });
        if (records.empty()) throw InputError("no records for metric: " + metric);
    }
    BTFit fit = fit_bradley_terry(records, order_effect);
    QuasiVariances qv = quasi_variances(fit, log_scale);

    std::ostream* dest = &out;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        dest = &file;
    }
    write_csv_row(*dest, {"system", "beta", "quasi_variance", "lo95", "hi95"});
    for (const auto& sys : fit.systems) {
        auto [lo, hi] = comparison_interval(fit.beta_of(sys), qv.of(sys));
        write_csv_row(*dest, {sys, detail::format_double(fit.beta_of(sys)),
                              detail::format_double(qv.of(sys)), detail::format_double(lo),
                              detail::format_double(hi)});
    }
    if (order_effect) out << "alpha (order effect) = " << detail::format_double(fit.alpha) << "\n";
    out << "loglik = " << detail::format_double(fit.loglik)
        << (fit.converged ? ", converged" : ", NOT converged") << "\n";
    double worst = 0;
    for (const auto& [a, b, e] : qv.relative_errors) worst = std::max(worst, std::abs(e));
    out << "quasi-variance worst relative error = " << detail::format_double(worst) << "\n";
    detail::print_warnings(fit.warnings, err);
    for (const auto& n : qv.notes) err << "note: " << n << "\n";
    return 0;
}

inline int cmd_eval_davidson(const std::string& in_path, const std::string& metric,
                             const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto records = read_comparisons_file(in_path);
    if (metric != "all") {
        Metric want = metric_from_string(metric);
        std::erase_if(records, [&](const ComparisonRecord& r) { return r.metric != want; });
        if (records.empty()) throw InputError("no records for metric: " + metric);
    }
    DavidsonFit fit = fit_davidson(records);
    std::ostream* dest = &out;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        dest = &file;
    }
    write_csv_row(*dest, {"system", "beta"});
    for (const auto& sys : fit.systems)
        write_csv_row(*dest, {sys, detail::format_double(fit.beta.at(sys))});
    out << "nu (tie propensity) = " << detail::format_double(fit.nu) << "\n"
        << "loglik = " << detail::format_double(fit.loglik)
        << (fit.converged ? ", converged" : ", NOT converged") << "\n";
    detail::print_warnings(fit.warnings, err);
    return 0;
}

inline int cmd_eval_rasch(const std::string& in_path, int k, double sigma_u, double sigma_v,
                          const std::string& out_path, std::ostream& out, std::ostream& err) {
    std::ifstream in(in_path);
    if (!in) throw InputError("cannot open: " + in_path);
    RaschData data = read_ratings_csv(in, k);
    RaschOptions opts;
    opts.sigma_u = sigma_u;
    opts.sigma_v = sigma_v;
    RaschFit fit = fit_rasch_map(data, opts);

    std::ostream* dest = &out;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        dest = &file;
    }
    write_csv_row(*dest, {"parameter", "value", "se"});
    for (size_t i = 0; i < fit.tau.size(); ++i)
        write_csv_row(*dest, {"tau_" + std::to_string(i + 1), detail::format_double(fit.tau[i]),
                              detail::format_double(fit.tau_se[i])});
    for (const auto& [m, b] : fit.beta)
        write_csv_row(*dest, {"beta[" + m + "]", detail::format_double(b),
                              detail::format_double(fit.beta_se.at(m))});
    for (const auto& [r, u] : fit.u)
        write_csv_row(*dest, {"u[" + r + "]", detail::format_double(u),
                              detail::format_double(fit.u_se.at(r))});
    for (const auto& [cell, v] : fit.v)
        write_csv_row(*dest, {"v[" + cell.first + "," + cell.second + "]",
                              detail::format_double(v), detail::format_double(fit.v_se.at(cell))});
    out << "thresholds:";
    for (double t : fit.tau) out << " " << detail::format_double(t);
    out << "\nlogpost = " << detail::format_double(fit.logpost)
        << (fit.converged ? ", converged" : ", NOT converged") << "\n";
    detail::print_warnings(fit.warnings, err);
    return 0;
}

inline int cmd_eval_similarity(const std::string& generated_path, const std::string& gold_path,
                               const std::string& out_path, std::ostream& out, std::ostream& err) {
    std::ifstream gen_in(generated_path);
    if (!gen_in) throw InputError("cannot open: " + generated_path);
    std::vector<std::string> generated;
    for (std::string line; std::getline(gen_in, line);)
        if (std::string t = trim(line); !t.empty()) generated.push_back(t);

    std::ifstream gold_in(gold_path);
    if (!gold_in) throw InputError("cannot open: " + gold_path);
    auto rows = parse_csv(gold_in);
    std::vector<GoldHypothesis> gold;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (i == 0 && !row.empty() && row[0] == "background_id") continue;
        if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
        if (row.size() != 2)
            throw ParseError(gold_path + " row " + std::to_string(i + 1) +
                             ": expected background_id,text");
        gold.push_back({row[1], row[0]});
    }
    if (generated.size() != gold.size())
        throw InputError("generated and gold counts differ (pairing is by line order)");
    std::vector<size_t> pairing(generated.size());
    for (size_t i = 0; i < pairing.size(); ++i) pairing[i] = i;

    HashedTokenEmbedder embedder;
    SimilarityEval eval = temporal_similarity_eval(generated, gold, pairing, embedder);
    std::ostream* dest = &out;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        dest = &file;
    }
    write_similarity_csv(eval, *dest);
    out << "matched median = " << detail::format_double(eval.matched_median) << " ("
        << eval.matched.size() << " pairs)\n"
        << "null median = " << detail::format_double(eval.null_median) << " ("
        << eval.null_sims.size() << " pairs)\n";
    (void)err;
    return 0;
}

inline int cmd_eval_metrics(const std::string& in_path, std::ostream& out, std::ostream& err) {
    std::ifstream in(in_path);
    if (!in) throw InputError("cannot open: " + in_path);
    auto rows = parse_csv(in);
    std::vector<Relation> predicted, truth;
    auto label = [&](const std::string& tok, size_t row) {
        if (tok == "positive") return Relation::Positive;
        if (tok == "negative") return Relation::Negative;
        throw ParseError(in_path + " row " + std::to_string(row) + ": unknown label: " + tok);
    };
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (i == 0 && !row.empty() && row[0] == "predicted") continue;
        if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
        if (row.size() != 2)
            throw ParseError(in_path + " row " + std::to_string(i + 1) +
                             ": expected predicted,truth");
        predicted.push_back(label(row[0], i + 1));
        truth.push_back(label(row[1], i + 1));
    }
    MetricsReport report = classification_metrics(predicted, truth);
    out << "accuracy = " << detail::format_double(report.accuracy) << "\n";
    for (const auto& [name, m] : report.per_class)
        out << name << ": precision " << detail::format_double(m.precision) << ", recall "
            << detail::format_double(m.recall) << ", f1 " << detail::format_double(m.f1)
            << ", support " << m.support << "\n";
    out << "macro: precision " << detail::format_double(report.macro.precision) << ", recall "
        << detail::format_double(report.macro.recall) << ", f1 "
        << detail::format_double(report.macro.f1) << ", support " << report.macro.support << "\n";
    (void)err;
    return 0;
}

// --------------------------------------------------------------------------
// kg
// --------------------------------------------------------------------------

inline int cmd_kg_import(const std::string& in_path, bool primekg, const std::string& out_path,
                         std::ostream& out, std::ostream& err) {
    GraphStore g;
    if (primekg) {
        std::ifstream in(in_path);
        if (!in) throw InputError("cannot open: " + in_path);
        g = import_primekg_csv(in);
    } else {
        g = load_graph_file(in_path);
    }
    if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        write_graph_tsv(g, file);
    }
    out << g.nodes().size() << " nodes, " << g.edges().size() << " edges\n";
    (void)err;
    return 0;
}

inline int cmd_kg_query(const std::string& graph_path, const std::string& seeds_csv, int depth,
                        const std::string& relations_csv, std::ostream& out, std::ostream& err) {
    GraphStore g = load_graph_file(graph_path);
    std::optional<std::set<std::string>> relations;
    if (!relations_csv.empty()) {
        auto list = detail::split_list(relations_csv);
        relations.emplace(list.begin(), list.end());
    }
    Subgraph sg = retrieve_subgraph(g, detail::split_list(seeds_csv), depth, relations);
    out << serialize_subgraph(sg) << "\n";
    (void)err;
    return 0;
}

// --------------------------------------------------------------------------
// fixtures / trace
// --------------------------------------------------------------------------

inline int cmd_fixtures_bake(const std::string& out_dir, std::ostream& out, std::ostream& err) {
    RunResult result = case_study::bake(out_dir);
    out << "baked " << out_dir << "/graph.tsv, " << out_dir << "/corpus.jsonl, " << out_dir
        << "/llm/\n";
    if (!result.outputs.empty()) {
        const auto& top = result.outputs.front();
        out << "replayed run " << result.run_id << ": top hypothesis scored "
            << overall_score(top.scores) << "/20 at generation " << top.hypothesis.generation
            << "\n";
    }
    detail::print_warnings(result.warnings, err);
    return 0;
}

inline int cmd_trace_show(const std::string& in_path, std::ostream& out, std::ostream& err) {
    auto steps = load_trace(in_path);
    long tokens_in = 0, tokens_out = 0;
    for (const auto& s : steps) {
        out << "[" << s.step_index << "] " << to_string(s.agent_role) << "  in " << s.tokens_in
            << " out " << s.tokens_out << "  digest " << s.input_digest << "  " << s.timestamp
            << "\n";
        tokens_in += s.tokens_in;
        tokens_out += s.tokens_out;
    }
    out << steps.size() << " steps, " << tokens_in << " tokens in, " << tokens_out
        << " tokens out\n";
    (void)err;
    return 0;
}

// --------------------------------------------------------------------------
// dispatcher
// --------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hypothesis generation and evaluation toolkit"};
    app.require_subcommand(1);
    long global_seed = -1;  // accepted everywhere; consumed where randomness exists
    app.add_option("--seed", global_seed, "global random seed override");

    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "run the hypothesis pipeline on a topic");
    c_gen->add_option("--topic", gen.topic, "research topic or question")
        ->required()
        ->check([](const std::string& v) {
            return trim(v).empty() ? std::string("topic must not be empty") : std::string();
        });
    c_gen->add_option("--keywords", gen.keywords_csv, "comma-separated keyword override");
    c_gen->add_option("--config", gen.config_file, "key=value config file");
    c_gen->add_option("--scripted", gen.scripted_dir,
                      "fixture directory (llm/, graph.tsv, corpus.jsonl) for offline replay");
    c_gen->add_option("--graph", gen.graph_file, "knowledge graph TSV (live mode)");
    c_gen->add_option("--cutoff", gen.cutoff, "temporal cutoff YYYY-MM-DD");
    c_gen->add_option("--max-cycles", gen.max_cycles, "refinement cycle cap");
    c_gen->add_option("--accept-threshold", gen.accept_threshold, "accept at this overall score");
    c_gen->add_option("--emit-floor", gen.emit_floor, "emit exhausted branches at or above this");
    c_gen->add_option("--seed", gen.seed, "run seed");
    c_gen->add_option("--out", gen.out_dir, "output directory (run.json, trace.jsonl)");

    auto* c_eval = app.add_subcommand("eval", "fit evaluation models on CSV data");
    std::string in_path, out_path, metric = "all", generated_path, gold_path;
    bool no_order_effect = false, log_scale = false, primekg = false;
    int rasch_k = 0;
    double sigma_u = 1.0, sigma_v = 1.0;

    auto* c_bt = c_eval->add_subcommand("bt", "Bradley-Terry fit with quasi-variances");
    c_bt->add_option("--in", in_path, "comparisons CSV")->required();
    c_bt->add_option("--metric", metric, "novelty|relevance|significance|verifiability|all");
    c_bt->add_flag("--no-order-effect", no_order_effect, "drop the presentation-order intercept");
    c_bt->add_flag("--log-scale", log_scale, "log-scale quasi-variance objective");
    c_bt->add_option("--out", out_path, "fit CSV destination (default stdout)");
    c_bt->add_option("--seed", global_seed, "accepted for uniformity");

    auto* c_dav = c_eval->add_subcommand("davidson", "Davidson tie-model fit");
    c_dav->add_option("--in", in_path, "comparisons CSV")->required();
    c_dav->add_option("--metric", metric, "metric filter or all");
    c_dav->add_option("--out", out_path, "fit CSV destination");
    c_dav->add_option("--seed", global_seed, "accepted for uniformity");

    auto* c_rasch = c_eval->add_subcommand("rasch", "ordinal rating model fit");
    c_rasch->add_option("--in", in_path, "ratings CSV")->required();
    c_rasch->add_option("--categories", rasch_k, "number of rating categories (default: infer)");
    c_rasch->add_option("--sigma-u", sigma_u, "rater-effect prior sd");
    c_rasch->add_option("--sigma-v", sigma_v, "hypothesis-on-metric prior sd");
    c_rasch->add_option("--out", out_path, "parameter CSV destination");
    c_rasch->add_option("--seed", global_seed, "accepted for uniformity");

    auto* c_sim = c_eval->add_subcommand("similarity", "matched-vs-null similarity distributions");
    c_sim->add_option("--generated", generated_path, "generated hypotheses, one per line")
        ->required();
    c_sim->add_option("--gold", gold_path, "gold CSV (background_id,text)")->required();
    c_sim->add_option("--out", out_path, "distribution CSV destination");
    c_sim->add_option("--seed", global_seed, "accepted for uniformity");

    auto* c_met = c_eval->add_subcommand("metrics", "classification metrics report");
    c_met->add_option("--in", in_path, "CSV of predicted,truth labels")->required();
    c_met->add_option("--seed", global_seed, "accepted for uniformity");

    auto* c_kg = app.add_subcommand("kg", "knowledge graph utilities");
    std::string seeds_csv, relations_csv, graph_path;
    int depth = 1;
    auto* c_imp = c_kg->add_subcommand("import", "validate and convert a graph file");
    c_imp->add_option("--in", in_path, "graph TSV (or PrimeKG-style CSV with --primekg)")
        ->required();
    c_imp->add_flag("--primekg", primekg, "input is a PrimeKG-style CSV");
    c_imp->add_option("--out", out_path, "write normalized TSV here");
    c_imp->add_option("--seed", global_seed, "accepted for uniformity");
    auto* c_query = c_kg->add_subcommand("query", "retrieve and print a subgraph");
    c_query->add_option("--graph", graph_path, "graph TSV")->required();
    c_query->add_option("--seeds", seeds_csv, "comma-separated seed node ids")->required();
    c_query->add_option("--depth", depth, "traversal depth (>= 1)");
    c_query->add_option("--relations", relations_csv, "comma-separated relation filter");
    c_query->add_option("--seed", global_seed, "accepted for uniformity");

    auto* c_fix = app.add_subcommand("fixtures", "fixture management");
    std::string bake_dir = "fixtures/case-study";
    auto* c_bake = c_fix->add_subcommand("bake", "write the bundled demo session to disk");
    c_bake->add_option("--out", bake_dir, "destination directory");
    c_bake->add_option("--seed", global_seed, "accepted for uniformity");

    auto* c_trace = app.add_subcommand("trace", "trace inspection");
    auto* c_show = c_trace->add_subcommand("show", "summarize a trace JSONL file");
    c_show->add_option("--in", in_path, "trace JSONL")->required();
    c_show->add_option("--seed", global_seed, "accepted for uniformity");

    std::reverse(args.begin(), args.end());  // CLI11 consumes right-to-left
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*c_gen) {
            if (global_seed >= 0 && gen.seed < 0) gen.seed = global_seed;
            return cmd_generate(gen, out, err);
        }
        if (*c_bt) return cmd_eval_bt(in_path, metric, !no_order_effect, log_scale, out_path, out, err);
        if (*c_dav) return cmd_eval_davidson(in_path, metric, out_path, out, err);
        if (*c_rasch) return cmd_eval_rasch(in_path, rasch_k, sigma_u, sigma_v, out_path, out, err);
        if (*c_sim) return cmd_eval_similarity(generated_path, gold_path, out_path, out, err);
        if (*c_met) return cmd_eval_metrics(in_path, out, err);
        if (*c_imp) return cmd_kg_import(in_path, primekg, out_path, out, err);
        if (*c_query) return cmd_kg_query(graph_path, seeds_csv, depth, relations_csv, out, err);
        if (*c_bake) return cmd_fixtures_bake(bake_dir, out, err);
        if (*c_show) return cmd_trace_show(in_path, out, err);
        err << "error: no subcommand selected\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hypoforge::cli
