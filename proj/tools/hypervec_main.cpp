#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "hypervec/corpus.hpp"
#include "hypervec/dataset.hpp"
#include "hypervec/embeddings.hpp"
#include "hypervec/error.hpp"
#include "hypervec/eval.hpp"
#include "hypervec/hyperbase.hpp"
#include "hypervec/measures.hpp"
#include "hypervec/trainer.hpp"
#include "hypervec/xling.hpp"

using namespace hypervec;
using nlohmann::json;

static const char* kVersion = "hypervec 0.1.0";

// FNV-1a over the file bytes; manifests record inputs by content, not mtime.
static std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open input for digest: " + path);
    uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

static void write_manifest(const std::string& path, const std::string& subcommand, uint64_t seed,
                           const json& config, const std::vector<std::string>& inputs) {
    json m;
    m["tool"] = kVersion;
    m["subcommand"] = subcommand;
    m["seed"] = seed;
    m["config"] = config;
    json digests = json::object();
    for (const std::string& p : inputs)
        digests[p] = file_digest(p);
    m["inputs"] = digests;
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot open file for writing: " + path);
    out << m.dump(2) << "\n";
    if (!out)
        throw DataError("write failed: " + path);
}

// Sniffs the 4-byte magic so both embedding formats load through one flag.
static EmbeddingStore load_store_any(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open embeddings file: " + path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.close();
    if (std::string(magic, 4) == "HVEC")
        return load_store_binary(path);
    return load_store_text(path);
}

static std::vector<std::pair<std::string, std::string>> load_pairs_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open pairs file: " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected 2 tab-separated columns");
        std::string u = line.substr(0, tab);
        std::string v = line.substr(tab + 1);
        if (u.empty() || v.empty())
            throw DataError(path + ":" + std::to_string(lineno) + ": empty column");
        pairs.emplace_back(std::move(u), std::move(v));
    }
    if (pairs.empty())
        throw DataError("pairs file has no pairs: " + path);
    return pairs;
}

struct OutFile {
    FILE* f = stdout;
    bool owned = false;

    explicit OutFile(const std::string& path) {
        if (!path.empty()) {
            f = std::fopen(path.c_str(), "w");
            if (!f)
                throw DataError("cannot open file for writing: " + path);
            owned = true;
        }
    }
    ~OutFile() {
        if (owned)
            std::fclose(f);
    }
    OutFile(const OutFile&) = delete;
    OutFile& operator=(const OutFile&) = delete;
};

static std::string join_labels(const std::vector<std::string>& labels) {
    if (labels.empty())
        return "all";
    std::string s;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i)
            s += "|";
        s += labels[i];
    }
    return s;
}

int main(int argc, char** argv) {
    CLI::App app{"HyperVec: hierarchical word embeddings for hypernymy"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    uint64_t seed = 1;
    int workers = 1;
    bool deterministic = false;
    app.add_option("--seed", seed, "Base random seed")
        ->envname("HYPERVEC_SEED")
        ->capture_default_str();
    app.add_option("--workers", workers, "Training worker threads")
        ->envname("HYPERVEC_WORKERS")
        ->capture_default_str();
    app.add_flag("--deterministic", deterministic, "Force single-worker deterministic runs");

    // build
    auto* cmd_build = app.add_subcommand("build", "Build vocabulary and co-occurrence index");
    std::string b_corpus, b_prefix;
    long long b_min_count = 5;
    int b_window = 5, b_min_pair = 1;
    cmd_build->add_option("--corpus", b_corpus, "Tokenized corpus file")->required();
    cmd_build->add_option("--out-prefix", b_prefix, "Prefix for .vocab/.cooc outputs")->required();
    cmd_build->add_option("--min-count", b_min_count, "Discard tokens rarer than this")
        ->envname("HYPERVEC_MIN_COUNT")
        ->capture_default_str();
    cmd_build->add_option("--window", b_window, "Context window size")
        ->envname("HYPERVEC_WINDOW")
        ->capture_default_str();
    cmd_build->add_option("--min-pair-count", b_min_pair, "Co-occurrence count threshold")
        ->capture_default_str();

    // train
    auto* cmd_train = app.add_subcommand("train", "Train embeddings");
    std::string t_corpus, t_vocab, t_cooc, t_resource, t_prefix;
    std::vector<std::string> t_filter;
    bool t_closure = false;
    TrainConfig cfg;
    cmd_train->add_option("--corpus", t_corpus, "Tokenized corpus file")->required();
    cmd_train->add_option("--vocab", t_vocab, "Vocabulary file from `build`")->required();
    cmd_train->add_option("--cooc", t_cooc, "Co-occurrence index from `build`")->required();
    cmd_train->add_option("--resource", t_resource, "Hyponym-hypernym TSV (optional)");
    cmd_train->add_flag("--closure", t_closure, "Take the transitive closure of the resource");
    cmd_train->add_option("--filter-dataset", t_filter,
                          "Evaluation dataset(s) whose pairs are removed from the resource");
    cmd_train->add_option("--out-prefix", t_prefix, "Prefix for .txt/.bin/.loss.csv outputs")
        ->required();
    cmd_train->add_option("--dim", cfg.dim, "Embedding dimensionality")
        ->envname("HYPERVEC_DIM")
        ->capture_default_str();
    cmd_train->add_option("--window", cfg.window, "Context window size")
        ->envname("HYPERVEC_WINDOW")
        ->capture_default_str();
    cmd_train->add_option("--negatives", cfg.negatives, "Negative samples per pair")
        ->envname("HYPERVEC_NEGATIVES")
        ->capture_default_str();
    cmd_train->add_option("--lr", cfg.eta0, "Initial learning rate")
        ->envname("HYPERVEC_LR")
        ->capture_default_str();
    cmd_train->add_option("--theta", cfg.theta, "Margin for the hypernym partition")
        ->envname("HYPERVEC_THETA")
        ->capture_default_str();
    cmd_train->add_option("--epochs", cfg.epochs, "Training epochs")
        ->envname("HYPERVEC_EPOCHS")
        ->capture_default_str();
    cmd_train->add_option("--alpha", cfg.alpha, "Negative-sampling distribution exponent")
        ->envname("HYPERVEC_ALPHA")
        ->capture_default_str();
    cmd_train->add_option("--subsample", cfg.subsample_t, "Frequent-token subsampling threshold")
        ->envname("HYPERVEC_SUBSAMPLE")
        ->capture_default_str();
    cmd_train->add_flag("--sgns-only", cfg.sgns_only, "Skip the hierarchical objectives");

    // score
    auto* cmd_score = app.add_subcommand("score", "Score word pairs");
    std::string s_store, s_pairs, s_out;
    cmd_score->add_option("--embeddings", s_store, "Embeddings file (text or binary)")->required();
    cmd_score->add_option("--pairs", s_pairs, "TSV of word pairs")->required();
    cmd_score->add_option("--out", s_out, "Output file (default stdout)");

    // features
    auto* cmd_features = app.add_subcommand("features", "Export pair feature vectors");
    std::string f_store, f_pairs, f_out;
    cmd_features->add_option("--embeddings", f_store, "Embeddings file (text or binary)")
        ->required();
    cmd_features->add_option("--pairs", f_pairs, "TSV of word pairs")->required();
    cmd_features->add_option("--out", f_out, "Output file (default stdout)");

    // eval-ap
    auto* cmd_ap = app.add_subcommand("eval-ap", "Average-precision ranking");
    std::string ap_store, ap_dataset, ap_target = kLabelHyper, ap_out;
    std::vector<std::string> ap_against;
    cmd_ap->add_option("--embeddings", ap_store, "Embeddings file")->required();
    cmd_ap->add_option("--dataset", ap_dataset, "Relation dataset TSV")->required();
    cmd_ap->add_option("--target", ap_target, "Target relation label")->capture_default_str();
    cmd_ap->add_option("--against", ap_against, "Relations to rank against (default: all)");
    cmd_ap->add_option("--out", ap_out, "Output file (default stdout)");

    // eval-dir
    auto* cmd_dir = app.add_subcommand("eval-dir", "Directionality accuracy");
    std::string d_store, d_dataset, d_relation = kLabelHyper, d_out;
    cmd_dir->add_option("--embeddings", d_store, "Embeddings file")->required();
    cmd_dir->add_option("--dataset", d_dataset, "Relation dataset TSV")->required();
    cmd_dir->add_option("--relation", d_relation, "Label of the hyponym->hypernym pairs")
        ->capture_default_str();
    cmd_dir->add_option("--out", d_out, "Output file (default stdout)");

    // eval-cls
    auto* cmd_cls = app.add_subcommand("eval-cls", "Threshold classification accuracy");
    std::string c_store, c_dataset, c_out;
    int c_classes = 2, c_iterations = 1000;
    double c_frac = 0.02;
    cmd_cls->add_option("--embeddings", c_store, "Embeddings file")->required();
    cmd_cls->add_option("--dataset", c_dataset, "Relation dataset TSV")->required();
    cmd_cls->add_option("--classes", c_classes, "2 (hyper/other) or 3 (hyper/rhyper/other)")
        ->capture_default_str();
    cmd_cls->add_option("--iterations", c_iterations, "Resampling iterations")
        ->capture_default_str();
    cmd_cls->add_option("--sample-frac", c_frac, "Fraction used to learn the threshold")
        ->capture_default_str();
    cmd_cls->add_option("--out", c_out, "Output file (default stdout)");

    // eval-graded
    auto* cmd_graded = app.add_subcommand("eval-graded", "Graded entailment correlation");
    std::string g_store, g_dataset, g_out;
    cmd_graded->add_option("--embeddings", g_store, "Embeddings file")->required();
    cmd_graded->add_option("--dataset", g_dataset, "Graded dataset TSV")->required();
    cmd_graded->add_option("--out", g_out, "Output file (default stdout)");

    // map
    auto* cmd_map = app.add_subcommand("map", "Fit a cross-space linear mapping");
    std::string m_source, m_target, m_lexicon, m_out;
    double m_lambda = 1e-2;
    cmd_map->add_option("--source", m_source, "Source-space embeddings")->required();
    cmd_map->add_option("--target", m_target, "Target-space embeddings")->required();
    cmd_map->add_option("--lexicon", m_lexicon, "Translation lexicon TSV")->required();
    cmd_map->add_option("--lambda", m_lambda, "Ridge regularization strength")
        ->envname("HYPERVEC_LAMBDA")
        ->capture_default_str();
    cmd_map->add_option("--out", m_out, "Mapping output file")->required();

    // project
    auto* cmd_project = app.add_subcommand("project", "Project embeddings through a mapping");
    std::string p_mapping, p_source, p_prefix;
    cmd_project->add_option("--mapping", p_mapping, "Mapping file from `map`")->required();
    cmd_project->add_option("--source", p_source, "Source-space embeddings")->required();
    cmd_project->add_option("--out-prefix", p_prefix, "Prefix for projected .txt/.bin outputs")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (deterministic)
        workers = 1;

    try {
        if (*cmd_build) {
            Vocab vocab = build_vocab(b_corpus, b_min_count);
            CoocIndex cooc = build_cooc_index(b_corpus, vocab, b_window, b_min_pair);
            save_vocab(vocab, b_prefix + ".vocab");
            cooc.save(b_prefix + ".cooc");
            json config = {{"corpus", b_corpus},       {"min_count", b_min_count},
                           {"window", b_window},       {"min_pair_count", b_min_pair},
                           {"out_prefix", b_prefix},   {"workers", workers}};
            write_manifest(b_prefix + ".manifest.json", "build", seed, config, {b_corpus});
            std::fprintf(stderr, "vocab: %d tokens (%lld raw), cooc: %zu pairs\n", vocab.size(),
                         vocab.total_tokens, cooc.size());
        } else if (*cmd_train) {
            cfg.seed = seed;
            cfg.workers = workers;
            Vocab vocab = load_vocab(t_vocab);
            LineCorpus corpus = load_line_corpus(t_corpus, vocab);
            CoocIndex cooc = CoocIndex::load(t_cooc);

            HypernymResource resource;
            if (!t_resource.empty()) {
                resource = load_resource(t_resource, vocab);
                std::fprintf(stderr, "resource: %zu pairs (%zu OOV dropped, %zu self dropped)\n",
                             resource.pair_count, resource.dropped_oov, resource.dropped_self);
                if (t_closure) {
                    resource = transitive_closure(resource, vocab);
                    std::fprintf(stderr, "closure: %zu pairs\n", resource.pair_count);
                }
                if (!t_filter.empty()) {
                    std::vector<RelationDataset> datasets;
                    for (const std::string& path : t_filter)
                        datasets.push_back(load_dataset(path));
                    resource = filter_eval_pairs(resource, datasets, vocab);
                    std::fprintf(stderr, "filtered: %zu pairs kept, %zu removed\n",
                                 resource.pair_count, resource.removed_eval);
                }
            }

            std::vector<EpochLoss> losses;
            EmbeddingStore store = train(corpus, vocab, resource, cooc, cfg, &losses);
            save_store_text(store, t_prefix + ".txt");
            save_store_binary(store, t_prefix + ".bin");
            {
                OutFile out(t_prefix + ".loss.csv");
                std::fprintf(out.f, "epoch,sgns_loss,attract_loss,generality_loss\n");
                for (const EpochLoss& row : losses)
                    std::fprintf(out.f, "%d,%.17g,%.17g,%.17g\n", row.epoch, row.sgns,
                                 row.attract, row.generality);
            }
            json config = {{"corpus", t_corpus},
                           {"vocab", t_vocab},
                           {"cooc", t_cooc},
                           {"resource", t_resource},
                           {"closure", t_closure},
                           {"filter_datasets", t_filter},
                           {"out_prefix", t_prefix},
                           {"dim", cfg.dim},
                           {"window", cfg.window},
                           {"negatives", cfg.negatives},
                           {"lr", cfg.eta0},
                           {"theta", cfg.theta},
                           {"epochs", cfg.epochs},
                           {"alpha", cfg.alpha},
                           {"subsample", cfg.subsample_t},
                           {"workers", cfg.workers},
                           {"sgns_only", cfg.sgns_only}};
            std::vector<std::string> inputs = {t_corpus, t_vocab, t_cooc};
            if (!t_resource.empty())
                inputs.push_back(t_resource);
            for (const std::string& path : t_filter)
                inputs.push_back(path);
            write_manifest(t_prefix + ".manifest.json", "train", seed, config, inputs);
            for (const EpochLoss& row : losses)
                std::fprintf(stderr, "epoch %d: sgns %.6f attract %.6f generality %.6f\n",
                             row.epoch, row.sgns, row.attract, row.generality);
        } else if (*cmd_score) {
            EmbeddingStore store = load_store_any(s_store);
            auto pairs = load_pairs_tsv(s_pairs);
            OutFile out(s_out);
            for (const auto& [u, v] : pairs)
                std::fprintf(out.f, "%s\t%s\t%.17g\t%s\n", u.c_str(), v.c_str(),
                             hyper_score(store, u, v), to_string(direction(store, u, v)));
            if (!s_out.empty())
                write_manifest(s_out + ".manifest.json", "score", seed,
                               {{"embeddings", s_store}, {"pairs", s_pairs}, {"out", s_out}},
                               {s_store, s_pairs});
            std::fprintf(stderr, "scored %zu pairs\n", pairs.size());
        } else if (*cmd_features) {
            EmbeddingStore store = load_store_any(f_store);
            auto pairs = load_pairs_tsv(f_pairs);
            OutFile out(f_out);
            std::fprintf(out.f, "u,v");
            for (int j = 0; j < store.dim; ++j)
                std::fprintf(out.f, ",d%d", j);
            std::fprintf(out.f, ",cos,norm_u,norm_v\n");
            for (const auto& [u, v] : pairs) {
                std::vector<double> feat = pair_features(store, u, v);
                std::fprintf(out.f, "%s,%s", u.c_str(), v.c_str());
                for (double x : feat)
                    std::fprintf(out.f, ",%.17g", x);
                std::fprintf(out.f, "\n");
            }
            if (!f_out.empty())
                write_manifest(f_out + ".manifest.json", "features", seed,
                               {{"embeddings", f_store}, {"pairs", f_pairs}, {"out", f_out}},
                               {f_store, f_pairs});
            std::fprintf(stderr, "exported %zu feature rows\n", pairs.size());
        } else if (*cmd_ap) {
            EmbeddingStore store = load_store_any(ap_store);
            RelationDataset ds = load_dataset(ap_dataset);
            std::unordered_set<std::string> against(ap_against.begin(), ap_against.end());
            RankingResult res = eval_ranking(store, ds, ap_target, against);
            OutFile out(ap_out);
            std::fprintf(out.f, "dataset,target,against,pairs_used,pairs_skipped_oov,ap\n");
            std::fprintf(out.f, "%s,%s,%s,%zu,%zu,%.17g\n", ds.name.c_str(), ap_target.c_str(),
                         join_labels(ap_against).c_str(), res.pairs_used, res.pairs_skipped_oov,
                         res.ap);
            if (!ap_out.empty())
                write_manifest(ap_out + ".manifest.json", "eval-ap", seed,
                               {{"embeddings", ap_store},
                                {"dataset", ap_dataset},
                                {"target", ap_target},
                                {"against", ap_against},
                                {"out", ap_out}},
                               {ap_store, ap_dataset});
            std::fprintf(stderr, "AP(%s vs %s) = %.4f over %zu pairs (%zu OOV skipped)\n",
                         ap_target.c_str(), join_labels(ap_against).c_str(), res.ap,
                         res.pairs_used, res.pairs_skipped_oov);
        } else if (*cmd_dir) {
            EmbeddingStore store = load_store_any(d_store);
            RelationDataset ds = load_dataset(d_dataset);
            std::vector<std::pair<std::string, std::string>> pairs;
            for (const RelPair& p : ds.pairs)
                if (p.relation == d_relation)
                    pairs.emplace_back(p.u, p.v);
            if (pairs.empty())
                throw DataError("no pairs with relation " + d_relation + " in dataset: " +
                                ds.name);
            DirectionResult res = eval_directionality(store, pairs);
            OutFile out(d_out);
            std::fprintf(out.f, "dataset,relation,pairs,correct,oov,accuracy\n");
            std::fprintf(out.f, "%s,%s,%zu,%zu,%zu,%.17g\n", ds.name.c_str(), d_relation.c_str(),
                         res.pairs, res.correct, res.oov, res.accuracy);
            if (!d_out.empty())
                write_manifest(d_out + ".manifest.json", "eval-dir", seed,
                               {{"embeddings", d_store},
                                {"dataset", d_dataset},
                                {"relation", d_relation},
                                {"out", d_out}},
                               {d_store, d_dataset});
            std::fprintf(stderr, "directionality %.4f over %zu pairs (%zu OOV)\n", res.accuracy,
                         res.pairs, res.oov);
        } else if (*cmd_cls) {
            EmbeddingStore store = load_store_any(c_store);
            RelationDataset ds = load_dataset(c_dataset);
            ThresholdResult res =
                eval_threshold_classification(store, ds, c_classes, c_iterations, c_frac, seed);
            OutFile out(c_out);
            std::fprintf(out.f, "dataset,classes,iterations,sample_frac,pairs_used,"
                                "pairs_skipped_oov,mean_accuracy,stddev\n");
            std::fprintf(out.f, "%s,%d,%d,%.17g,%zu,%zu,%.17g,%.17g\n", ds.name.c_str(),
                         c_classes, res.iterations, c_frac, res.pairs_used,
                         res.pairs_skipped_oov, res.mean_accuracy, res.stddev);
            if (!c_out.empty())
                write_manifest(c_out + ".manifest.json", "eval-cls", seed,
                               {{"embeddings", c_store},
                                {"dataset", c_dataset},
                                {"classes", c_classes},
                                {"iterations", c_iterations},
                                {"sample_frac", c_frac},
                                {"out", c_out}},
                               {c_store, c_dataset});
            std::fprintf(stderr, "%d-class accuracy %.4f (sd %.4f) over %d iterations\n",
                         c_classes, res.mean_accuracy, res.stddev, res.iterations);
        } else if (*cmd_graded) {
            EmbeddingStore store = load_store_any(g_store);
            RelationDataset ds = load_dataset(g_dataset);
            GradedResult res = eval_graded(store, ds);
            OutFile out(g_out);
            std::fprintf(out.f, "dataset,pairs_used,pairs_skipped_oov,spearman\n");
            std::fprintf(out.f, "%s,%zu,%zu,%.17g\n", ds.name.c_str(), res.pairs_used,
                         res.pairs_skipped_oov, res.rho);
            if (!g_out.empty())
                write_manifest(g_out + ".manifest.json", "eval-graded", seed,
                               {{"embeddings", g_store}, {"dataset", g_dataset}, {"out", g_out}},
                               {g_store, g_dataset});
            std::fprintf(stderr, "spearman %.4f over %zu pairs (%zu OOV skipped)\n", res.rho,
                         res.pairs_used, res.pairs_skipped_oov);
        } else if (*cmd_map) {
            EmbeddingStore source = load_store_any(m_source);
            EmbeddingStore target = load_store_any(m_target);
            BilingualLexicon lex = load_lexicon(m_lexicon);
            FitStats stats;
            MappingModel model = fit_mapping(source, target, lex, m_lambda, &stats);
            save_mapping(model, m_out);
            write_manifest(m_out + ".manifest.json", "map", seed,
                           {{"source", m_source},
                            {"target", m_target},
                            {"lexicon", m_lexicon},
                            {"lambda", m_lambda},
                            {"out", m_out}},
                           {m_source, m_target, m_lexicon});
            std::fprintf(stderr,
                         "lexicon: %zu entries (%zu duplicates dropped), fit on %zu rows "
                         "(%zu OOV skipped)\n",
                         lex.entries.size(), lex.dropped_duplicates, stats.rows_used,
                         stats.skipped_oov);
        } else if (*cmd_project) {
            MappingModel model = load_mapping(p_mapping);
            EmbeddingStore source = load_store_any(p_source);
            EmbeddingStore projected = project(model, source);
            save_store_text(projected, p_prefix + ".txt");
            save_store_binary(projected, p_prefix + ".bin");
            write_manifest(p_prefix + ".manifest.json", "project", seed,
                           {{"mapping", p_mapping},
                            {"source", p_source},
                            {"out_prefix", p_prefix}},
                           {p_mapping, p_source});
            std::fprintf(stderr, "projected %d vectors to dim %d\n", projected.size(),
                         projected.dim);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return UsageError::exit_code;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return DataError::exit_code;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return NumericError::exit_code;
    }
    return 0;
}
