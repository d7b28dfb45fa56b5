// Command-line front end: select | eval | synth | ablate.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ssfs/dataio.hpp"
#include "ssfs/eval.hpp"
#include "ssfs/pipeline.hpp"
#include "ssfs/synth.hpp"

namespace {

using nlohmann::json;

// Thrown for bad argument combinations CLI11 cannot detect; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string trim_copy(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// Applies key=value lines from a config file as defaults on `cmd`. Each key
// names a long option of the subcommand; values never override options given
// on the command line. Blank lines and #/; comments are ignored.
void apply_config_defaults(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string text = trim_copy(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value, got '" + text + "'");
        const std::string key = trim_copy(text.substr(0, eq));
        const std::string value = trim_copy(text.substr(eq + 1));
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown option '" + key + "'");
        if (opt->count() > 0) continue;  // command-line values win
        opt->add_result(value);
        opt->run_callback();
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (const std::string& tok : split_list(text)) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(std::string("invalid ") + what + " entry '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
    return out;
}

void apply_spec_setting(ssfs::SurrogateSpec& spec, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
        throw UsageError("non-numeric value in '" + kv + "'");
    }
    spec.set(key, value);
}

ssfs::LaplacianVariant parse_laplacian(const std::string& name) {
    if (name == "symmetric") return ssfs::LaplacianVariant::symmetric_normalized;
    if (name == "unnormalized") return ssfs::LaplacianVariant::unnormalized;
    throw std::runtime_error("unknown laplacian '" + name +
                             "' (expected symmetric or unnormalized)");
}

ssfs::BandwidthMode parse_bandwidth(const std::string& name) {
    if (name == "adaptive") return ssfs::BandwidthMode::adaptive;
    if (name == "fixed") return ssfs::BandwidthMode::fixed;
    throw std::runtime_error("unknown bandwidth mode '" + name +
                             "' (expected adaptive or fixed)");
}

void write_json(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    json j;
    f >> j;
    return j;
}

// Reads a ranking CSV ("rank,feature_index,feature_name,score") back into a
// FeatureRanking usable by the evaluation harness.
ssfs::FeatureRanking load_ranking(const std::string& path, int p) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty file: " + path);

    struct Row {
        int rank, index;
        double score;
    };
    std::vector<Row> rows;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        if (fields.size() != 4)
            throw std::runtime_error("malformed ranking row in " + path + ": " + line);
        try {
            rows.push_back({std::stoi(fields[0]), std::stoi(fields[1]), std::stod(fields[3])});
        } catch (const std::exception&) {
            throw std::runtime_error("malformed ranking row in " + path + ": " + line);
        }
    }
    if (rows.empty()) throw std::runtime_error("ranking file has no rows: " + path);
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });

    ssfs::FeatureRanking r;
    r.scores = Eigen::VectorXd::Zero(p);
    std::set<int> seen;
    for (const Row& row : rows) {
        if (row.index < 0 || row.index >= p)
            throw std::runtime_error("ranking feature index " + std::to_string(row.index) +
                                     " out of range for " + std::to_string(p) + " features");
        if (!seen.insert(row.index).second)
            throw std::runtime_error("duplicate feature index in ranking: " +
                                     std::to_string(row.index));
        r.order.push_back(row.index);
        r.scores(row.index) = row.score;
    }
    return r;
}

std::vector<int> labels_from_meta(const std::string& path, int n) {
    const json j = read_json(path);
    if (!j.contains("true_labels"))
        throw std::runtime_error("metadata has no true_labels: " + path);
    const auto labels = j.at("true_labels").get<std::vector<int>>();
    if (static_cast<int>(labels.size()) != n)
        throw std::runtime_error("metadata label count does not match dataset");
    return labels;
}

// ---- option bundles -------------------------------------------------------

struct GraphOpts {
    std::string laplacian = "symmetric";
    std::string bandwidth = "adaptive";
    int neighbor_k = 2;
    double sigma = 1.0;
};

struct RankOpts {
    std::string input, out, config;
    int k = 2;
    int d = 0;
    GraphOpts graph;
    int resamples = 500;
    double fraction = 0.95;
    std::vector<std::string> scorer_set, selector_set;
    bool no_header = false;
    bool no_normalize = false;
    std::uint64_t seed = 0;
    int threads = 0;
};

void add_rank_options(CLI::App* c, RankOpts& o) {
    c->add_option("--input", o.input, "input matrix CSV")->required();
    c->add_option("--out", o.out, "output path")->required();
    c->add_option("--d", o.d, "candidate eigenvectors (0: twice k)");
    c->add_option("--laplacian", o.graph.laplacian, "symmetric | unnormalized");
    c->add_option("--bandwidth", o.graph.bandwidth, "adaptive | fixed");
    c->add_option("--neighbor-k", o.graph.neighbor_k, "neighbor for adaptive bandwidths");
    c->add_option("--sigma", o.graph.sigma, "bandwidth when --bandwidth fixed");
    c->add_option("--resamples", o.resamples, "stability resamples");
    c->add_option("--fraction", o.fraction, "subsample fraction");
    c->add_option("--set", o.scorer_set, "scorer hyperparameter key=value");
    c->add_option("--selector-set", o.selector_set, "selector hyperparameter key=value");
    c->add_flag("--no-header", o.no_header, "input has no header row");
    c->add_flag("--no-normalize", o.no_normalize, "skip z-score normalization");
    c->add_option("--seed", o.seed, "master random seed");
    c->add_option("--threads", o.threads, "worker threads (0: SSFS_THREADS or 1)");
    c->add_option("--config", o.config, "key=value defaults file");
}

ssfs::SsfsConfig build_config(const std::string& variant, const RankOpts& o) {
    ssfs::SsfsConfig cfg = ssfs::make_config(ssfs::parse_variant(variant), o.k);
    cfg.num_compute_d = o.d;
    cfg.resamples = o.resamples;
    cfg.subsample_fraction = o.fraction;
    cfg.laplacian_variant = parse_laplacian(o.graph.laplacian);
    cfg.bandwidth_mode = parse_bandwidth(o.graph.bandwidth);
    cfg.neighbor_k = o.graph.neighbor_k;
    cfg.fixed_sigma = o.graph.sigma;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    for (const std::string& kv : o.selector_set) apply_spec_setting(cfg.selector_spec, kv);
    for (const std::string& kv : o.scorer_set) apply_spec_setting(cfg.scorer_spec, kv);
    return cfg;
}

ssfs::DataMatrix load_input(const RankOpts& o) {
    ssfs::DataMatrix x = ssfs::load_matrix(o.input, !o.no_header);
    if (!o.no_normalize) x = ssfs::zscore_normalize(x);
    return x;
}

// ---- subcommands ----------------------------------------------------------

int run_select(const RankOpts& o, const std::string& variant, int features) {
    const ssfs::DataMatrix x = load_input(o);
    const ssfs::SsfsConfig cfg = build_config(variant, o);

    const auto t0 = std::chrono::steady_clock::now();
    const ssfs::FeatureRanking r = ssfs::ssfs_rank(x, cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ssfs::write_ranking(r, o.out, features);

    json report;
    report["variant"] = variant;
    report["k"] = cfg.num_select_k;
    report["d"] = cfg.effective_d();
    report["seed"] = o.seed;
    report["num_samples"] = x.n();
    report["num_features"] = x.p();
    report["selected_eigenvectors"] = r.selected_eigenvectors;
    if (r.stability_scores.empty())
        report["stability_scores"] = nullptr;
    else
        report["stability_scores"] = r.stability_scores;
    report["elapsed_seconds"] = elapsed;
    const std::string report_path = o.out + ".report.json";
    write_json(report, report_path);

    const int rows = features > 0 ? features : x.p();
    std::cout << "wrote " << o.out << " (" << rows << " rows) and " << report_path << "\n";
    return 0;
}

int run_eval(const std::string& input, const std::string& ranking_path, const std::string& out,
             const std::string& meta, const std::string& label_column,
             const std::string& counts_text, int clusters, int runs, bool stability,
             int features, bool no_header, bool no_normalize, std::uint64_t seed) {
    if (counts_text.empty() && !stability)
        throw UsageError("nothing to evaluate: provide --counts or --stability");
    if (meta.empty() == label_column.empty())
        throw UsageError("provide exactly one of --meta or --label-column");

    ssfs::LabeledDataset ds;
    if (!meta.empty()) {
        ds.data = ssfs::load_matrix(input, !no_header);
        ds.labels = labels_from_meta(meta, ds.data.n());
        int c = 0;
        for (int l : ds.labels) {
            if (l < 0) throw std::runtime_error("negative label in metadata");
            c = std::max(c, l + 1);
        }
        ds.num_classes = c;
    } else {
        ds = ssfs::load_labeled_matrix(input, !no_header, label_column);
    }
    if (!no_normalize) ds.data = ssfs::zscore_normalize(ds.data);

    const ssfs::FeatureRanking rk = load_ranking(ranking_path, ds.data.p());
    const int k = clusters > 0 ? clusters : ds.num_classes;

    if (!counts_text.empty()) {
        const std::vector<int> counts = parse_int_list(counts_text, "count");
        const ssfs::AccuracyCurve curve = ssfs::accuracy_curve(ds, rk, counts, k, runs, seed);
        for (int c : curve.skipped_counts)
            std::cerr << "warning: skipped feature count " << c << " (out of range)\n";
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write file: " + out);
        f << "feature_count,mean_accuracy,std_accuracy\n";
        for (std::size_t i = 0; i < curve.feature_counts.size(); ++i)
            f << curve.feature_counts[i] << "," << fmt10(curve.mean_acc[i]) << ","
              << fmt10(curve.std_acc[i]) << "\n";
        std::cout << "wrote " << out << " (" << curve.feature_counts.size() << " counts)\n";
    }

    if (stability) {
        const int take = std::min<int>(features, static_cast<int>(rk.order.size()));
        if (take < 1) throw std::runtime_error("no features available for stability analysis");
        ssfs::DataMatrix sub;
        sub.values.resize(ds.data.n(), take);
        for (int j = 0; j < take; ++j)
            sub.values.col(j) = ds.data.values.col(rk.order[static_cast<std::size_t>(j)]);
        const ssfs::StabilitySummary s = ssfs::stability_analysis(sub, k, runs, seed);
        json j;
        j["runs"] = runs;
        j["features_used"] = take;
        j["vi_values"] = s.vi_values;
        j["mean_vi"] = s.mean_vi;
        j["std_vi"] = s.std_vi;
        const std::string spath = out + ".stability.json";
        write_json(j, spath);
        std::cout << "wrote " << spath << " (mean VI " << fmt10(s.mean_vi) << ")\n";
    }
    return 0;
}

int run_synth(const std::string& generator, int n, const std::string& nuisance, int num_nuisance,
              int blocks, int latents, int features_per_latent, const std::string& degrees_text,
              std::uint64_t seed, std::string out) {
    if (out.empty()) out = generator + ".csv";
    json meta;
    if (generator == "blobs") {
        const ssfs::SyntheticDataset ds = ssfs::gen_blobs_with_nuisance(
            n, ssfs::parse_nuisance(nuisance), num_nuisance, seed, blocks);
        ssfs::save_matrix(ds.data, out, true);
        meta["generator"] = "blobs";
        meta["params"] = {{"n", n},
                          {"nuisance", nuisance},
                          {"num_nuisance", num_nuisance},
                          {"num_blocks", ds.num_blocks},
                          {"seed", seed}};
        meta["informative_features"] = ds.informative_features;
        meta["true_labels"] = ds.true_labels;
    } else if (generator == "manifold") {
        const std::vector<int> degrees = parse_int_list(degrees_text, "degree");
        const ssfs::ManifoldSample ms =
            ssfs::gen_product_manifold(n, latents, features_per_latent, degrees, seed);
        ssfs::save_matrix(ms.data, out, true);
        meta["generator"] = "manifold";
        meta["params"] = {{"n", n},
                          {"latents", latents},
                          {"features_per_latent", features_per_latent},
                          {"degrees", degrees},
                          {"seed", seed}};
        meta["feature_owner"] = ms.feature_owner;
    } else if (generator == "interval") {
        const ssfs::DataMatrix m = ssfs::gen_interval_samples(n, seed);
        ssfs::save_matrix(m, out, true);
        meta["generator"] = "interval";
        meta["params"] = {{"n", n}, {"seed", seed}};
    } else {
        throw std::runtime_error("unknown generator '" + generator +
                                 "' (expected blobs, manifold, or interval)");
    }
    const std::string meta_path = out + ".meta.json";
    write_json(meta, meta_path);
    std::cout << "wrote " << out << " and " << meta_path << "\n";
    return 0;
}

int run_ablate(const RankOpts& o, const std::string& variants_text, const std::string& meta,
               int features) {
    const std::vector<std::string> variants = split_list(variants_text);
    if (variants.empty()) throw UsageError("empty variant list");

    const ssfs::DataMatrix x = load_input(o);
    std::vector<int> truth;
    if (!meta.empty()) {
        const json j = read_json(meta);
        if (!j.contains("informative_features"))
            throw std::runtime_error("metadata has no informative_features: " + meta);
        truth = j.at("informative_features").get<std::vector<int>>();
    }

    std::ostringstream table;
    table << "variant,recall_at_k,top_features\n";
    for (const std::string& name : variants) {
        const ssfs::SsfsConfig cfg = build_config(name, o);
        const ssfs::FeatureRanking r = ssfs::ssfs_rank(x, cfg);
        ssfs::write_ranking(r, o.out + "." + name + ".csv");

        std::string recall = "nan";
        if (!truth.empty()) recall = fmt10(ssfs::recall_at_k(r, truth, features));
        std::string top;
        const int take = std::min<int>(10, static_cast<int>(r.order.size()));
        for (int i = 0; i < take; ++i) {
            if (i) top += ";";
            top += std::to_string(r.order[static_cast<std::size_t>(i)]);
        }
        table << name << "," << recall << "," << top << "\n";
    }
    const std::string table_path = o.out + ".compare.csv";
    std::ofstream f(table_path);
    if (!f) throw std::runtime_error("cannot write file: " + table_path);
    f << table.str();
    std::cout << table.str();
    std::cout << "wrote " << table_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral self-supervised feature selection"};
    app.set_version_flag("--version", "ssfs 1.0.0");
    app.require_subcommand(1);

    // select
    RankOpts sel;
    std::string sel_variant = "full";
    int sel_features = 0;
    CLI::App* select = app.add_subcommand("select", "rank features on an unlabeled matrix");
    select->add_option("--k", sel.k, "eigenvectors to select")->required();
    select->add_option("--features", sel_features, "ranking rows to write (0: all)");
    select->add_option("--variant", sel_variant,
                       "full | no-selection | no-gbt | regression | no-selection-regression");
    add_rank_options(select, sel);

    // eval
    std::string ev_input, ev_ranking, ev_out, ev_meta, ev_label_column, ev_counts, ev_config;
    int ev_clusters = 0, ev_runs = 10, ev_features = 5, ev_threads = 0;
    bool ev_stability = false, ev_no_header = false, ev_no_normalize = false;
    std::uint64_t ev_seed = 0;
    CLI::App* eval = app.add_subcommand("eval", "cluster on top-ranked features and score");
    eval->add_option("--input", ev_input, "input matrix CSV")->required();
    eval->add_option("--ranking", ev_ranking, "ranking CSV from select")->required();
    eval->add_option("--out", ev_out, "accuracy-curve CSV path")->required();
    eval->add_option("--meta", ev_meta, "metadata JSON with true_labels");
    eval->add_option("--label-column", ev_label_column, "label column name in the input");
    eval->add_option("--counts", ev_counts, "comma-separated feature counts");
    eval->add_option("--clusters", ev_clusters, "clusters for k-means (0: number of classes)");
    eval->add_option("--runs", ev_runs, "k-means repetitions");
    eval->add_flag("--stability", ev_stability, "also report clustering stability (VI)");
    eval->add_option("--features", ev_features, "top features for stability analysis");
    eval->add_flag("--no-header", ev_no_header, "input has no header row");
    eval->add_flag("--no-normalize", ev_no_normalize, "skip z-score normalization");
    eval->add_option("--seed", ev_seed, "master random seed");
    eval->add_option("--threads", ev_threads, "accepted for interface parity; single-threaded");
    eval->add_option("--config", ev_config, "key=value defaults file");

    // synth
    std::string sy_generator, sy_nuisance = "gaussian-blocks", sy_degrees = "1,2,3", sy_out,
        sy_config;
    int sy_n = 500, sy_num_nuisance = 45, sy_blocks = 3, sy_latents = 2, sy_fpl = 3,
        sy_threads = 0;
    std::uint64_t sy_seed = 0;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("generator", sy_generator, "blobs | manifold | interval")->required();
    synth->add_option("--n", sy_n, "number of samples");
    synth->add_option("--nuisance", sy_nuisance, "gaussian-blocks | laplace-copula");
    synth->add_option("--num-nuisance", sy_num_nuisance, "nuisance feature count");
    synth->add_option("--blocks", sy_blocks, "nuisance covariance blocks");
    synth->add_option("--latents", sy_latents, "manifold latent dimensions");
    synth->add_option("--features-per-latent", sy_fpl, "features per latent");
    synth->add_option("--degrees", sy_degrees, "comma-separated polynomial degrees");
    synth->add_option("--seed", sy_seed, "master random seed");
    synth->add_option("--out", sy_out, "output CSV path (default <generator>.csv)");
    synth->add_option("--threads", sy_threads, "accepted for interface parity; single-threaded");
    synth->add_option("--config", sy_config, "key=value defaults file");

    // ablate
    RankOpts ab;
    std::string ab_variants, ab_meta;
    int ab_features = 5;
    CLI::App* ablate = app.add_subcommand("ablate", "compare pipeline variants on one dataset");
    ablate->add_option("--k", ab.k, "eigenvectors to select");
    ablate->add_option("--variants", ab_variants, "comma-separated variant names")->required();
    ablate->add_option("--meta", ab_meta, "metadata JSON with informative_features");
    ablate->add_option("--features", ab_features, "recall cutoff for the comparison table");
    add_rank_options(ablate, ab);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (select->parsed()) {
            apply_config_defaults(select, sel.config);
            return run_select(sel, sel_variant, sel_features);
        }
        if (eval->parsed()) {
            apply_config_defaults(eval, ev_config);
            return run_eval(ev_input, ev_ranking, ev_out, ev_meta, ev_label_column, ev_counts,
                            ev_clusters, ev_runs, ev_stability, ev_features, ev_no_header,
                            ev_no_normalize, ev_seed);
        }
        if (synth->parsed()) {
            apply_config_defaults(synth, sy_config);
            return run_synth(sy_generator, sy_n, sy_nuisance, sy_num_nuisance, sy_blocks,
                             sy_latents, sy_fpl, sy_degrees, sy_seed, sy_out);
        }
        if (ablate->parsed()) {
            apply_config_defaults(ablate, ab.config);
            return run_ablate(ab, ab_variants, ab_meta, ab_features);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
