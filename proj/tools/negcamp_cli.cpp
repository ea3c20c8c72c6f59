// negcamp CLI: dataset prep, embedding, two-stage runs, grid search,
// uncertainty sampling, corpus scoring, count regression, and plot export.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "negcamp/cascade.hpp"
#include "negcamp/classifiers.hpp"
#include "negcamp/dataset_io.hpp"
#include "negcamp/embed.hpp"
#include "negcamp/features.hpp"
#include "negcamp/metrics.hpp"
#include "negcamp/nbreg.hpp"
#include "negcamp/pca.hpp"
#include "negcamp/pipeline.hpp"
#include "negcamp/split.hpp"
#include "negcamp/splitcraft.hpp"
#include "negcamp/textprep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace negcamp;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json_file(const fs::path& p) {
    try {
        return json::parse(slurp_file(p));
    } catch (const json::parse_error& e) {
        throw ValidationError("bad JSON in " + p.string() + ": " + e.what());
    }
}

Dataset load_dataset(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + p.string());
    return load_jsonl(in, p.string());
}

void write_text(const fs::path& p, const std::string& content) {
    if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

// --- model/config parsing ---------------------------------------------------

ModelSpec model_spec_from_json(const json& j) {
    ModelSpec s;
    if (!j.contains("kind")) throw ValidationError("model spec missing \"kind\"");
    s.kind = model_kind_from_name(j["kind"].get<std::string>());
    s.learning_rate = j.value("learning_rate", s.learning_rate);
    s.epochs = j.value("epochs", s.epochs);
    s.lambda = j.value("lambda", s.lambda);
    s.k_neighbors = j.value("k_neighbors", s.k_neighbors);
    s.max_depth = j.value("max_depth", s.max_depth);
    s.min_samples_leaf = j.value("min_samples_leaf", s.min_samples_leaf);
    s.n_trees = j.value("n_trees", s.n_trees);
    s.feature_subsample = j.value("feature_subsample", s.feature_subsample);
    s.row_subsample = j.value("row_subsample", s.row_subsample);
    s.shrinkage = j.value("shrinkage", s.shrinkage);
    s.hidden = j.value("hidden", s.hidden);
    s.batch_size = j.value("batch_size", s.batch_size);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
}

ClusterMethod cluster_method_from_json(const json& j) {
    ClusterMethod m;
    std::string kind = j.value("kind", "kmeans");
    if (kind == "kmeans") m.kind = ClusterKind::kmeans;
    else if (kind == "gmm") m.kind = ClusterKind::gmm_diag;
    else if (kind == "dbscan") m.kind = ClusterKind::dbscan;
    else if (kind == "agglomerative") m.kind = ClusterKind::agglomerative;
    else if (kind == "birch") m.kind = ClusterKind::birch;
    else throw ValidationError("unknown cluster kind: " + kind);
    m.k = j.value("k", m.k);
    m.eps = j.value("eps", m.eps);
    m.min_pts = j.value("min_pts", m.min_pts);
    std::string link = j.value("linkage", "average");
    if (link == "single") m.linkage = Linkage::single;
    else if (link == "average") m.linkage = Linkage::average;
    else if (link == "complete") m.linkage = Linkage::complete;
    else throw ValidationError("unknown linkage: " + link);
    m.birch_threshold = j.value("birch_threshold", m.birch_threshold);
    m.birch_branching = j.value("birch_branching", m.birch_branching);
    m.validate();
    return m;
}

PartitionMethod partition_method_from_json(const json& j) {
    bool has_axis = j.contains("axis");
    bool has_cluster = j.contains("cluster");
    if (has_axis == has_cluster)
        throw ValidationError("method must set exactly one of \"axis\" or \"cluster\"");
    PartitionMethod pm;
    if (has_axis) {
        pm.use_axis = true;
        pm.threshold.t = j["axis"].value("t", 0.0);
    } else {
        pm.use_axis = false;
        pm.cluster_method = cluster_method_from_json(j["cluster"]);
    }
    return pm;
}

ResampleConfig resample_from_json(const json& j) {
    ResampleConfig rc;
    rc.strategy = resample_strategy_from_name(j.value("strategy", "none"));
    rc.k_neighbors = j.value("k_neighbors", rc.k_neighbors);
    rc.target_ratio = j.value("target_ratio", rc.target_ratio);
    rc.validate();
    return rc;
}

// --- run --------------------------------------------------------------------

struct RunConfig {
    fs::path dataset;
    double split_ratio = 0.85;
    std::uint64_t split_seed = 0;
    std::uint64_t seed = 0;
    bool use_engineered = false;
    std::optional<PartitionMethod> method;  // absent only in single mode
    std::optional<ModelSpec> spec_a, spec_b;
    std::optional<ModelSpec> single;
    ResampleConfig resample;
    json raw;
};

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    c.raw = j;
    if (!j.contains("dataset")) throw ValidationError("config missing \"dataset\"");
    c.dataset = j["dataset"].get<std::string>();
    if (!fs::exists(c.dataset)) throw ValidationError("dataset file not found: " + c.dataset.string());
    c.split_ratio = j.value("split_ratio", 0.85);
    if (!(c.split_ratio > 0.0 && c.split_ratio <= 1.0))
        throw ValidationError("split_ratio must be in (0, 1]");
    c.split_seed = j.value("split_seed", 0);
    c.seed = j.value("seed", 0);
    c.use_engineered = j.value("use_engineered", false);
    if (j.contains("resample")) c.resample = resample_from_json(j["resample"]);

    bool has_single = j.contains("single");
    bool has_stages = j.contains("stage_a") || j.contains("stage_b");
    if (has_single && has_stages)
        throw ValidationError("config sets both \"single\" and staged models");
    if (has_single) {
        c.single = model_spec_from_json(j["single"]);
    } else {
        if (!j.contains("stage_a") || !j.contains("stage_b"))
            throw ValidationError("two-stage config needs \"stage_a\" and \"stage_b\"");
        c.spec_a = model_spec_from_json(j["stage_a"]);
        c.spec_b = model_spec_from_json(j["stage_b"]);
        if (!j.contains("method")) throw ValidationError("two-stage config needs \"method\"");
    }
    if (j.contains("method")) c.method = partition_method_from_json(j["method"]);
    return c;
}

json provenance_json(const RunConfig& cfg) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(slurp_file(cfg.dataset))));
    return {{"config", cfg.raw},
            {"dataset_fnv1a", hash},
            {"split_seed", cfg.split_seed},
            {"seed", cfg.seed}};
}

std::string table3_csv(const TrainPartition& part) {
    std::ostringstream out;
    out << "method,label0,label1,label2,sum\n";
    out << part.method_tag << "," << part.p0.size() << "," << part.n.size() << ","
        << part.p2.size() << "," << (part.p0.size() + part.n.size() + part.p2.size()) << "\n";
    return out.str();
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir) {
    RunConfig cfg = run_config_from_json(load_json_file(config_path));
    Dataset ds = load_dataset(cfg.dataset);
    SplitPair sp = stratified_split(ds, cfg.split_ratio, cfg.split_seed);

    json report;
    report["provenance"] = provenance_json(cfg);
    report["train_size"] = sp.train.size();
    report["test_size"] = sp.test.size();

    if (cfg.single) {
        EvalReport er = run_single_stage(sp.train, sp.test, *cfg.single, cfg.resample,
                                         cfg.use_engineered);
        report["mode"] = "single";
        report["report"] = report_to_json(er);
        Featurizer fz = Featurizer::fit(sp.train, cfg.use_engineered);
        Matrix X = fz.rows(sp.train);
        std::vector<int> y = gold_labels(sp.train);
        if (cfg.resample.strategy != ResampleStrategy::none)
            std::tie(X, y) = resample(X, y, cfg.resample, cfg.single->seed);
        TrainedModel m = negcamp::train(*cfg.single, X, y);
        write_text(out_dir / "model.json", model_to_json(m).dump(2) + "\n");
    } else {
        RunResult rr = run_two_stage(sp.train, sp.test, *cfg.method, *cfg.spec_a, *cfg.spec_b,
                                     cfg.resample, cfg.seed, cfg.use_engineered);
        report["mode"] = "two-stage";
        report["report"] = report_to_json(rr.report);
        report["partition"] = partition_counts_json(rr.partition);
        write_text(out_dir / "table3.csv", table3_csv(rr.partition));
        std::ostringstream audit;
        write_partition_audit(rr.partition, sp.train, audit);
        write_text(out_dir / "partition.csv", audit.str());
        json bundle = cascade_to_json(rr.cascade);
        bundle["config"] = cfg.raw;
        write_text(out_dir / "cascade.json", bundle.dump(2) + "\n");
    }
    write_text(out_dir / "report.json", report.dump(2) + "\n");
    std::cout << report["report"]["provenance"].get<std::string>()
              << " f1_macro=" << report["report"]["f1_macro"].dump()
              << " f1_weighted=" << report["report"]["f1_weighted"].dump() << "\n";
    return 0;
}

// --- grid -------------------------------------------------------------------

struct GridCell {
    std::string method_tag, a_kind, b_kind;
    bool failed = false;
    std::string error;
    EvalReport report;
};

int cmd_grid(const fs::path& config_path, const fs::path& out_dir) {
    json j = load_json_file(config_path);
    RunConfig base;
    base.raw = j;
    if (!j.contains("dataset")) throw ValidationError("config missing \"dataset\"");
    base.dataset = j["dataset"].get<std::string>();
    if (!fs::exists(base.dataset))
        throw ValidationError("dataset file not found: " + base.dataset.string());
    base.split_ratio = j.value("split_ratio", 0.85);
    base.split_seed = j.value("split_seed", 0);
    base.seed = j.value("seed", 0);
    base.use_engineered = j.value("use_engineered", false);
    if (j.contains("resample")) base.resample = resample_from_json(j["resample"]);
    if (!j.contains("grid")) throw ValidationError("grid config missing \"grid\"");
    const json& g = j["grid"];

    std::vector<PartitionMethod> methods;
    for (double t : g.value("thresholds", std::vector<double>{})) {
        PartitionMethod pm;
        pm.use_axis = true;
        pm.threshold.t = t;
        methods.push_back(pm);
    }
    if (g.contains("cluster_methods"))
        for (const auto& cm : g["cluster_methods"]) {
            PartitionMethod pm;
            pm.use_axis = false;
            pm.cluster_method = cluster_method_from_json(cm);
            methods.push_back(pm);
        }
    std::vector<std::string> a_kinds = g.value("stage_a_kinds", std::vector<std::string>{});
    std::vector<std::string> b_kinds = g.value("stage_b_kinds", std::vector<std::string>{});
    std::vector<std::string> single_kinds = g.value("single_kinds", std::vector<std::string>{});
    std::string metric = g.value("metric", "f1_macro");
    if (metric != "f1_macro" && metric != "f1_weighted")
        throw ValidationError("unknown selection metric: " + metric);
    if (methods.empty() || a_kinds.empty() || b_kinds.empty())
        throw ValidationError("grid lists must be non-empty");

    // one fixed split for every cell
    Dataset ds = load_dataset(base.dataset);
    SplitPair sp = stratified_split(ds, base.split_ratio, base.split_seed);

    auto spec_for = [&](const std::string& kind, std::uint64_t seed) {
        json sj = g.value("model_defaults", json::object());
        sj["kind"] = kind;
        ModelSpec s = model_spec_from_json(sj);
        s.seed = seed;
        return s;
    };

    std::vector<GridCell> cells;
    std::size_t run_index = 0;
    for (const auto& pm : methods)
        for (const auto& ak : a_kinds)
            for (const auto& bk : b_kinds) {
                GridCell cell;
                cell.method_tag = pm.tag();
                cell.a_kind = ak;
                cell.b_kind = bk;
                std::uint64_t cell_seed = base.seed ^ run_index;
                try {
                    RunResult rr = run_two_stage(sp.train, sp.test, pm, spec_for(ak, cell_seed),
                                                 spec_for(bk, cell_seed + 1), base.resample,
                                                 cell_seed, base.use_engineered);
                    cell.report = rr.report;
                } catch (const std::exception& e) {
                    cell.failed = true;
                    cell.error = e.what();
                }
                cells.push_back(std::move(cell));
                ++run_index;
            }
    for (const auto& sk : single_kinds) {
        GridCell cell;
        cell.method_tag = "single";
        cell.a_kind = sk;
        cell.b_kind = "-";
        std::uint64_t cell_seed = base.seed ^ run_index;
        try {
            cell.report = run_single_stage(sp.train, sp.test, spec_for(sk, cell_seed),
                                           base.resample, base.use_engineered);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
        cells.push_back(std::move(cell));
        ++run_index;
    }

    auto metric_of = [&](const GridCell& c) {
        return metric == "f1_macro" ? c.report.f1m : c.report.f1w;
    };
    std::stable_sort(cells.begin(), cells.end(), [&](const GridCell& a, const GridCell& b) {
        if (a.failed != b.failed) return !a.failed;
        return metric_of(a) > metric_of(b);
    });

    char buf[160];
    std::ostringstream t4;
    t4 << "rank,method,stage_a,stage_b,f1_macro,f1_weighted,precision1,recall1,f1_1,best,error\n";
    json jcells = json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const GridCell& c = cells[i];
        json jc = {{"method", c.method_tag}, {"stage_a", c.a_kind}, {"stage_b", c.b_kind},
                   {"rank", i + 1}, {"best", i == 0 && !c.failed}};
        t4 << (i + 1) << "," << c.method_tag << "," << c.a_kind << "," << c.b_kind << ",";
        if (c.failed) {
            jc["error"] = c.error;
            t4 << ",,,,,," << c.error << "\n";
        } else {
            jc["report"] = report_to_json(c.report);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g", c.report.f1m,
                          c.report.f1w, c.report.class1.precision, c.report.class1.recall,
                          c.report.class1.f1);
            t4 << buf << "," << (i == 0 ? "best" : "") << ",\n";
        }
        jcells.push_back(std::move(jc));
    }
    json out = {{"config", j}, {"metric", metric}, {"cells", jcells}};
    write_text(out_dir / "table4.csv", t4.str());
    write_text(out_dir / "grid.json", out.dump(2) + "\n");
    for (std::size_t i = 0; i < std::min<std::size_t>(cells.size(), 5); ++i) {
        const auto& c = cells[i];
        std::cout << (i + 1) << ". " << c.method_tag << "/" << c.a_kind << "-" << c.b_kind;
        if (c.failed) std::cout << " FAILED: " << c.error;
        else std::cout << " " << metric << "=" << metric_of(c);
        std::cout << "\n";
    }
    return 0;
}

// --- prep -------------------------------------------------------------------

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

int cmd_prep(const fs::path& input, const fs::path& output, int level,
             const std::string& stopwords, const std::string& emoji_map,
             const std::string& insults, const std::string& persons, const std::string& orgs,
             bool features, bool drop_removable, std::size_t ngram_k, long election_date) {
    PrepResources res;
    if (!stopwords.empty()) res.stopwords = load_token_set(stopwords);
    if (!emoji_map.empty()) res.emoji_map = load_emoji_map(emoji_map);
    if (!insults.empty()) res.insult_lexicon = load_token_set(insults);
    if (!persons.empty()) res.person_lexicon = load_name_list(persons);
    if (!orgs.empty()) res.org_lexicon = load_name_list(orgs);
    PrepLevel lvl = level == 1 ? PrepLevel::L1 : level == 2 ? PrepLevel::L2 : PrepLevel::L3;

    Dataset ds = load_dataset(input);
    Dataset out;
    std::vector<std::vector<std::string>> tokens;
    std::size_t dropped = 0;
    for (const auto& r : ds.records()) {
        auto toks = preprocess(r.text.value_or(""), lvl, res);
        if (drop_removable && document_removable(toks)) {
            ++dropped;
            continue;
        }
        Document d = r;
        std::string joined;
        for (const auto& t : toks) {
            if (!joined.empty()) joined += ' ';
            joined += t;
        }
        d.text = joined;
        tokens.push_back(std::move(toks));
        out.add(std::move(d));
    }
    if (features) {
        bool any_label = false;
        for (const auto& r : out.records()) any_label |= r.label.has_value();
        NgramVocab vocab;
        if (any_label) {
            Dataset labeled;
            std::vector<std::vector<std::string>> labeled_tokens;
            for (std::size_t i = 0; i < out.size(); ++i)
                if (out[i].label) {
                    labeled.add(out[i]);
                    labeled_tokens.push_back(tokens[i]);
                }
            vocab = build_ngram_vocab(labeled, labeled_tokens, ngram_k);
        }
        FeatureConfig fc;
        if (election_date > 0) fc.election_date = election_date;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i].features = extract_features(out[i], tokens[i], res, vocab, fc);
    }
    std::ostringstream buf;
    save_jsonl(out, buf);
    write_text(output, buf.str());
    std::cout << "kept " << out.size() << " records, dropped " << dropped << "\n";
    return 0;
}

// --- embed ------------------------------------------------------------------

int cmd_embed(const fs::path& input, const fs::path& vectors, const fs::path& output,
              bool keep_missing) {
    std::ifstream vin(vectors);
    if (!vin) throw ValidationError("cannot open " + vectors.string());
    WordEmbeddings we = load_word_vectors(vin, vectors.string(), &std::cerr);
    Dataset ds = load_dataset(input);
    Dataset out;
    std::size_t missing = 0;
    for (const auto& r : ds.records()) {
        auto emb = doc_embedding(split_ws(r.text.value_or("")), we);
        if (!emb) {
            ++missing;
            if (!keep_missing) continue;
            throw std::runtime_error("record '" + r.id + "' has no in-lexicon tokens");
        }
        Document d = r;
        d.embedding = std::move(*emb);
        out.add(std::move(d));
    }
    std::ostringstream buf;
    save_jsonl(out, buf);
    write_text(output, buf.str());
    std::cout << "embedded " << out.size() << " records, skipped " << missing << "\n";
    return 0;
}

// --- select-uncertain / score ----------------------------------------------

TrainedModel load_scoring_model(const fs::path& p, Cascade* cascade_out = nullptr) {
    json j = load_json_file(p);
    if (j.contains("stage_a")) {
        Cascade c = cascade_from_json(j);
        if (cascade_out) *cascade_out = c;
        return c.stage_a;
    }
    return model_from_json(j);
}

int cmd_select_uncertain(const fs::path& model_path, const fs::path& pool_path, std::size_t n,
                         const std::string& out_file) {
    TrainedModel m = load_scoring_model(model_path);
    Dataset pool = load_dataset(pool_path);
    Featurizer fz;  // embedding-only scoring
    auto ids = select_uncertain(m, pool, fz, n);
    std::ostringstream out;
    for (const auto& id : ids) out << id << "\n";
    if (out_file.empty()) std::cout << out.str();
    else write_text(out_file, out.str());
    return 0;
}

int cmd_score(const fs::path& model_path, const fs::path& pool_path, const std::string& out_file) {
    Cascade c;
    json j = load_json_file(model_path);
    if (!j.contains("stage_a")) throw ValidationError("score needs a cascade bundle");
    c = cascade_from_json(j);
    Dataset pool = load_dataset(pool_path);
    Featurizer fz;
    auto scored = score_corpus(c, pool, fz);
    std::ostringstream out;
    out << "id,label,score_a,score_b\n";
    char buf[64];
    std::size_t n1 = 0;
    for (const auto& s : scored) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g", s.score_a, s.score_b);
        out << s.id << "," << s.label << "," << buf << "\n";
        n1 += s.label;
    }
    if (out_file.empty()) std::cout << out.str();
    else write_text(out_file, out.str());
    std::cout << "scored " << scored.size() << " records: " << n1 << " negative-campaign, "
              << (scored.size() - n1) << " other\n";
    return 0;
}

// --- regress ----------------------------------------------------------------

int cmd_regress(const fs::path& input, const std::string& response, const std::string& out_file) {
    std::ifstream in(input);
    if (!in) throw ValidationError("cannot open " + input.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty CSV " + input.string());
    std::vector<std::string> cols;
    {
        std::istringstream hs(line);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    auto rcol = std::find(cols.begin(), cols.end(), response);
    if (rcol == cols.end()) throw ValidationError("response column not found: " + response);
    std::size_t ri = static_cast<std::size_t>(rcol - cols.begin());

    DesignMatrix d;
    d.names.push_back("intercept");
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (i != ri) d.names.push_back(cols[i]);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        Vector row = {1.0};
        long resp = 0;
        std::size_t ci = 0;
        while (std::getline(ls, cell, ',')) {
            try {
                if (ci == ri) resp = std::stol(cell);
                else row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError(input.string() + " line " + std::to_string(lineno) +
                                      ": bad number '" + cell + "'");
            }
            ++ci;
        }
        if (ci != cols.size())
            throw ValidationError(input.string() + " line " + std::to_string(lineno) +
                                  ": wrong column count");
        d.rows.push_back(std::move(row));
        d.response.push_back(resp);
    }

    RegressionResult r = fit_nb2(d);
    std::ostringstream out;
    out << "variable,coef,std_err,z,p,stars\n";
    char buf[128];
    for (const auto& ce : r.coefficients) {
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.4g,%.4g", ce.coef, ce.std_err, ce.z, ce.p);
        out << ce.name << "," << buf << "," << significance_stars(ce.p) << "\n";
    }
    std::snprintf(buf, sizeof(buf), "alpha=%.6g log_likelihood=%.6f iterations=%zu converged=%s\n",
                  r.alpha, r.log_likelihood, r.iterations, r.converged ? "yes" : "no");
    if (out_file.empty()) std::cout << out.str();
    else write_text(out_file, out.str());
    std::cout << buf;
    return 0;
}

// --- plot -------------------------------------------------------------------

int cmd_plot(const fs::path& input, const fs::path& out_dir, const std::string& partition_csv,
             const std::string& color_pos, const std::string& color_neg) {
    Dataset ds = load_dataset(input);
    Matrix X;
    for (const auto& r : ds.records()) {
        if (!r.embedding) throw ValidationError("record '" + r.id + "' has no embedding");
        X.push_back(*r.embedding);
    }
    std::map<std::string, std::string> tags;
    if (!partition_csv.empty()) {
        std::ifstream pin(partition_csv);
        if (!pin) throw ValidationError("cannot open " + partition_csv);
        std::string line;
        std::getline(pin, line);  // header
        while (std::getline(pin, line)) {
            auto c1 = line.find(','), c2 = line.rfind(',');
            if (c1 == std::string::npos || c2 <= c1) continue;
            tags[line.substr(0, c1)] = line.substr(c2 + 1);
        }
    }
    PcaModel pm = pca_fit(X, 2);
    Matrix T = pca_transform(pm, X);
    std::vector<ScatterPoint> pts;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        ScatterPoint p;
        p.id = ds[i].id;
        p.pc1 = T[i][0];
        p.pc2 = T[i][1];
        p.gold_label = ds[i].label.value_or(0);
        auto it = tags.find(p.id);
        if (it != tags.end()) p.tag = it->second;
        pts.push_back(std::move(p));
    }
    std::ostringstream csv, svg;
    write_scatter_csv(pts, csv);
    write_scatter_svg(pts, svg, color_pos, color_neg);
    write_text(out_dir / "scatter.csv", csv.str());
    write_text(out_dir / "scatter.svg", svg.str());
    std::cout << "wrote " << pts.size() << " points, pc variance "
              << pm.explained_variance[0] + pm.explained_variance[1] << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-stage campaign-negativity classifier harness"};
    app.require_subcommand(1);

    std::string config, out = "out";
    std::string input, output, vectors, model, pool, response, partition;
    std::string stopwords, emoji_map, insults, persons, orgs;
    std::string color_pos = "purple", color_neg = "red";
    int level = 3;
    bool features = false, drop_removable = false, keep_missing = false;
    std::size_t n = 10, ngram_k = 100;
    long election_date = 0;

    auto* c_prep = app.add_subcommand("prep", "tokenize text and extract features");
    c_prep->add_option("-i,--input", input)->required();
    c_prep->add_option("-o,--output", output)->required();
    c_prep->add_option("-l,--level", level)->check(CLI::Range(1, 3));
    c_prep->add_option("--stopwords", stopwords);
    c_prep->add_option("--emoji-map", emoji_map);
    c_prep->add_option("--insults", insults);
    c_prep->add_option("--persons", persons);
    c_prep->add_option("--orgs", orgs);
    c_prep->add_flag("--features", features, "compute engineered features");
    c_prep->add_flag("--drop-removable", drop_removable, "drop records with <3 usable tokens");
    c_prep->add_option("--ngram-k", ngram_k, "top-k n-grams per class");
    c_prep->add_option("--election-date", election_date, "election date (unix seconds)");

    auto* c_embed = app.add_subcommand("embed", "attach mean word-vector embeddings");
    c_embed->add_option("-i,--input", input)->required();
    c_embed->add_option("-v,--vectors", vectors)->required();
    c_embed->add_option("-o,--output", output)->required();
    c_embed->add_flag("--strict", keep_missing, "fail on records with no in-lexicon tokens");

    auto* c_run = app.add_subcommand("run", "one end-to-end experiment");
    c_run->add_option("-c,--config", config)->required();
    c_run->add_option("-o,--out", out);

    auto* c_grid = app.add_subcommand("grid", "threshold x model grid search");
    c_grid->add_option("-c,--config", config)->required();
    c_grid->add_option("-o,--out", out);

    auto* c_sel = app.add_subcommand("select-uncertain", "pick pool records nearest score 0.5");
    c_sel->add_option("-m,--model", model)->required();
    c_sel->add_option("-p,--pool", pool)->required();
    c_sel->add_option("-n,--count", n);
    c_sel->add_option("-o,--out", output);

    auto* c_score = app.add_subcommand("score", "score a corpus with a cascade bundle");
    c_score->add_option("-m,--model", model)->required();
    c_score->add_option("-p,--pool", pool)->required();
    c_score->add_option("-o,--out", output);

    auto* c_reg = app.add_subcommand("regress", "NB2 count regression from CSV");
    c_reg->add_option("-i,--input", input)->required();
    c_reg->add_option("-r,--response", response)->required();
    c_reg->add_option("-o,--out", output);

    auto* c_plot = app.add_subcommand("plot", "PCA scatter data (CSV + SVG)");
    c_plot->add_option("-i,--input", input)->required();
    c_plot->add_option("-o,--out", out);
    c_plot->add_option("--partition", partition, "partition audit CSV for point tags");
    c_plot->add_option("--color-pos", color_pos);
    c_plot->add_option("--color-neg", color_neg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_prep->parsed())
            return cmd_prep(input, output, level, stopwords, emoji_map, insults, persons, orgs,
                            features, drop_removable, ngram_k, election_date);
        if (c_embed->parsed()) return cmd_embed(input, vectors, output, keep_missing);
        if (c_run->parsed()) return cmd_run(config, out);
        if (c_grid->parsed()) return cmd_grid(config, out);
        if (c_sel->parsed()) return cmd_select_uncertain(model, pool, n, output);
        if (c_score->parsed()) return cmd_score(model, pool, output);
        if (c_reg->parsed()) return cmd_regress(input, response, output);
        if (c_plot->parsed()) return cmd_plot(input, out, partition, color_pos, color_neg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
