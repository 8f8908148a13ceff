//  Copyright 2026 The vecstab Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "vecstab/error.hpp"
#include "vecstab/evaluate.hpp"
#include "vecstab/pipeline.hpp"
#include "vecstab/rng.hpp"
#include "vecstab/textio.hpp"

namespace {

using namespace vecstab;

struct Options {
    std::string corpus;
    std::string corpus_format = "auto";
    std::string out;
    uint32_t window = 5;
    uint64_t min_count = 50;
    double threshold_t = 1e-4;
    std::string df = "none";
    std::string ff = "none";
    std::string oov_policy = "remove";
    uint32_t dim = 500;
    double eig_exponent = 0.0;
    double alpha = 1.0;
    uint32_t models = 10;
    uint64_t anchors = 1000;
    uint32_t jaccard_n = 10;
    std::optional<uint64_t> seed;
    bool subsample = false;
    uint32_t threads = 0;
    std::string dump_counts;
    std::string dump_ppmi;
    std::vector<std::string> model_files;
    std::vector<std::string> sim_testsets;
    std::vector<std::string> analogy_testsets;
    std::string ref_vocab;
};

CorpusFormat parse_format(const std::string& name) {
    if (name == "auto") return CorpusFormat::auto_detect;
    if (name == "dir") return CorpusFormat::one_doc_per_file;
    if (name == "lines") return CorpusFormat::one_doc_per_line;
    raise(Errc::usage, "unknown corpus format '" + name + "' (expected auto|dir|lines)");
}

OovPolicy parse_oov(const std::string& name) {
    if (name == "remove") return OovPolicy::remove;
    if (name == "keep") return OovPolicy::keep;
    raise(Errc::usage, "unknown oov policy '" + name + "' (expected remove|keep)");
}

TrainConfig make_train_config(const Options& o) {
    TrainConfig c;
    c.sampling.window_size = o.window;
    c.sampling.freq_threshold = o.threshold_t;
    c.sampling.df_strategy = strategy_from_string(o.df);
    c.sampling.ff_strategy = strategy_from_string(o.ff);
    c.sampling.rng_seed = o.seed;
    c.min_count = o.min_count;
    c.oov_policy = parse_oov(o.oov_policy);
    c.alpha = o.alpha;
    c.dim = o.dim;
    c.eig_exponent = o.eig_exponent;
    c.threads = o.threads;
    c.dump_counts_path = o.dump_counts;
    c.dump_ppmi_path = o.dump_ppmi;
    return c;
}

void add_sampling_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--window", o.window, "context window size per side")->capture_default_str();
    cmd->add_option("--min-count", o.min_count, "minimum word frequency")->capture_default_str();
    cmd->add_option("--threshold-t", o.threshold_t, "frequency down-sampling threshold t")
        ->capture_default_str();
    cmd->add_option("--df", o.df, "distance factor strategy: none|prob|weight")
        ->capture_default_str();
    cmd->add_option("--ff", o.ff, "frequency factor strategy: none|prob|weight")
        ->capture_default_str();
    cmd->add_option("--oov-policy", o.oov_policy, "below-threshold tokens: remove|keep")
        ->capture_default_str();
    cmd->add_option("--dim", o.dim, "embedding dimensionality")->capture_default_str();
    cmd->add_option("--eig-exponent", o.eig_exponent, "singular-value weighting exponent")
        ->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "context distribution smoothing in (0,1]")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "master RNG seed (absent = entropy)");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")->capture_default_str();
}

void add_corpus_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--corpus", o.corpus, "corpus path (directory or line file)")->required();
    cmd->add_option("--corpus-format", o.corpus_format, "auto|dir|lines")->capture_default_str();
}

int cmd_train(const Options& o) {
    Corpus corpus = load_corpus(o.corpus, parse_format(o.corpus_format));
    TrainedModel model = train_to_dir(corpus, make_train_config(o), o.out);
    std::printf("trained %u words x %u dims from %zu documents (%llu tokens)\n",
                model.space.size(), model.space.dim(), corpus.documents.size(),
                static_cast<unsigned long long>(corpus.total_tokens));
    std::printf("model written to %s\n", o.out.c_str());
    for (const auto& [stage, secs] : model.timings_seconds) {
        std::printf("  %-14s %8.2fs\n", stage.c_str(), secs);
    }
    return 0;
}

int cmd_subsample(const Options& o) {
    Corpus corpus = load_corpus(o.corpus, parse_format(o.corpus_format));
    const uint64_t seed = o.seed ? *o.seed : entropy_seed();
    Corpus sample = bootstrap_subsample(corpus, seed);
    save_corpus_lines(sample, o.out);
    std::printf("kept %zu of %zu documents (%.4f), seed %llu -> %s\n", sample.documents.size(),
                corpus.documents.size(),
                static_cast<double>(sample.documents.size()) /
                    static_cast<double>(corpus.documents.size()),
                static_cast<unsigned long long>(seed), o.out.c_str());
    return 0;
}

int cmd_eval_sim(const Options& o) {
    EmbeddingSpace space = EmbeddingSpace::load(o.model_files.at(0));
    std::printf("testset\trho\tcoverage\tused\ttotal\n");
    for (const auto& path : o.sim_testsets) {
        SimilarityTestSet set = SimilarityTestSet::load(path);
        SimilarityResult r = eval_similarity(space, set);
        std::printf("%s\t%s\t%s\t%zu\t%zu\n", std::filesystem::path(path).stem().string().c_str(),
                    fmt_double(r.rho, 6).c_str(), fmt_double(r.coverage, 6).c_str(), r.pairs_used,
                    r.pairs_total);
    }
    return 0;
}

int cmd_eval_analogy(const Options& o) {
    EmbeddingSpace space = EmbeddingSpace::load(o.model_files.at(0));
    std::printf("testset\tsection\taccuracy\tcoverage\tcorrect\tanswered\ttotal\n");
    for (const auto& path : o.analogy_testsets) {
        AnalogyTestSet set = AnalogyTestSet::load(path);
        AnalogyResult r = eval_analogy(space, set, o.threads);
        const std::string label = std::filesystem::path(path).stem().string();
        for (const auto& sec : r.sections) {
            if (sec.total == 0) continue;
            const double acc = sec.answered
                                   ? static_cast<double>(sec.correct) /
                                         static_cast<double>(sec.answered)
                                   : 0.0;
            std::printf("%s\t%s\t%s\t%s\t%zu\t%zu\t%zu\n", label.c_str(), sec.name.c_str(),
                        fmt_double(acc, 6).c_str(),
                        fmt_double(sec.total ? static_cast<double>(sec.answered) /
                                                   static_cast<double>(sec.total)
                                             : 0.0, 6)
                            .c_str(),
                        sec.correct, sec.answered, sec.total);
        }
        std::printf("%s\t<all>\t%s\t%s\t%zu\t%zu\t%zu\n", label.c_str(),
                    fmt_double(r.accuracy, 6).c_str(), fmt_double(r.coverage, 6).c_str(), r.correct,
                    r.answered, r.total);
    }
    return 0;
}

int cmd_stability(const Options& o) {
    if (o.model_files.size() < 2) raise(Errc::usage, "stability needs at least 2 --model files");
    std::vector<EmbeddingSpace> spaces;
    spaces.reserve(o.model_files.size());
    for (const auto& path : o.model_files) spaces.push_back(EmbeddingSpace::load(path));

    Vocabulary ref = Vocabulary::load_tsv(o.ref_vocab);
    size_t dropped = 0;
    std::vector<std::string> anchors = select_anchors(
        ref, std::min<size_t>(o.anchors, ref.size()), spaces, &dropped);

    if (spaces.size() >= 3) {
        StabilityReport report = jackknife_stability(spaces, anchors, o.jaccard_n, o.threads);
        report.anchors_dropped += dropped;
        std::printf("metric\tvalue\n");
        std::printf("jackknife_j@%u_mean\t%s\n", report.n, fmt_double(report.mean, 6).c_str());
        std::printf("jackknife_j@%u_std\t%s\n", report.n, fmt_double(report.stddev, 6).c_str());
        std::printf("anchors_used\t%zu\n", report.anchors_used);
        std::printf("anchors_dropped\t%zu\n", report.anchors_dropped);
        for (size_t i = 0; i < report.jackknife_values.size(); ++i) {
            std::printf("leave_out_%zu\t%s\n", i, fmt_double(report.jackknife_values[i], 6).c_str());
        }
    } else {
        size_t more_dropped = 0;
        const double j = jaccard_at_n(spaces, anchors, o.jaccard_n, &more_dropped, o.threads);
        std::printf("metric\tvalue\n");
        std::printf("j@%u\t%s\n", o.jaccard_n, fmt_double(j, 6).c_str());
        std::printf("anchors_used\t%zu\n", anchors.size() - more_dropped);
        std::printf("anchors_dropped\t%zu\n", dropped + more_dropped);
        std::printf("note\tjackknife needs >= 3 models\n");
    }
    return 0;
}

int cmd_experiment(const Options& o) {
    ExperimentConfig config;
    config.corpus_path = o.corpus;
    config.corpus_format = parse_format(o.corpus_format);
    config.train = make_train_config(o);
    config.train.sampling.rng_seed.reset();  // per-model seeds come from the master
    config.model_count = o.models;
    config.subsample = o.subsample;
    config.master_seed = o.seed;
    for (const auto& p : o.sim_testsets) config.similarity_testsets.emplace_back(p);
    for (const auto& p : o.analogy_testsets) config.analogy_testsets.emplace_back(p);
    config.anchor_count = o.anchors;
    config.jaccard_n = o.jaccard_n;
    config.output_dir = o.out;

    ExperimentReport report = run_experiment(config);
    std::fputs(report.to_tsv().c_str(), stdout);
    std::printf("report written to %s\n", (config.output_dir / "report.tsv").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PPMI/SVD word embedding trainer with stability evaluation"};
    app.require_subcommand(1);
    Options o;

    CLI::App* train_cmd = app.add_subcommand("train", "train one embedding model");
    add_corpus_options(train_cmd, o);
    add_sampling_options(train_cmd, o);
    train_cmd->add_option("--out", o.out, "output model directory")->required();
    train_cmd->add_option("--save-counts", o.dump_counts, "dump the co-occurrence matrix");
    train_cmd->add_option("--save-ppmi", o.dump_ppmi, "dump the PPMI matrix");

    CLI::App* subsample_cmd =
        app.add_subcommand("subsample", "bootstrap-subsample a corpus at the text level");
    add_corpus_options(subsample_cmd, o);
    subsample_cmd->add_option("--seed", o.seed, "RNG seed (absent = entropy)");
    subsample_cmd->add_option("--out", o.out, "output corpus file (one document per line)")
        ->required();

    CLI::App* eval_sim_cmd =
        app.add_subcommand("eval-sim", "word-similarity correlation of a saved model");
    eval_sim_cmd->add_option("--model", o.model_files, "embedding file")->required()->expected(1);
    eval_sim_cmd->add_option("--testset", o.sim_testsets, "similarity test set file(s)")
        ->required();

    CLI::App* eval_ana_cmd =
        app.add_subcommand("eval-analogy", "analogy accuracy of a saved model");
    eval_ana_cmd->add_option("--model", o.model_files, "embedding file")->required()->expected(1);
    eval_ana_cmd->add_option("--testset", o.analogy_testsets, "analogy test set file(s)")
        ->required();
    eval_ana_cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");

    CLI::App* stability_cmd =
        app.add_subcommand("stability", "j@n stability of saved models (jackknifed)");
    stability_cmd->add_option("--model", o.model_files, "embedding files (>= 2)")->required();
    stability_cmd->add_option("--ref-vocab", o.ref_vocab, "reference vocabulary TSV for anchors")
        ->required();
    stability_cmd->add_option("--anchors", o.anchors, "anchor word count")->capture_default_str();
    stability_cmd->add_option("--jaccard-n", o.jaccard_n, "neighborhood size n")
        ->capture_default_str();
    stability_cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");

    CLI::App* experiment_cmd =
        app.add_subcommand("experiment", "train M models and report accuracy + stability");
    add_corpus_options(experiment_cmd, o);
    add_sampling_options(experiment_cmd, o);
    experiment_cmd->add_option("--out", o.out, "experiment output directory")->required();
    experiment_cmd->add_option("--models", o.models, "number of models M")->capture_default_str();
    experiment_cmd->add_flag("--subsample", o.subsample,
                             "train each model on an independent bootstrap subsample");
    experiment_cmd->add_option("--sim-testset", o.sim_testsets, "similarity test set file(s)");
    experiment_cmd->add_option("--analogy-testset", o.analogy_testsets, "analogy test set file(s)");
    experiment_cmd->add_option("--anchors", o.anchors, "anchor word count")->capture_default_str();
    experiment_cmd->add_option("--jaccard-n", o.jaccard_n, "neighborhood size n")
        ->capture_default_str();

    for (CLI::App* sub : {train_cmd, subsample_cmd, eval_sim_cmd, eval_ana_cmd, stability_cmd,
                          experiment_cmd}) {
        sub->set_config("--config", "", "key=value config file mirroring the flags");
    }

    try {
        app.parse(argc, argv);
        if (train_cmd->parsed()) return cmd_train(o);
        if (subsample_cmd->parsed()) return cmd_subsample(o);
        if (eval_sim_cmd->parsed()) return cmd_eval_sim(o);
        if (eval_ana_cmd->parsed()) return cmd_eval_analogy(o);
        if (stability_cmd->parsed()) return cmd_stability(o);
        if (experiment_cmd->parsed()) return cmd_experiment(o);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const vecstab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return vecstab::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
