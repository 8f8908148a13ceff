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

#include "vecstab/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <limits>

#include "vecstab/error.hpp"
#include "vecstab/parallel.hpp"
#include "vecstab/ppmi.hpp"
#include "vecstab/rng.hpp"
#include "vecstab/textio.hpp"

namespace vecstab {

using nlohmann::json;

namespace {

constexpr uint64_t kSubsampleTag = 0x73756273616D706CULL;  // stream tag "subsampl"
constexpr uint64_t kSamplingTag = 0x636F6F6373616D70ULL;   // stream tag "coocsamp"

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), std::string(stage) + ": " + e.what());
    }
}

json sampling_to_json(const SamplingConfig& s) {
    json j;
    j["window"] = s.window_size;
    j["threshold_t"] = s.freq_threshold;
    j["df"] = to_string(s.df_strategy);
    j["ff"] = to_string(s.ff_strategy);
    if (s.rng_seed) {
        j["seed"] = *s.rng_seed;
    } else {
        j["seed"] = nullptr;
    }
    return j;
}

json train_to_json(const TrainConfig& c) {
    json j;
    j["sampling"] = sampling_to_json(c.sampling);
    j["min_count"] = c.min_count;
    j["oov_policy"] = c.oov_policy == OovPolicy::remove ? "remove" : "keep";
    j["alpha"] = c.alpha;
    j["dim"] = c.dim;
    j["eig_exponent"] = c.eig_exponent;
    return j;
}

}  // namespace

uint32_t TrainConfig::resolved_threads() const { return resolve_threads(threads); }

uint64_t derive_model_seed(uint64_t master_seed, uint32_t model_index) {
    // splitmix64 step at position (model_index + 1) of the master stream
    return mix64(master_seed + (static_cast<uint64_t>(model_index) + 1) * 0x9E3779B97F4A7C15ULL);
}

uint64_t derive_subsample_seed(uint64_t model_seed) { return mix64(model_seed ^ kSubsampleTag); }

uint64_t derive_sampling_seed(uint64_t model_seed) { return mix64(model_seed ^ kSamplingTag); }

TrainedModel train(const Corpus& corpus, const TrainConfig& config) {
    const uint32_t threads = config.resolved_threads();
    TrainedModel model;

    Stopwatch total;
    {
        Stopwatch w;
        model.vocab = run_stage("vocabulary", [&] { return Vocabulary::build(corpus, config.min_count); });
        model.timings_seconds["vocabulary"] = w.seconds();
    }
    SparseMatrix counts;
    {
        Stopwatch w;
        counts = run_stage("cooccurrence", [&] {
            auto streams = to_id_streams(corpus, model.vocab, config.oov_policy);
            return accumulate(streams, model.vocab, config.sampling, threads);
        });
        if (!config.dump_counts_path.empty()) counts.save(config.dump_counts_path);
        model.timings_seconds["cooccurrence"] = w.seconds();
    }
    SparseMatrix ppmi;
    {
        Stopwatch w;
        ppmi = run_stage("ppmi", [&] { return to_ppmi(counts, config.alpha); });
        if (!config.dump_ppmi_path.empty()) ppmi.save(config.dump_ppmi_path);
        counts = SparseMatrix();
        model.timings_seconds["ppmi"] = w.seconds();
    }
    TruncatedSvd svd;
    {
        Stopwatch w;
        svd = run_stage("svd", [&] {
            if (config.dim > std::min(ppmi.rows(), ppmi.cols())) {
                raise(Errc::bad_argument,
                      "dimension " + std::to_string(config.dim) +
                          " exceeds the vocabulary size " + std::to_string(ppmi.rows()));
            }
            SvdOptions options;
            options.threads = threads;
            return truncated_svd(ppmi, config.dim, options);
        });
        model.timings_seconds["svd"] = w.seconds();
    }
    {
        Stopwatch w;
        DenseMatrix embeddings = run_stage(
            "embeddings", [&] { return extract_embeddings(svd, config.eig_exponent); });
        model.space = EmbeddingSpace::create(model.vocab, std::move(embeddings));
        model.timings_seconds["embeddings"] = w.seconds();
    }
    model.timings_seconds["total"] = total.seconds();
    return model;
}

TrainedModel train_to_dir(const Corpus& corpus, const TrainConfig& config,
                          const std::filesystem::path& model_dir) {
    std::filesystem::create_directories(model_dir);
    TrainedModel model = train(corpus, config);
    model.space.save(model_dir / "embeddings.vec");
    model.vocab.save_tsv(model_dir / "vocab.tsv");

    json manifest;
    manifest["config"] = train_to_json(config);
    manifest["corpus"]["documents"] = corpus.documents.size();
    manifest["corpus"]["tokens"] = corpus.total_tokens;
    manifest["vocabulary_size"] = model.vocab.size();
    write_file(model_dir / "manifest.json", manifest.dump(2) + "\n");
    return model;
}

void ExperimentConfig::validate() const {
    if (model_count < 1) raise(Errc::usage, "model count must be >= 1");
    if (subsample && model_count < 2) {
        raise(Errc::usage, "subsampling is only meaningful with at least 2 models");
    }
    if (corpus_path.empty() || !std::filesystem::exists(corpus_path)) {
        raise(Errc::io, "corpus path does not exist: " + corpus_path.string());
    }
    for (const auto& p : similarity_testsets) {
        if (!std::filesystem::exists(p)) raise(Errc::io, "test set does not exist: " + p.string());
    }
    for (const auto& p : analogy_testsets) {
        if (!std::filesystem::exists(p)) raise(Errc::io, "test set does not exist: " + p.string());
    }
    if (output_dir.empty()) raise(Errc::usage, "output directory required");
    train.sampling.validate();
}

namespace {

json experiment_to_json(const ExperimentConfig& c) {
    json j;
    j["corpus"] = c.corpus_path.string();
    j["train"] = train_to_json(c.train);
    j["models"] = c.model_count;
    j["subsample"] = c.subsample;
    j["anchors"] = c.anchor_count;
    j["jaccard_n"] = c.jaccard_n;
    json sims = json::array();
    for (const auto& p : c.similarity_testsets) sims.push_back(p.string());
    j["similarity_testsets"] = sims;
    json anas = json::array();
    for (const auto& p : c.analogy_testsets) anas.push_back(p.string());
    j["analogy_testsets"] = anas;
    return j;
}

uint64_t fingerprint_string(const std::string& text) {
    uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (unsigned char ch : text) h = mix64(h ^ ch);
    return h;
}

std::string model_dir_name(uint32_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "model_%02u", index);
    return buf;
}

std::string testset_label(const std::filesystem::path& p) { return p.stem().string(); }

}  // namespace

std::string ExperimentReport::to_tsv() const {
    std::string out = "row_type\tmodel\tmetric\ttestset\tvalue\tstd\tcoverage\tdetail\n";
    for (const auto& m : models) {
        for (const auto& [name, metric] : m.similarity) {
            out += "model\t" + std::to_string(m.model_index) + "\tsimilarity_rho\t" + name +
                   "\t" + fmt17(metric.value) + "\t\t" + fmt17(metric.coverage) + "\t" +
                   metric.detail + "\n";
        }
        for (const auto& [name, metric] : m.analogy) {
            out += "model\t" + std::to_string(m.model_index) + "\tanalogy_accuracy\t" + name +
                   "\t" + fmt17(metric.value) + "\t\t" + fmt17(metric.coverage) + "\t" +
                   metric.detail + "\n";
        }
    }
    if (stability) {
        std::string values;
        for (size_t i = 0; i < stability->jackknife_values.size(); ++i) {
            if (i > 0) values += ',';
            values += fmt17(stability->jackknife_values[i]);
        }
        out += "stability\t-\tjackknife_j@" + std::to_string(stability->n) + "\t-\t" +
               fmt17(stability->mean) + "\t" + fmt17(stability->stddev) + "\t\t" +
               "anchors_used=" + std::to_string(stability->anchors_used) +
               ";anchors_dropped=" + std::to_string(stability->anchors_dropped) +
               ";values=" + values + "\n";
    } else {
        out += "stability\t-\tjackknife\t-\t\t\t\tnot_applicable\n";
    }
    out += "seed\t-\tmaster_seed\t-\t" + std::to_string(master_seed) + "\t\t\t\n";
    return out;
}

std::string ExperimentReport::to_json() const {
    json j;
    j["config"] = config_echo_json.empty() ? json::object() : json::parse(config_echo_json);
    j["master_seed"] = master_seed;
    json jmodels = json::array();
    for (const auto& m : models) {
        json jm;
        jm["index"] = m.model_index;
        jm["seed"] = m.model_seed;
        json jsim = json::object();
        for (const auto& [name, metric] : m.similarity) {
            jsim[name] = {{"metric", "similarity_rho"},
                          {"value", metric.value},
                          {"coverage", metric.coverage},
                          {"detail", metric.detail}};
        }
        jm["similarity"] = jsim;
        json jana = json::object();
        for (const auto& [name, metric] : m.analogy) {
            jana[name] = {{"metric", "analogy_accuracy"},
                          {"value", metric.value},
                          {"coverage", metric.coverage},
                          {"detail", metric.detail}};
        }
        jm["analogy"] = jana;
        jmodels.push_back(jm);
    }
    j["models"] = jmodels;
    if (stability) {
        j["stability"] = {{"metric", "jackknife_j@" + std::to_string(stability->n)},
                          {"n", stability->n},
                          {"anchors_used", stability->anchors_used},
                          {"anchors_dropped", stability->anchors_dropped},
                          {"values", stability->jackknife_values},
                          {"mean", stability->mean},
                          {"std", stability->stddev},
                          {"std_kind", "sample"}};
    } else {
        j["stability"] = nullptr;
    }
    j["timings_seconds"] = timings_seconds;
    return j.dump(2) + "\n";
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    namespace fs = std::filesystem;
    const uint32_t threads = config.train.resolved_threads();

    ExperimentReport report;
    report.master_seed = config.master_seed ? *config.master_seed : entropy_seed();
    report.config_echo_json = experiment_to_json(config).dump();

    Stopwatch total;
    fs::create_directories(config.output_dir);

    // Resume bookkeeping: an output directory belongs to one configuration.
    const uint64_t fingerprint =
        fingerprint_string(report.config_echo_json + "#" + std::to_string(report.master_seed));
    const fs::path resume_path = config.output_dir / "resume.json";
    std::vector<bool> completed(config.model_count, false);
    if (fs::exists(resume_path)) {
        json resume = json::parse(read_file(resume_path));
        if (resume.value("fingerprint", uint64_t{0}) != fingerprint) {
            raise(Errc::usage, "output directory " + config.output_dir.string() +
                                   " holds a different experiment; use a fresh directory");
        }
        report.master_seed = resume["master_seed"].get<uint64_t>();
        for (const auto& idx : resume["completed"]) {
            uint32_t i = idx.get<uint32_t>();
            if (i < config.model_count) completed[i] = true;
        }
    }
    auto write_resume = [&]() {
        json resume;
        resume["fingerprint"] = fingerprint;
        resume["master_seed"] = report.master_seed;
        json done = json::array();
        for (uint32_t i = 0; i < config.model_count; ++i) {
            if (completed[i]) done.push_back(i);
        }
        resume["completed"] = done;
        write_file(resume_path, resume.dump(2) + "\n");
    };
    write_resume();

    Corpus corpus;
    {
        Stopwatch w;
        corpus = run_stage("corpus", [&] { return load_corpus(config.corpus_path, config.corpus_format); });
        report.timings_seconds["load_corpus"] = w.seconds();
    }
    Vocabulary reference_vocab = run_stage(
        "vocabulary", [&] { return Vocabulary::build(corpus, config.train.min_count); });
    reference_vocab.save_tsv(config.output_dir / "reference_vocab.tsv");

    std::vector<EmbeddingSpace> spaces(config.model_count);
    double train_seconds = 0.0;
    for (uint32_t i = 0; i < config.model_count; ++i) {
        const uint64_t model_seed = derive_model_seed(report.master_seed, i);
        const fs::path model_dir = config.output_dir / model_dir_name(i);
        if (completed[i] && fs::exists(model_dir / "embeddings.vec")) {
            spaces[i] = EmbeddingSpace::load(model_dir / "embeddings.vec");
            continue;
        }
        Stopwatch w;
        TrainConfig train_config = config.train;
        train_config.sampling.rng_seed = derive_sampling_seed(model_seed);
        TrainedModel trained;
        try {
            if (config.subsample) {
                Corpus sample = bootstrap_subsample(corpus, derive_subsample_seed(model_seed));
                trained = train_to_dir(sample, train_config, model_dir);
            } else {
                trained = train_to_dir(corpus, train_config, model_dir);
            }
        } catch (const Error& e) {
            // Partial artifacts stay on disk; resume.json records progress.
            throw Error(e.code(), "model " + std::to_string(i) + " failed (resume token at " +
                                      resume_path.string() + "): " + e.what());
        }
        spaces[i] = std::move(trained.space);

        json manifest = json::parse(read_file(model_dir / "manifest.json"));
        manifest["model_index"] = i;
        manifest["master_seed"] = report.master_seed;
        manifest["model_seed"] = model_seed;
        manifest["sampling_seed"] = derive_sampling_seed(model_seed);
        if (config.subsample) manifest["subsample_seed"] = derive_subsample_seed(model_seed);
        write_file(model_dir / "manifest.json", manifest.dump(2) + "\n");

        completed[i] = true;
        write_resume();
        train_seconds += w.seconds();
    }
    report.timings_seconds["train_total"] = train_seconds;

    // Accuracy evaluation.
    Stopwatch eval_watch;
    std::vector<std::pair<std::string, SimilarityTestSet>> sim_sets;
    for (const auto& path : config.similarity_testsets) {
        sim_sets.emplace_back(testset_label(path), SimilarityTestSet::load(path));
    }
    std::vector<std::pair<std::string, AnalogyTestSet>> ana_sets;
    for (const auto& path : config.analogy_testsets) {
        ana_sets.emplace_back(testset_label(path), AnalogyTestSet::load(path));
    }
    for (uint32_t i = 0; i < config.model_count; ++i) {
        ModelReport mr;
        mr.model_index = i;
        mr.model_seed = derive_model_seed(report.master_seed, i);
        for (const auto& [name, set] : sim_sets) {
            MetricValue metric;
            try {
                SimilarityResult r = eval_similarity(spaces[i], set);
                metric.value = r.rho;
                metric.coverage = r.coverage;
            } catch (const Error& e) {
                if (e.code() != Errc::insufficient_data) throw;
                metric.value = std::numeric_limits<double>::quiet_NaN();
                metric.coverage = 0.0;
                metric.detail = "insufficient_data";
            }
            mr.similarity[name] = metric;
        }
        for (const auto& [name, set] : ana_sets) {
            MetricValue metric;
            try {
                AnalogyResult r = eval_analogy(spaces[i], set, threads);
                metric.value = r.accuracy;
                metric.coverage = r.coverage;
            } catch (const Error& e) {
                if (e.code() != Errc::insufficient_data) throw;
                metric.value = std::numeric_limits<double>::quiet_NaN();
                metric.coverage = 0.0;
                metric.detail = "insufficient_data";
            }
            mr.analogy[name] = metric;
        }
        report.models.push_back(std::move(mr));
    }
    report.timings_seconds["evaluate"] = eval_watch.seconds();

    // Stability: anchors come from the non-subsampled corpus vocabulary.
    if (config.model_count >= 3) {
        Stopwatch w;
        size_t anchor_dropped = 0;
        std::vector<std::string> anchors = run_stage("anchors", [&] {
            return select_anchors(reference_vocab,
                                  std::min<size_t>(config.anchor_count, reference_vocab.size()),
                                  spaces, &anchor_dropped);
        });
        StabilityReport stability = run_stage("stability", [&] {
            return jackknife_stability(spaces, anchors, config.jaccard_n, threads);
        });
        stability.anchors_dropped += anchor_dropped;
        report.stability = std::move(stability);
        report.timings_seconds["stability"] = w.seconds();
    }

    report.timings_seconds["total"] = total.seconds();
    write_file(config.output_dir / "report.tsv", report.to_tsv());
    write_file(config.output_dir / "report.json", report.to_json());
    return report;
}

}  // namespace vecstab
