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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vecstab/cooccur.hpp"
#include "vecstab/corpus.hpp"
#include "vecstab/embedspace.hpp"
#include "vecstab/evaluate.hpp"
#include "vecstab/factorize.hpp"

namespace vecstab {

struct TrainConfig {
    SamplingConfig sampling;
    uint64_t min_count = 50;
    OovPolicy oov_policy = OovPolicy::remove;
    double alpha = 1.0;            // context-distribution smoothing
    uint32_t dim = 500;
    double eig_exponent = 0.0;     // singular-value weighting of embeddings
    uint32_t threads = 0;          // 0 = hardware concurrency
    // optional matrix cache dumps (empty = off)
    std::filesystem::path dump_counts_path;
    std::filesystem::path dump_ppmi_path;
    uint32_t resolved_threads() const;
};

struct ExperimentConfig {
    std::filesystem::path corpus_path;
    CorpusFormat corpus_format = CorpusFormat::auto_detect;
    TrainConfig train;
    uint32_t model_count = 10;
    bool subsample = false;
    std::optional<uint64_t> master_seed;   // absent = entropy
    std::vector<std::filesystem::path> similarity_testsets;
    std::vector<std::filesystem::path> analogy_testsets;
    size_t anchor_count = 1000;
    uint32_t jaccard_n = 10;
    std::filesystem::path output_dir;

    void validate() const;
};

// Deterministic seed expansion. Model seeds come from a splitmix64 walk over
// the model index; per-purpose seeds hang off the model seed with distinct
// stream tags. All derived seeds are recorded in manifests.
uint64_t derive_model_seed(uint64_t master_seed, uint32_t model_index);
uint64_t derive_subsample_seed(uint64_t model_seed);
uint64_t derive_sampling_seed(uint64_t model_seed);

struct TrainedModel {
    EmbeddingSpace space;
    Vocabulary vocab;
    std::map<std::string, double> timings_seconds;
};

// vocabulary -> co-occurrence -> PPMI -> truncated SVD -> embeddings.
// Stage failures are rethrown with the stage name prefixed.
TrainedModel train(const Corpus& corpus, const TrainConfig& config);

// train() plus artifacts: embeddings.vec, vocab.tsv and manifest.json
// (every parameter and seed) inside model_dir.
TrainedModel train_to_dir(const Corpus& corpus, const TrainConfig& config,
                          const std::filesystem::path& model_dir);

struct MetricValue {
    double value = 0.0;
    double coverage = 0.0;
    std::string detail;
};

struct ModelReport {
    uint32_t model_index = 0;
    uint64_t model_seed = 0;
    std::map<std::string, MetricValue> similarity;  // testset name -> rho
    std::map<std::string, MetricValue> analogy;     // testset name -> accuracy
};

struct ExperimentReport {
    std::vector<ModelReport> models;
    std::optional<StabilityReport> stability;  // absent when model_count < 3
    uint64_t master_seed = 0;
    std::string config_echo_json;              // configuration as submitted
    std::map<std::string, double> timings_seconds;

    std::string to_tsv() const;   // timing-free, byte-stable across reruns
    std::string to_json() const;  // full report including timings
};

// Trains model_count models (on the corpus, or on independent bootstrap
// subsamples when subsample is set), evaluates each against the configured
// test sets, and measures jackknife stability with anchors drawn from the
// non-subsampled corpus vocabulary. Artifacts land in output_dir:
// model_NN/{embeddings.vec,vocab.tsv,manifest.json}, report.tsv, report.json
// plus a resume.json token updated after each completed model. Rerunning
// over the same output_dir with an unchanged configuration skips completed
// models.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace vecstab
