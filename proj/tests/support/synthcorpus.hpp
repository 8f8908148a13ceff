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

//  Deterministic synthetic corpus with Zipfian word frequencies and topical
//  structure, standing in for a public-domain desk corpus: documents mix a
//  topic-free function-word layer with one or two content topics, so
//  co-occurrence models can recover the planted topic structure.

#pragma once

#include <cstdint>
#include <filesystem>

#include "vecstab/corpus.hpp"

namespace vecstab::testsupport {

struct SynthConfig {
    uint64_t seed = 20260809;
    uint32_t n_docs = 6000;
    uint32_t min_doc_len = 80;
    uint32_t max_doc_len = 420;
    uint32_t n_topics = 40;
    uint32_t content_words_per_topic = 150;
    uint32_t function_words = 120;
    double function_prob = 0.40;     // share of topic-free high-frequency tokens
    double secondary_topic_prob = 0.25;
};

// Content word for (topic, zipf rank); e.g. "t07w012".
std::string content_word(uint32_t topic, uint32_t rank);
std::string function_word(uint32_t rank);

Corpus make_synthetic_corpus(const SynthConfig& config);

// Similarity pairs with planted scores: same-topic pairs high, cross-topic
// pairs low, all scores distinct. Uses only frequent content words
// (rank < max_rank) so vocabulary coverage stays near 1.
void write_similarity_testset(const std::filesystem::path& path, const SynthConfig& config,
                              uint32_t n_pairs, uint32_t max_rank, uint64_t seed);

// Analogy questions in the sectioned 4-word format, built from frequent
// content words of distinct topics.
void write_analogy_testset(const std::filesystem::path& path, const SynthConfig& config,
                           uint32_t n_questions, uint32_t max_rank, uint64_t seed);

}  // namespace vecstab::testsupport
