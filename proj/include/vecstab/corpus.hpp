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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vecstab {

struct Document {
    std::string id;                   // stable identifier (file name or line number)
    std::vector<std::string> tokens;  // normalized tokens
};

struct Corpus {
    std::vector<Document> documents;
    uint64_t total_tokens = 0;
};

// Lowercases, strips Unicode punctuation, splits on whitespace; tokens that
// end up empty are dropped. Throws Errc::bad_utf8 on invalid input bytes.
std::vector<std::string> normalize(std::string_view raw_text);

enum class CorpusFormat {
    auto_detect,        // directory -> one_doc_per_file, file -> one_doc_per_line
    one_doc_per_file,
    one_doc_per_line,
};

// Reads and normalizes a corpus. Directory inputs are read in lexicographic
// file-name order so the document order is reproducible.
Corpus load_corpus(const std::filesystem::path& path,
                   CorpusFormat format = CorpusFormat::auto_detect);

// Writes one document per line, tokens joined by single spaces. normalize is
// idempotent, so reloading reproduces the same token streams.
void save_corpus_lines(const Corpus& corpus, const std::filesystem::path& path);

class Vocabulary {
public:
    // Keeps words with corpus frequency >= min_count, ordered by descending
    // count with lexicographic tie-break. Throws Errc::empty_vocabulary when
    // nothing survives.
    static Vocabulary build(const Corpus& corpus, uint64_t min_count);

    uint32_t size() const noexcept { return static_cast<uint32_t>(words_.size()); }
    const std::string& word(uint32_t id) const { return words_[id]; }
    uint64_t count(uint32_t id) const { return counts_[id]; }
    uint64_t total() const noexcept { return total_; }

    std::optional<uint32_t> find(std::string_view word) const;
    uint32_t id_or_throw(std::string_view word) const;
    bool contains(std::string_view word) const { return find(word).has_value(); }

    // r(w) = count(w) / total over retained words.
    double relative_frequency(uint32_t id) const {
        return static_cast<double>(counts_[id]) / static_cast<double>(total_);
    }

    const std::vector<std::string>& words() const noexcept { return words_; }

    // TSV export/import: "word<TAB>count", descending count order.
    void save_tsv(const std::filesystem::path& path) const;
    static Vocabulary load_tsv(const std::filesystem::path& path);

private:
    std::vector<std::string> words_;
    std::vector<uint64_t> counts_;
    std::unordered_map<std::string, uint32_t> ids_;
    uint64_t total_ = 0;
};

// Draws n documents with replacement from an n-document corpus, keeps one
// copy of each distinct draw, and preserves original document order.
// Deterministic given the seed.
Corpus bootstrap_subsample(const Corpus& corpus, uint64_t rng_seed);

enum class OovPolicy {
    remove,  // below-threshold tokens are deleted before windowing
    keep,    // they stay in place (affect distances) but form no pairs
};

constexpr int32_t kOovId = -1;

// Maps documents to id streams under the given policy. With OovPolicy::keep,
// out-of-vocabulary positions carry kOovId.
std::vector<std::vector<int32_t>> to_id_streams(const Corpus& corpus,
                                                const Vocabulary& vocab,
                                                OovPolicy policy);

}  // namespace vecstab
