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

#include "vecstab/corpus.hpp"

#include <algorithm>
#include <cstring>

#include "vecstab/error.hpp"
#include "vecstab/rng.hpp"
#include "vecstab/textio.hpp"

namespace vecstab {

namespace {

#include "unicode_tables.inc"

bool is_punct(char32_t cp) {
    size_t lo = 0, hi = std::size(kPunctRanges);
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (cp > kPunctRanges[mid].hi) {
            lo = mid + 1;
        } else if (cp < kPunctRanges[mid].lo) {
            hi = mid;
        } else {
            return true;
        }
    }
    return false;
}

bool is_space(char32_t cp) {
    for (char32_t w : kWhitespace) {
        if (w == cp) return true;
    }
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp < 0x80) {  // fast path
        return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
    }
    size_t lo = 0, hi = std::size(kSimpleLower);
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (kSimpleLower[mid].from < cp) {
            lo = mid + 1;
        } else if (kSimpleLower[mid].from > cp) {
            hi = mid;
        } else {
            return kSimpleLower[mid].to;
        }
    }
    return cp;
}

// Decodes one UTF-8 code point at s[i]; advances i. Rejects overlong forms,
// surrogates and out-of-range values.
char32_t decode_utf8(std::string_view s, size_t& i) {
    const auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        raise(Errc::bad_utf8, "invalid UTF-8 byte at offset " + std::to_string(i));
    }
    if (i + len > s.size()) raise(Errc::bad_utf8, "truncated UTF-8 sequence at offset " + std::to_string(i));
    for (int k = 1; k < len; ++k) {
        const unsigned char b = byte(i + k);
        if ((b & 0xC0) != 0x80) raise(Errc::bad_utf8, "invalid UTF-8 continuation at offset " + std::to_string(i + k));
        cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinByLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        raise(Errc::bad_utf8, "invalid UTF-8 code point at offset " + std::to_string(i));
    }
    i += len;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

std::vector<std::string> normalize(std::string_view raw_text) {
    std::vector<std::string> tokens;
    std::string current;
    size_t i = 0;
    while (i < raw_text.size()) {
        const char32_t cp = decode_utf8(raw_text, i);
        if (is_space(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else if (is_punct(cp)) {
            // stripped
        } else {
            encode_utf8(to_lower(cp), current);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) raise(Errc::io, "corpus path does not exist: " + path.string());
    if (format == CorpusFormat::auto_detect) {
        format = fs::is_directory(path) ? CorpusFormat::one_doc_per_file
                                        : CorpusFormat::one_doc_per_line;
    }

    Corpus corpus;
    if (format == CorpusFormat::one_doc_per_file) {
        if (!fs::is_directory(path)) {
            raise(Errc::usage, "corpus format one_doc_per_file needs a directory: " + path.string());
        }
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            Document doc;
            doc.id = file.filename().string();
            doc.tokens = normalize(read_file(file));
            if (doc.tokens.empty()) continue;
            corpus.total_tokens += doc.tokens.size();
            corpus.documents.push_back(std::move(doc));
        }
    } else {
        if (fs::is_directory(path)) {
            raise(Errc::usage, "corpus format one_doc_per_line needs a file: " + path.string());
        }
        LineReader in(path);
        std::string line;
        uint64_t line_no = 0;
        while (in.next(line)) {
            ++line_no;
            Document doc;
            doc.tokens = normalize(line);
            if (doc.tokens.empty()) continue;
            doc.id = "line-" + std::to_string(line_no);
            corpus.total_tokens += doc.tokens.size();
            corpus.documents.push_back(std::move(doc));
        }
    }
    return corpus;
}

void save_corpus_lines(const Corpus& corpus, const std::filesystem::path& path) {
    LineWriter out(path);
    std::string line;
    for (const auto& doc : corpus.documents) {
        line.clear();
        for (size_t i = 0; i < doc.tokens.size(); ++i) {
            if (i > 0) line += ' ';
            line += doc.tokens[i];
        }
        out.write_line(line);
    }
    out.close();
}

Vocabulary Vocabulary::build(const Corpus& corpus, uint64_t min_count) {
    if (min_count == 0) raise(Errc::bad_argument, "min_count must be positive");
    std::unordered_map<std::string, uint64_t> freq;
    for (const auto& doc : corpus.documents) {
        for (const auto& token : doc.tokens) ++freq[token];
    }

    Vocabulary vocab;
    std::vector<std::pair<std::string, uint64_t>> kept;
    kept.reserve(freq.size());
    for (auto& [word, count] : freq) {
        if (count >= min_count) kept.emplace_back(word, count);
    }
    if (kept.empty()) {
        raise(Errc::empty_vocabulary,
              "no word reaches min_count = " + std::to_string(min_count));
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    vocab.words_.reserve(kept.size());
    vocab.counts_.reserve(kept.size());
    for (auto& [word, count] : kept) {
        vocab.ids_.emplace(word, static_cast<uint32_t>(vocab.words_.size()));
        vocab.words_.push_back(std::move(word));
        vocab.counts_.push_back(count);
        vocab.total_ += count;
    }
    return vocab;
}

std::optional<uint32_t> Vocabulary::find(std::string_view word) const {
    auto it = ids_.find(std::string(word));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

uint32_t Vocabulary::id_or_throw(std::string_view word) const {
    auto id = find(word);
    if (!id) raise(Errc::unknown_word, "word not in vocabulary: " + std::string(word));
    return *id;
}

void Vocabulary::save_tsv(const std::filesystem::path& path) const {
    LineWriter out(path);
    std::string line;
    for (uint32_t i = 0; i < size(); ++i) {
        line.clear();
        line += words_[i];
        line += '\t';
        line += std::to_string(counts_[i]);
        out.write_line(line);
    }
    out.close();
}

Vocabulary Vocabulary::load_tsv(const std::filesystem::path& path) {
    LineReader in(path);
    Vocabulary vocab;
    std::string line;
    while (in.next(line)) {
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            raise(Errc::malformed_header, "vocabulary line has no tab: " + line);
        }
        std::string word = line.substr(0, tab);
        uint64_t count = parse_u64(std::string_view(line).substr(tab + 1));
        if (vocab.ids_.count(word)) raise(Errc::duplicate_word, "duplicate word: " + word);
        vocab.ids_.emplace(word, static_cast<uint32_t>(vocab.words_.size()));
        vocab.words_.push_back(std::move(word));
        vocab.counts_.push_back(count);
        vocab.total_ += count;
    }
    if (vocab.words_.empty()) raise(Errc::empty_vocabulary, "empty vocabulary file: " + path.string());
    return vocab;
}

Corpus bootstrap_subsample(const Corpus& corpus, uint64_t rng_seed) {
    const size_t n = corpus.documents.size();
    if (n == 0) raise(Errc::bad_argument, "cannot subsample an empty corpus");
    Xoshiro256pp rng(rng_seed);
    std::vector<uint8_t> drawn(n, 0);
    for (size_t i = 0; i < n; ++i) {
        drawn[rng.below(n)] = 1;
    }
    Corpus out;
    for (size_t i = 0; i < n; ++i) {
        if (drawn[i]) {
            out.documents.push_back(corpus.documents[i]);
            out.total_tokens += corpus.documents[i].tokens.size();
        }
    }
    return out;
}

std::vector<std::vector<int32_t>> to_id_streams(const Corpus& corpus,
                                                const Vocabulary& vocab,
                                                OovPolicy policy) {
    std::vector<std::vector<int32_t>> streams;
    streams.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        std::vector<int32_t> ids;
        ids.reserve(doc.tokens.size());
        for (const auto& token : doc.tokens) {
            auto id = vocab.find(token);
            if (id) {
                ids.push_back(static_cast<int32_t>(*id));
            } else if (policy == OovPolicy::keep) {
                ids.push_back(kOovId);
            }
        }
        streams.push_back(std::move(ids));
    }
    return streams;
}

}  // namespace vecstab
