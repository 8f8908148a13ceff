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
#include <memory>
#include <string>
#include <string_view>

namespace vecstab {

// Locale-independent number formatting/parsing (std::to_chars/from_chars).
// fmt17 prints doubles with 17 significant digits: exact round-trips.
std::string fmt17(double value);
std::string fmt_double(double value, int precision);
double parse_double(std::string_view text);       // throws Errc::malformed_header context-free
uint64_t parse_u64(std::string_view text);
bool try_parse_double(std::string_view text, double& out);

// Line-oriented reader/writer over plain or gzip files ('.gz' extension).
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(LineReader&&) noexcept;
    LineReader& operator=(LineReader&&) noexcept;

    // Returns false at end of file. Strips trailing '\n' and '\r'.
    bool next(std::string& line);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class LineWriter {
public:
    explicit LineWriter(const std::filesystem::path& path);
    ~LineWriter();
    LineWriter(LineWriter&&) noexcept;
    LineWriter& operator=(LineWriter&&) noexcept;

    void write(std::string_view text);   // raw, no newline added
    void write_line(std::string_view text);
    void close();                        // flush + close, throws on failure

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Whole-file convenience helpers (plain files only).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace vecstab
