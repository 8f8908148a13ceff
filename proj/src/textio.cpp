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

#include "vecstab/textio.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vecstab/error.hpp"

namespace vecstab {

std::string fmt_double(double value, int precision) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                std::chars_format::general, precision);
    return std::string(buf, result.ptr);
}

std::string fmt17(double value) { return fmt_double(value, 17); }

bool try_parse_double(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc() && result.ptr == end;
}

double parse_double(std::string_view text) {
    double out;
    if (!try_parse_double(text, out)) {
        raise(Errc::malformed_header, "not a number: '" + std::string(text) + "'");
    }
    return out;
}

uint64_t parse_u64(std::string_view text) {
    uint64_t out;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc() || result.ptr != end) {
        raise(Errc::malformed_header, "not an unsigned integer: '" + std::string(text) + "'");
    }
    return out;
}

namespace {

bool has_gz_extension(const std::filesystem::path& path) {
    return path.extension() == ".gz";
}

}  // namespace

struct LineReader::Impl {
    std::filesystem::path path;
    FILE* plain = nullptr;
    gzFile gz = nullptr;
    std::string buffer;
    size_t pos = 0;
    bool eof = false;

    bool fill() {
        char chunk[1 << 16];
        size_t got = 0;
        if (gz) {
            int n = gzread(gz, chunk, sizeof(chunk));
            if (n < 0) raise(Errc::io, "gzip read error: " + path.string());
            got = static_cast<size_t>(n);
        } else {
            got = fread(chunk, 1, sizeof(chunk), plain);
            if (got == 0 && ferror(plain)) raise(Errc::io, "read error: " + path.string());
        }
        if (got == 0) return false;
        buffer.append(chunk, got);
        return true;
    }
};

LineReader::LineReader(const std::filesystem::path& path) : impl_(new Impl) {
    impl_->path = path;
    if (has_gz_extension(path)) {
        impl_->gz = gzopen(path.string().c_str(), "rb");
        if (!impl_->gz) raise(Errc::io, "cannot open: " + path.string());
    } else {
        impl_->plain = fopen(path.string().c_str(), "rb");
        if (!impl_->plain) raise(Errc::io, "cannot open: " + path.string());
    }
}

LineReader::~LineReader() {
    if (impl_) {
        if (impl_->plain) fclose(impl_->plain);
        if (impl_->gz) gzclose(impl_->gz);
    }
}

LineReader::LineReader(LineReader&&) noexcept = default;
LineReader& LineReader::operator=(LineReader&&) noexcept = default;

bool LineReader::next(std::string& line) {
    Impl& im = *impl_;
    for (;;) {
        size_t nl = im.buffer.find('\n', im.pos);
        if (nl != std::string::npos) {
            size_t len = nl - im.pos;
            line.assign(im.buffer, im.pos, len);
            im.pos = nl + 1;
            if (im.pos > (1 << 20)) {
                im.buffer.erase(0, im.pos);
                im.pos = 0;
            }
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
        if (im.eof) {
            if (im.pos < im.buffer.size()) {
                line.assign(im.buffer, im.pos, im.buffer.size() - im.pos);
                im.pos = im.buffer.size();
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return true;
            }
            return false;
        }
        if (!im.fill()) im.eof = true;
    }
}

struct LineWriter::Impl {
    std::filesystem::path path;
    FILE* plain = nullptr;
    gzFile gz = nullptr;
    bool closed = false;
};

LineWriter::LineWriter(const std::filesystem::path& path) : impl_(new Impl) {
    impl_->path = path;
    if (has_gz_extension(path)) {
        impl_->gz = gzopen(path.string().c_str(), "wb");
        if (!impl_->gz) raise(Errc::io, "cannot create: " + path.string());
    } else {
        impl_->plain = fopen(path.string().c_str(), "wb");
        if (!impl_->plain) raise(Errc::io, "cannot create: " + path.string());
    }
}

LineWriter::~LineWriter() {
    if (impl_ && !impl_->closed) {
        if (impl_->plain) fclose(impl_->plain);
        if (impl_->gz) gzclose(impl_->gz);
    }
}

LineWriter::LineWriter(LineWriter&&) noexcept = default;
LineWriter& LineWriter::operator=(LineWriter&&) noexcept = default;

void LineWriter::write(std::string_view text) {
    Impl& im = *impl_;
    if (im.gz) {
        if (gzwrite(im.gz, text.data(), static_cast<unsigned>(text.size())) !=
                static_cast<int>(text.size()) && !text.empty()) {
            raise(Errc::io, "gzip write error: " + im.path.string());
        }
    } else {
        if (fwrite(text.data(), 1, text.size(), im.plain) != text.size()) {
            raise(Errc::io, "write error: " + im.path.string());
        }
    }
}

void LineWriter::write_line(std::string_view text) {
    write(text);
    write("\n");
}

void LineWriter::close() {
    Impl& im = *impl_;
    if (im.closed) return;
    im.closed = true;
    if (im.plain) {
        if (fclose(im.plain) != 0) raise(Errc::io, "close failed: " + im.path.string());
        im.plain = nullptr;
    }
    if (im.gz) {
        if (gzclose(im.gz) != Z_OK) raise(Errc::io, "gzip close failed: " + im.path.string());
        im.gz = nullptr;
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io, "cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io, "cannot create: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) raise(Errc::io, "write error: " + path.string());
}

}  // namespace vecstab
