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

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vecstab {

inline uint32_t resolve_threads(uint32_t requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<uint32_t>(hw) : 1;
}

// Runs fn(i) for i in [0, count). Work items are claimed dynamically, but
// every item is processed by exactly one worker and writes only to its own
// slot, so results cannot depend on scheduling. The first exception thrown
// by any worker is rethrown on the calling thread.
template <typename Fn>
void parallel_for(size_t count, uint32_t threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (threads > count) threads = static_cast<uint32_t>(count);

    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (uint32_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// Static contiguous range split: fn(begin, end) per chunk. chunk_count fixed
// by the caller (not by the thread count) keeps reductions deterministic.
template <typename Fn>
void parallel_for_ranges(size_t count, size_t chunk_count, uint32_t threads, Fn&& fn) {
    if (count == 0 || chunk_count == 0) return;
    if (chunk_count > count) chunk_count = count;
    const size_t base = count / chunk_count;
    const size_t extra = count % chunk_count;
    std::vector<std::pair<size_t, size_t>> ranges;
    ranges.reserve(chunk_count);
    size_t begin = 0;
    for (size_t c = 0; c < chunk_count; ++c) {
        size_t len = base + (c < extra ? 1 : 0);
        ranges.emplace_back(begin, begin + len);
        begin += len;
    }
    parallel_for(ranges.size(), threads,
                 [&](size_t c) { fn(c, ranges[c].first, ranges[c].second); });
}

}  // namespace vecstab
