// Copyright 2026 The NBRDF Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nbrdf::detail {

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    return std::max(1, int(std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads.
template <typename Fn>
void parallel_for(int count, int jobs, Fn &&fn) {
    const int workers = std::min(resolve_jobs(jobs), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        try {
            for (int i = next++; i < count; i = next++) fn(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
        }
    };
    std::vector<std::jthread> threads;
    threads.reserve(std::size_t(workers - 1));
    for (int t = 1; t < workers; ++t) threads.emplace_back(body);
    body();
    threads.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace nbrdf::detail
