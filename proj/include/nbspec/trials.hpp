#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

#include "nbspec/seed.hpp"

namespace nbspec {

// Runs fn(trial, master.derive(trial)) for trial = 0..trials-1 on up to
// `workers` threads and returns the results in trial order. The first
// exception (lowest trial index) is rethrown after all workers finish.
template <typename Fn>
auto run_trials(int trials, Seed master, int workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, int, Seed>> {
    using Result = std::invoke_result_t<Fn&, int, Seed>;
    const auto count = static_cast<std::size_t>(std::max(trials, 0));
    std::vector<std::optional<Result>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};

    const auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(static_cast<int>(i), master.derive(i)));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int threads = std::clamp(workers, 1, std::max(1, trials));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<Result> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

inline int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace nbspec
