#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fundusquant/config.hpp"
#include "fundusquant/manifest.hpp"
#include "fundusquant/report.hpp"

namespace fundusquant {

struct BatchFailure {
    std::string image_id;
    std::string code;
    std::string message;
};

struct BatchResult {
    std::vector<BiomarkerReport> reports;  // sorted by image_id
    std::vector<BatchFailure> failures;    // sorted by image_id
    std::string config_fingerprint;
};

/// Runs quantify_image on every entry with a pool of `workers` threads. Per-image errors are
/// recorded, never thrown. Throws ManifestError on duplicate image ids.
BatchResult run_batch(const Manifest& manifest, const Config& cfg, int workers = 1,
                      const Registry& reg = Registry::builtin());

/// Batch summary document (counts, failures, image ids).
nlohmann::ordered_json summary_json(const BatchResult& result);

/// Writes <image_id>.json per report, reports.csv and summary.json. Throws EncodeError.
void write_batch(const BatchResult& result, const std::filesystem::path& out_dir);

/// Applies `fn(i)` for i in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn);

}  // namespace fundusquant

#include <atomic>
#include <thread>

namespace fundusquant {

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const std::size_t pool = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (pool <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
}

}  // namespace fundusquant
