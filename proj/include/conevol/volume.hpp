#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "conevol/gauge.hpp"

namespace conevol {

/// Monte-Carlo estimators of (Vol / Vol Sigma)^{1/D}.
/// The three estimators form the empirical power-mean chain
/// power_mean_root >= inverse_mean >= harmonic_mean on any sample set.
struct VolumeEstimate {
    double power_mean_root = 0.0; // (mean Ga^{-D})^{1/D}
    double inverse_mean = 0.0;    // mean of Ga^{-1}
    double harmonic_mean = 0.0;   // 1 / mean of Ga
    double ci_low = 0.0;          // bootstrap 95% CI on power_mean_root
    double ci_high = 0.0;
    long samples = 0;
    uint64_t seed = 0;
    long dim = 0;
    double flagged_fraction = 0.0;
};

namespace detail {

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t direction_seed(uint64_t seed, long index) {
    return splitmix64(splitmix64(seed) ^ static_cast<uint64_t>(index));
}

// (mean over chosen indices of Ga^{-D})^{1/D} in log space.
inline double power_mean_root_of(const std::vector<double>& log_ga,
                                 const std::vector<long>& idx, long dim) {
    double mx = -std::numeric_limits<double>::infinity();
    for (long i : idx) mx = std::max(mx, -dim * log_ga[i]);
    double s = 0.0;
    for (long i : idx) s += std::exp(-dim * log_ga[i] - mx);
    double lse = mx + std::log(s);
    return std::exp((lse - std::log(static_cast<double>(idx.size()))) / dim);
}

} // namespace detail

inline int default_thread_count() {
    if (const char* env = std::getenv("CONEVOL_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Draws uniform directions on the unit sphere of the basis span, evaluates
/// the gauge per direction, and reduces in fixed index order.  Each
/// direction's randomness derives from (seed, index), so the result is
/// independent of the thread count.
inline VolumeEstimate volume_ratio(const GaugeOracle& oracle, const SubspaceBasis& basis,
                                   long samples, uint64_t seed,
                                   int threads = default_thread_count()) {
    if (samples < 100) throw DomainError("volume_ratio: need samples >= 100");
    const long dim = basis.dim;

    std::vector<double> ga(samples);
    std::vector<char> flagged(samples, 0);

    auto run_one = [&](long i) {
        std::mt19937_64 rng(detail::direction_seed(seed, i));
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd coords(dim);
        do {
            for (long j = 0; j < dim; ++j) coords(j) = gauss(rng);
        } while (coords.norm() < 1e-12);
        coords.normalize();
        GaugeValue gv = gauge(oracle, basis.combine(coords));
        ga[i] = gv.value;
        flagged[i] = gv.reliable ? 0 : 1;
    };

    if (threads <= 1) {
        for (long i = 0; i < samples; ++i) run_one(i);
    } else {
        std::atomic<long> next(0);
        auto worker = [&]() {
            for (;;) {
                long i = next.fetch_add(1);
                if (i >= samples) return;
                run_one(i);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    VolumeEstimate est;
    est.samples = samples;
    est.seed = seed;
    est.dim = dim;

    // fixed index order for bitwise determinism
    std::vector<double> log_ga(samples);
    double sum_ga = 0.0, sum_inv = 0.0;
    long n_flagged = 0;
    for (long i = 0; i < samples; ++i) {
        log_ga[i] = std::log(ga[i]);
        sum_ga += ga[i];
        sum_inv += 1.0 / ga[i];
        n_flagged += flagged[i];
    }
    est.flagged_fraction = static_cast<double>(n_flagged) / static_cast<double>(samples);
    est.inverse_mean = sum_inv / static_cast<double>(samples);
    est.harmonic_mean = static_cast<double>(samples) / sum_ga;

    std::vector<long> all(samples);
    for (long i = 0; i < samples; ++i) all[i] = i;
    est.power_mean_root = detail::power_mean_root_of(log_ga, all, dim);

    // percentile bootstrap, 1000 resamples
    const int n_boot = 1000;
    std::mt19937_64 brng(detail::splitmix64(seed ^ 0xb0075742ull));
    std::uniform_int_distribution<long> pick(0, samples - 1);
    std::vector<double> boot(n_boot);
    std::vector<long> idx(samples);
    for (int b = 0; b < n_boot; ++b) {
        for (long i = 0; i < samples; ++i) idx[i] = pick(brng);
        boot[b] = detail::power_mean_root_of(log_ga, idx, dim);
    }
    std::sort(boot.begin(), boot.end());
    est.ci_low = boot[static_cast<size_t>(0.025 * n_boot)];
    est.ci_high = boot[static_cast<size_t>(0.975 * n_boot) - 1];
    return est;
}

} // namespace conevol
