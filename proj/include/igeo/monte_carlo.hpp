#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "igeo/random.hpp"

namespace igeo {

/// Result of every integral estimator.
struct McEstimate {
    double mean = 0.0;
    /// sample standard deviation / sqrt(samples)
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    /// draws discarded and redrawn (degenerate configurations)
    std::size_t rejected = 0;
};

/// sqrt(se_a^2 + se_b^2) for independent estimates.
double combined_stderr(const McEstimate& a, const McEstimate& b);

/// Running mean and second central moment (Welford) with an exact merge.
class Accumulator {
public:
    void add(double x);
    void merge(const Accumulator& other);
    void reject(std::size_t n = 1) { rejected_ += n; }

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const;
    std::size_t rejected() const { return rejected_; }

    McEstimate estimate(std::uint64_t seed) const;

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    std::size_t rejected_ = 0;
};

/// How an estimator may spread its work. The batch size fixes the plan:
/// batch b always draws from stream.split(b), so the result is the same for
/// every thread count.
struct ExecPolicy {
    unsigned threads = 1;
    std::size_t batch_size = 8192;
};

/// Runs task(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

/// Batch body: draw `n` samples from `stream` into `acc`.
using BatchFn = std::function<void(RandomStream& stream, std::size_t n, Accumulator& acc)>;

/// Splits `samples` into fixed batches, runs them (possibly in parallel) and
/// merges the accumulators pairwise in batch order.
McEstimate run_batches(std::size_t samples, const RandomStream& stream, const ExecPolicy& exec, const BatchFn& body);

/// Convenience wrapper for one-sample-at-a-time integrands.
McEstimate estimate_mean(std::size_t samples, const RandomStream& stream, const ExecPolicy& exec,
                         const std::function<double(RandomStream&)>& draw);

}  // namespace igeo
