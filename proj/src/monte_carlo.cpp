#include "igeo/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace igeo {

double combined_stderr(const McEstimate& a, const McEstimate& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

void Accumulator::add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
    rejected_ += other.rejected_;
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        const std::size_t rejected = rejected_;
        *this = other;
        rejected_ = rejected;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta * delta * (na * nb / n);
    count_ += other.count_;
}

double Accumulator::variance() const {
    if (count_ < 2) {
        return 0.0;
    }
    return std::max(0.0, m2_ / static_cast<double>(count_ - 1));
}

McEstimate Accumulator::estimate(std::uint64_t seed) const {
    McEstimate e;
    e.mean = mean_;
    e.samples = count_;
    e.std_error = count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    e.seed = seed;
    e.rejected = rejected_;
    return e;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

McEstimate run_batches(std::size_t samples, const RandomStream& stream, const ExecPolicy& exec, const BatchFn& body) {
    const std::size_t batch = std::max<std::size_t>(1, exec.batch_size);
    const std::size_t batches = (samples + batch - 1) / batch;
    std::vector<Accumulator> parts(batches);
    parallel_for(batches, exec.threads, [&](std::size_t b) {
        RandomStream local = stream.split(b);
        const std::size_t n = std::min(batch, samples - b * batch);
        body(local, n, parts[b]);
    });
    // pairwise tree merge in batch order
    for (std::size_t width = 1; width < parts.size(); width *= 2) {
        for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) {
            parts[i].merge(parts[i + width]);
        }
    }
    return parts.empty() ? Accumulator{}.estimate(stream.seed()) : parts.front().estimate(stream.seed());
}

McEstimate estimate_mean(std::size_t samples, const RandomStream& stream, const ExecPolicy& exec,
                         const std::function<double(RandomStream&)>& draw) {
    return run_batches(samples, stream, exec, [&](RandomStream& s, std::size_t n, Accumulator& acc) {
        for (std::size_t i = 0; i < n; ++i) {
            acc.add(draw(s));
        }
    });
}

}  // namespace igeo
