#include "umpvote/kernels.hpp"

#include <exception>
#include <random>
#include <stdexcept>

namespace umpvote::kernels {
namespace {

// Ranking with the given index in all_rankings(m) (inverse Lehmer code).
Ranking ranking_at(int m, std::size_t index) {
    std::vector<std::size_t> digits(static_cast<std::size_t>(m));
    for (int i = m - 1; i >= 0; --i) {
        const auto base = static_cast<std::size_t>(m - i);
        digits[static_cast<std::size_t>(i)] = index % base;
        index /= base;
    }
    std::vector<AltId> pool(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<AltId> order;
    order.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const auto d = static_cast<std::ptrdiff_t>(digits[static_cast<std::size_t>(i)]);
        order.push_back(pool[static_cast<std::size_t>(d)]);
        pool.erase(pool.begin() + d);
    }
    return Ranking(std::move(order));
}

std::size_t factorial(int m) {
    std::size_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::size_t>(i);
    return f;
}

long histogram_span(const PairwiseStatistic& stat) { return stat.max_value() - stat.min_value() + 1; }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

long rejections_in_chunk(const ThresholdTest& test, const Model& model, const Ballot& theta, long n, long count,
                         std::uint64_t seed, long chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const AlternativeSet alts = AlternativeSet::lettered(model_m(model));
    long rejected = 0;
    std::vector<ProfileEntry> entries;
    for (long s = 0; s < count; ++s) {
        entries.clear();
        for (long k = 0; k < n; ++k) entries.push_back({sample_ballot(model, theta, rng), 1});
        const double f = test.evaluate(Profile(alts, entries));
        if (f >= 1.0 || (f > 0.0 && coin(rng) < f)) ++rejected;
    }
    return rejected;
}

}  // namespace

namespace serial {

std::vector<double> single_ballot_histogram(const MallowsModel& model, const Ranking& w,
                                            const PairwiseStatistic& stat) {
    const int m = model.m();
    const std::size_t total = factorial(m);
    const long lo = stat.min_value();
    std::vector<double> probs(static_cast<std::size_t>(histogram_span(stat)), 0.0);
    for (std::size_t i = 0; i < total; ++i) {
        const Ranking v = ranking_at(m, i);
        probs[static_cast<std::size_t>(stat(Ballot{v}) - lo)] += model.pmf(w, v);
    }
    return probs;
}

std::vector<double> rejection_probabilities(const GeneralTest& test, const FiniteModel& model,
                                            const std::vector<std::size_t>& params) {
    std::vector<double> out(params.size());
    for (std::size_t i = 0; i < params.size(); ++i)
        out[i] = dot(ordered_profile_pmf(model, params[i], test.n), test.f);
    return out;
}

long count_rejections(const ThresholdTest& test, const Model& model, const Ballot& theta, long n, long samples,
                      std::uint64_t seed) {
    long rejected = 0;
    const long chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
    for (long c = 0; c < chunks; ++c) {
        const long count = std::min(kMonteCarloChunk, samples - c * kMonteCarloChunk);
        rejected += rejections_in_chunk(test, model, theta, n, count, seed, c);
    }
    return rejected;
}

std::vector<double> map_indexed(std::size_t count, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
}

}  // namespace serial

namespace omp {

std::vector<double> single_ballot_histogram(const MallowsModel& model, const Ranking& w,
                                            const PairwiseStatistic& stat) {
    const int m = model.m();
    const auto total = static_cast<long>(factorial(m));
    const long lo = stat.min_value();
    // Per-ranking values first, then a serial pass in index order, so the
    // floating-point sums match the serial kernel exactly.
    std::vector<long> value(static_cast<std::size_t>(total));
    std::vector<double> prob(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) {
        const Ranking v = ranking_at(m, static_cast<std::size_t>(i));
        value[static_cast<std::size_t>(i)] = stat(Ballot{v});
        prob[static_cast<std::size_t>(i)] = model.pmf(w, v);
    }
    std::vector<double> probs(static_cast<std::size_t>(histogram_span(stat)), 0.0);
    for (long i = 0; i < total; ++i)
        probs[static_cast<std::size_t>(value[static_cast<std::size_t>(i)] - lo)] += prob[static_cast<std::size_t>(i)];
    return probs;
}

std::vector<double> rejection_probabilities(const GeneralTest& test, const FiniteModel& model,
                                            const std::vector<std::size_t>& params) {
    std::vector<double> out(params.size());
    const auto count = static_cast<long>(params.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        out[idx] = dot(ordered_profile_pmf(model, params[idx], test.n), test.f);
    }
    return out;
}

long count_rejections(const ThresholdTest& test, const Model& model, const Ballot& theta, long n, long samples,
                      std::uint64_t seed) {
    long rejected = 0;
    const long chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
#pragma omp parallel for schedule(dynamic) reduction(+ : rejected)
    for (long c = 0; c < chunks; ++c) {
        const long count = std::min(kMonteCarloChunk, samples - c * kMonteCarloChunk);
        rejected += rejections_in_chunk(test, model, theta, n, count, seed, c);
    }
    return rejected;
}

std::vector<double> map_indexed(std::size_t count, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(count);
    const auto total = static_cast<long>(count);
    // Exceptions must not cross the parallel region; keep the first and rethrow.
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < total; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(umpvote_map_indexed_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace omp

}  // namespace umpvote::kernels
