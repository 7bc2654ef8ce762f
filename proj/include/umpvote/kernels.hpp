#pragma once

// Data-parallel loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp with the same
// signature and bit-identical results (reductions are done per index, not
// per thread, so summation order does not depend on the schedule).

#include <cstdint>
#include <functional>
#include <vector>

#include "umpvote/models.hpp"
#include "umpvote/testing_core.hpp"

namespace umpvote::kernels {

/// Monte Carlo profiles are drawn in chunks of this many, chunk c seeded
/// from (seed, c), so counts do not depend on the thread count.
inline constexpr long kMonteCarloChunk = 4096;

namespace serial {

/// probs[v - stat.min_value()] = Pr_w(stat(V) = v) over all m! rankings.
std::vector<double> single_ballot_histogram(const MallowsModel& model, const Ranking& w,
                                            const PairwiseStatistic& stat);
/// E_theta f(P) for each theta in params.
std::vector<double> rejection_probabilities(const GeneralTest& test, const FiniteModel& model,
                                            const std::vector<std::size_t>& params);
/// Rejections among `samples` n-profiles drawn at theta, randomized
/// decisions realized by a coin from the same stream.
long count_rejections(const ThresholdTest& test, const Model& model, const Ballot& theta, long n, long samples,
                      std::uint64_t seed);
/// out[i] = fn(i).
std::vector<double> map_indexed(std::size_t count, const std::function<double(std::size_t)>& fn);

}  // namespace serial

namespace omp {

std::vector<double> single_ballot_histogram(const MallowsModel& model, const Ranking& w,
                                            const PairwiseStatistic& stat);
std::vector<double> rejection_probabilities(const GeneralTest& test, const FiniteModel& model,
                                            const std::vector<std::size_t>& params);
long count_rejections(const ThresholdTest& test, const Model& model, const Ballot& theta, long n, long samples,
                      std::uint64_t seed);
/// The first exception thrown by fn is rethrown once the loop finishes.
std::vector<double> map_indexed(std::size_t count, const std::function<double(std::size_t)>& fn);

}  // namespace omp

}  // namespace umpvote::kernels
