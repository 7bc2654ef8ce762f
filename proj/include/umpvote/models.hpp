#pragma once

// Mallows' model over rankings and Condorcet's model over binary relations,
// both with fixed dispersion phi in (0,1), plus exact distributions of
// integer per-ballot statistics summed over n i.i.d. ballots.

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "umpvote/rank_core.hpp"

namespace umpvote {

/// prod_{l=1..m} (1 - phi^l) / (1 - phi).
double mallows_normalizer(int m, double phi);
/// (1 + phi)^C(m,2).
double condorcet_normalizer(int m, double phi);

class MallowsModel {
public:
    /// Throws std::invalid_argument unless m >= 1 and 0 < phi < 1.
    MallowsModel(int m, double phi);

    int m() const { return m_; }
    double phi() const { return phi_; }
    double normalizer() const { return z_; }

    double pmf(const Ranking& w, const Ranking& v) const;
    double log_pmf(const Ranking& w, const Ranking& v) const;

    /// Repeated insertion: item i of w lands j places above the bottom of the
    /// partial ranking with probability proportional to phi^j.
    Ranking sample(const Ranking& w, std::mt19937_64& rng) const;

private:
    int m_;
    double phi_;
    double z_;
    double log_z_;
};

class CondorcetModel {
public:
    /// Throws std::invalid_argument unless 1 <= m <= kMaxAlternatives and 0 < phi < 1.
    CondorcetModel(int m, double phi);

    int m() const { return m_; }
    double phi() const { return phi_; }
    double normalizer() const { return z_; }
    /// Probability that one pairwise comparison agrees with the ground truth.
    double agree_probability() const { return 1.0 / (1.0 + phi_); }

    double pmf(const BinaryRelation& w, const BinaryRelation& v) const;
    double log_pmf(const BinaryRelation& w, const BinaryRelation& v) const;

    BinaryRelation sample(const BinaryRelation& w, std::mt19937_64& rng) const;

private:
    int m_;
    double phi_;
    double z_;
    double log_z_;
};

using Model = std::variant<MallowsModel, CondorcetModel>;

BallotKind model_kind(const Model& model);
int model_m(const Model& model);
double model_phi(const Model& model);
/// "mallows" or "condorcet".
const char* model_name(const Model& model);

/// Single-ballot probability; throws std::invalid_argument on kind or size mismatch.
double pmf(const Model& model, const Ballot& w, const Ballot& v);
double log_pmf(const Model& model, const Ballot& w, const Ballot& v);

/// Log-probability of the ordered i.i.d. sample (multiplicities as exponents).
double profile_log_pmf(const Model& model, const Ballot& w, const Profile& profile);
double profile_pmf(const Model& model, const Ballot& w, const Profile& profile);

Ballot sample_ballot(const Model& model, const Ballot& w, std::mt19937_64& rng);
/// n i.i.d. ballots drawn with a generator seeded by `seed`.
Profile sample_profile(const Model& model, const Ballot& w, long n, std::uint64_t seed,
                       AlternativeSet alts = {});

/// Every ballot of the model's sample space (m! rankings or 2^C(m,2) relations).
std::vector<Ballot> support(const Model& model);

/// Per-ballot statistic of the form c + sum over ordered pairs (x,y) of
/// coef(x,y) * [x preferred to y].
class PairwiseStatistic {
public:
    PairwiseStatistic() : PairwiseStatistic(1) {}
    explicit PairwiseStatistic(int m, long constant = 0);

    /// w(B > a) contributed by one ballot.
    static PairwiseStatistic weight_toward(int m, const std::vector<AltId>& above, AltId a);
    /// w(a > others) contributed by one ballot.
    static PairwiseStatistic weight_from(int m, AltId a);
    /// Number of alternatives ranked below a.
    static PairwiseStatistic borda(int m, AltId a);
    /// KT(V, h0) - KT(V, h1).
    static PairwiseStatistic kendall_difference(const Ballot& h0, const Ballot& h1);

    int m() const { return m_; }
    long constant() const { return constant_; }
    long coef(AltId x, AltId y) const { return coef_[index(x, y)]; }
    void add(AltId x, AltId y, long c) { coef_[index(x, y)] += c; }

    long operator()(const Ballot& v) const;
    /// Sum over the profile's ballots, with multiplicity.
    long operator()(const Profile& p) const;

    long min_value() const;
    long max_value() const;

private:
    std::size_t index(AltId x, AltId y) const {
        return static_cast<std::size_t>(x) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(y);
    }
    int m_;
    long constant_;
    std::vector<long> coef_;
};

/// Distribution of an integer statistic on a dense range.
class StatisticDistribution {
public:
    StatisticDistribution() = default;
    /// probs[i] is Pr(value = offset + i).
    StatisticDistribution(long offset, std::vector<double> probs);

    static StatisticDistribution point_mass(long value);
    static StatisticDistribution from_samples(const std::vector<long>& values);

    /// Strictly increasing values with positive probability.
    std::vector<long> support() const;
    std::vector<double> probabilities() const;

    long min_value() const { return offset_; }
    long max_value() const { return offset_ + static_cast<long>(probs_.size()) - 1; }

    double at(long v) const;
    double greater(long v) const;   // Pr(X > v)
    double at_least(long v) const;  // Pr(X >= v)
    double less(long v) const;      // Pr(X < v)
    double at_most(long v) const;   // Pr(X <= v)
    double total() const;
    double mean() const;

    /// Distribution of the sum of independent draws.
    StatisticDistribution convolve(const StatisticDistribution& other) const;
    /// n-fold self-convolution, n >= 1.
    StatisticDistribution power(long n) const;

    /// Set when the single-ballot distribution was estimated by sampling.
    bool approximate = false;
    /// Largest binomial standard error of the estimated single-ballot masses.
    double standard_error = 0.0;

private:
    void trim();
    long offset_ = 0;
    std::vector<double> probs_;
    std::vector<double> suffix_;  // suffix_[i] = sum_{j >= i} probs_[j]
    void build_suffix();
};

struct NullDistributionOptions {
    /// Mallows single-ballot enumeration bound on m.
    int enumeration_limit = 8;
    /// Monte Carlo fallback beyond the limit; 0 disables it (the call then throws).
    long monte_carlo_samples = 0;
    std::uint64_t seed = 1;
};

/// Exact distribution of sum_{k=1..n} stat(V_k) with V_k i.i.d. from the model at w.
/// Mallows: enumerate all m! rankings; Condorcet: convolve independent pairs.
StatisticDistribution statistic_null_distribution(const Model& model, const Ballot& w,
                                                  const PairwiseStatistic& stat, long n,
                                                  const NullDistributionOptions& options = {});

}  // namespace umpvote
