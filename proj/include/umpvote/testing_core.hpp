#pragma once

// Neyman-Pearson machinery on finite models: critical functions, size and
// power, simple and mixture likelihood ratio tests, least-favorable
// distribution checks, and the product / i.i.d. / extension constructions.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "umpvote/models.hpp"
#include "umpvote/rank_core.hpp"

namespace umpvote {

inline constexpr double kSizeTolerance = 1e-10;
inline constexpr double kTieTolerance = 1e-12;

/// |x - y| <= 1e-12 * max(1, |x|, |y|); exact for integer-valued statistics.
bool same_value(double x, double y);

/// Explicit parameter-by-sample probability table. Parameters and samples
/// are indices; a model built from a voting model also keeps the ballots,
/// in the order of support(model), for both.
class FiniteModel {
public:
    /// pmf[theta][x]; every row must sum to 1 within 1e-9.
    explicit FiniteModel(std::vector<std::vector<double>> pmf);

    static FiniteModel from(const Model& model);
    /// One pairwise comparison: parameter and sample in {0,1}, agreement has
    /// weight 1 and disagreement weight phi.
    static FiniteModel pair(double phi);
    /// Parameters and samples of x (+) y indexed as i_x + |X| * i_y.
    static FiniteModel product(const FiniteModel& x, const FiniteModel& y);
    /// t-fold product; coordinate j has weight |X|^j in the index.
    static FiniteModel power(const FiniteModel& x, int t);

    std::size_t num_params() const { return pmf_.size(); }
    std::size_t num_samples() const { return pmf_.front().size(); }
    double pmf(std::size_t theta, std::size_t x) const { return pmf_[theta][x]; }
    const std::vector<double>& row(std::size_t theta) const { return pmf_[theta]; }

    bool has_ballots() const { return !ballots_.empty(); }
    const std::vector<Ballot>& ballots() const { return ballots_; }
    /// Index of a ballot parameter (requires has_ballots()).
    std::size_t index_of(const Ballot& b) const;

private:
    std::vector<std::vector<double>> pmf_;
    std::vector<Ballot> ballots_;
};

/// Number of ordered n-profiles, |S|^n; throws std::length_error above `limit`.
std::size_t profile_space_size(const FiniteModel& model, long n, std::size_t limit = 1000000);
/// Probabilities of all ordered n-profiles under theta; ballot k of the
/// profile has weight |S|^k in the index.
std::vector<double> ordered_profile_pmf(const FiniteModel& model, std::size_t theta, long n);
/// Ballot sequence of an ordered profile index (requires ballots).
Profile ordered_profile(const FiniteModel& model, std::size_t index, long n, const AlternativeSet& alts);

/// Explicit set of parameters of a voting model.
class Hypothesis {
public:
    Hypothesis(BallotKind kind, int m, std::vector<Ballot> params);

    /// L_{a>others}: rankings with a on top.
    static Hypothesis rankings_with_top(int m, AltId a);
    /// L_{others>a}: rankings with a at the bottom.
    static Hypothesis rankings_with_bottom(int m, AltId a);
    /// L_{B>a}: rankings whose set of alternatives above a is exactly B.
    static Hypothesis rankings_with_above_set(int m, const std::vector<AltId>& above, AltId a);
    /// R_{a>others}: relations where a beats every other alternative.
    static Hypothesis relations_with_top(int m, AltId a);
    /// R_{B>a}: relations where the alternatives preferred to a are exactly B.
    static Hypothesis relations_with_above_set(int m, const std::vector<AltId>& above, AltId a);
    /// Every ranking or every relation.
    static Hypothesis everything(BallotKind kind, int m);

    Hypothesis complement() const;
    bool contains(const Ballot& b) const;
    bool disjoint(const Hypothesis& other) const;

    BallotKind kind() const { return kind_; }
    int m() const { return m_; }
    std::size_t size() const { return params_.size(); }
    const std::vector<Ballot>& params() const { return params_; }
    /// Indices into FiniteModel::from(model) (ranking index or relation bits).
    std::vector<std::size_t> indices() const;

private:
    BallotKind kind_;
    int m_;
    std::vector<Ballot> params_;  // sorted, unique
};

/// Index of a ballot in support(model): Lehmer rank or relation bits.
std::size_t parameter_index(const Ballot& b);

/// Distribution over finitely many parameter indices.
struct LeastFavorable {
    std::vector<std::size_t> support;
    std::vector<double> weights;

    /// Throws std::invalid_argument on empty, negative or non-normalized input.
    LeastFavorable(std::vector<std::size_t> support, std::vector<double> weights);
    static LeastFavorable point(std::size_t theta) { return LeastFavorable({theta}, {1.0}); }
    static LeastFavorable uniform(std::vector<std::size_t> support);
    bool deterministic() const { return support.size() == 1; }
    double weight(std::size_t theta) const;
};

/// Critical function over the ordered n-profiles of a finite model.
struct GeneralTest {
    std::size_t num_samples = 0;
    long n = 1;
    std::vector<double> f;

    static GeneralTest constant(const FiniteModel& model, long n, double value);
};

/// Finite distribution of a real statistic with values merged by same_value.
class ValueDistribution {
public:
    ValueDistribution() = default;
    /// Sorts, merges tied values and drops zero masses.
    static ValueDistribution from_points(std::vector<std::pair<double, double>> points);
    static ValueDistribution from(const StatisticDistribution& d);

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return values_.size(); }

    double at(double v) const;
    double greater(double v) const;
    double at_least(double v) const;
    double less(double v) const;
    double at_most(double v) const;
    double total() const { return suffix_.empty() ? 0.0 : suffix_[0]; }

private:
    std::size_t first_not_below(double v) const;  // first index with value >= v (tied counts as equal)
    std::vector<double> values_;
    std::vector<double> probs_;
    std::vector<double> suffix_;
};

enum class Tail { upper, lower };

/// log S with S = sum_{b != a} phi^{w(a>b)}; the Condorcet winner statistic.
struct CondorcetWinnerStatistic {
    int m;
    AltId a;
    double phi;
    double from_weights(const Wmg& g) const;
    double operator()(const Profile& p) const;
};

/// Statistic given by value per ordered profile index.
struct TabulatedStatistic {
    std::size_t num_samples;
    long n;
    std::vector<double> values;
};

using Statistic = std::variant<PairwiseStatistic, CondorcetWinnerStatistic, TabulatedStatistic>;

/// Statistic values of all ordered n-profiles of a finite model.
std::vector<double> statistic_table(const Statistic& stat, const FiniteModel& model, long n);

struct CriticalValue {
    double k = 0.0;
    double gamma = 0.0;
};

/// Smallest support value K with Pr(X > K) <= alpha and the matching Gamma
/// (mirrored for the lower tail), so that the rejection probability is alpha.
CriticalValue critical_value(const ValueDistribution& null, Tail tail, double alpha);
double rejection_probability(const ValueDistribution& d, Tail tail, const CriticalValue& cv);

/// Reject when the statistic is beyond k, randomize with gamma at k.
struct ThresholdTest {
    std::string name;
    Statistic statistic;
    Tail tail = Tail::upper;
    double alpha = 0.0;
    CriticalValue cv;
    ValueDistribution null;          // statistic distribution at the null parameter
    std::optional<Ballot> null_parameter;
    bool approximate = false;
    double standard_error = 0.0;
    /// Set when no sample attains ratio exactly k (the test is then the unique
    /// most powerful one, up to null sets).
    bool no_boundary_mass = false;

    double k() const { return cv.k; }
    double gamma() const { return cv.gamma; }
    /// f as a function of the statistic value: 1, 0 or gamma.
    double decide(double value) const;
    double statistic_value(const Profile& p) const;
    double evaluate(const Profile& p) const { return decide(statistic_value(p)); }
    /// Pr(statistic at least as extreme as value) under the null distribution.
    double p_value(double value) const;
    /// Critical function over the ordered n-profiles of the model.
    GeneralTest tabulate(const FiniteModel& model, long n) const;
};

/// Builds the threshold test with exact level alpha for the given null distribution.
ThresholdTest make_threshold_test(std::string name, Statistic stat, Tail tail, double alpha,
                                  ValueDistribution null, std::optional<Ballot> null_parameter = {});

/// Exact distribution of log S for the Condorcet winner statistic under theta.
ValueDistribution condorcet_winner_distribution(const CondorcetModel& model, const BinaryRelation& theta,
                                                AltId a, long n);

/// Statistic distribution of a threshold test under theta (structured, no profile enumeration).
ValueDistribution statistic_distribution(const ThresholdTest& test, const Model& model, const Ballot& theta,
                                         long n, const NullDistributionOptions& options = {});

struct SizeResult {
    double size = 0.0;
    std::size_t argmax = 0;
    std::vector<double> per_parameter;
};

/// Rejection probability of f under each parameter; worst case over `params`.
SizeResult size(const GeneralTest& test, const FiniteModel& model, const std::vector<std::size_t>& params);
double power(const GeneralTest& test, const FiniteModel& model, std::size_t h1);

/// Structured size over a hypothesis of a voting model; argmax indexes h0.params().
SizeResult size(const ThresholdTest& test, const Hypothesis& h0, const Model& model, long n);
double power(const ThresholdTest& test, const Ballot& h1, const Model& model, long n);

/// log pi_{h1}(P) - log sum_h Lambda(h) pi_h(P) for every ordered profile.
std::vector<double> log_mixture_ratio(const LeastFavorable& lambda, std::size_t h1, const FiniteModel& model,
                                      long n);

/// Neyman-Pearson test of h0 vs h1 on a voting model; the statistic is
/// KT(P,h0) - KT(P,h1), whose log-ratio is that difference times log(1/phi).
ThresholdTest np_lr_test(const Ballot& h0, const Ballot& h1, double alpha, const Model& model, long n);
/// Same on a finite model, statistic tabulated as the log ratio.
ThresholdTest np_lr_test(std::size_t h0, std::size_t h1, double alpha, const FiniteModel& model, long n);

/// Level-alpha test for h0^Lambda vs h1 using Ratio_{Lambda,h1}.
ThresholdTest mixture_lr_test(const LeastFavorable& lambda, std::size_t h1, double alpha, const FiniteModel& model,
                              long n);

struct LfVerdict {
    bool holds = true;
    std::optional<std::size_t> violator;
    std::string detail;
    std::vector<double> sizes;  // per member of H0, same order
    bool no_boundary_mass = false;
};

/// Checks (i) size = alpha on Spt(Lambda) and (ii) size <= alpha on H0, tolerance 1e-10.
LfVerdict verify_least_favorable(const LeastFavorable& lambda, const std::vector<std::size_t>& h0,
                                 std::size_t h1, double alpha, const FiniteModel& model, long n);

struct DominanceReport {
    bool holds = true;
    std::optional<std::pair<std::size_t, std::size_t>> violator;  // (h0*, h0)
    std::vector<ValueDistribution> x;                             // X_{h0} per member of H0
    std::string detail;
};

/// Distributions of X_{h0} = log Ratio_{Lambda,h1} under each h0 (single
/// sample) and the weak-dominance check of every support point over all of H0.
DominanceReport check_uniform_lf(const LeastFavorable& lambda, const std::vector<std::size_t>& h0, std::size_t h1,
                                 const FiniteModel& model);

/// Deterministic Lambda that passed check_uniform_lf at n = 1 and is
/// therefore uniformly least favorable for every number of i.i.d. samples.
struct IidCertificate {
    LeastFavorable lambda;
    std::size_t h1;
};

IidCertificate extend_iid(const LeastFavorable& lambda, const std::vector<std::size_t>& h0, std::size_t h1,
                          const FiniteModel& model);

/// Lambda*(x, y1) = Lambda_X(x) in the product X (+) Y (index x + |X| y).
LeastFavorable product_lf(const LeastFavorable& lambda_x, std::size_t num_x_params, std::size_t y1);
/// H0_X x Theta_Y in the product indexing.
std::vector<std::size_t> product_hypothesis(const std::vector<std::size_t>& h0_x, std::size_t num_x_params,
                                            std::size_t num_y_params);

/// Ext(Lambda, h1, t): weight Lambda(theta)/t on theta in coordinate j, h1 elsewhere.
LeastFavorable ext_lf(const LeastFavorable& lambda, std::size_t h1, int t, std::size_t num_params);
/// Ext(H0, h1, t) = (H0 u {h1})^t minus (h1,...,h1).
std::vector<std::size_t> ext_hypothesis(const std::vector<std::size_t>& h0, std::size_t h1, int t,
                                        std::size_t num_params);
/// Index of (h1,...,h1) in the t-fold product.
std::size_t repeated_index(std::size_t h1, int t, std::size_t num_params);

}  // namespace umpvote
