#include "umpvote/testing_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "umpvote/kernels.hpp"

namespace umpvote {
namespace {

double log_add(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

std::size_t ipow(std::size_t base, long e) {
    std::size_t r = 1;
    for (long i = 0; i < e; ++i) r *= base;
    return r;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

bool same_value(double x, double y) {
    if (x == y) return true;
    return std::abs(x - y) <= kTieTolerance * std::max({1.0, std::abs(x), std::abs(y)});
}

// ---------------------------------------------------------------- FiniteModel

FiniteModel::FiniteModel(std::vector<std::vector<double>> pmf) : pmf_(std::move(pmf)) {
    if (pmf_.empty() || pmf_.front().empty()) throw std::invalid_argument("FiniteModel: empty table");
    for (const auto& row : pmf_) {
        if (row.size() != pmf_.front().size()) throw std::invalid_argument("FiniteModel: ragged table");
        double s = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) throw std::invalid_argument("FiniteModel: negative probability");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("FiniteModel: row does not sum to one");
    }
}

FiniteModel FiniteModel::from(const Model& model) {
    auto ballots = support(model);
    std::vector<std::vector<double>> table(ballots.size(), std::vector<double>(ballots.size()));
    for (std::size_t t = 0; t < ballots.size(); ++t)
        for (std::size_t x = 0; x < ballots.size(); ++x) table[t][x] = umpvote::pmf(model, ballots[t], ballots[x]);
    FiniteModel out(std::move(table));
    out.ballots_ = std::move(ballots);
    return out;
}

FiniteModel FiniteModel::pair(double phi) {
    if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("FiniteModel::pair: phi must lie in (0,1)");
    const double agree = 1.0 / (1.0 + phi);
    const double disagree = phi / (1.0 + phi);
    return FiniteModel({{agree, disagree}, {disagree, agree}});
}

FiniteModel FiniteModel::product(const FiniteModel& x, const FiniteModel& y) {
    const std::size_t px = x.num_params(), sx = x.num_samples();
    std::vector<std::vector<double>> table(px * y.num_params(), std::vector<double>(sx * y.num_samples()));
    for (std::size_t ty = 0; ty < y.num_params(); ++ty)
        for (std::size_t tx = 0; tx < px; ++tx)
            for (std::size_t vy = 0; vy < y.num_samples(); ++vy)
                for (std::size_t vx = 0; vx < sx; ++vx)
                    table[tx + px * ty][vx + sx * vy] = x.pmf(tx, vx) * y.pmf(ty, vy);
    return FiniteModel(std::move(table));
}

FiniteModel FiniteModel::power(const FiniteModel& x, int t) {
    if (t < 1) throw std::invalid_argument("FiniteModel::power: t must be positive");
    FiniteModel out = x;
    out.ballots_.clear();
    for (int j = 1; j < t; ++j) out = product(out, x);
    return out;
}

std::size_t FiniteModel::index_of(const Ballot& b) const {
    if (!has_ballots()) throw std::logic_error("FiniteModel::index_of: model has no ballots");
    const std::size_t i = parameter_index(b);
    if (i >= ballots_.size() || ballots_[i] != b) throw std::invalid_argument("FiniteModel::index_of: foreign ballot");
    return i;
}

std::size_t profile_space_size(const FiniteModel& model, long n, std::size_t limit) {
    if (n < 1) throw std::invalid_argument("profile space: n must be positive");
    std::size_t size = 1;
    for (long k = 0; k < n; ++k) {
        size *= model.num_samples();
        if (size > limit)
            throw std::length_error("ordered profile space exceeds the limit of " + std::to_string(limit));
    }
    return size;
}

std::vector<double> ordered_profile_pmf(const FiniteModel& model, std::size_t theta, long n) {
    profile_space_size(model, n);
    const auto& row = model.row(theta);
    std::vector<double> cur{1.0};
    for (long k = 0; k < n; ++k) {
        std::vector<double> next(cur.size() * row.size());
        for (std::size_t x = 0; x < row.size(); ++x)
            for (std::size_t i = 0; i < cur.size(); ++i) next[i + cur.size() * x] = cur[i] * row[x];
        cur = std::move(next);
    }
    return cur;
}

Profile ordered_profile(const FiniteModel& model, std::size_t index, long n, const AlternativeSet& alts) {
    if (!model.has_ballots()) throw std::logic_error("ordered_profile: model has no ballots");
    std::vector<ProfileEntry> entries;
    for (long k = 0; k < n; ++k) {
        entries.push_back({model.ballots()[index % model.num_samples()], 1});
        index /= model.num_samples();
    }
    return Profile(alts, std::move(entries));
}

// ---------------------------------------------------------------- Hypothesis

std::size_t parameter_index(const Ballot& b) {
    if (const auto* r = std::get_if<Ranking>(&b)) return ranking_index(*r);
    return static_cast<std::size_t>(std::get<BinaryRelation>(b).bits());
}

Hypothesis::Hypothesis(BallotKind kind, int m, std::vector<Ballot> params)
    : kind_(kind), m_(m), params_(std::move(params)) {
    if (params_.empty()) throw std::invalid_argument("Hypothesis: empty parameter set");
    for (const auto& p : params_)
        if (kind_of(p) != kind_ || ballot_size(p) != m_)
            throw std::invalid_argument("Hypothesis: parameter of the wrong kind or size");
    std::sort(params_.begin(), params_.end());
    params_.erase(std::unique(params_.begin(), params_.end()), params_.end());
}

namespace {

std::vector<Ballot> all_ballots(BallotKind kind, int m) {
    std::vector<Ballot> out;
    if (kind == BallotKind::linear)
        for (auto& r : all_rankings(m)) out.emplace_back(std::move(r));
    else
        for (auto& r : all_relations(m)) out.emplace_back(r);
    return out;
}

std::vector<bool> as_mask(int m, const std::vector<AltId>& set, AltId a) {
    if (a < 0 || a >= m) throw std::invalid_argument("hypothesis: unknown alternative");
    std::vector<bool> mask(static_cast<std::size_t>(m), false);
    for (AltId b : set) {
        if (b < 0 || b >= m || b == a || mask[static_cast<std::size_t>(b)])
            throw std::invalid_argument("hypothesis: invalid above-set");
        mask[static_cast<std::size_t>(b)] = true;
    }
    return mask;
}

bool above_set_is(const Ballot& v, const std::vector<bool>& mask, AltId a) {
    for (AltId b = 0; b < static_cast<AltId>(mask.size()); ++b)
        if (b != a && ballot_prefers(v, b, a) != mask[static_cast<std::size_t>(b)]) return false;
    return true;
}

Hypothesis filtered(BallotKind kind, int m, const std::vector<bool>& mask, AltId a) {
    std::vector<Ballot> out;
    for (auto& v : all_ballots(kind, m))
        if (above_set_is(v, mask, a)) out.push_back(std::move(v));
    return Hypothesis(kind, m, std::move(out));
}

}  // namespace

Hypothesis Hypothesis::rankings_with_top(int m, AltId a) {
    return filtered(BallotKind::linear, m, as_mask(m, {}, a), a);
}

Hypothesis Hypothesis::rankings_with_bottom(int m, AltId a) {
    std::vector<AltId> others;
    for (AltId b = 0; b < m; ++b)
        if (b != a) others.push_back(b);
    return filtered(BallotKind::linear, m, as_mask(m, others, a), a);
}

Hypothesis Hypothesis::rankings_with_above_set(int m, const std::vector<AltId>& above, AltId a) {
    return filtered(BallotKind::linear, m, as_mask(m, above, a), a);
}

Hypothesis Hypothesis::relations_with_top(int m, AltId a) {
    return filtered(BallotKind::binary, m, as_mask(m, {}, a), a);
}

Hypothesis Hypothesis::relations_with_above_set(int m, const std::vector<AltId>& above, AltId a) {
    return filtered(BallotKind::binary, m, as_mask(m, above, a), a);
}

Hypothesis Hypothesis::everything(BallotKind kind, int m) { return Hypothesis(kind, m, all_ballots(kind, m)); }

Hypothesis Hypothesis::complement() const {
    std::vector<Ballot> out;
    for (auto& v : all_ballots(kind_, m_))
        if (!contains(v)) out.push_back(std::move(v));
    return Hypothesis(kind_, m_, std::move(out));
}

bool Hypothesis::contains(const Ballot& b) const { return std::binary_search(params_.begin(), params_.end(), b); }

bool Hypothesis::disjoint(const Hypothesis& other) const {
    for (const auto& p : params_)
        if (other.contains(p)) return false;
    return true;
}

std::vector<std::size_t> Hypothesis::indices() const {
    std::vector<std::size_t> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(parameter_index(p));
    return out;
}

// ---------------------------------------------------------------- LeastFavorable

LeastFavorable::LeastFavorable(std::vector<std::size_t> s, std::vector<double> w)
    : support(std::move(s)), weights(std::move(w)) {
    if (support.empty() || support.size() != weights.size())
        throw std::invalid_argument("LeastFavorable: empty or mismatched support");
    double total = 0.0;
    for (double x : weights) {
        if (!(x >= 0.0)) throw std::invalid_argument("LeastFavorable: negative weight");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("LeastFavorable: weights do not sum to one");
    auto sorted = support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("LeastFavorable: repeated support point");
}

LeastFavorable LeastFavorable::uniform(std::vector<std::size_t> support) {
    std::vector<double> w(support.size(), support.empty() ? 0.0 : 1.0 / static_cast<double>(support.size()));
    return LeastFavorable(std::move(support), std::move(w));
}

double LeastFavorable::weight(std::size_t theta) const {
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == theta) return weights[i];
    return 0.0;
}

GeneralTest GeneralTest::constant(const FiniteModel& model, long n, double value) {
    if (value < 0.0 || value > 1.0) throw std::invalid_argument("GeneralTest: value outside [0,1]");
    return GeneralTest{model.num_samples(), n, std::vector<double>(profile_space_size(model, n), value)};
}

// ---------------------------------------------------------------- ValueDistribution

ValueDistribution ValueDistribution::from_points(std::vector<std::pair<double, double>> points) {
    std::sort(points.begin(), points.end());
    ValueDistribution d;
    for (const auto& [v, p] : points) {
        if (!(p >= 0.0)) throw std::invalid_argument("ValueDistribution: negative probability");
        if (p == 0.0) continue;
        if (!d.values_.empty() && same_value(d.values_.back(), v))
            d.probs_.back() += p;
        else {
            d.values_.push_back(v);
            d.probs_.push_back(p);
        }
    }
    if (d.values_.empty()) throw std::invalid_argument("ValueDistribution: no mass");
    d.suffix_.assign(d.values_.size() + 1, 0.0);
    for (std::size_t i = d.values_.size(); i-- > 0;) d.suffix_[i] = d.suffix_[i + 1] + d.probs_[i];
    return d;
}

ValueDistribution ValueDistribution::from(const StatisticDistribution& s) {
    std::vector<std::pair<double, double>> points;
    const auto support = s.support();
    const auto probs = s.probabilities();
    for (std::size_t i = 0; i < support.size(); ++i) points.emplace_back(static_cast<double>(support[i]), probs[i]);
    return from_points(std::move(points));
}

std::size_t ValueDistribution::first_not_below(double v) const {
    const auto it = std::partition_point(values_.begin(), values_.end(),
                                         [v](double x) { return x < v && !same_value(x, v); });
    return static_cast<std::size_t>(it - values_.begin());
}

double ValueDistribution::at(double v) const {
    const std::size_t i = first_not_below(v);
    return i < values_.size() && same_value(values_[i], v) ? probs_[i] : 0.0;
}

double ValueDistribution::at_least(double v) const { return suffix_[first_not_below(v)]; }

double ValueDistribution::greater(double v) const {
    std::size_t i = first_not_below(v);
    if (i < values_.size() && same_value(values_[i], v)) ++i;
    return suffix_[i];
}

double ValueDistribution::less(double v) const {
    const std::size_t end = first_not_below(v);
    double s = 0.0;
    for (std::size_t i = 0; i < end; ++i) s += probs_[i];
    return s;
}

double ValueDistribution::at_most(double v) const {
    std::size_t end = first_not_below(v);
    if (end < values_.size() && same_value(values_[end], v)) ++end;
    double s = 0.0;
    for (std::size_t i = 0; i < end; ++i) s += probs_[i];
    return s;
}

// ---------------------------------------------------------------- statistics

double CondorcetWinnerStatistic::from_weights(const Wmg& g) const {
    const double log_phi = std::log(phi);
    double s = -std::numeric_limits<double>::infinity();
    for (AltId b = 0; b < m; ++b)
        if (b != a) s = log_add(s, static_cast<double>(g.weight(a, b)) * log_phi);
    return s;
}

double CondorcetWinnerStatistic::operator()(const Profile& p) const {
    if (p.m() != m) throw std::invalid_argument("Condorcet winner statistic: size mismatch");
    return from_weights(wmg(p));
}

std::vector<double> statistic_table(const Statistic& stat, const FiniteModel& model, long n) {
    const std::size_t total = profile_space_size(model, n);
    if (const auto* t = std::get_if<TabulatedStatistic>(&stat)) {
        if (t->num_samples != model.num_samples() || t->n != n || t->values.size() != total)
            throw std::invalid_argument("statistic_table: tabulated statistic does not match the model");
        return t->values;
    }
    if (!model.has_ballots()) throw std::invalid_argument("statistic_table: model has no ballots");
    const auto& ballots = model.ballots();
    if (const auto* ps = std::get_if<PairwiseStatistic>(&stat)) {
        std::vector<double> cur{0.0};
        for (long k = 0; k < n; ++k) {
            std::vector<double> next(cur.size() * ballots.size());
            for (std::size_t x = 0; x < ballots.size(); ++x) {
                const double v = static_cast<double>((*ps)(ballots[x]));
                for (std::size_t i = 0; i < cur.size(); ++i) next[i + cur.size() * x] = cur[i] + v;
            }
            cur = std::move(next);
        }
        return cur;
    }
    const auto& cw = std::get<CondorcetWinnerStatistic>(stat);
    std::vector<double> out(total);
    const long profile_n = n;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Wmg g(cw.m, profile_n);
        std::size_t rest = idx;
        for (long k = 0; k < n; ++k) {
            const auto& v = ballots[rest % ballots.size()];
            rest /= ballots.size();
            for (AltId b = 0; b < cw.m; ++b)
                if (b != cw.a) g.add(cw.a, b, ballot_prefers(v, cw.a, b) ? 1 : -1);
        }
        out[idx] = cw.from_weights(g);
    }
    return out;
}

// ---------------------------------------------------------------- threshold tests

CriticalValue critical_value(const ValueDistribution& null, Tail tail, double alpha) {
    check_alpha(alpha);
    const auto& values = null.values();
    const auto& probs = null.probs();
    const double slack = alpha * 1e-12;
    if (tail == Tail::upper) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double tail_mass = null.greater(values[i]);
            if (tail_mass <= alpha + slack)
                return {values[i], std::clamp((alpha - tail_mass) / probs[i], 0.0, 1.0)};
        }
    } else {
        for (std::size_t i = values.size(); i-- > 0;) {
            const double tail_mass = null.less(values[i]);
            if (tail_mass <= alpha + slack)
                return {values[i], std::clamp((alpha - tail_mass) / probs[i], 0.0, 1.0)};
        }
    }
    throw std::logic_error("critical_value: no threshold found");
}

double rejection_probability(const ValueDistribution& d, Tail tail, const CriticalValue& cv) {
    const double beyond = tail == Tail::upper ? d.greater(cv.k) : d.less(cv.k);
    return beyond + cv.gamma * d.at(cv.k);
}

double ThresholdTest::decide(double value) const {
    if (same_value(value, cv.k)) return cv.gamma;
    if (tail == Tail::upper) return value > cv.k ? 1.0 : 0.0;
    return value < cv.k ? 1.0 : 0.0;
}

double ThresholdTest::statistic_value(const Profile& p) const {
    if (const auto* ps = std::get_if<PairwiseStatistic>(&statistic)) return static_cast<double>((*ps)(p));
    if (const auto* cw = std::get_if<CondorcetWinnerStatistic>(&statistic)) return (*cw)(p);
    throw std::invalid_argument("tabulated statistics are defined on ordered profile indices only");
}

double ThresholdTest::p_value(double value) const {
    const double p = tail == Tail::upper ? null.at_least(value) : null.at_most(value);
    return std::clamp(p, 0.0, 1.0);
}

GeneralTest ThresholdTest::tabulate(const FiniteModel& model, long n) const {
    auto values = statistic_table(statistic, model, n);
    GeneralTest g{model.num_samples(), n, {}};
    g.f.reserve(values.size());
    for (double v : values) g.f.push_back(decide(v));
    return g;
}

ThresholdTest make_threshold_test(std::string name, Statistic stat, Tail tail, double alpha, ValueDistribution null,
                                  std::optional<Ballot> null_parameter) {
    ThresholdTest t;
    t.name = std::move(name);
    t.statistic = std::move(stat);
    t.tail = tail;
    t.alpha = alpha;
    t.cv = critical_value(null, tail, alpha);
    t.null = std::move(null);
    t.null_parameter = std::move(null_parameter);
    // gamma = 0 means alpha sits exactly on a tail boundary: the threshold can
    // be moved strictly between support points and no sample attains it.
    t.no_boundary_mass = t.cv.gamma <= 1e-12;
    return t;
}

ValueDistribution condorcet_winner_distribution(const CondorcetModel& model, const BinaryRelation& theta, AltId a,
                                                long n) {
    const int m = model.m();
    if (m < 2) throw std::invalid_argument("Condorcet winner statistic needs m >= 2");
    if (theta.size() != m || a < 0 || a >= m) throw std::invalid_argument("condorcet_winner_distribution: bad input");
    if (n < 1) throw std::invalid_argument("condorcet_winner_distribution: n must be positive");
    const double log_phi = std::log(model.phi());
    std::vector<std::pair<double, double>> states{{-std::numeric_limits<double>::infinity(), 1.0}};
    for (AltId b = 0; b < m; ++b) {
        if (b == a) continue;
        const double q = theta.prefers(a, b) ? model.agree_probability() : 1.0 - model.agree_probability();
        std::vector<std::pair<double, double>> next;
        next.reserve(states.size() * static_cast<std::size_t>(n + 1));
        for (long k = 0; k <= n; ++k) {
            const double log_binom = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                                     std::lgamma(static_cast<double>(n - k) + 1) + static_cast<double>(k) * std::log(q) +
                                     static_cast<double>(n - k) * std::log1p(-q);
            const double pk = std::exp(log_binom);
            const double term = static_cast<double>(2 * k - n) * log_phi;  // w(a>b) = 2k - n
            for (const auto& [s, p] : states) next.emplace_back(log_add(s, term), p * pk);
        }
        auto merged = ValueDistribution::from_points(std::move(next));
        states.clear();
        for (std::size_t i = 0; i < merged.size(); ++i) states.emplace_back(merged.values()[i], merged.probs()[i]);
    }
    return ValueDistribution::from_points(std::move(states));
}

ValueDistribution statistic_distribution(const ThresholdTest& test, const Model& model, const Ballot& theta, long n,
                                         const NullDistributionOptions& options) {
    if (const auto* ps = std::get_if<PairwiseStatistic>(&test.statistic))
        return ValueDistribution::from(statistic_null_distribution(model, theta, *ps, n, options));
    if (const auto* cw = std::get_if<CondorcetWinnerStatistic>(&test.statistic)) {
        const auto* cm = std::get_if<CondorcetModel>(&model);
        const auto* rel = std::get_if<BinaryRelation>(&theta);
        if (!cm || !rel) throw std::invalid_argument("Condorcet winner statistic requires Condorcet's model");
        return condorcet_winner_distribution(*cm, *rel, cw->a, n);
    }
    throw std::invalid_argument("tabulated statistics need an enumerated finite model");
}

// ---------------------------------------------------------------- size and power

SizeResult size(const GeneralTest& test, const FiniteModel& model, const std::vector<std::size_t>& params) {
    if (params.empty()) throw std::invalid_argument("size: empty hypothesis");
    if (test.num_samples != model.num_samples() || test.f.size() != profile_space_size(model, test.n))
        throw std::invalid_argument("size: test does not match the model");
    SizeResult r;
    r.per_parameter = kernels::omp::rejection_probabilities(test, model, params);
    const auto it = std::max_element(r.per_parameter.begin(), r.per_parameter.end());
    r.size = *it;
    r.argmax = params[static_cast<std::size_t>(it - r.per_parameter.begin())];
    return r;
}

double power(const GeneralTest& test, const FiniteModel& model, std::size_t h1) {
    return size(test, model, {h1}).size;
}

SizeResult size(const ThresholdTest& test, const Hypothesis& h0, const Model& model, long n) {
    SizeResult r;
    for (const auto& theta : h0.params())
        r.per_parameter.push_back(rejection_probability(statistic_distribution(test, model, theta, n), test.tail, test.cv));
    const auto it = std::max_element(r.per_parameter.begin(), r.per_parameter.end());
    r.size = *it;
    r.argmax = static_cast<std::size_t>(it - r.per_parameter.begin());
    return r;
}

double power(const ThresholdTest& test, const Ballot& h1, const Model& model, long n) {
    return rejection_probability(statistic_distribution(test, model, h1, n), test.tail, test.cv);
}

// ---------------------------------------------------------------- likelihood ratio tests

std::vector<double> log_mixture_ratio(const LeastFavorable& lambda, std::size_t h1, const FiniteModel& model, long n) {
    const auto p1 = ordered_profile_pmf(model, h1, n);
    std::vector<double> mix(p1.size(), 0.0);
    for (std::size_t s = 0; s < lambda.support.size(); ++s) {
        const auto p0 = ordered_profile_pmf(model, lambda.support[s], n);
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += lambda.weights[s] * p0[i];
    }
    std::vector<double> out(p1.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        if (mix[i] <= 0.0) throw std::domain_error("log_mixture_ratio: sample impossible under the mixture");
        out[i] = std::log(p1[i]) - std::log(mix[i]);
    }
    return out;
}

ThresholdTest np_lr_test(const Ballot& h0, const Ballot& h1, double alpha, const Model& model, long n) {
    check_alpha(alpha);
    if (h0 == h1) throw std::invalid_argument("np_lr_test: h0 equals h1");
    auto stat = PairwiseStatistic::kendall_difference(h0, h1);
    auto null = ValueDistribution::from(statistic_null_distribution(model, h0, stat, n));
    return make_threshold_test("neyman-pearson", std::move(stat), Tail::upper, alpha, std::move(null), h0);
}

ThresholdTest np_lr_test(std::size_t h0, std::size_t h1, double alpha, const FiniteModel& model, long n) {
    if (h0 == h1) throw std::invalid_argument("np_lr_test: h0 equals h1");
    auto t = mixture_lr_test(LeastFavorable::point(h0), h1, alpha, model, n);
    t.name = "neyman-pearson";
    return t;
}

ThresholdTest mixture_lr_test(const LeastFavorable& lambda, std::size_t h1, double alpha, const FiniteModel& model,
                              long n) {
    check_alpha(alpha);
    if (h1 >= model.num_params()) throw std::invalid_argument("mixture_lr_test: unknown h1");
    for (auto s : lambda.support) {
        if (s == h1) throw std::invalid_argument("mixture_lr_test: h1 inside Spt(Lambda)");
        if (s >= model.num_params()) throw std::invalid_argument("mixture_lr_test: unknown support point");
    }
    auto values = log_mixture_ratio(lambda, h1, model, n);
    std::vector<double> mix(values.size(), 0.0);
    for (std::size_t s = 0; s < lambda.support.size(); ++s) {
        const auto p0 = ordered_profile_pmf(model, lambda.support[s], n);
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += lambda.weights[s] * p0[i];
    }
    std::vector<std::pair<double, double>> points;
    points.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) points.emplace_back(values[i], mix[i]);
    std::optional<Ballot> param;
    if (lambda.deterministic() && model.has_ballots()) param = model.ballots()[lambda.support.front()];
    return make_threshold_test(lambda.deterministic() ? "neyman-pearson" : "mixture-lr",
                               TabulatedStatistic{model.num_samples(), n, std::move(values)}, Tail::upper, alpha,
                               ValueDistribution::from_points(std::move(points)), std::move(param));
}

// ---------------------------------------------------------------- least favorable checks

LfVerdict verify_least_favorable(const LeastFavorable& lambda, const std::vector<std::size_t>& h0, std::size_t h1,
                                 double alpha, const FiniteModel& model, long n) {
    for (auto s : lambda.support)
        if (std::find(h0.begin(), h0.end(), s) == h0.end())
            throw std::invalid_argument("verify_least_favorable: support outside H0");
    const auto test = mixture_lr_test(lambda, h1, alpha, model, n);
    const auto g = test.tabulate(model, n);
    LfVerdict v;
    v.sizes = kernels::omp::rejection_probabilities(g, model, h0);
    v.no_boundary_mass = test.no_boundary_mass;
    for (std::size_t i = 0; i < h0.size(); ++i) {
        const bool in_support = lambda.weight(h0[i]) > 0.0;
        if (in_support && std::abs(v.sizes[i] - alpha) > kSizeTolerance) {
            v.holds = false;
            v.violator = h0[i];
            v.detail = "size " + fmt(v.sizes[i]) + " != alpha at support point " + std::to_string(h0[i]);
            return v;
        }
        if (v.sizes[i] > alpha + kSizeTolerance) {
            v.holds = false;
            v.violator = h0[i];
            v.detail = "size " + fmt(v.sizes[i]) + " > alpha at " + std::to_string(h0[i]);
            return v;
        }
    }
    return v;
}

DominanceReport check_uniform_lf(const LeastFavorable& lambda, const std::vector<std::size_t>& h0, std::size_t h1,
                                 const FiniteModel& model) {
    const auto values = log_mixture_ratio(lambda, h1, model, 1);
    DominanceReport r;
    for (auto theta : h0) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t x = 0; x < values.size(); ++x) pts.emplace_back(values[x], model.pmf(theta, x));
        r.x.push_back(ValueDistribution::from_points(std::move(pts)));
    }
    auto grid = values;
    std::sort(grid.begin(), grid.end());
    for (auto star : lambda.support) {
        const auto it = std::find(h0.begin(), h0.end(), star);
        if (it == h0.end()) throw std::invalid_argument("check_uniform_lf: support outside H0");
        const auto& xs = r.x[static_cast<std::size_t>(it - h0.begin())];
        for (std::size_t j = 0; j < h0.size(); ++j)
            for (double p : grid)
                if (xs.at_least(p) < r.x[j].at_least(p) - kTieTolerance) {
                    r.holds = false;
                    r.violator = std::make_pair(star, h0[j]);
                    r.detail = "Pr(X_" + std::to_string(star) + " >= " + fmt(p) + ") < Pr(X_" + std::to_string(h0[j]) +
                               " >= " + fmt(p) + ")";
                    return r;
                }
    }
    return r;
}

IidCertificate extend_iid(const LeastFavorable& lambda, const std::vector<std::size_t>& h0, std::size_t h1,
                          const FiniteModel& model) {
    if (!lambda.deterministic()) throw std::invalid_argument("extend_iid: Lambda must be deterministic");
    const auto report = check_uniform_lf(lambda, h0, h1, model);
    if (!report.holds) throw std::invalid_argument("extend_iid: weak dominance fails: " + report.detail);
    return IidCertificate{lambda, h1};
}

LeastFavorable product_lf(const LeastFavorable& lambda_x, std::size_t num_x_params, std::size_t y1) {
    std::vector<std::size_t> support;
    for (auto x : lambda_x.support) {
        if (x >= num_x_params) throw std::invalid_argument("product_lf: support outside Theta_X");
        support.push_back(x + num_x_params * y1);
    }
    return LeastFavorable(std::move(support), lambda_x.weights);
}

std::vector<std::size_t> product_hypothesis(const std::vector<std::size_t>& h0_x, std::size_t num_x_params,
                                            std::size_t num_y_params) {
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < num_y_params; ++y)
        for (auto x : h0_x) out.push_back(x + num_x_params * y);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t repeated_index(std::size_t h1, int t, std::size_t num_params) {
    std::size_t idx = 0;
    for (int j = t - 1; j >= 0; --j) idx = idx * num_params + h1;
    return idx;
}

LeastFavorable ext_lf(const LeastFavorable& lambda, std::size_t h1, int t, std::size_t num_params) {
    if (t < 1) throw std::invalid_argument("ext_lf: t must be positive");
    std::vector<std::size_t> support;
    std::vector<double> weights;
    for (int j = 0; j < t; ++j)
        for (std::size_t s = 0; s < lambda.support.size(); ++s) {
            if (lambda.support[s] == h1) throw std::invalid_argument("ext_lf: h1 inside Spt(Lambda)");
            std::size_t idx = 0, scale = 1;
            for (int k = 0; k < t; ++k, scale *= num_params) idx += scale * (k == j ? lambda.support[s] : h1);
            support.push_back(idx);
            weights.push_back(lambda.weights[s] / static_cast<double>(t));
        }
    return LeastFavorable(std::move(support), std::move(weights));
}

std::vector<std::size_t> ext_hypothesis(const std::vector<std::size_t>& h0, std::size_t h1, int t,
                                        std::size_t num_params) {
    if (t < 1) throw std::invalid_argument("ext_hypothesis: t must be positive");
    std::vector<std::size_t> base = h0;
    base.push_back(h1);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    const std::size_t all_h1 = repeated_index(h1, t, num_params);
    std::vector<std::size_t> out;
    std::vector<std::size_t> digit(static_cast<std::size_t>(t), 0);
    const std::size_t combos = ipow(base.size(), t);
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c, idx = 0, scale = 1;
        for (int k = 0; k < t; ++k, scale *= num_params) {
            idx += scale * base[rest % base.size()];
            rest /= base.size();
        }
        if (idx != all_h1) out.push_back(idx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace umpvote
