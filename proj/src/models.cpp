#include "umpvote/models.hpp"

#include "umpvote/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace umpvote {
namespace {

void check_phi(double phi) {
    if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("dispersion phi must lie in (0,1)");
}

}  // namespace

double mallows_normalizer(int m, double phi) {
    if (m < 1) throw std::invalid_argument("mallows_normalizer: m must be positive");
    check_phi(phi);
    double z = 1.0;
    for (int l = 1; l <= m; ++l) z *= (1.0 - std::pow(phi, l)) / (1.0 - phi);
    return z;
}

double condorcet_normalizer(int m, double phi) {
    if (m < 1) throw std::invalid_argument("condorcet_normalizer: m must be positive");
    check_phi(phi);
    return std::pow(1.0 + phi, num_pairs(m));
}

MallowsModel::MallowsModel(int m, double phi)
    : m_(m), phi_(phi), z_(mallows_normalizer(m, phi)), log_z_(std::log(z_)) {}

double MallowsModel::pmf(const Ranking& w, const Ranking& v) const {
    return std::exp(log_pmf(w, v));
}

double MallowsModel::log_pmf(const Ranking& w, const Ranking& v) const {
    if (w.size() != m_ || v.size() != m_) throw std::invalid_argument("MallowsModel: ranking size mismatch");
    return kendall_tau(w, v) * std::log(phi_) - log_z_;
}

Ranking MallowsModel::sample(const Ranking& w, std::mt19937_64& rng) const {
    if (w.size() != m_) throw std::invalid_argument("MallowsModel: ranking size mismatch");
    std::vector<AltId> partial;
    partial.reserve(static_cast<std::size_t>(m_));
    std::vector<double> weights;
    for (int i = 0; i < m_; ++i) {
        // weights[j]: inserted j places above the current bottom, adding j inversions.
        weights.assign(static_cast<std::size_t>(i) + 1, 0.0);
        double p = 1.0;
        for (int j = 0; j <= i; ++j, p *= phi_) weights[static_cast<std::size_t>(j)] = p;
        std::discrete_distribution<int> pick(weights.begin(), weights.end());
        const int above_bottom = pick(rng);
        partial.insert(partial.end() - above_bottom, w.at(i));
    }
    return Ranking(std::move(partial));
}

CondorcetModel::CondorcetModel(int m, double phi)
    : m_(m), phi_(phi), z_(condorcet_normalizer(m, phi)), log_z_(std::log(z_)) {
    if (m > kMaxAlternatives) throw std::invalid_argument("CondorcetModel: too many alternatives");
}

double CondorcetModel::pmf(const BinaryRelation& w, const BinaryRelation& v) const {
    return std::exp(log_pmf(w, v));
}

double CondorcetModel::log_pmf(const BinaryRelation& w, const BinaryRelation& v) const {
    if (w.size() != m_ || v.size() != m_) throw std::invalid_argument("CondorcetModel: relation size mismatch");
    return kendall_tau(w, v) * std::log(phi_) - log_z_;
}

BinaryRelation CondorcetModel::sample(const BinaryRelation& w, std::mt19937_64& rng) const {
    if (w.size() != m_) throw std::invalid_argument("CondorcetModel: relation size mismatch");
    std::bernoulli_distribution flip(phi_ / (1.0 + phi_));
    std::uint64_t bits = w.bits();
    for (int p = 0; p < num_pairs(m_); ++p)
        if (flip(rng)) bits ^= std::uint64_t{1} << p;
    return BinaryRelation(m_, bits);
}

BallotKind model_kind(const Model& model) {
    return std::holds_alternative<MallowsModel>(model) ? BallotKind::linear : BallotKind::binary;
}

int model_m(const Model& model) {
    return std::visit([](const auto& x) { return x.m(); }, model);
}

double model_phi(const Model& model) {
    return std::visit([](const auto& x) { return x.phi(); }, model);
}

const char* model_name(const Model& model) {
    return std::holds_alternative<MallowsModel>(model) ? "mallows" : "condorcet";
}

double log_pmf(const Model& model, const Ballot& w, const Ballot& v) {
    if (const auto* mm = std::get_if<MallowsModel>(&model)) {
        if (!std::holds_alternative<Ranking>(w) || !std::holds_alternative<Ranking>(v))
            throw std::invalid_argument("Mallows model requires ranking ballots");
        return mm->log_pmf(std::get<Ranking>(w), std::get<Ranking>(v));
    }
    if (!std::holds_alternative<BinaryRelation>(w) || !std::holds_alternative<BinaryRelation>(v))
        throw std::invalid_argument("Condorcet model requires binary-relation ballots");
    return std::get<CondorcetModel>(model).log_pmf(std::get<BinaryRelation>(w), std::get<BinaryRelation>(v));
}

double pmf(const Model& model, const Ballot& w, const Ballot& v) {
    return std::exp(log_pmf(model, w, v));
}

double profile_log_pmf(const Model& model, const Ballot& w, const Profile& profile) {
    if (profile.kind() != model_kind(model)) throw std::invalid_argument("profile kind does not match model");
    double total = 0.0;
    for (const auto& e : profile.entries()) total += static_cast<double>(e.count) * log_pmf(model, w, e.ballot);
    return total;
}

double profile_pmf(const Model& model, const Ballot& w, const Profile& profile) {
    return std::exp(profile_log_pmf(model, w, profile));
}

Ballot sample_ballot(const Model& model, const Ballot& w, std::mt19937_64& rng) {
    if (const auto* mm = std::get_if<MallowsModel>(&model)) {
        if (!std::holds_alternative<Ranking>(w)) throw std::invalid_argument("Mallows model requires a ranking");
        return mm->sample(std::get<Ranking>(w), rng);
    }
    if (!std::holds_alternative<BinaryRelation>(w))
        throw std::invalid_argument("Condorcet model requires a binary relation");
    return std::get<CondorcetModel>(model).sample(std::get<BinaryRelation>(w), rng);
}

Profile sample_profile(const Model& model, const Ballot& w, long n, std::uint64_t seed, AlternativeSet alts) {
    if (n < 1) throw std::invalid_argument("sample_profile: n must be positive");
    std::mt19937_64 rng(seed);
    std::map<Ballot, long> counts;
    for (long k = 0; k < n; ++k) ++counts[sample_ballot(model, w, rng)];
    std::vector<ProfileEntry> entries;
    for (auto& [b, c] : counts) entries.push_back({b, c});
    if (alts.size() == 0) alts = AlternativeSet::lettered(model_m(model));
    return Profile(std::move(alts), std::move(entries));
}

std::vector<Ballot> support(const Model& model) {
    std::vector<Ballot> out;
    if (model_kind(model) == BallotKind::linear)
        for (auto& r : all_rankings(model_m(model))) out.emplace_back(std::move(r));
    else
        for (auto& r : all_relations(model_m(model))) out.emplace_back(r);
    return out;
}

PairwiseStatistic::PairwiseStatistic(int m, long constant)
    : m_(m), constant_(constant), coef_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0) {
    if (m < 1) throw std::invalid_argument("PairwiseStatistic: m must be positive");
}

PairwiseStatistic PairwiseStatistic::weight_toward(int m, const std::vector<AltId>& above, AltId a) {
    if (above.empty()) throw std::invalid_argument("weight_toward: empty set");
    if (a < 0 || a >= m) throw std::invalid_argument("weight_toward: unknown target");
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    PairwiseStatistic s(m, -static_cast<long>(above.size()));
    for (AltId b : above) {
        if (b < 0 || b >= m) throw std::invalid_argument("weight_toward: unknown alternative");
        if (b == a) throw std::invalid_argument("weight_toward: target inside the set");
        if (seen[static_cast<std::size_t>(b)]) throw std::invalid_argument("weight_toward: repeated alternative");
        seen[static_cast<std::size_t>(b)] = true;
        s.add(b, a, 2);  // [b>a] - [a>b] = 2[b>a] - 1
    }
    return s;
}

PairwiseStatistic PairwiseStatistic::weight_from(int m, AltId a) {
    if (a < 0 || a >= m) throw std::invalid_argument("weight_from: unknown alternative");
    PairwiseStatistic s(m, -(m - 1));
    for (AltId b = 0; b < m; ++b)
        if (b != a) s.add(a, b, 2);
    return s;
}

PairwiseStatistic PairwiseStatistic::borda(int m, AltId a) {
    if (a < 0 || a >= m) throw std::invalid_argument("borda: unknown alternative");
    PairwiseStatistic s(m, 0);
    for (AltId b = 0; b < m; ++b)
        if (b != a) s.add(a, b, 1);
    return s;
}

PairwiseStatistic PairwiseStatistic::kendall_difference(const Ballot& h0, const Ballot& h1) {
    if (h0.index() != h1.index() || ballot_size(h0) != ballot_size(h1))
        throw std::invalid_argument("kendall_difference: parameter mismatch");
    const int m = ballot_size(h0);
    PairwiseStatistic s(m, 0);
    for (AltId i = 0; i < m; ++i)
        for (AltId j = i + 1; j < m; ++j) {
            const bool h1_ij = ballot_prefers(h1, i, j);
            if (h1_ij == ballot_prefers(h0, i, j)) continue;
            // V disagrees with h0 on this pair exactly when it agrees with h1.
            const AltId x = h1_ij ? i : j;
            const AltId y = h1_ij ? j : i;
            s.constant_ -= 1;
            s.add(x, y, 2);
        }
    return s;
}

long PairwiseStatistic::operator()(const Ballot& v) const {
    if (ballot_size(v) != m_) throw std::invalid_argument("PairwiseStatistic: ballot size mismatch");
    long total = constant_;
    for (AltId x = 0; x < m_; ++x)
        for (AltId y = 0; y < m_; ++y)
            if (x != y && coef(x, y) != 0 && ballot_prefers(v, x, y)) total += coef(x, y);
    return total;
}

long PairwiseStatistic::operator()(const Profile& p) const {
    long total = 0;
    for (const auto& e : p.entries()) total += e.count * (*this)(e.ballot);
    return total;
}

long PairwiseStatistic::min_value() const {
    long v = constant_;
    for (AltId x = 0; x < m_; ++x)
        for (AltId y = x + 1; y < m_; ++y) v += std::min(coef(x, y), coef(y, x));
    return v;
}

long PairwiseStatistic::max_value() const {
    long v = constant_;
    for (AltId x = 0; x < m_; ++x)
        for (AltId y = x + 1; y < m_; ++y) v += std::max(coef(x, y), coef(y, x));
    return v;
}

StatisticDistribution::StatisticDistribution(long offset, std::vector<double> probs)
    : offset_(offset), probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("StatisticDistribution: empty");
    for (double p : probs_)
        if (!(p >= 0.0)) throw std::invalid_argument("StatisticDistribution: negative probability");
    trim();
    build_suffix();
}

StatisticDistribution StatisticDistribution::point_mass(long value) {
    return StatisticDistribution(value, {1.0});
}

StatisticDistribution StatisticDistribution::from_samples(const std::vector<long>& values) {
    if (values.empty()) throw std::invalid_argument("from_samples: no samples");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    std::vector<double> probs(static_cast<std::size_t>(*hi - *lo + 1), 0.0);
    const double w = 1.0 / static_cast<double>(values.size());
    for (long v : values) probs[static_cast<std::size_t>(v - *lo)] += w;
    return StatisticDistribution(*lo, std::move(probs));
}

void StatisticDistribution::trim() {
    std::size_t first = 0;
    while (first + 1 < probs_.size() && probs_[first] == 0.0) ++first;
    std::size_t last = probs_.size();
    while (last > first + 1 && probs_[last - 1] == 0.0) --last;
    if (first > 0 || last < probs_.size()) {
        probs_ = std::vector<double>(probs_.begin() + static_cast<std::ptrdiff_t>(first),
                                     probs_.begin() + static_cast<std::ptrdiff_t>(last));
        offset_ += static_cast<long>(first);
    }
}

void StatisticDistribution::build_suffix() {
    suffix_.assign(probs_.size() + 1, 0.0);
    for (std::size_t i = probs_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + probs_[i];
}

std::vector<long> StatisticDistribution::support() const {
    std::vector<long> out;
    for (std::size_t i = 0; i < probs_.size(); ++i)
        if (probs_[i] > 0.0) out.push_back(offset_ + static_cast<long>(i));
    return out;
}

std::vector<double> StatisticDistribution::probabilities() const {
    std::vector<double> out;
    for (double p : probs_)
        if (p > 0.0) out.push_back(p);
    return out;
}

double StatisticDistribution::at(long v) const {
    if (v < min_value() || v > max_value()) return 0.0;
    return probs_[static_cast<std::size_t>(v - offset_)];
}

double StatisticDistribution::at_least(long v) const {
    if (v <= min_value()) return suffix_.empty() ? 0.0 : suffix_[0];
    if (v > max_value()) return 0.0;
    return suffix_[static_cast<std::size_t>(v - offset_)];
}

double StatisticDistribution::greater(long v) const { return at_least(v + 1); }

double StatisticDistribution::at_most(long v) const {
    if (v < min_value()) return 0.0;
    if (v >= max_value()) return total();
    return total() - suffix_[static_cast<std::size_t>(v - offset_ + 1)];
}

double StatisticDistribution::less(long v) const { return at_most(v - 1); }

double StatisticDistribution::total() const { return suffix_.empty() ? 0.0 : suffix_[0]; }

double StatisticDistribution::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) s += probs_[i] * static_cast<double>(offset_ + static_cast<long>(i));
    return s;
}

StatisticDistribution StatisticDistribution::convolve(const StatisticDistribution& other) const {
    std::vector<double> out(probs_.size() + other.probs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] == 0.0) continue;
        for (std::size_t j = 0; j < other.probs_.size(); ++j) out[i + j] += probs_[i] * other.probs_[j];
    }
    StatisticDistribution d(offset_ + other.offset_, std::move(out));
    d.approximate = approximate || other.approximate;
    d.standard_error = std::max(standard_error, other.standard_error);
    return d;
}

StatisticDistribution StatisticDistribution::power(long n) const {
    if (n < 1) throw std::invalid_argument("StatisticDistribution::power: n must be positive");
    StatisticDistribution result = *this;
    StatisticDistribution base = *this;
    long k = n - 1;
    while (k > 0) {
        if (k & 1) result = result.convolve(base);
        k >>= 1;
        if (k > 0) base = base.convolve(base);
    }
    return result;
}

namespace {

StatisticDistribution single_ballot_mallows(const MallowsModel& model, const Ranking& w,
                                            const PairwiseStatistic& stat) {
    return StatisticDistribution(stat.min_value(), kernels::omp::single_ballot_histogram(model, w, stat));
}

StatisticDistribution single_ballot_condorcet(const CondorcetModel& model, const BinaryRelation& w,
                                              const PairwiseStatistic& stat) {
    const double agree = model.agree_probability();
    StatisticDistribution d = StatisticDistribution::point_mass(stat.constant());
    const int m = model.m();
    for (AltId x = 0; x < m; ++x)
        for (AltId y = x + 1; y < m; ++y) {
            const long cxy = stat.coef(x, y);
            const long cyx = stat.coef(y, x);
            if (cxy == cyx) {
                d = d.convolve(StatisticDistribution::point_mass(cxy));
                continue;
            }
            const double p_xy = w.prefers(x, y) ? agree : 1.0 - agree;
            const long lo = std::min(cxy, cyx);
            std::vector<double> probs(static_cast<std::size_t>(std::max(cxy, cyx) - lo + 1), 0.0);
            probs[static_cast<std::size_t>(cxy - lo)] += p_xy;
            probs[static_cast<std::size_t>(cyx - lo)] += 1.0 - p_xy;
            d = d.convolve(StatisticDistribution(lo, std::move(probs)));
        }
    return d;
}

}  // namespace

StatisticDistribution statistic_null_distribution(const Model& model, const Ballot& w,
                                                  const PairwiseStatistic& stat, long n,
                                                  const NullDistributionOptions& options) {
    if (n < 1) throw std::invalid_argument("statistic_null_distribution: n must be positive");
    const int m = model_m(model);
    if (stat.m() != m || ballot_size(w) != m)
        throw std::invalid_argument("statistic_null_distribution: size mismatch");
    if (const auto* cm = std::get_if<CondorcetModel>(&model)) {
        if (!std::holds_alternative<BinaryRelation>(w))
            throw std::invalid_argument("Condorcet model requires a binary relation");
        return single_ballot_condorcet(*cm, std::get<BinaryRelation>(w), stat).power(n);
    }
    const auto& mm = std::get<MallowsModel>(model);
    if (!std::holds_alternative<Ranking>(w)) throw std::invalid_argument("Mallows model requires a ranking");
    const auto& wr = std::get<Ranking>(w);
    if (m <= options.enumeration_limit) return single_ballot_mallows(mm, wr, stat).power(n);
    if (options.monte_carlo_samples <= 0)
        throw std::length_error("statistic_null_distribution: m=" + std::to_string(m) +
                                " exceeds the enumeration limit " + std::to_string(options.enumeration_limit));
    std::mt19937_64 rng(options.seed);
    std::vector<long> values;
    values.reserve(static_cast<std::size_t>(options.monte_carlo_samples));
    for (long k = 0; k < options.monte_carlo_samples; ++k) values.push_back(stat(Ballot{mm.sample(wr, rng)}));
    auto single = StatisticDistribution::from_samples(values);
    single.approximate = true;
    double se = 0.0;
    for (double p : single.probabilities())
        se = std::max(se, std::sqrt(p * (1.0 - p) / static_cast<double>(options.monte_carlo_samples)));
    single.standard_error = se;
    return single.power(n);
}

}  // namespace umpvote
