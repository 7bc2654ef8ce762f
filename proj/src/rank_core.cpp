#include "umpvote/rank_core.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace umpvote {

int pair_index(int m, AltId i, AltId j) {
    if (i == j || i < 0 || j < 0 || i >= m || j >= m)
        throw std::invalid_argument("pair_index: invalid pair");
    if (i > j) std::swap(i, j);
    // pairs before row i: sum_{k<i} (m-1-k)
    return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

AlternativeSet::AlternativeSet(std::vector<std::string> names) : names_(std::move(names)) {
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("AlternativeSet: duplicate alternative name");
    for (const auto& n : names_)
        if (n.empty()) throw std::invalid_argument("AlternativeSet: empty alternative name");
}

AlternativeSet AlternativeSet::lettered(int m) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        if (m <= 26) names.emplace_back(1, static_cast<char>('a' + i));
        else names.push_back("a" + std::to_string(i + 1));
    }
    return AlternativeSet(std::move(names));
}

AltId AlternativeSet::id(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<AltId>(i);
    throw std::out_of_range("unknown alternative '" + std::string(name) + "'");
}

bool AlternativeSet::contains(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Ranking::Ranking(std::vector<AltId> order) : order_(std::move(order)) {
    const int m = size();
    position_.assign(static_cast<std::size_t>(m), -1);
    for (int p = 0; p < m; ++p) {
        AltId a = order_[static_cast<std::size_t>(p)];
        if (a < 0 || a >= m || position_[static_cast<std::size_t>(a)] != -1)
            throw std::invalid_argument("Ranking: order is not a permutation");
        position_[static_cast<std::size_t>(a)] = p;
    }
}

Ranking Ranking::identity(int m) {
    std::vector<AltId> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    return Ranking(std::move(order));
}

BinaryRelation Ranking::to_relation() const {
    const int m = size();
    std::uint64_t bits = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (prefers(i, j)) bits |= std::uint64_t{1} << pair_index(m, i, j);
    return BinaryRelation(m, bits);
}

BinaryRelation::BinaryRelation(int m, std::uint64_t bits) : m_(m), bits_(bits) {
    if (m < 1 || m > kMaxAlternatives)
        throw std::invalid_argument("BinaryRelation: unsupported number of alternatives");
    const int p = num_pairs(m);
    if (p < 64 && (bits >> p) != 0)
        throw std::invalid_argument("BinaryRelation: bits beyond C(m,2)");
}

bool BinaryRelation::prefers(AltId x, AltId y) const {
    const bool bit = (bits_ >> pair_index(m_, x, y)) & 1U;
    return x < y ? bit : !bit;
}

BinaryRelation BinaryRelation::with(AltId x, AltId y) const {
    const std::uint64_t mask = std::uint64_t{1} << pair_index(m_, x, y);
    const bool set = x < y;
    return BinaryRelation(m_, set ? (bits_ | mask) : (bits_ & ~mask));
}

bool BinaryRelation::is_linear() const {
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            for (int k = 0; k < m_; ++k)
                if (i != j && j != k && i != k && prefers(i, j) && prefers(j, k) && !prefers(i, k))
                    return false;
    return true;
}

BallotKind kind_of(const Ballot& b) {
    return std::holds_alternative<Ranking>(b) ? BallotKind::linear : BallotKind::binary;
}

int ballot_size(const Ballot& b) {
    return std::visit([](const auto& x) { return x.size(); }, b);
}

bool ballot_prefers(const Ballot& b, AltId x, AltId y) {
    return std::visit([&](const auto& v) { return v.prefers(x, y); }, b);
}

int kendall_tau(const Ranking& x, const Ranking& y) {
    if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: size mismatch");
    const int m = x.size();
    int d = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (x.prefers(i, j) != y.prefers(i, j)) ++d;
    return d;
}

int kendall_tau(const BinaryRelation& x, const BinaryRelation& y) {
    if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: size mismatch");
    return std::popcount(x.bits() ^ y.bits());
}

int kendall_tau(const Ballot& x, const Ballot& y) {
    if (x.index() != y.index()) throw std::invalid_argument("kendall_tau: kind mismatch");
    if (const auto* r = std::get_if<Ranking>(&x)) return kendall_tau(*r, std::get<Ranking>(y));
    return kendall_tau(std::get<BinaryRelation>(x), std::get<BinaryRelation>(y));
}

std::vector<Ranking> all_rankings(int m) {
    if (m < 1) throw std::invalid_argument("all_rankings: m must be positive");
    std::vector<AltId> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::vector<Ranking> out;
    do {
        out.emplace_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

std::vector<BinaryRelation> all_relations(int m) {
    const int p = num_pairs(m);
    if (p > 24) throw std::invalid_argument("all_relations: space too large to materialize");
    std::vector<BinaryRelation> out;
    out.reserve(std::size_t{1} << p);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << p); ++bits) out.emplace_back(m, bits);
    return out;
}

std::size_t ranking_index(const Ranking& r) {
    // Lehmer code in the factorial number system.
    const int m = r.size();
    std::size_t index = 0;
    for (int i = 0; i < m; ++i) {
        std::size_t smaller = 0;
        for (int j = i + 1; j < m; ++j)
            if (r.at(j) < r.at(i)) ++smaller;
        index = index * static_cast<std::size_t>(m - i) + smaller;
    }
    return index;
}

Permutation::Permutation(std::vector<AltId> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (AltId a : image_) {
        if (a < 0 || a >= size() || seen[static_cast<std::size_t>(a)])
            throw std::invalid_argument("Permutation: not a bijection");
        seen[static_cast<std::size_t>(a)] = true;
    }
}

Permutation Permutation::identity(int m) {
    std::vector<AltId> image(static_cast<std::size_t>(m));
    std::iota(image.begin(), image.end(), 0);
    return Permutation(std::move(image));
}

Permutation Permutation::transposition(int m, AltId x, AltId y) {
    auto p = identity(m).image_;
    std::swap(p.at(static_cast<std::size_t>(x)), p.at(static_cast<std::size_t>(y)));
    return Permutation(std::move(p));
}

Permutation Permutation::inverse() const {
    std::vector<AltId> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[static_cast<std::size_t>(image_[i])] = static_cast<AltId>(i);
    return Permutation(std::move(inv));
}

Ranking apply_permutation(const Permutation& p, const Ranking& r) {
    if (p.size() != r.size()) throw std::invalid_argument("apply_permutation: size mismatch");
    std::vector<AltId> order;
    order.reserve(static_cast<std::size_t>(r.size()));
    for (AltId a : r.order()) order.push_back(p(a));
    return Ranking(std::move(order));
}

BinaryRelation apply_permutation(const Permutation& p, const BinaryRelation& r) {
    if (p.size() != r.size()) throw std::invalid_argument("apply_permutation: size mismatch");
    const int m = r.size();
    BinaryRelation out(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            out = r.prefers(i, j) ? out.with(p(i), p(j)) : out.with(p(j), p(i));
    return out;
}

Ballot apply_permutation(const Permutation& p, const Ballot& b) {
    return std::visit([&](const auto& x) { return Ballot{apply_permutation(p, x)}; }, b);
}

Profile::Profile(AlternativeSet alternatives, std::vector<ProfileEntry> entries)
    : alts_(std::move(alternatives)) {
    if (entries.empty()) throw std::invalid_argument("Profile: no ballots");
    kind_ = kind_of(entries.front().ballot);
    const int m = alts_.size();
    std::map<Ballot, long> merged;
    for (auto& e : entries) {
        if (e.count <= 0) throw std::invalid_argument("Profile: non-positive multiplicity");
        if (kind_of(e.ballot) != kind_) throw std::invalid_argument("Profile: mixed ballot kinds");
        if (ballot_size(e.ballot) != m) throw std::invalid_argument("Profile: ballot size mismatch");
        merged[e.ballot] += e.count;
        n_ += e.count;
    }
    for (auto& [b, c] : merged) entries_.push_back({b, c});
}

bool Profile::operator==(const Profile& other) const {
    if (!(alts_ == other.alts_) || kind_ != other.kind_ || n_ != other.n_) return false;
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].ballot != other.entries_[i].ballot || entries_[i].count != other.entries_[i].count)
            return false;
    return true;
}

Profile apply_permutation(const Permutation& p, const Profile& profile) {
    std::vector<ProfileEntry> entries;
    for (const auto& e : profile.entries()) entries.push_back({apply_permutation(p, e.ballot), e.count});
    return Profile(profile.alternatives(), std::move(entries));
}

Wmg::Wmg(int m, long n) : m_(m), n_(n), w_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0) {}

void Wmg::add(AltId a, AltId b, long amount) {
    w_[index(a, b)] += amount;
    w_[index(b, a)] -= amount;
}

long Wmg::weight_toward(std::span<const AltId> above, AltId target) const {
    if (above.empty()) throw std::invalid_argument("weight_toward: empty set");
    if (target < 0 || target >= m_) throw std::invalid_argument("weight_toward: unknown target");
    long total = 0;
    for (AltId b : above) {
        if (b < 0 || b >= m_) throw std::invalid_argument("weight_toward: unknown alternative");
        if (b == target) throw std::invalid_argument("weight_toward: target inside the set");
        total += weight(b, target);
    }
    return total;
}

long Wmg::weight_from(AltId a) const {
    long total = 0;
    for (AltId b = 0; b < m_; ++b)
        if (b != a) total += weight(a, b);
    return total;
}

Wmg wmg(const Profile& profile) {
    const int m = profile.m();
    Wmg g(m, profile.n());
    for (const auto& e : profile.entries())
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                g.add(i, j, ballot_prefers(e.ballot, i, j) ? e.count : -e.count);
    return g;
}

long borda_score(const Profile& profile, AltId a) {
    if (profile.kind() != BallotKind::linear)
        throw std::invalid_argument("borda_score: requires linear-order ballots");
    long total = 0;
    for (const auto& e : profile.entries()) total += e.count * std::get<Ranking>(e.ballot).borda(a);
    return total;
}

}  // namespace umpvote
