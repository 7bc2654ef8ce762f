#pragma once

// Alternatives, rankings, binary relations, profiles, Kendall-tau distance
// and weighted majority graphs.

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace umpvote {

using AltId = int;

/// Largest m supported by BinaryRelation (C(m,2) bits must fit in 64).
inline constexpr int kMaxAlternatives = 11;

inline constexpr int num_pairs(int m) { return m * (m - 1) / 2; }

/// Index of the unordered pair {i, j} in the canonical order
/// (0,1), (0,2), ..., (0,m-1), (1,2), ... ; requires i != j.
int pair_index(int m, AltId i, AltId j);

/// Ordered alternative names; ids are positions in the list.
class AlternativeSet {
public:
    AlternativeSet() = default;
    explicit AlternativeSet(std::vector<std::string> names);

    /// a, b, c, ... for m <= 26, a1, a2, ... beyond.
    static AlternativeSet lettered(int m);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(AltId id) const { return names_.at(static_cast<std::size_t>(id)); }
    const std::vector<std::string>& names() const { return names_; }

    /// Throws std::out_of_range for unknown names.
    AltId id(std::string_view name) const;
    bool contains(std::string_view name) const;

    bool operator==(const AlternativeSet&) const = default;

private:
    std::vector<std::string> names_;
};

class BinaryRelation;

/// A linear order, most-preferred first.
class Ranking {
public:
    Ranking() = default;
    /// Throws std::invalid_argument unless `order` is a permutation of 0..m-1.
    explicit Ranking(std::vector<AltId> order);

    static Ranking identity(int m);

    int size() const { return static_cast<int>(order_.size()); }
    std::span<const AltId> order() const { return order_; }
    AltId at(int position) const { return order_[static_cast<std::size_t>(position)]; }
    int position(AltId a) const { return position_[static_cast<std::size_t>(a)]; }
    bool prefers(AltId x, AltId y) const { return position(x) < position(y); }

    /// Number of alternatives ranked below `a`.
    int borda(AltId a) const { return size() - 1 - position(a); }

    BinaryRelation to_relation() const;

    bool operator==(const Ranking& other) const { return order_ == other.order_; }
    std::strong_ordering operator<=>(const Ranking& other) const { return order_ <=> other.order_; }

private:
    std::vector<AltId> order_;
    std::vector<int> position_;
};

/// Irreflexive, antisymmetric, total relation stored as one bit per pair;
/// bit pair_index(i,j) for i<j is set when i is preferred to j.
class BinaryRelation {
public:
    BinaryRelation() = default;
    BinaryRelation(int m, std::uint64_t bits);

    int size() const { return m_; }
    std::uint64_t bits() const { return bits_; }
    bool prefers(AltId x, AltId y) const;

    /// Copy with x preferred to y.
    BinaryRelation with(AltId x, AltId y) const;

    /// True when the relation is transitive, i.e. a linear order.
    bool is_linear() const;

    bool operator==(const BinaryRelation&) const = default;
    std::strong_ordering operator<=>(const BinaryRelation& other) const {
        if (auto c = m_ <=> other.m_; c != 0) return c;
        return bits_ <=> other.bits_;
    }

private:
    int m_ = 0;
    std::uint64_t bits_ = 0;
};

enum class BallotKind { linear, binary };

using Ballot = std::variant<Ranking, BinaryRelation>;

BallotKind kind_of(const Ballot& b);
int ballot_size(const Ballot& b);
bool ballot_prefers(const Ballot& b, AltId x, AltId y);

int kendall_tau(const Ranking& x, const Ranking& y);
int kendall_tau(const BinaryRelation& x, const BinaryRelation& y);
/// Throws std::invalid_argument on kind or size mismatch.
int kendall_tau(const Ballot& x, const Ballot& y);

/// All m! rankings in lexicographic order of their id sequence.
std::vector<Ranking> all_rankings(int m);
/// All 2^C(m,2) binary relations, ordered by bit pattern.
std::vector<BinaryRelation> all_relations(int m);
/// Position of a ranking in all_rankings(m).
std::size_t ranking_index(const Ranking& r);

/// A bijection on alternative ids.
class Permutation {
public:
    /// Throws std::invalid_argument unless `image` is a bijection on 0..m-1.
    explicit Permutation(std::vector<AltId> image);
    static Permutation identity(int m);
    static Permutation transposition(int m, AltId x, AltId y);

    int size() const { return static_cast<int>(image_.size()); }
    AltId operator()(AltId a) const { return image_[static_cast<std::size_t>(a)]; }
    Permutation inverse() const;

private:
    std::vector<AltId> image_;
};

Ranking apply_permutation(const Permutation& p, const Ranking& r);
BinaryRelation apply_permutation(const Permutation& p, const BinaryRelation& r);
Ballot apply_permutation(const Permutation& p, const Ballot& b);

struct ProfileEntry {
    Ballot ballot;
    long count = 0;
};

/// Multiset of ballots of one kind over one alternative set.
class Profile {
public:
    /// Merges duplicate ballots and orders entries. Throws std::invalid_argument
    /// on empty input, non-positive counts, or mixed kinds/sizes.
    Profile(AlternativeSet alternatives, std::vector<ProfileEntry> entries);

    template <class B>
    static Profile of(const std::vector<B>& ballots, AlternativeSet alts = {}) {
        std::vector<ProfileEntry> e;
        e.reserve(ballots.size());
        for (const auto& b : ballots) e.push_back({Ballot{b}, 1});
        if (alts.size() == 0 && !ballots.empty()) alts = AlternativeSet::lettered(ballots.front().size());
        return Profile(std::move(alts), std::move(e));
    }

    const AlternativeSet& alternatives() const { return alts_; }
    int m() const { return alts_.size(); }
    long n() const { return n_; }
    BallotKind kind() const { return kind_; }
    const std::vector<ProfileEntry>& entries() const { return entries_; }

    bool operator==(const Profile& other) const;

private:
    AlternativeSet alts_;
    BallotKind kind_ = BallotKind::linear;
    std::vector<ProfileEntry> entries_;
    long n_ = 0;
};

Profile apply_permutation(const Permutation& p, const Profile& profile);

/// Antisymmetric pairwise-margin matrix: w(a,b) = #(a>b) - #(b>a).
class Wmg {
public:
    Wmg(int m, long n);

    int m() const { return m_; }
    long n() const { return n_; }
    long weight(AltId a, AltId b) const { return w_[index(a, b)]; }

    /// Sum over b in `above` of w(b, target). Throws std::invalid_argument when
    /// `above` is empty, contains `target`, or names an unknown alternative.
    long weight_toward(std::span<const AltId> above, AltId target) const;
    /// w(a > others) = sum over b != a of w(a, b).
    long weight_from(AltId a) const;

    void add(AltId a, AltId b, long amount);

private:
    std::size_t index(AltId a, AltId b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(b);
    }
    int m_;
    long n_;
    std::vector<long> w_;
};

Wmg wmg(const Profile& profile);

/// Total Borda score of `a` over the profile (linear profiles only).
long borda_score(const Profile& profile, AltId a);

}  // namespace umpvote
