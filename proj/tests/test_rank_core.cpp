#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "umpvote/ballot_format.hpp"
#include "umpvote/rank_core.hpp"

using namespace umpvote;
using testutil::R;
using testutil::Rel;

TEST_CASE("pair_index enumerates pairs in canonical order") {
    int expect = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            CHECK(pair_index(5, i, j) == expect);
            CHECK(pair_index(5, j, i) == expect);
            ++expect;
        }
    CHECK_THROWS_AS(pair_index(3, 1, 1), std::invalid_argument);
}

TEST_CASE("kendall tau basics") {
    CHECK(kendall_tau(R("abc"), R("abc")) == 0);
    CHECK(kendall_tau(R("abc"), R("cba")) == 3);
    // {a>b, c>a, b>c} vs a>b>c: only the a-c pair disagrees
    CHECK(kendall_tau(Rel(3, "ab ca bc"), R("abc").to_relation()) == 1);
    CHECK(kendall_tau(Rel(3, "ab ca bc"), R("cba").to_relation()) == 2);
    CHECK_THROWS_AS(kendall_tau(R("abc"), R("abcd")), std::invalid_argument);
    CHECK_THROWS_AS(kendall_tau(Ballot{R("abc")}, Ballot{R("abc").to_relation()}), std::invalid_argument);
}

TEST_CASE("kendall tau is a metric on random triples") {
    std::mt19937_64 rng(7);
    for (int m = 2; m <= 6; ++m) {
        auto all = all_rankings(m);
        std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
        for (int t = 0; t < 200; ++t) {
            const auto &x = all[pick(rng)], &y = all[pick(rng)], &z = all[pick(rng)];
            CHECK(kendall_tau(x, y) == kendall_tau(y, x));
            CHECK(kendall_tau(x, z) <= kendall_tau(x, y) + kendall_tau(y, z));
            CHECK(kendall_tau(x, y) <= num_pairs(m));
            CHECK(kendall_tau(x.to_relation(), y.to_relation()) == kendall_tau(x, y));
        }
    }
}

TEST_CASE("rankings enumerate lexicographically and index by Lehmer code") {
    auto all = all_rankings(4);
    CHECK(all.size() == 24);
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(ranking_index(all[i]) == i);
    CHECK(all_relations(3).size() == 8);
    int linear = 0;
    for (const auto& r : all_relations(3)) linear += r.is_linear();
    CHECK(linear == 6);
}

TEST_CASE("invalid rankings are rejected") {
    CHECK_THROWS_AS(Ranking({0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Ranking({0, 3, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({1, 1}), std::invalid_argument);
}

TEST_CASE("wmg of P_7") {
    auto g = wmg(testutil::p7());
    CHECK(g.weight(0, 1) == 1);
    CHECK(g.weight(0, 2) == 1);
    CHECK(g.weight(1, 2) == 5);
    CHECK(g.weight(1, 0) == -1);
    const std::vector<AltId> bc{1, 2};
    CHECK(g.weight_toward(bc, 0) == -2);
    CHECK(g.weight_from(0) == 2);
    CHECK(-g.weight_toward(bc, 0) == g.weight_from(0));
    CHECK_THROWS_AS(g.weight_toward(std::vector<AltId>{0, 1}, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.weight_toward(std::vector<AltId>{}, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.weight_toward(std::vector<AltId>{7}, 0), std::invalid_argument);
}

TEST_CASE("wmg small cases") {
    auto one = Profile::of(std::vector<Ranking>{R("ab")});
    CHECK(wmg(one).weight(0, 1) == 1);
    auto two = Profile::of(std::vector<Ranking>{R("ab"), R("ba")});
    CHECK(wmg(two).weight(0, 1) == 0);
    // n identical ballots B > a > rest
    auto same = Profile(AlternativeSet::lettered(4), {{Ballot{R("cbad")}, 5}});
    CHECK(wmg(same).weight_toward(std::vector<AltId>{1, 2}, 0) == 10);
}

TEST_CASE("wmg parity, antisymmetry and permutation equivariance") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 5);
        const int n = 1 + static_cast<int>(rng() % 9);
        auto all = all_rankings(m);
        std::vector<Ranking> ballots;
        for (int k = 0; k < n; ++k) ballots.push_back(all[rng() % all.size()]);
        auto p = Profile::of(ballots);
        auto g = wmg(p);
        std::vector<AltId> image(static_cast<std::size_t>(m));
        std::iota(image.begin(), image.end(), 0);
        std::shuffle(image.begin(), image.end(), rng);
        Permutation perm(image);
        auto gp = wmg(apply_permutation(perm, p));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                CHECK(g.weight(a, b) == -g.weight(b, a));
                CHECK(std::abs(g.weight(a, b) % 2) == (a == b ? 0 : n % 2));
                CHECK(std::abs(g.weight(a, b)) <= n);
                CHECK(gp.weight(perm(a), perm(b)) == g.weight(a, b));
            }
        // KT invariance
        const auto& x = all[rng() % all.size()];
        const auto& y = all[rng() % all.size()];
        CHECK(kendall_tau(apply_permutation(perm, x), apply_permutation(perm, y)) == kendall_tau(x, y));
        CHECK(kendall_tau(apply_permutation(perm, x.to_relation()), apply_permutation(perm, y.to_relation())) ==
              kendall_tau(x, y));
        // weight_toward equals the sum of edges
        std::vector<AltId> B;
        for (int b = 1; b < m; ++b)
            if (rng() % 2) B.push_back(b);
        if (!B.empty()) {
            long s = 0;
            for (AltId b : B) s += g.weight(b, 0);
            CHECK(g.weight_toward(B, 0) == s);
        }
    }
}

TEST_CASE("permutation actions") {
    CHECK(apply_permutation(Permutation::identity(3), R("bca")) == R("bca"));
    CHECK(apply_permutation(Permutation::transposition(3, 0, 1), R("abc")) == R("bac"));
    auto p = Permutation({2, 0, 1});
    CHECK(apply_permutation(p.inverse(), apply_permutation(p, R("acb"))) == R("acb"));
    CHECK_THROWS_AS(apply_permutation(Permutation::identity(2), R("abc")), std::invalid_argument);
}

TEST_CASE("profile merges duplicates and validates") {
    auto p = Profile::of(std::vector<Ranking>{R("abc"), R("bca"), R("abc")});
    CHECK(p.n() == 3);
    CHECK(p.entries().size() == 2);
    CHECK_THROWS_AS(Profile(AlternativeSet::lettered(3), {}), std::invalid_argument);
    CHECK_THROWS_AS(Profile(AlternativeSet::lettered(3), {{Ballot{R("abc")}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Profile(AlternativeSet::lettered(3), {{Ballot{R("abc")}, 1}, {Ballot{R("abc").to_relation()}, 1}}),
                    std::invalid_argument);
    CHECK(borda_score(testutil::p7(), 0) == 8);
    CHECK(borda_score(testutil::p7(), 1) == 9);
    CHECK(borda_score(testutil::p7(), 2) == 4);
}

TEST_CASE("ballot format parses rankings") {
    const std::string text =
        "# P7\n"
        "alts: a,b,c\n"
        "3: a>b>c\n"
        "3: b > c > a\n"
        "\n"
        "1: a>c>b\n";
    auto p = parse_profile(text);
    CHECK(p == testutil::p7());
    CHECK(parse_profile(format_profile(p)) == p);
}

TEST_CASE("ballot format parses binary relations") {
    auto p = parse_profile("alts: x,y,z\n2: x>y, z>x, y>z\n1: x>y, x>z, y>z\n");
    CHECK(p.kind() == BallotKind::binary);
    CHECK(p.n() == 3);
    CHECK(parse_profile(format_profile(p)) == p);
    auto q = parse_profile("alts: x,y\nkind: binary\n1: y>x\n");
    CHECK(q.kind() == BallotKind::binary);
    CHECK(parse_profile(format_profile(q)) == q);
}

TEST_CASE("ballot format reports line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            parse_profile(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("alts: a,b,c\n1: a>b>c\n2: a>b\n") == 3);
    CHECK(line_of("alts: a,b,c\n1: a>b>d\n") == 2);
    CHECK(line_of("alts: a,b,c\nx: a>b>c\n") == 2);
    CHECK(line_of("alts: a,b,c\n-1: a>b>c\n") == 2);
    CHECK(line_of("alts: a,b,c\n1: a>b>a\n") == 2);
    CHECK(line_of("alts: a,b,c\n1: a>b, b>c\n") == 2);
    CHECK(line_of("alts: a,b,c\n1: a>b, b>c, c>b\n") == 2);
    CHECK(line_of("1: a>b\n") == 1);
    CHECK(line_of("alts: a,a\n") == 1);
    CHECK(line_of("alts: a,b\nnonsense\n") == 2);
}

TEST_CASE("random round trip") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 4);
        std::vector<ProfileEntry> entries;
        const bool binary = trial % 2;
        for (int k = 0; k < 5; ++k) {
            if (binary)
                entries.push_back({BinaryRelation(m, rng() % (std::uint64_t{1} << num_pairs(m))), 1 + static_cast<long>(rng() % 4)});
            else {
                auto all = all_rankings(m);
                entries.push_back({all[rng() % all.size()], 1 + static_cast<long>(rng() % 4)});
            }
        }
        Profile p(AlternativeSet::lettered(m), entries);
        CHECK(parse_profile(format_profile(p)) == p);
    }
}
