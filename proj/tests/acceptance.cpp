// Acceptance run: one PASS/FAIL line per criterion. Reference values are
// recomputed here by direct enumeration, independent of the library paths
// under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "umpvote/kernels.hpp"
#include "umpvote/oracle.hpp"
#include "umpvote/selection.hpp"
#include "umpvote/ump_tests.hpp"
#include "umpvote/verify.hpp"

using namespace umpvote;

namespace {

// Tolerances pinned per criterion.
constexpr double kExact = 1e-12;
constexpr double kOracle = 1e-9;
constexpr double kRuntime1 = 5.0;
constexpr double kRuntime5 = 120.0;
constexpr double kRuntime7 = 180.0;
constexpr long kSimSamples = 100000;

using Perm = std::vector<int>;

std::vector<Perm> perms(int m) {
    Perm p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 0);
    std::vector<Perm> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int pos(const Perm& p, int x) { return static_cast<int>(std::find(p.begin(), p.end(), x) - p.begin()); }

int kt(const Perm& x, const Perm& y) {
    int d = 0;
    for (int i = 0; i < static_cast<int>(x.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(x.size()); ++j)
            d += (pos(x, i) < pos(x, j)) != (pos(y, i) < pos(y, j));
    return d;
}

double mallows(const Perm& w, const Perm& v, double phi) {
    double z = 0.0;
    for (const auto& u : perms(static_cast<int>(w.size()))) z += std::pow(phi, kt(w, u));
    return std::pow(phi, kt(w, v)) / z;
}

Ranking rk(const Perm& p) { return Ranking(std::vector<AltId>(p.begin(), p.end())); }
Perm pm(const char* s) {
    Perm p;
    for (; *s; ++s) p.push_back(*s - 'a');
    return p;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Line {
    bool ok;
    std::string detail;
};

// --- 1 ------------------------------------------------------------------
Line model_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double phi : {0.3, 0.5, 0.8}) {
        for (int m = 1; m <= 6; ++m) {
            MallowsModel mm(m, phi);
            const auto all = perms(m);
            double z = 0.0, total = 0.0;
            for (const auto& v : all) {
                z += std::pow(phi, kt(all.front(), v));
                total += mm.pmf(rk(all.front()), rk(v));
            }
            worst = std::max({worst, std::abs(total - 1.0), std::abs(z - mm.normalizer()) / z});
        }
        for (int m = 1; m <= 4; ++m) {
            CondorcetModel cm(m, phi);
            const int pairs = m * (m - 1) / 2;
            const BinaryRelation w(m, 0);
            double z = 0.0, total = 0.0;
            for (std::uint64_t bits = 0; bits < (1ULL << pairs); ++bits) {
                z += std::pow(phi, __builtin_popcountll(bits));  // disagreements with the all-zero relation
                total += cm.pmf(w, BinaryRelation(m, bits));
            }
            worst = std::max({worst, std::abs(total - 1.0), std::abs(z - cm.normalizer()) / z});
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= kExact && secs < kRuntime1, "max deviation " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

// --- 2 ------------------------------------------------------------------
Line hand_built_test() {
    double worst = 0.0;
    for (double phi : {0.3, 0.5, 0.8}) {
        auto fm = FiniteModel::from(MallowsModel(3, phi));
        auto g = GeneralTest::constant(fm, 1, 0.0);
        g.f[ranking_index(rk(pm("abc")))] = 1.0;
        g.f[ranking_index(rk(pm("bac")))] = 0.5;
        g.f[ranking_index(rk(pm("acb")))] = 0.5;
        std::vector<std::size_t> h0;
        for (const auto& v : perms(3))
            if (v != pm("abc")) h0.push_back(ranking_index(rk(v)));
        const double z = 1 + 2 * phi + 2 * phi * phi + phi * phi * phi;
        worst = std::max(worst, std::abs(size(g, fm, h0).size - (0.5 + phi + 0.5 * phi * phi) / z));
        worst = std::max(worst, std::abs(power(g, fm, ranking_index(rk(pm("abc")))) - (1 + phi) / z));
    }
    return {worst <= kExact, "max error " + fmt("%.3g", worst)};
}

// --- 3 ------------------------------------------------------------------
Line two_point_mixture() {
    double worst = 0.0;
    bool dominance = true;
    for (double phi : {0.3, 0.5, 0.8}) {
        auto fm = FiniteModel::from(MallowsModel(3, phi));
        const Perm h1 = pm("abc");
        const std::vector<Perm> spt{pm("bac"), pm("acb")};
        auto lambda = LeastFavorable::uniform({ranking_index(rk(spt[0])), ranking_index(rk(spt[1]))});
        const auto lib_ratio = log_mixture_ratio(lambda, ranking_index(rk(h1)), fm, 1);
        std::vector<Perm> h0;
        for (const auto& v : perms(3))
            if (v != h1) h0.push_back(v);
        std::vector<std::size_t> h0i;
        for (const auto& h : h0) h0i.push_back(ranking_index(rk(h)));
        const auto rep = check_uniform_lf(lambda, h0i, ranking_index(rk(h1)), fm);
        dominance = dominance && rep.holds;
        for (const auto& v : perms(3)) {
            const double r = std::log(mallows(h1, v, phi) / (0.5 * mallows(spt[0], v, phi) + 0.5 * mallows(spt[1], v, phi)));
            worst = std::max(worst, std::abs(lib_ratio[ranking_index(rk(v))] - r));
        }
        for (std::size_t i = 0; i < h0.size(); ++i) {
            std::map<long long, std::pair<double, double>> x;  // ratio bucket -> (value, prob)
            for (const auto& v : perms(3)) {
                const double r = std::log(mallows(h1, v, phi) / (0.5 * mallows(spt[0], v, phi) + 0.5 * mallows(spt[1], v, phi)));
                auto& e = x[std::llround(r * 1e9)];
                e.first = r;
                e.second += mallows(h0[i], v, phi);
            }
            if (x.size() != rep.x[i].size()) return {false, "X distribution support size differs"};
            for (const auto& [key, e] : x) worst = std::max(worst, std::abs(rep.x[i].at(e.first) - e.second));
        }
    }
    return {worst <= kExact && dominance,
            "max error " + fmt("%.3g", worst) + ", weak dominance " + (dominance ? "holds" : "fails")};
}

// --- 4 ------------------------------------------------------------------
Line seven_voter_statistics() {
    const Profile p7(AlternativeSet::lettered(3), {{Ballot{rk(pm("abc"))}, 3}, {Ballot{rk(pm("bca"))}, 3},
                                                  {Ballot{rk(pm("acb"))}, 1}});
    const std::vector<std::pair<Perm, long>> voters{{pm("abc"), 3}, {pm("bca"), 3}, {pm("acb"), 1}};
    long nonwinner = 0, winner = 0;
    for (const auto& [v, c] : voters)
        for (int b : {1, 2}) {
            nonwinner += c * (pos(v, b) < pos(v, 0) ? 1 : -1);
            winner += c * (pos(v, 0) < pos(v, b) ? 1 : -1);
        }
    MallowsModel mm(3, 0.5);
    const double s_non = mallows_nonwinner_test(0, {1, 2}, 0.05, mm, 7).statistic_value(p7);
    const double s_win = mallows_winner_test(0, 0.05, mm, 7).statistic_value(p7);
    const bool ok = s_non == -2.0 && s_win == 2.0 && nonwinner == -2 && winner == 2;
    return {ok, "non-winner " + fmt("%g", s_non) + ", winner " + fmt("%g", s_win)};
}

// --- 5 ------------------------------------------------------------------
Line oracle_grid(double& seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::string where;
    for (TestFamily fam : {TestFamily::mallows_nonwinner, TestFamily::mallows_winner, TestFamily::condorcet_nonwinner,
                           TestFamily::condorcet_winner})
        for (long n : {1L, 2L})
            for (double phi : {0.3, 0.5, 0.8})
                for (double alpha : {0.05, 0.2, 0.5}) {
                    const double g = max_oracle_gap(fam, 3, phi, alpha, n);
                    if (g > worst) {
                        worst = g;
                        where = std::string(family_name(fam)) + " phi=" + fmt("%g", phi) + " alpha=" + fmt("%g", alpha) +
                                " n=" + std::to_string(n);
                    }
                }
    seconds = seconds_since(t0);
    return {worst <= kOracle && seconds < kRuntime5,
            "max gap " + fmt("%.3g", worst) + (where.empty() ? "" : " at " + where) + ", " + fmt("%.2f", seconds) + " s"};
}

// --- 6 ------------------------------------------------------------------
Line characterizations(bool grid_ok) {
    std::string detail;
    bool ok = grid_ok;
    for (double phi : {0.3, 0.5, 0.8}) {
        // differing above-sets: disjoint at one ballot, nested at two
        const std::vector<std::tuple<Hypothesis, Hypothesis, Model, long>> cases{
            {Hypothesis::rankings_with_top(3, 0),
             Hypothesis(BallotKind::linear, 3, {Ballot{rk(pm("bac"))}, Ballot{rk(pm("cab"))}}), MallowsModel(3, phi), 1},
            {Hypothesis::rankings_with_top(3, 0),
             Hypothesis(BallotKind::linear, 3, {Ballot{rk(pm("bac"))}, Ballot{rk(pm("bca"))}}), MallowsModel(3, phi), 2},
            {Hypothesis::relations_with_top(3, 0),
             Hypothesis(BallotKind::binary, 3,
                        {Ballot{BinaryRelation(3, 0).with(1, 0).with(0, 2).with(1, 2)},
                         Ballot{BinaryRelation(3, 0).with(2, 0).with(0, 1).with(1, 2)}}),
             CondorcetModel(3, phi), 1},
            {Hypothesis::relations_with_top(3, 0),
             Hypothesis(BallotKind::binary, 3,
                        {Ballot{BinaryRelation(3, 0).with(1, 0).with(0, 2).with(1, 2)},
                         Ballot{BinaryRelation(3, 0).with(1, 0).with(2, 0).with(1, 2)}}),
             CondorcetModel(3, phi), 2}};
        for (const auto& [h0, h1, model, n] : cases) {
            // above-sets recomputed here
            std::vector<std::vector<AltId>> sets;
            for (const auto& b : h1.params()) {
                std::vector<AltId> s;
                for (AltId x = 1; x < 3; ++x)
                    if (ballot_prefers(b, x, 0)) s.push_back(x);
                sets.push_back(s);
            }
            if (sets[0] == sets[1]) return {false, "test instance has equal above-sets"};
            auto fm = FiniteModel::from(model);
            bool refuted = false;
            for (double alpha : alpha_sweep(19))
                if (!ump_exists_lp(h0.indices(), h1.indices(), alpha, fm, n).exists) {
                    refuted = true;
                    break;
                }
            ok = ok && refuted;
            if (!refuted) detail += " no refutation for a " + describe(model) + " case;";
        }
    }
    return {ok, std::string(grid_ok ? "coinciding sets match the oracle grid" : "oracle grid failed") +
                    (detail.empty() ? "; differing sets refuted in every instance" : ";" + detail)};
}

// --- 7 ------------------------------------------------------------------
Line borda_regimes() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto low = borda_sweep(4, 0.2, 25);
    const auto high = borda_sweep(4, 0.95, 25);
    const double secs = seconds_since(t0);
    std::string detail = low.first_non_existence ? "phi=0.2: no UMP test at alpha=" + fmt("%.6g", *low.first_non_existence)
                                                 : "phi=0.2: UMP test at every alpha";
    int bad = 0;
    double worst_gap = 0.0, first_bad = 0.0;
    for (std::size_t i = 0; i < high.alphas.size(); ++i)
        if (!high.exists[i] || high.borda_gap[i] > kOracle) {
            if (!bad++) first_bad = high.alphas[i];
            worst_gap = std::max(worst_gap, high.borda_gap[i]);
        }
    detail += bad ? "; phi=0.95: Borda test below the optimum at " + std::to_string(bad) + "/25 points from alpha=" +
                        fmt("%.6g", first_bad) + ", max gap " + fmt("%.3g", worst_gap)
                  : "; phi=0.95: UMP at all 25 points";
    detail += ", " + fmt("%.2f", secs) + " s";
    return {low.first_non_existence.has_value() && bad == 0 && secs < kRuntime7, detail};
}

// --- 8 ------------------------------------------------------------------
Line tail_dominance() {
    std::mt19937_64 rng(8);
    const auto all = perms(4);
    int configs = 0;
    for (double phi : {0.3, 0.8}) {
        auto tails = [&](const Perm& w, const std::function<int(const Perm&)>& stat, int lo, int hi) {
            std::vector<double> t(static_cast<std::size_t>(hi - lo + 1), 0.0);
            for (const auto& v : all) {
                const double p = mallows(w, v, phi);
                for (int k = lo; k <= std::min(stat(v), hi); ++k) t[static_cast<std::size_t>(k - lo)] += p;
            }
            return t;
        };
        for (int trial = 0; trial < 20; ++trial) {
            // C' from C by swapping a member for an alternative W ranks lower
            const Perm w = all[rng() % all.size()];
            const int a = static_cast<int>(rng() % 4);
            Perm rest;
            for (int x : w)
                if (x != a) rest.push_back(x);
            std::vector<bool> in(3, false);
            do {
                for (int i = 0; i < 3; ++i) in[static_cast<std::size_t>(i)] = rng() % 2;
            } while (std::count(in.begin(), in.end(), true) == 0 || std::count(in.begin(), in.end(), true) == 3);
            std::vector<std::pair<int, int>> moves;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    if (in[static_cast<std::size_t>(i)] && !in[static_cast<std::size_t>(j)]) moves.emplace_back(i, j);
            if (moves.empty()) {
                --trial;
                continue;
            }
            auto inp = in;
            const auto [i, j] = moves[rng() % moves.size()];
            inp[static_cast<std::size_t>(i)] = false;
            inp[static_cast<std::size_t>(j)] = true;
            auto weight = [&](const std::vector<bool>& s) {
                return [&, s](const Perm& v) {
                    int t = 0;
                    for (int k = 0; k < 3; ++k)
                        if (s[static_cast<std::size_t>(k)]) t += pos(v, rest[static_cast<std::size_t>(k)]) < pos(v, a) ? 1 : -1;
                    return t;
                };
            };
            const auto hi = tails(w, weight(in), -3, 3), lo = tails(w, weight(inp), -3, 3);
            for (std::size_t k = 0; k < hi.size(); ++k)
                if (lo[k] > hi[k] + 1e-15) return {false, "dominating-set inequality fails, trial " + std::to_string(trial)};
            ++configs;
        }
        for (int trial = 0; trial < 20; ++trial) {
            const Perm w = all[rng() % all.size()];
            int i = static_cast<int>(rng() % 4), j = static_cast<int>(rng() % 3);
            if (j >= i) ++j;
            if (i > j) std::swap(i, j);
            const int b = w[static_cast<std::size_t>(i)], c = w[static_cast<std::size_t>(j)];
            const auto tb = tails(w, [&](const Perm& v) { return 3 - pos(v, b); }, 0, 3);
            const auto tc = tails(w, [&](const Perm& v) { return 3 - pos(v, c); }, 0, 3);
            for (std::size_t k = 0; k < tb.size(); ++k)
                if (tc[k] > tb[k] + 1e-15) return {false, "Borda dominance fails, trial " + std::to_string(trial)};
            ++configs;
        }
    }
    return {true, std::to_string(configs) + " configurations"};
}

// --- 9 ------------------------------------------------------------------
Line borda_correspondence() {
    std::mt19937_64 rng(9);
    int mismatches = 0;
    const double phis[] = {0.3, 0.5, 0.8};
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 3 + static_cast<int>(rng() % 2);
        const long n = 3 + static_cast<long>(rng() % 7);
        const double phi = phis[rng() % 3];
        const auto all = perms(m);
        const Perm w = all[rng() % all.size()];
        const MallowsModel mm(m, phi);
        const Profile p = sample_profile(mm, Ballot{rk(w)}, n, rng());
        std::vector<long> score(static_cast<std::size_t>(m), 0);
        for (const auto& e : p.entries()) {
            const auto& v = std::get<Ranking>(e.ballot);
            for (AltId x = 0; x < m; ++x) score[static_cast<std::size_t>(x)] += e.count * (m - 1 - v.position(x));
        }
        const long top = *std::max_element(score.begin(), score.end());
        std::vector<AltId> borda;
        for (AltId x = 0; x < m; ++x)
            if (score[static_cast<std::size_t>(x)] == top) borda.push_back(x);
        if (select_by_winner_tests(p, mm).winners != borda) ++mismatches;
        if (select_by_nonwinner_tests(p, mm).winners != borda) ++mismatches;
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over 500 profiles"};
}

// --- 10 -----------------------------------------------------------------
Line size_calibration() {
    std::string worst_name;
    double worst_z = 0.0;
    bool ok = true;
    std::uint64_t seed = 100;
    for (double alpha : {0.05, 0.2}) {
        const MallowsModel mm(3, 0.5);
        const CondorcetModel cm(3, 0.5);
        const MallowsModel m4(4, 0.5);
        const std::vector<std::tuple<ThresholdTest, Model, long>> tests{
            {mallows_nonwinner_test(0, {1}, alpha, mm, 5), mm, 5},
            {mallows_nonwinner_test(0, {1, 2}, alpha, mm, 5), mm, 5},
            {mallows_winner_test(0, alpha, mm, 5), mm, 5},
            {mallows_borda_test(0, alpha, m4, 1), m4, 1},
            {condorcet_nonwinner_test(0, {1, 2}, alpha, cm, 5), cm, 5},
            {condorcet_winner_test(0, alpha, cm, 5), cm, 5}};
        const double sigma = std::sqrt(alpha * (1 - alpha) / kSimSamples);
        for (const auto& [t, model, n] : tests) {
            const long hits = kernels::omp::count_rejections(t, model, *t.null_parameter, n, kSimSamples, seed++);
            const double z = std::abs(static_cast<double>(hits) / kSimSamples - alpha) / sigma;
            ok = ok && z <= 3.0;
            if (z >= worst_z) {
                worst_z = z;
                worst_name = t.name + " alpha=" + fmt("%g", alpha);
            }
        }
    }
    return {ok, "12 tests, worst |rate - alpha| = " + fmt("%.2f", worst_z) + " sigma (" + worst_name + ")"};
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](int id, const char* name, const Line& l) {
        std::printf("%s criterion-%d %s: %s\n", l.ok ? "PASS" : "FAIL", id, name, l.detail.c_str());
        std::fflush(stdout);
        failed += !l.ok;
    };
    auto guarded = [](const std::function<Line()>& f) -> Line {
        try {
            return f();
        } catch (const std::exception& e) {
            return {false, std::string("exception: ") + e.what()};
        }
    };
    report(1, "model-exactness", guarded(model_exactness));
    report(2, "hand-built-test-size-power", guarded(hand_built_test));
    report(3, "mixture-ratio-and-weak-dominance", guarded(two_point_mixture));
    report(4, "seven-voter-statistics", guarded(seven_voter_statistics));
    double secs = 0.0;
    const Line grid = guarded([&] { return oracle_grid(secs); });
    report(5, "optimality-vs-oracle", grid);
    report(6, "above-set-characterizations", guarded([&] { return characterizations(grid.ok); }));
    report(7, "borda-test-regimes", guarded(borda_regimes));
    report(8, "tail-dominance", guarded(tail_dominance));
    report(9, "borda-correspondence", guarded(borda_correspondence));
    report(10, "size-calibration", guarded(size_calibration));
    std::printf("%d of 10 criteria failed\n", failed);
    return failed ? 1 : 0;
}
