#include "umpvote/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

#include "umpvote/oracle.hpp"
#include "umpvote/testing_core.hpp"
#include "umpvote/ump_tests.hpp"

namespace umpvote {
namespace {

using Task = std::function<Check()>;

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string grid_name(const std::string& base, double phi, double alpha, long n) {
    return base + "[phi=" + fmt("%g", phi) + ",alpha=" + fmt("%g", alpha) + ",n=" + std::to_string(n) + "]";
}

Check pass(std::string name, std::string detail = "") { return {CheckOutcome::pass, std::move(name), std::move(detail)}; }
Check fail(std::string name, std::string detail) { return {CheckOutcome::fail, std::move(name), std::move(detail)}; }
Check skip(std::string name, std::string detail) { return {CheckOutcome::skip, std::move(name), std::move(detail)}; }
Check verdict(bool ok, std::string name, std::string detail) {
    return {ok ? CheckOutcome::pass : CheckOutcome::fail, std::move(name), std::move(detail)};
}

// Runs tasks concurrently; results keep task order. Resource limits become
// SKIP, anything else thrown becomes FAIL.
std::vector<Check> run(const std::vector<std::pair<std::string, Task>>& tasks) {
    std::vector<Check> out(tasks.size());
    const auto count = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        const auto& [name, task] = tasks[static_cast<std::size_t>(i)];
        try {
            out[static_cast<std::size_t>(i)] = task();
        } catch (const std::length_error& e) {
            out[static_cast<std::size_t>(i)] = skip(name, std::string("resource limit: ") + e.what());
        } catch (const std::exception& e) {
            out[static_cast<std::size_t>(i)] = fail(name, std::string("exception: ") + e.what());
        }
    }
    return out;
}

std::vector<std::vector<AltId>> nonempty_subsets(const std::vector<AltId>& items) {
    std::vector<std::vector<AltId>> out;
    for (unsigned mask = 1; mask < (1U << items.size()); ++mask) {
        std::vector<AltId> s;
        for (std::size_t i = 0; i < items.size(); ++i)
            if (mask & (1U << i)) s.push_back(items[i]);
        out.push_back(s);
    }
    return out;
}

std::vector<AltId> others(int m, AltId a) {
    std::vector<AltId> out;
    for (AltId b = 0; b < m; ++b)
        if (b != a) out.push_back(b);
    return out;
}

double gap_over(const ThresholdTest& t, const Hypothesis& h0, const Hypothesis& h1, const Model& model,
                const FiniteModel& fm, double alpha, long n, std::size_t limit) {
    OracleOptions opt;
    opt.space_limit = limit;
    const auto h0i = h0.indices();
    double worst = 0.0;
    for (const auto& h : h1.params()) {
        const double lp = mp_test_lp(h0i, parameter_index(h), alpha, fm, n, opt).power;
        worst = std::max(worst, std::abs(power(t, h, model, n) - lp));
    }
    return worst;
}

// Upper tail probabilities Pr(stat(V) >= K) over one ballot, K = lo..hi.
template <class Stat>
std::vector<double> single_ballot_tails(const MallowsModel& model, const Ranking& w, Stat stat, int lo, int hi) {
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& v : all_rankings(model.m())) {
        const int s = stat(v);
        const double p = model.pmf(w, v);
        for (int k = lo; k <= std::min(s, hi); ++k) out[static_cast<std::size_t>(k - lo)] += p;
    }
    return out;
}

// C' from C by lowering members according to W (a random chain of single swaps).
std::pair<std::vector<AltId>, std::vector<AltId>> dominating_pair(const Ranking& w, AltId a, std::mt19937_64& rng) {
    std::vector<AltId> rest;
    for (AltId x : w.order())
        if (x != a) rest.push_back(x);
    const std::size_t k = 1 + rng() % (rest.size() - 1);
    std::vector<AltId> c, cp;
    std::vector<bool> inc(rest.size(), false);
    // pick k positions for C, then lower at least one of them to a free lower position
    std::vector<std::size_t> idx(rest.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < k; ++i) inc[idx[i]] = true;
    std::vector<bool> incp = inc;
    bool moved = false;
    for (int attempt = 0; attempt < 8 || !moved; ++attempt) {
        std::vector<std::pair<std::size_t, std::size_t>> moves;
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = i + 1; j < rest.size(); ++j)
                if (incp[i] && !incp[j]) moves.emplace_back(i, j);
        if (moves.empty()) break;
        const auto [i, j] = moves[rng() % moves.size()];
        incp[i] = false;
        incp[j] = true;
        moved = true;
        if (rng() % 2) break;
    }
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (inc[i]) c.push_back(rest[i]);
        if (incp[i]) cp.push_back(rest[i]);
    }
    return {c, cp};
}

int weight_toward(const Ranking& v, const std::vector<AltId>& set, AltId a) {
    int s = 0;
    for (AltId x : set) s += v.prefers(x, a) ? 1 : -1;
    return s;
}

// Passes when, for some case, the oracle finds no UMP test at some swept alpha.
Check refuted_in_sweep(const std::string& name, const std::vector<std::pair<Hypothesis, long>>& cases,
                       const Hypothesis& h0, const Model& model, std::size_t limit) {
    auto fm = FiniteModel::from(model);
    OracleOptions opt;
    opt.space_limit = limit;
    std::string detail;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto& [h1, n] = cases[c];
        const bool incoherent = model_kind(model) == BallotKind::linear ? !mallows_nonwinner_ump_exists(0, h1).exists
                                                                         : !condorcet_nonwinner_ump_exists(0, h1).exists;
        if (!incoherent) return fail(name, "case " + std::to_string(c) + " has a common above-set");
        std::optional<double> witness;
        for (double alpha : alpha_sweep(19))
            if (!ump_exists_lp(h0.indices(), h1.indices(), alpha, fm, n, opt).exists) {
                witness = alpha;
                break;
            }
        if (!witness) return fail(name, "case " + std::to_string(c) + ": a UMP test exists at every swept alpha");
        detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + " alpha=" + fmt("%.4g", *witness);
    }
    return pass(name, "no UMP test at " + detail);
}

// The expected Lambda is least favorable for each h1, its mixture test attains
// the oracle optimum, and the LP duals put no mass outside its support.
Check extraction_check(const std::string& name, const std::vector<std::pair<std::size_t, LeastFavorable>>& expected,
                       const std::vector<std::size_t>& h0, double alpha, const FiniteModel& fm) {
    for (const auto& [h1, lambda] : expected) {
        auto v = verify_least_favorable(lambda, h0, h1, alpha, fm, 1);
        if (!v.holds) return fail(name, "expected Lambda is not least favorable: " + v.detail);
        const auto lp = mp_test_lp(h0, h1, alpha, fm, 1);
        const double mixture = power(mixture_lr_test(lambda, h1, alpha, fm, 1).tabulate(fm, 1), fm, h1);
        if (std::abs(mixture - lp.power) > 1e-9) return fail(name, "mixture test power " + fmt("%.12g", mixture) +
                                                                    " vs optimum " + fmt("%.12g", lp.power));
        for (std::size_t theta : extract_least_favorable(lp).support)
            if (std::find(lambda.support.begin(), lambda.support.end(), theta) == lambda.support.end())
                return fail(name, "dual mass outside the expected support");
    }
    return pass(name, "");
}

}  // namespace

const char* outcome_name(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::pass: return "PASS";
        case CheckOutcome::fail: return "FAIL";
        case CheckOutcome::skip: return "SKIP";
    }
    return "?";
}

const char* family_name(TestFamily f) {
    switch (f) {
        case TestFamily::mallows_nonwinner: return "mallows-nonwinner";
        case TestFamily::mallows_winner: return "mallows-winner";
        case TestFamily::condorcet_nonwinner: return "condorcet-nonwinner";
        case TestFamily::condorcet_winner: return "condorcet-winner";
    }
    return "?";
}

std::vector<double> alpha_sweep(int points) {
    std::vector<double> out;
    for (int k = 1; k <= points; ++k) out.push_back(static_cast<double>(k) / (points + 1));
    return out;
}

double max_oracle_gap(TestFamily family, int m, double phi, double alpha, long n, std::size_t space_limit) {
    const AltId a = 0;
    double worst = 0.0;
    switch (family) {
        case TestFamily::mallows_nonwinner: {
            MallowsModel mm(m, phi);
            auto fm = FiniteModel::from(mm);
            const auto h0 = Hypothesis::rankings_with_top(m, a);
            for (const auto& b : nonempty_subsets(others(m, a)))
                worst = std::max(worst, gap_over(mallows_nonwinner_test(a, b, alpha, mm, n), h0,
                                                 Hypothesis::rankings_with_above_set(m, b, a), mm, fm, alpha, n,
                                                 space_limit));
            break;
        }
        case TestFamily::mallows_winner: {
            MallowsModel mm(m, phi);
            auto fm = FiniteModel::from(mm);
            worst = gap_over(mallows_winner_test(a, alpha, mm, n), Hypothesis::rankings_with_bottom(m, a),
                             Hypothesis::rankings_with_top(m, a), mm, fm, alpha, n, space_limit);
            break;
        }
        case TestFamily::condorcet_nonwinner: {
            CondorcetModel cm(m, phi);
            auto fm = FiniteModel::from(cm);
            const auto h0 = Hypothesis::relations_with_top(m, a);
            for (const auto& b : nonempty_subsets(others(m, a)))
                worst = std::max(worst, gap_over(condorcet_nonwinner_test(a, b, alpha, cm, n), h0,
                                                 Hypothesis::relations_with_above_set(m, b, a), cm, fm, alpha, n,
                                                 space_limit));
            break;
        }
        case TestFamily::condorcet_winner: {
            CondorcetModel cm(m, phi);
            auto fm = FiniteModel::from(cm);
            const auto h1 = Hypothesis::relations_with_top(m, a);
            worst = gap_over(condorcet_winner_test(a, alpha, cm, n), h1.complement(), h1, cm, fm, alpha, n,
                             space_limit);
            break;
        }
    }
    return worst;
}

BordaSweep borda_sweep(int m, double phi, int points) {
    const AltId a = 0;
    MallowsModel mm(m, phi);
    auto fm = FiniteModel::from(mm);
    const auto h1 = Hypothesis::rankings_with_top(m, a);
    const auto h0 = h1.complement();
    const auto h0i = h0.indices();
    const auto h1i = h1.indices();
    BordaSweep s;
    s.alphas = alpha_sweep(points);
    for (double alpha : s.alphas) {
        auto ex = ump_exists_lp(h0i, h1i, alpha, fm, 1);
        auto t = mallows_borda_test(a, alpha, mm, 1);
        double gap = 0.0;
        for (std::size_t i = 0; i < h1i.size(); ++i)
            gap = std::max(gap, ex.beta[i] - power(t, h1.params()[i], mm, 1));
        s.exists.push_back(ex.exists);
        s.shortfall.push_back(ex.shortfall);
        s.borda_gap.push_back(gap);
        if (!ex.exists && !s.first_non_existence) s.first_non_existence = alpha;
    }
    return s;
}

std::vector<Check> verify_lemmas(const VerifyOptions& o) {
    std::vector<std::pair<std::string, Task>> tasks;
    auto add = [&](std::string name, Task t) { tasks.emplace_back(std::move(name), std::move(t)); };

    for (double phi : o.phi_grid) {
        const std::string tag = "[phi=" + fmt("%g", phi) + "]";
        add("model-normalization" + tag, [=] {
            const std::string name = "model-normalization" + tag;
            double worst = 0.0;
            for (int m = 1; m <= std::min(o.max_m, 6); ++m) {
                MallowsModel mm(m, phi);
                double total = 0.0, z = 0.0;
                const Ranking w = Ranking::identity(m);
                for (const auto& v : all_rankings(m)) {
                    total += mm.pmf(w, v);
                    z += std::pow(phi, kendall_tau(w, v));
                }
                worst = std::max({worst, std::abs(total - 1.0), std::abs(z - mm.normalizer())});
            }
            for (int m = 1; m <= std::min(o.max_m, 4); ++m) {
                CondorcetModel cm(m, phi);
                double total = 0.0;
                const BinaryRelation w = Ranking::identity(m).to_relation();
                for (const auto& v : all_relations(m)) total += cm.pmf(w, v);
                worst = std::max(worst, std::abs(total - 1.0));
            }
            return verdict(worst <= 1e-12, name, "max deviation " + fmt("%.3g", worst));
        });
        add("hand-built-test" + tag, [=] {
            const std::string name = "hand-built-test" + tag;
            if (o.max_m < 3) return skip(name, "needs m = 3");
            MallowsModel mm(3, phi);
            auto fm = FiniteModel::from(mm);
            auto g = GeneralTest::constant(fm, 1, 0.0);
            g.f[ranking_index(Ranking({0, 1, 2}))] = 1.0;
            g.f[ranking_index(Ranking({1, 0, 2}))] = 0.5;
            g.f[ranking_index(Ranking({0, 2, 1}))] = 0.5;
            std::vector<std::size_t> h0;
            const auto h1 = ranking_index(Ranking({0, 1, 2}));
            for (std::size_t i = 0; i < 6; ++i)
                if (i != h1) h0.push_back(i);
            const double z = mallows_normalizer(3, phi);
            const double ds = std::abs(size(g, fm, h0).size - (0.5 + phi + 0.5 * phi * phi) / z);
            const double dp = std::abs(power(g, fm, h1) - (1 + phi) / z);
            return verdict(ds <= 1e-12 && dp <= 1e-12, name, "size err " + fmt("%.3g", ds) + ", power err " + fmt("%.3g", dp));
        });
        add("two-point-mixture-lf" + tag, [=] {
            const std::string name = "two-point-mixture-lf" + tag;
            if (o.max_m < 3) return skip(name, "needs m = 3");
            auto fm = FiniteModel::from(MallowsModel(3, phi));
            const auto h1 = ranking_index(Ranking({0, 1, 2}));
            std::vector<std::size_t> h0;
            for (std::size_t i = 0; i < 6; ++i)
                if (i != h1) h0.push_back(i);
            auto lambda = LeastFavorable::uniform({ranking_index(Ranking({1, 0, 2})), ranking_index(Ranking({0, 2, 1}))});
            auto dom = check_uniform_lf(lambda, h0, h1, fm);
            if (!dom.holds) return fail(name, dom.detail);
            for (double alpha : o.alpha_grid) {
                auto v = verify_least_favorable(lambda, h0, h1, alpha, fm, 1);
                if (!v.holds) return fail(name, "alpha=" + fmt("%g", alpha) + ": " + v.detail);
            }
            return pass(name, "weak dominance holds");
        });
        add("iid-extension" + tag, [=] {
            const std::string name = "iid-extension" + tag;
            if (o.max_m < 3) return skip(name, "needs m = 3");
            MallowsModel mm(3, phi);
            auto fm = FiniteModel::from(mm);
            const auto h0 = Hypothesis::rankings_with_top(3, 0).indices();
            const auto star = ranking_index(nonwinner_null_ranking(3, 0, {1, 2}));
            const auto h1 = ranking_index(Ranking({1, 2, 0}));
            auto cert = extend_iid(LeastFavorable::point(star), h0, h1, fm);
            for (long n = 2; n <= o.max_n; ++n)
                for (double alpha : o.alpha_grid) {
                    auto v = verify_least_favorable(cert.lambda, h0, h1, alpha, fm, n);
                    if (!v.holds) return fail(name, "n=" + std::to_string(n) + ": " + v.detail);
                }
            return pass(name, "deterministic Lambda certified up to n=" + std::to_string(o.max_n));
        });
        add("product-and-extension-lf" + tag, [=] {
            const std::string name = "product-and-extension-lf" + tag;
            if (o.max_m < 3) return skip(name, "needs m = 3");
            auto co = FiniteModel::from(CondorcetModel(3, phi));
            auto lifted = product_lf(LeastFavorable::point(0), 2, 3);
            auto ext = ext_lf(LeastFavorable::point(0), 1, 3, 2);
            for (double alpha : o.alpha_grid) {
                auto v1 = verify_least_favorable(lifted, product_hypothesis({0}, 2, 4), 7, alpha, co, 1);
                if (!v1.holds) return fail(name, "product: " + v1.detail);
                auto v2 = verify_least_favorable(ext, ext_hypothesis({0}, 1, 3, 2), 7, alpha, co, 1);
                if (!v2.holds) return fail(name, "extension: " + v2.detail);
            }
            return pass(name, "");
        });
        add("lowered-above-set-tails" + tag, [=] {
            const std::string name = "lowered-above-set-tails" + tag;
            const int m = std::min(o.max_m, 4);
            if (m < 3) return skip(name, "needs m >= 3");
            MallowsModel mm(m, phi);
            std::mt19937_64 rng(o.seed);
            const auto rankings = all_rankings(m);
            for (int trial = 0; trial < 20; ++trial) {
                const Ranking w = rankings[rng() % rankings.size()];
                const auto a = static_cast<AltId>(rng() % static_cast<unsigned>(m));
                const auto [c, cp] = dominating_pair(w, a, rng);
                const int k = static_cast<int>(c.size());
                auto hi = single_ballot_tails(mm, w, [&](const Ranking& v) { return weight_toward(v, c, a); }, -k, k);
                auto lo = single_ballot_tails(mm, w, [&](const Ranking& v) { return weight_toward(v, cp, a); }, -k, k);
                for (std::size_t i = 0; i < hi.size(); ++i)
                    if (lo[i] > hi[i] + 1e-15) return fail(name, "trial " + std::to_string(trial) + " K=" + std::to_string(static_cast<int>(i) - k));
            }
            return pass(name, "20 configurations, m=" + std::to_string(m));
        });
        add("borda-position-tails" + tag, [=] {
            const std::string name = "borda-position-tails" + tag;
            const int m = std::min(o.max_m, 4);
            if (m < 2) return skip(name, "needs m >= 2");
            MallowsModel mm(m, phi);
            std::mt19937_64 rng(o.seed + 1);
            const auto rankings = all_rankings(m);
            for (int trial = 0; trial < 20; ++trial) {
                const Ranking w = rankings[rng() % rankings.size()];
                int i = static_cast<int>(rng() % static_cast<unsigned>(m));
                int j = static_cast<int>(rng() % static_cast<unsigned>(m - 1));
                if (j >= i) ++j;
                if (i > j) std::swap(i, j);
                const AltId b = w.at(i), c = w.at(j);
                auto tb = single_ballot_tails(mm, w, [&](const Ranking& v) { return v.borda(b); }, 0, m - 1);
                auto tc = single_ballot_tails(mm, w, [&](const Ranking& v) { return v.borda(c); }, 0, m - 1);
                for (std::size_t k = 0; k < tb.size(); ++k)
                    if (tc[k] > tb[k] + 1e-15) return fail(name, "trial " + std::to_string(trial) + " K=" + std::to_string(k));
            }
            return pass(name, "20 configurations, m=" + std::to_string(m));
        });
    }
    add("borda-identity", [=] {
        std::mt19937_64 rng(o.seed + 2);
        for (int trial = 0; trial < 100; ++trial) {
            const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, std::min(o.max_m, 6) - 1)));
            const long n = 1 + static_cast<long>(rng() % 9);
            MallowsModel mm(m, 0.5);
            auto p = sample_profile(mm, Ballot{Ranking::identity(m)}, n, rng());
            for (AltId x = 0; x < m; ++x)
                if (PairwiseStatistic::weight_from(m, x)(p) != 2 * borda_score(p, x) - n * (m - 1))
                    return fail("borda-identity", "trial " + std::to_string(trial));
        }
        return pass("borda-identity", "100 random profiles");
    });
    return run(tasks);
}

std::vector<Check> verify_theorems(const VerifyOptions& o) {
    std::vector<std::pair<std::string, Task>> tasks;
    auto add = [&](std::string name, Task t) { tasks.emplace_back(std::move(name), std::move(t)); };
    const int m3 = 3;
    const bool small_ok = o.max_m >= 3;

    for (TestFamily fam : {TestFamily::mallows_nonwinner, TestFamily::mallows_winner, TestFamily::condorcet_nonwinner,
                           TestFamily::condorcet_winner})
        for (double phi : o.phi_grid)
            for (long n = 1; n <= std::min(o.max_n, 2L); ++n)
                for (double alpha : o.alpha_grid) {
                    const std::string name = grid_name(std::string(family_name(fam)) + "-vs-oracle", phi, alpha, n);
                    add(name, [=] {
                        if (!small_ok) return skip(name, "needs m = 3");
                        const double gap = max_oracle_gap(fam, m3, phi, alpha, n, o.space_limit);
                        return verdict(gap <= 1e-9, name, "max gap " + fmt("%.3g", gap));
                    });
                }

    for (double phi : o.phi_grid) {
        const std::string tag = "[phi=" + fmt("%g", phi) + "]";
        add("worst-case-location" + tag, [=] {
            const std::string name = "worst-case-location" + tag;
            if (!small_ok) return skip(name, "needs m >= 3");
            double worst = 0.0;
            for (int m = 3; m <= std::min(o.max_m, 4); ++m) {
                MallowsModel mm(m, phi);
                for (long n = 1; n <= std::min(o.max_n, 2L); ++n)
                    for (double alpha : o.alpha_grid) {
                        for (const auto& b : nonempty_subsets(others(m, 0))) {
                            auto t = mallows_nonwinner_test(0, b, alpha, mm, n);
                            worst = std::max(worst, std::abs(size(t, Hypothesis::rankings_with_top(m, 0), mm, n).size - alpha));
                        }
                        auto t = mallows_winner_test(0, alpha, mm, n);
                        worst = std::max(worst, std::abs(size(t, Hypothesis::rankings_with_bottom(m, 0), mm, n).size - alpha));
                    }
            }
            return verdict(worst <= 1e-10, name, "max |size - alpha| " + fmt("%.3g", worst));
        });
        add("mallows-characterization" + tag, [=] {
            const std::string name = "mallows-characterization" + tag;
            if (!small_ok) return skip(name, "needs m = 3");
            // above-sets {b} vs {c} (one ballot) and {b} vs {b,c} (two ballots;
            // with one ballot a common most powerful test exists for nested sets)
            const std::vector<std::pair<Hypothesis, long>> cases{
                {Hypothesis(BallotKind::linear, 3, {Ballot{Ranking({1, 0, 2})}, Ballot{Ranking({2, 0, 1})}}), 1},
                {Hypothesis(BallotKind::linear, 3, {Ballot{Ranking({1, 0, 2})}, Ballot{Ranking({1, 2, 0})}}), 2}};
            return refuted_in_sweep(name, cases, Hypothesis::rankings_with_top(3, 0), MallowsModel(3, phi),
                                    o.space_limit);
        });
        add("condorcet-characterization" + tag, [=] {
            const std::string name = "condorcet-characterization" + tag;
            if (!small_ok) return skip(name, "needs m = 3");
            const BinaryRelation b_only = BinaryRelation(3, 0).with(1, 0).with(0, 2).with(1, 2);
            const BinaryRelation c_only = BinaryRelation(3, 0).with(2, 0).with(0, 1).with(1, 2);
            const BinaryRelation b_and_c = BinaryRelation(3, 0).with(1, 0).with(2, 0).with(1, 2);
            const std::vector<std::pair<Hypothesis, long>> cases{
                {Hypothesis(BallotKind::binary, 3, {Ballot{b_only}, Ballot{c_only}}), 1},
                {Hypothesis(BallotKind::binary, 3, {Ballot{b_only}, Ballot{b_and_c}}), 2}};
            return refuted_in_sweep(name, cases, Hypothesis::relations_with_top(3, 0), CondorcetModel(3, phi),
                                    o.space_limit);
        });
        for (double alpha : o.alpha_grid) {
            const std::string wname = grid_name("winner-lf-extraction", phi, alpha, 1);
            add(wname, [=] {
                if (!small_ok) return skip(wname, "needs m = 3");
                const auto top = Hypothesis::rankings_with_top(3, 0);
                std::vector<std::pair<std::size_t, LeastFavorable>> expected;
                for (const auto& h : top.params()) {
                    std::vector<AltId> order(std::get<Ranking>(h).order().begin(), std::get<Ranking>(h).order().end());
                    std::rotate(order.begin(), order.begin() + 1, order.end());  // a to the bottom
                    expected.emplace_back(parameter_index(h), LeastFavorable::point(ranking_index(Ranking(order))));
                }
                return extraction_check(wname, expected, Hypothesis::rankings_with_bottom(3, 0).indices(), alpha,
                                        FiniteModel::from(MallowsModel(3, phi)));
            });
            const std::string cname = grid_name("condorcet-winner-lf-extraction", phi, alpha, 1);
            add(cname, [=] {
                if (!small_ok) return skip(cname, "needs m = 3");
                const auto top = Hypothesis::relations_with_top(3, 0);
                std::vector<std::pair<std::size_t, LeastFavorable>> expected;
                for (const auto& h : top.params()) {
                    std::vector<std::size_t> flips;
                    for (AltId b = 1; b < 3; ++b) flips.push_back(parameter_index(Ballot{std::get<BinaryRelation>(h).with(b, 0)}));
                    expected.emplace_back(parameter_index(h), LeastFavorable::uniform(flips));
                }
                return extraction_check(cname, expected, top.complement().indices(), alpha,
                                        FiniteModel::from(CondorcetModel(3, phi)));
            });
        }
    }

    add("borda-no-ump-small-phi[m=4,phi=0.2]", [=] {
        const std::string name = "borda-no-ump-small-phi[m=4,phi=0.2]";
        if (o.max_m < 4) return skip(name, "needs m = 4");
        auto s = borda_sweep(4, 0.2, 25);
        if (!s.first_non_existence) return fail(name, "UMP test exists at every swept alpha");
        return pass(name, "witnessing alpha=" + fmt("%.6g", *s.first_non_existence));
    });
    add("borda-ump-large-phi[m=4,phi=0.95]", [=] {
        const std::string name = "borda-ump-large-phi[m=4,phi=0.95]";
        if (o.max_m < 4) return skip(name, "needs m = 4");
        auto s = borda_sweep(4, 0.95, 25);
        for (std::size_t i = 0; i < s.alphas.size(); ++i)
            if (!s.exists[i] || s.borda_gap[i] > 1e-9)
                return fail(name, "alpha=" + fmt("%.6g", s.alphas[i]) + " exists=" + (s.exists[i] ? "yes" : "no") +
                                      " borda gap " + fmt("%.3g", s.borda_gap[i]));
        return pass(name, "exists at all 25 points");
    });
    return run(tasks);
}

}  // namespace umpvote
