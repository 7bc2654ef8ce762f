#include "umpvote/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "umpvote/kernels.hpp"
#include "umpvote/ump_tests.hpp"

namespace umpvote {
namespace {

// The level only fixes the critical value; p-values do not depend on it.
constexpr double kAnyLevel = 0.5;

void check_profile(const Profile& profile, const Model& model) {
    if (profile.n() == 0) throw std::invalid_argument("selection: empty profile");
    if (profile.m() != model_m(model)) throw std::invalid_argument("selection: profile and model disagree on m");
    if (profile.kind() != model_kind(model)) throw std::invalid_argument("selection: profile and model disagree on ballot kind");
}

bool tied(double x, double y) { return std::abs(x - y) <= kSelectionTieTolerance * std::max(std::abs(x), std::abs(y)); }

std::vector<AltId> best(const std::vector<double>& scores, bool largest) {
    double top = scores.front();
    for (double s : scores) top = largest ? std::max(top, s) : std::min(top, s);
    std::vector<AltId> out;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (tied(scores[i], top)) out.push_back(static_cast<AltId>(i));
    return out;
}

double observed_p(const ThresholdTest& t, const Profile& profile, const SelectionOptions& options) {
    const double v = t.statistic_value(profile);
    return options.bisection ? p_value_by_bisection(t, v) : t.p_value(v);
}

std::vector<AltId> all_but(int m, AltId a) {
    std::vector<AltId> out;
    for (AltId b = 0; b < m; ++b)
        if (b != a) out.push_back(b);
    return out;
}

}  // namespace

Selection select_by_winner_tests(const Profile& profile, const Model& model, const SelectionOptions& options) {
    check_profile(profile, model);
    const int m = profile.m();
    const long n = profile.n();
    Selection s;
    s.scores = kernels::omp::map_indexed(static_cast<std::size_t>(m), [&](std::size_t i) {
        const auto a = static_cast<AltId>(i);
        if (const auto* mm = std::get_if<MallowsModel>(&model))
            return observed_p(mallows_winner_test(a, kAnyLevel, *mm, n), profile, options);
        return observed_p(condorcet_winner_test(a, kAnyLevel, std::get<CondorcetModel>(model), n), profile, options);
    });
    s.winners = best(s.scores, false);
    return s;
}

Selection select_by_nonwinner_tests(const Profile& profile, const Model& model, const SelectionOptions& options) {
    check_profile(profile, model);
    const int m = profile.m();
    const long n = profile.n();
    Selection s;
    s.scores = kernels::omp::map_indexed(static_cast<std::size_t>(m), [&](std::size_t i) {
        const auto a = static_cast<AltId>(i);
        if (const auto* mm = std::get_if<MallowsModel>(&model))
            return observed_p(mallows_nonwinner_test(a, all_but(m, a), kAnyLevel, *mm, n), profile, options);
        return observed_p(condorcet_nonwinner_test(a, all_but(m, a), kAnyLevel, std::get<CondorcetModel>(model), n),
                          profile, options);
    });
    s.winners = best(s.scores, true);
    return s;
}

Selection borda_winner(const Profile& profile) {
    if (profile.n() == 0) throw std::invalid_argument("borda_winner: empty profile");
    if (profile.kind() != BallotKind::linear) throw std::invalid_argument("borda_winner: needs a linear-order profile");
    Selection s;
    for (AltId a = 0; a < profile.m(); ++a) s.scores.push_back(static_cast<double>(borda_score(profile, a)));
    s.winners = best(s.scores, true);
    return s;
}

}  // namespace umpvote
