#pragma once

// Winner selection from per-alternative tests: the alternative whose winner
// test rejects at the smallest level, or whose non-winner test is hardest to
// reject, plus the Borda rule these coincide with under Mallows' model.

#include <vector>

#include "umpvote/models.hpp"
#include "umpvote/rank_core.hpp"

namespace umpvote {

struct SelectionOptions {
    /// Recompute every p-value by bisection over critical values instead of the tail sum.
    bool bisection = false;
};

struct Selection {
    std::vector<AltId> winners;  // ascending
    /// Per-alternative p-values (test methods) or Borda scores.
    std::vector<double> scores;
};

/// p-values within this relative distance count as tied.
inline constexpr double kSelectionTieTolerance = 1e-12;

/// argmin over a of the winner-test p-value (Mallows: rankings with a at the
/// bottom vs a on top; Condorcet: a not beating everyone vs a beating everyone).
Selection select_by_winner_tests(const Profile& profile, const Model& model, const SelectionOptions& options = {});

/// argmax over a of the p-value of the test of "a on top" against "a at the
/// bottom" (Condorcet: a beats everyone vs everyone beats a).
Selection select_by_nonwinner_tests(const Profile& profile, const Model& model,
                                    const SelectionOptions& options = {});

/// Alternatives with the largest total Borda score; linear profiles only.
Selection borda_winner(const Profile& profile);

}  // namespace umpvote
