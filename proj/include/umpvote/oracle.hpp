#pragma once

// Brute-force optimality oracle: most powerful tests as linear programs over
// the enumerated ordered-profile space, UMP existence by a joint feasibility
// LP, and least favorable distributions read off the LP duals.

#include <cstddef>
#include <optional>
#include <vector>

#include "umpvote/testing_core.hpp"

namespace umpvote {

struct OracleOptions {
    std::size_t space_limit = 1000000;
    /// Re-solve in exact rationals (at most kExactVariableLimit variables).
    bool exact = false;
};

inline constexpr std::size_t kExactVariableLimit = 200;
inline constexpr double kFeasibilityTolerance = 1e-9;

enum class LpStatus { optimal, infeasible };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double power = 0.0;
    GeneralTest test;
    std::vector<std::size_t> h0;
    /// Dual price of each size constraint, same order as h0.
    std::vector<double> duals;
    /// alpha minus the size of the optimal test, per member of h0.
    std::vector<double> slack;
};

/// max_f sum_P pi_h1(P) f(P) s.t. sum_P pi_h0(P) f(P) <= alpha for all h0, 0 <= f <= 1.
/// Throws std::length_error when the profile space exceeds the limit and
/// std::runtime_error if the solver does not reach an optimum.
LpResult mp_test_lp(const std::vector<std::size_t>& h0, std::size_t h1, double alpha, const FiniteModel& model,
                    long n, const OracleOptions& options = {});

struct UmpExistence {
    bool exists = false;
    /// Most powerful level-alpha power per member of H1.
    std::vector<double> beta;
    /// Smallest s such that one level-alpha test has power >= beta - s at every h1.
    double shortfall = 0.0;
    /// A test attaining the shortfall; a UMP test when exists.
    GeneralTest test;
    /// Index into H1 of a parameter where the best common test falls short.
    std::optional<std::size_t> witness;
};

/// A level-alpha UMP test exists iff the shortfall is at most kFeasibilityTolerance.
UmpExistence ump_exists_lp(const std::vector<std::size_t>& h0, const std::vector<std::size_t>& h1, double alpha,
                           const FiniteModel& model, long n, const OracleOptions& options = {});

/// Normalized positive duals of the size constraints; throws std::invalid_argument
/// when the result is not optimal or every size constraint is slack.
LeastFavorable extract_least_favorable(const LpResult& result);

}  // namespace umpvote
