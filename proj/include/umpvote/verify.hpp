#pragma once

// Numerical verification suites. "lemmas": model exactness, least favorable
// and tail dominance properties. "theorems": optimality of the constructed
// tests against the LP oracle on small grids.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace umpvote {

enum class CheckOutcome { pass, fail, skip };
const char* outcome_name(CheckOutcome o);

struct Check {
    CheckOutcome outcome = CheckOutcome::pass;
    std::string name;
    std::string detail;
};

struct VerifyOptions {
    int max_m = 4;
    long max_n = 2;
    std::vector<double> phi_grid{0.3, 0.5, 0.8};
    std::vector<double> alpha_grid{0.05, 0.2, 0.5};
    std::uint64_t seed = 1;
    std::size_t space_limit = 1000000;
};

enum class TestFamily { mallows_nonwinner, mallows_winner, condorcet_nonwinner, condorcet_winner };
const char* family_name(TestFamily f);

/// Largest |test power - LP optimum| over every h1 of the family's H1 (and,
/// for non-winner tests, every above-set B), alternative 0 as the target.
double max_oracle_gap(TestFamily family, int m, double phi, double alpha, long n, std::size_t space_limit = 1000000);

/// Borda test against the oracle on m alternatives, one ballot, alpha = k/(points+1).
struct BordaSweep {
    std::vector<double> alphas;
    std::vector<bool> exists;          // ump_exists_lp verdict per alpha
    std::vector<double> shortfall;     // its certificate value
    std::vector<double> borda_gap;     // max over h1 of oracle optimum - Borda power
    std::optional<double> first_non_existence;
};
BordaSweep borda_sweep(int m, double phi, int points);

/// alpha = k / (points + 1), k = 1..points.
std::vector<double> alpha_sweep(int points);

std::vector<Check> verify_lemmas(const VerifyOptions& options);
std::vector<Check> verify_theorems(const VerifyOptions& options);

}  // namespace umpvote
