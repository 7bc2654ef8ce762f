#pragma once

// Winner and non-winner tests under Mallows' and Condorcet's models with
// exact critical values, the above-set characterization of when a UMP
// non-winner test exists, reports, p-values and a critical-value disk cache.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "umpvote/models.hpp"
#include "umpvote/rank_core.hpp"
#include "umpvote/testing_core.hpp"

namespace umpvote {

/// Reject a-is-winner when w(B > a) is large. H0 = rankings with a on top.
ThresholdTest mallows_nonwinner_test(AltId a, const std::vector<AltId>& above, double alpha, const MallowsModel& model,
                                     long n, const NullDistributionOptions& options = {});

/// Reject a-is-last when w(a > others) is large. H0 = rankings with a at the bottom.
ThresholdTest mallows_winner_test(AltId a, double alpha, const MallowsModel& model, long n,
                                  const NullDistributionOptions& options = {});

/// Single-ballot test of "a is not on top" rejecting on a large Borda score of a.
/// Size is taken over every ranking without a on top; only n = 1 is supported.
ThresholdTest mallows_borda_test(AltId a, double alpha, const MallowsModel& model, long n = 1);

/// Condorcet counterpart of mallows_nonwinner_test; H0 = relations where a beats everyone.
ThresholdTest condorcet_nonwinner_test(AltId a, const std::vector<AltId>& above, double alpha,
                                       const CondorcetModel& model, long n);

/// Reject "a does not beat everyone" when S = sum_{b != a} phi^{w(a>b)} is small.
ThresholdTest condorcet_winner_test(AltId a, double alpha, const CondorcetModel& model, long n);

/// Canonical worst-case null parameters used by the constructors above.
Ranking nonwinner_null_ranking(int m, AltId a, const std::vector<AltId>& above);
Ranking winner_null_ranking(int m, AltId a);
BinaryRelation nonwinner_null_relation(int m, AltId a);
BinaryRelation winner_null_relation(int m, AltId a);

/// Alternatives preferred to a in a ballot, ascending.
std::vector<AltId> above_set(const Ballot& v, AltId a);

struct UmpCharacterization {
    bool exists = false;
    /// Common above-set of a when a UMP test exists.
    std::vector<AltId> above;
    /// Two members of H1 with different above-sets otherwise.
    std::optional<std::pair<Ballot, Ballot>> witness;
};

/// H1 must be non-empty and avoid rankings with a on top.
UmpCharacterization mallows_nonwinner_ump_exists(AltId a, const Hypothesis& h1);
/// H1 must be non-empty and avoid relations where a beats everyone.
UmpCharacterization condorcet_nonwinner_ump_exists(AltId a, const Hypothesis& h1);

enum class Decision { retain, reject, randomized };
const char* decision_name(Decision d);

struct TestReport {
    std::string test;
    double statistic = 0.0;
    double k = 0.0;
    double gamma = 0.0;
    Decision decision = Decision::retain;
    /// Rejection probability carried by a randomized decision (gamma), else 0 or 1.
    double reject_probability = 0.0;
    double p_value = 1.0;
    double alpha = 0.0;
    std::string model;
    bool approximate = false;
};

/// "mallows(m=3, phi=0.5)" style descriptor.
std::string describe(const Model& model);

TestReport run_test(const ThresholdTest& test, const Profile& profile, const Model& model);

/// Pr(statistic at least as extreme as the observed one) under the test's null parameter.
double p_value(const ThresholdTest& test, const Profile& profile);

/// Smallest alpha at which the test, rebuilt on the same null distribution,
/// rejects the observed value outright; a bisection cross-check of p_value.
double p_value_by_bisection(const ThresholdTest& test, double observed, double tolerance = 1e-13);

// Critical-value tables: header `model m n phi statistic`, then
// `value cumulative_prob` lines in ascending value order.

struct TableKey {
    std::string model;
    int m = 0;
    long n = 0;
    double phi = 0.0;
    std::string statistic;

    std::string header() const;
};

std::string format_table(const TableKey& key, const ValueDistribution& d);
/// Throws std::runtime_error on a malformed table or a header mismatch.
ValueDistribution parse_table(const std::string& text, const TableKey& key);

/// Directory named by UMPVOTE_CACHE_DIR, if set and non-empty.
std::optional<std::filesystem::path> cache_directory();
/// Content-addressed file name for a key (FNV-1a of the header).
std::string table_file_name(const TableKey& key);
/// Writes through a temporary file and a rename, so readers never see a partial table.
void write_table_atomically(const std::filesystem::path& path, const std::string& contents);

/// Table key of a test's null distribution (as built by the constructors above).
TableKey table_key(const ThresholdTest& test, const Model& model, long n);

}  // namespace umpvote
