// umpvote: run winner/non-winner tests on ballot files, write critical-value
// tables, select winners and run the verification suites.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "umpvote/ballot_format.hpp"
#include "umpvote/selection.hpp"
#include "umpvote/ump_tests.hpp"
#include "umpvote/verify.hpp"

using namespace umpvote;

namespace {

enum Exit { kRetain = 0, kParse = 1, kConfig = 2, kReject = 3, kRandomized = 4 };

constexpr const char* kExitProtocol =
    "Exit codes:\n"
    "  0  test retains H0 (other commands: success)\n"
    "  1  profile parse error (the line number is printed)\n"
    "  2  invalid configuration: bad flags, a model/profile mismatch, an\n"
    "     incoherent H1 for a non-winner test, or an enumeration limit\n"
    "  3  test rejects H0\n"
    "  4  randomized boundary: the test rejects with probability gamma\n"
    "  verify exits 1 when any check fails.";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelFlags {
    std::string model = "mallows";
    double phi = 0.5;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
    cmd->add_option("--model", f.model, "mallows or condorcet")
        ->check(CLI::IsMember({"mallows", "condorcet"}))
        ->capture_default_str();
    cmd->add_option("--phi", f.phi, "dispersion in (0,1)")->capture_default_str();
}

Model make_model(const ModelFlags& f, int m) {
    try {
        if (f.model == "mallows") return MallowsModel(m, f.phi);
        return CondorcetModel(m, f.phi);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Model model_for(const ModelFlags& f, const Profile& p) {
    Model model = make_model(f, p.m());
    if (model_kind(model) != p.kind())
        throw ConfigError(f.model + " model needs " +
                          (model_kind(model) == BallotKind::linear ? "ranking" : "pairwise") + " ballots");
    return model;
}

AltId alternative(const AlternativeSet& alts, const std::string& name) {
    if (!alts.contains(name)) throw ConfigError("unknown alternative '" + name + "'");
    return alts.id(name);
}

std::vector<AltId> alternatives(const AlternativeSet& alts, const std::vector<std::string>& names) {
    std::vector<AltId> out;
    for (const auto& s : names) out.push_back(alternative(alts, s));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string join_names(const AlternativeSet& alts, const std::vector<AltId>& ids) {
    std::string out;
    for (AltId x : ids) out += (out.empty() ? "" : ",") + alts.name(x);
    return out.empty() ? "{}" : out;
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

class Printer {
public:
    explicit Printer(bool machine) : machine_(machine) {}
    void operator()(const std::string& key, const std::string& value) const {
        if (machine_)
            std::cout << key << '\t' << value << '\n';
        else
            std::cout << key << ": " << value << '\n';
    }

private:
    bool machine_;
};

// --- test ---------------------------------------------------------------

struct TestFlags {
    ModelFlags model;
    double alpha = 0.05;
    std::string kind;
    std::string target;
    std::vector<std::string> above;
    std::string h1;
    std::string profile;
    std::string format = "text";
    bool realize = false;
    std::optional<std::uint64_t> seed;
    long monte_carlo = 0;
};

// H1 given as ballots separated by ';', in profile-file ballot syntax.
Hypothesis parse_h1(const std::string& text, const Profile& profile) {
    std::string file = "alts: ";
    for (std::size_t i = 0; i < profile.alternatives().names().size(); ++i)
        file += (i ? "," : "") + profile.alternatives().names()[i];
    file += "\n";
    std::stringstream items(text);
    for (std::string item; std::getline(items, item, ';');)
        if (item.find_first_not_of(" \t") != std::string::npos) file += "1: " + item + "\n";
    Profile parsed = [&] {
        try {
            return parse_profile(file);
        } catch (const ParseError& e) {
            throw ConfigError(std::string("--h1: ") + e.what());
        }
    }();
    std::vector<Ballot> ballots;
    for (const auto& e : parsed.entries()) ballots.push_back(e.ballot);
    return Hypothesis(parsed.kind(), parsed.m(), std::move(ballots));
}

int cmd_test(const TestFlags& f) {
    const Profile profile = load_profile(f.profile);
    const Model model = model_for(f.model, profile);
    const auto& alts = profile.alternatives();
    const AltId a = alternative(alts, f.target);
    const long n = profile.n();
    const bool mallows = f.model.model == "mallows";
    const Printer out(f.format == "machine");

    NullDistributionOptions nd;
    nd.monte_carlo_samples = f.monte_carlo;
    if (f.monte_carlo > 0) {
        if (!f.seed) throw ConfigError("--monte-carlo needs an explicit --seed");
        nd.seed = *f.seed;
    }

    ThresholdTest test;
    std::vector<AltId> above;
    if (f.kind == "winner") {
        if (!f.above.empty() || !f.h1.empty()) throw ConfigError("--above-set and --h1 apply to non-winner tests only");
        test = mallows ? mallows_winner_test(a, f.alpha, std::get<MallowsModel>(model), n, nd)
                       : condorcet_winner_test(a, f.alpha, std::get<CondorcetModel>(model), n);
    } else {
        above = alternatives(alts, f.above);
        if (!f.h1.empty()) {
            const Hypothesis h1 = parse_h1(f.h1, profile);
            UmpCharacterization c;
            try {
                c = mallows ? mallows_nonwinner_ump_exists(a, h1) : condorcet_nonwinner_ump_exists(a, h1);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("--h1: ") + e.what());
            }
            if (!c.exists) {
                const auto& [x, y] = *c.witness;
                throw ConfigError("H1 has no common above-set of " + f.target + ", so no UMP test exists; witness: " +
                                  format_ballot(x, alts) + " (above " + join_names(alts, above_set(x, a)) + ") vs " +
                                  format_ballot(y, alts) + " (above " + join_names(alts, above_set(y, a)) + ")");
            }
            if (!f.above.empty() && above != c.above)
                throw ConfigError("--above-set disagrees with the above-set of H1 (" + join_names(alts, c.above) + ")");
            above = c.above;
        }
        if (above.empty()) throw ConfigError("non-winner test needs --above-set or --h1");
        if (std::find(above.begin(), above.end(), a) != above.end())
            throw ConfigError("--above-set must not contain the target");
        test = mallows ? mallows_nonwinner_test(a, above, f.alpha, std::get<MallowsModel>(model), n, nd)
                       : condorcet_nonwinner_test(a, above, f.alpha, std::get<CondorcetModel>(model), n);
    }

    const TestReport r = run_test(test, profile, model);
    out("test", r.test);
    out("model", r.model);
    out("target", f.target);
    if (!above.empty()) out("above_set", join_names(alts, above));
    out("n", std::to_string(n));
    out("alpha", num(r.alpha));
    out("statistic", num(r.statistic));
    out("k", num(r.k));
    out("gamma", num(r.gamma));
    out("decision", decision_name(r.decision));
    out("reject_probability", num(r.reject_probability));
    out("p_value", num(r.p_value));
    out("approximate", r.approximate ? "yes" : "no");
    if (r.approximate) out("standard_error", num(test.standard_error));

    Decision d = r.decision;
    if (d == Decision::randomized && f.realize) {
        std::mt19937_64 rng(*f.seed);
        d = std::bernoulli_distribution(r.reject_probability)(rng) ? Decision::reject : Decision::retain;
        out("realized", decision_name(d));
    }
    switch (d) {
        case Decision::retain: return kRetain;
        case Decision::reject: return kReject;
        case Decision::randomized: return kRandomized;
    }
    return kRetain;
}

// --- table --------------------------------------------------------------

struct TableFlags {
    ModelFlags model;
    int m = 3;
    long n = 1;
    std::string statistic;
    int above_size = 1;
    std::string out;
    int enumeration_limit = 8;
};

int cmd_table(const TableFlags& f) {
    const Model model = make_model(f.model, f.m);
    const bool mallows = f.model.model == "mallows";
    if (f.n < 1) throw ConfigError("--n must be positive");
    NullDistributionOptions nd;
    nd.enumeration_limit = f.enumeration_limit;
    constexpr double kAnyLevel = 0.5;  // tables do not depend on alpha
    ThresholdTest t;
    if (f.statistic == "above-weight") {
        if (f.above_size < 1 || f.above_size >= f.m) throw ConfigError("--above-size must be in 1..m-1");
        std::vector<AltId> above;
        for (int b = 1; b <= f.above_size; ++b) above.push_back(static_cast<AltId>(b));
        t = mallows ? mallows_nonwinner_test(0, above, kAnyLevel, std::get<MallowsModel>(model), f.n, nd)
                    : condorcet_nonwinner_test(0, above, kAnyLevel, std::get<CondorcetModel>(model), f.n);
    } else if (f.statistic == "winner-weight") {
        if (!mallows) throw ConfigError("winner-weight tables are for the mallows model; use log-sum-phi-weight");
        t = mallows_winner_test(0, kAnyLevel, std::get<MallowsModel>(model), f.n, nd);
    } else if (f.statistic == "log-sum-phi-weight") {
        if (mallows) throw ConfigError("log-sum-phi-weight tables are for the condorcet model");
        t = condorcet_winner_test(0, kAnyLevel, std::get<CondorcetModel>(model), f.n);
    } else {
        if (!mallows || f.n != 1) throw ConfigError("borda tables are for the mallows model with n = 1");
        t = mallows_borda_test(0, kAnyLevel, std::get<MallowsModel>(model), 1);
    }
    const std::string text = format_table(table_key(t, model, f.n), t.null);
    if (f.out.empty() || f.out == "-")
        std::cout << text;
    else
        write_table_atomically(f.out, text);
    return 0;
}

// --- select -------------------------------------------------------------

struct SelectFlags {
    ModelFlags model;
    std::string method = "winner-tests";
    std::string profile;
    std::string format = "text";
    bool bisection = false;
};

int cmd_select(const SelectFlags& f) {
    const Profile profile = load_profile(f.profile);
    const auto& alts = profile.alternatives();
    Selection s;
    if (f.method == "borda") {
        if (profile.kind() != BallotKind::linear) throw ConfigError("borda needs ranking ballots");
        s = borda_winner(profile);
    } else {
        const Model model = model_for(f.model, profile);
        SelectionOptions opt;
        opt.bisection = f.bisection;
        s = f.method == "winner-tests" ? select_by_winner_tests(profile, model, opt)
                                       : select_by_nonwinner_tests(profile, model, opt);
    }
    const Printer out(f.format == "machine");
    out("method", f.method);
    out("winners", join_names(alts, s.winners));
    const std::string what = f.method == "borda" ? "score" : "p_value";
    for (AltId x = 0; x < profile.m(); ++x) out(what + "." + alts.name(x), num(s.scores[static_cast<std::size_t>(x)]));
    return 0;
}

// --- verify -------------------------------------------------------------

struct VerifyFlags {
    std::string suite = "all";
    VerifyOptions options;
};

int cmd_verify(const VerifyFlags& f) {
    std::vector<Check> checks;
    if (f.suite != "theorems") {
        auto l = verify_lemmas(f.options);
        checks.insert(checks.end(), l.begin(), l.end());
    }
    if (f.suite != "lemmas") {
        auto t = verify_theorems(f.options);
        checks.insert(checks.end(), t.begin(), t.end());
    }
    int failed = 0, skipped = 0;
    for (const auto& c : checks) {
        std::cout << outcome_name(c.outcome) << ' ' << c.name;
        if (!c.detail.empty()) std::cout << ' ' << c.detail;
        std::cout << '\n';
        failed += c.outcome == CheckOutcome::fail;
        skipped += c.outcome == CheckOutcome::skip;
    }
    std::cerr << checks.size() << " checks, " << failed << " failed, " << skipped << " skipped\n";
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniformly most powerful winner tests for rankings and pairwise ballots"};
    app.footer(kExitProtocol);
    app.require_subcommand(1);

    TestFlags tf;
    auto* test = app.add_subcommand("test", "run a winner or non-winner test on a profile");
    add_model_flags(test, tf.model);
    test->add_option("--alpha", tf.alpha, "level")->capture_default_str();
    test->add_option("--kind", tf.kind, "winner (reject 'target is last') or nonwinner (reject 'target is the winner')")
        ->required()
        ->check(CLI::IsMember({"winner", "nonwinner"}));
    test->add_option("--target", tf.target, "alternative name")->required();
    test->add_option("--above-set", tf.above, "alternatives preferred to the target under H1")->delimiter(',');
    test->add_option("--h1", tf.h1, "H1 ballots separated by ';', e.g. 'b>a>c; c>a>b'; checked for a common above-set");
    test->add_option("--profile", tf.profile, "ballot file")->required();
    test->add_option("--format", tf.format)->check(CLI::IsMember({"text", "machine"}))->capture_default_str();
    test->add_flag("--realize", tf.realize, "realize a randomized decision with a coin (needs --seed)");
    test->add_option("--seed", tf.seed, "seed for --realize and --monte-carlo");
    test->add_option("--monte-carlo", tf.monte_carlo, "samples for the null distribution when m is too large to enumerate");
    test->footer(kExitProtocol);

    TableFlags tb;
    auto* table = app.add_subcommand("table", "write a critical-value table (statistic null distribution)");
    add_model_flags(table, tb.model);
    table->add_option("--m", tb.m, "number of alternatives")->required();
    table->add_option("--n", tb.n, "number of ballots")->required();
    table->add_option("--statistic", tb.statistic)
        ->required()
        ->check(CLI::IsMember({"above-weight", "winner-weight", "log-sum-phi-weight", "borda"}));
    table->add_option("--above-size", tb.above_size, "|B| for above-weight")->capture_default_str();
    table->add_option("--out", tb.out, "output file (default stdout)");
    table->add_option("--enumeration-limit", tb.enumeration_limit, "largest m enumerated for Mallows")
        ->capture_default_str();

    SelectFlags sf;
    auto* select = app.add_subcommand("select", "select winners from a profile");
    add_model_flags(select, sf.model);
    select->add_option("--method", sf.method)
        ->check(CLI::IsMember({"winner-tests", "nonwinner-tests", "borda"}))
        ->capture_default_str();
    select->add_option("--profile", sf.profile, "ballot file")->required();
    select->add_option("--format", sf.format)->check(CLI::IsMember({"text", "machine"}))->capture_default_str();
    select->add_flag("--bisection", sf.bisection, "compute p-values by bisection over levels");

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "run the verification suites; lines are PASS|FAIL|SKIP name detail");
    verify->add_option("--suite", vf.suite)->check(CLI::IsMember({"lemmas", "theorems", "all"}))->capture_default_str();
    verify->add_option("--max-m", vf.options.max_m)->capture_default_str();
    verify->add_option("--max-n", vf.options.max_n)->capture_default_str();
    verify->add_option("--phi-grid", vf.options.phi_grid)->delimiter(',');
    verify->add_option("--alpha-grid", vf.options.alpha_grid)->delimiter(',');
    verify->add_option("--seed", vf.options.seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfig;
    }

    try {
        if (*test) {
            if (tf.realize && !tf.seed) throw ConfigError("--realize needs an explicit --seed");
            return cmd_test(tf);
        }
        if (*table) return cmd_table(tb);
        if (*select) return cmd_select(sf);
        return cmd_verify(vf);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kConfig;
    } catch (const std::length_error& e) {
        std::cerr << "enumeration limit exceeded: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
}
