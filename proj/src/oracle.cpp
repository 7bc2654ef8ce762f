#include "umpvote/oracle.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>

#include "umpvote/kernels.hpp"
#include "umpvote/simplex.hpp"

namespace umpvote {
namespace {

using lp::Sense;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("oracle: alpha must lie in (0,1)");
}

// Rows of ordered-profile probabilities, one per parameter.
std::vector<std::vector<double>> profile_rows(const std::vector<std::size_t>& params, const FiniteModel& model,
                                              long n) {
    std::vector<std::vector<double>> rows;
    rows.reserve(params.size());
    for (auto p : params) rows.push_back(ordered_profile_pmf(model, p, n));
    return rows;
}

template <class T>
std::vector<T> convert(const std::vector<double>& v) {
    return std::vector<T>(v.begin(), v.end());
}

double to_double(double x) { return x; }
double to_double(const mpq_class& x) { return x.get_d(); }

// Generic LP in double form, solved in the requested arithmetic.
struct DenseLp {
    std::vector<std::vector<double>> a;
    std::vector<Sense> sense;
    std::vector<double> b;
    std::vector<double> c;
};

struct DenseSolution {
    lp::Status status;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> duals;
};

template <class T>
DenseSolution solve_as(const DenseLp& d) {
    lp::Problem<T> p;
    p.c = convert<T>(d.c);
    for (std::size_t i = 0; i < d.a.size(); ++i) p.add_row(convert<T>(d.a[i]), d.sense[i], T(d.b[i]));
    const lp::Solution<T> s = lp::solve(p);
    DenseSolution out{s.status, 0.0, {}, {}};
    if (s.status != lp::Status::optimal) return out;
    out.objective = to_double(s.objective);
    for (const auto& v : s.x) out.x.push_back(to_double(v));
    for (const auto& v : s.duals) out.duals.push_back(to_double(v));
    return out;
}

DenseSolution solve_dense(const DenseLp& d, const OracleOptions& options) {
    if (options.exact) {
        if (d.c.size() > kExactVariableLimit)
            throw std::length_error("oracle: exact solve limited to " + std::to_string(kExactVariableLimit) +
                                    " variables");
        return solve_as<mpq_class>(d);
    }
    return solve_as<double>(d);
}

void add_box(DenseLp& d, std::size_t vars, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
        std::vector<double> row(vars, 0.0);
        row[j] = 1.0;
        d.a.push_back(std::move(row));
        d.sense.push_back(Sense::le);
        d.b.push_back(1.0);
    }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

std::vector<double> clamp_unit(std::vector<double> f) {
    for (auto& v : f) v = std::clamp(v, 0.0, 1.0);
    return f;
}

}  // namespace

LpResult mp_test_lp(const std::vector<std::size_t>& h0, std::size_t h1, double alpha, const FiniteModel& model,
                    long n, const OracleOptions& options) {
    check_alpha(alpha);
    if (h0.empty()) throw std::invalid_argument("mp_test_lp: empty H0");
    const std::size_t size = profile_space_size(model, n, options.space_limit);
    const auto null_rows = profile_rows(h0, model, n);
    DenseLp d;
    d.c = ordered_profile_pmf(model, h1, n);
    for (const auto& r : null_rows) {
        d.a.push_back(r);
        d.sense.push_back(Sense::le);
        d.b.push_back(alpha);
    }
    add_box(d, size, size);
    const DenseSolution s = solve_dense(d, options);
    if (s.status != lp::Status::optimal) throw std::runtime_error("mp_test_lp: solver did not reach an optimum");

    LpResult r;
    r.status = LpStatus::optimal;
    r.h0 = h0;
    r.test.num_samples = model.num_samples();
    r.test.n = n;
    r.test.f = clamp_unit(s.x);
    r.power = s.objective;
    for (std::size_t i = 0; i < h0.size(); ++i) {
        r.duals.push_back(std::max(0.0, s.duals[i]));
        r.slack.push_back(alpha - dot(null_rows[i], r.test.f));
    }
    return r;
}

UmpExistence ump_exists_lp(const std::vector<std::size_t>& h0, const std::vector<std::size_t>& h1, double alpha,
                           const FiniteModel& model, long n, const OracleOptions& options) {
    check_alpha(alpha);
    if (h1.empty()) throw std::invalid_argument("ump_exists_lp: empty H1");
    const std::size_t size = profile_space_size(model, n, options.space_limit);

    UmpExistence out;
    out.beta = kernels::omp::map_indexed(h1.size(), [&](std::size_t i) {
        return mp_test_lp(h0, h1[i], alpha, model, n, options).power;
    });

    // Variables f(P) for every profile, then the common shortfall s; maximize -s.
    const std::size_t vars = size + 1;
    DenseLp d;
    d.c.assign(vars, 0.0);
    d.c[size] = -1.0;
    for (const auto& r : profile_rows(h0, model, n)) {
        auto row = r;
        row.push_back(0.0);
        d.a.push_back(std::move(row));
        d.sense.push_back(Sense::le);
        d.b.push_back(alpha);
    }
    const auto alt_rows = profile_rows(h1, model, n);
    for (std::size_t i = 0; i < h1.size(); ++i) {
        auto row = alt_rows[i];
        row.push_back(1.0);
        d.a.push_back(std::move(row));
        d.sense.push_back(Sense::ge);
        d.b.push_back(out.beta[i]);
    }
    add_box(d, vars, size);
    const DenseSolution s = solve_dense(d, options);
    if (s.status != lp::Status::optimal) throw std::runtime_error("ump_exists_lp: solver did not reach an optimum");

    out.shortfall = std::max(0.0, -s.objective);
    out.exists = out.shortfall <= kFeasibilityTolerance;
    out.test.num_samples = model.num_samples();
    out.test.n = n;
    out.test.f = clamp_unit(std::vector<double>(s.x.begin(), s.x.begin() + static_cast<std::ptrdiff_t>(size)));
    if (!out.exists) {
        double worst = -1.0;
        for (std::size_t i = 0; i < h1.size(); ++i) {
            const double gap = out.beta[i] - dot(alt_rows[i], out.test.f);
            if (gap > worst) {
                worst = gap;
                out.witness = i;
            }
        }
    }
    return out;
}

LeastFavorable extract_least_favorable(const LpResult& result) {
    if (result.status != LpStatus::optimal) throw std::invalid_argument("extract_least_favorable: LP not optimal");
    double total = 0.0;
    for (double y : result.duals) total += y;
    if (!(total > 1e-12)) throw std::invalid_argument("extract_least_favorable: every size constraint is slack");
    std::vector<std::size_t> support;
    std::vector<double> weights;
    for (std::size_t i = 0; i < result.duals.size(); ++i)
        if (result.duals[i] > 1e-12 * total) {
            support.push_back(result.h0[i]);
            weights.push_back(result.duals[i]);
        }
    double kept = 0.0;
    for (double w : weights) kept += w;
    for (auto& w : weights) w /= kept;
    return LeastFavorable(std::move(support), std::move(weights));
}

}  // namespace umpvote
