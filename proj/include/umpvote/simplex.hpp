#pragma once

// Dense two-phase tableau simplex with Bland's rule. Templated on the scalar
// so the same code runs in double precision and in exact rationals
// (mpq_class); ScalarTraits supplies the comparison tolerance.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace umpvote::lp {

enum class Sense { le, ge, eq };
enum class Status { optimal, infeasible, unbounded };

template <class T>
struct ScalarTraits {
    static T eps() { return T(0); }
    static T feasibility() { return T(0); }
};

template <>
struct ScalarTraits<double> {
    static double eps() { return 1e-12; }
    static double feasibility() { return 1e-12; }
};

/// maximize c.x  subject to  a[i].x (sense[i]) b[i],  x >= 0.
template <class T>
struct Problem {
    std::vector<std::vector<T>> a;
    std::vector<Sense> sense;
    std::vector<T> b;
    std::vector<T> c;

    void add_row(std::vector<T> row, Sense s, T rhs) {
        a.push_back(std::move(row));
        sense.push_back(s);
        b.push_back(std::move(rhs));
    }
};

template <class T>
struct Solution {
    Status status = Status::infeasible;
    T objective{};
    std::vector<T> x;
    /// Shadow price of each constraint in its original orientation.
    std::vector<T> duals;
    /// Phase-one residual (sum of artificials) when infeasible.
    T infeasibility{};
    long pivots = 0;
};

namespace detail {

template <class T>
class Tableau {
public:
    Tableau(const Problem<T>& p) : rows_(p.a.size()), n_(p.c.size()) {
        for (const auto& r : p.a)
            if (r.size() != n_) throw std::invalid_argument("simplex: row length differs from objective");
        if (p.sense.size() != rows_ || p.b.size() != rows_) throw std::invalid_argument("simplex: ragged problem");
        flipped_.assign(rows_, false);
        std::vector<Sense> sense = p.sense;
        for (std::size_t i = 0; i < rows_; ++i)
            if (p.b[i] < T(0)) {
                flipped_[i] = true;
                if (sense[i] == Sense::le) sense[i] = Sense::ge;
                else if (sense[i] == Sense::ge) sense[i] = Sense::le;
            }
        // Columns: originals, one slack/surplus per inequality, one artificial per ge/eq row.
        aux_col_.assign(rows_, npos);
        art_col_.assign(rows_, npos);
        std::size_t col = n_;
        for (std::size_t i = 0; i < rows_; ++i)
            if (sense[i] != Sense::eq) aux_col_[i] = col++;
        first_art_ = col;
        for (std::size_t i = 0; i < rows_; ++i)
            if (sense[i] != Sense::le) art_col_[i] = col++;
        cols_ = col;
        t_.assign(rows_, std::vector<T>(cols_ + 1, T(0)));
        basis_.assign(rows_, npos);
        for (std::size_t i = 0; i < rows_; ++i) {
            const T sign = flipped_[i] ? T(-1) : T(1);
            for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign * p.a[i][j];
            t_[i][cols_] = sign * p.b[i];
            if (aux_col_[i] != npos) t_[i][aux_col_[i]] = sense[i] == Sense::le ? T(1) : T(-1);
            if (art_col_[i] != npos) t_[i][art_col_[i]] = T(1);
            basis_[i] = sense[i] == Sense::le ? aux_col_[i] : art_col_[i];
        }
        c_.assign(cols_, T(0));
        for (std::size_t j = 0; j < n_; ++j) c_[j] = p.c[j];
    }

    Solution<T> solve() {
        Solution<T> s;
        if (first_art_ < cols_) {
            std::vector<T> phase1(cols_, T(0));
            for (std::size_t j = first_art_; j < cols_; ++j) phase1[j] = T(-1);
            run(phase1, cols_, s.pivots);
            T residual(0);
            for (std::size_t i = 0; i < rows_; ++i)
                if (basis_[i] >= first_art_) residual += t_[i][cols_];
            if (residual > ScalarTraits<T>::feasibility()) {
                s.status = Status::infeasible;
                s.infeasibility = residual;
                return s;
            }
            drive_out_artificials(s.pivots);
        }
        if (!run(c_, first_art_, s.pivots)) {
            s.status = Status::unbounded;
            return s;
        }
        s.status = Status::optimal;
        s.x.assign(n_, T(0));
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] < n_) s.x[basis_[i]] = t_[i][cols_];
        s.objective = T(0);
        for (std::size_t j = 0; j < n_; ++j) s.objective += c_[j] * s.x[j];
        // y = c_B B^{-1}; column e_i of the initial tableau (slack or
        // artificial) now holds B^{-1} e_i, so y_i = c_B . column.
        s.duals.assign(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            std::size_t col = art_col_[i] != npos ? art_col_[i] : aux_col_[i];
            T y(0);
            for (std::size_t r = 0; r < rows_; ++r) y += c_[basis_[r]] * t_[r][col];
            s.duals[i] = flipped_[i] ? T(-y) : y;
        }
        return s;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    T reduced_cost(const std::vector<T>& c, std::size_t j) const {
        T z(0);
        for (std::size_t r = 0; r < rows_; ++r) z += c[basis_[r]] * t_[r][j];
        return c[j] - z;
    }

    // Returns false when unbounded. Columns >= limit never enter.
    bool run(const std::vector<T>& c, std::size_t limit, long& pivots) {
        const T eps = ScalarTraits<T>::eps();
        std::vector<bool> in_basis(cols_, false);
        while (true) {
            std::fill(in_basis.begin(), in_basis.end(), false);
            for (auto b : basis_) in_basis[b] = true;
            std::size_t enter = npos;
            for (std::size_t j = 0; j < limit; ++j)
                if (!in_basis[j] && reduced_cost(c, j) > eps) {
                    enter = j;
                    break;
                }
            if (enter == npos) return true;
            std::size_t leave = npos;
            T best{};
            for (std::size_t i = 0; i < rows_; ++i) {
                if (!(t_[i][enter] > eps)) continue;
                T ratio = t_[i][cols_] / t_[i][enter];
                if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == npos) return false;
            pivot(leave, enter);
            ++pivots;
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const T p = t_[row][col];
        for (auto& v : t_[row]) v /= p;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row) continue;
            const T f = t_[i][col];
            if (f == T(0)) continue;
            for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[row][j];
        }
        basis_[row] = col;
    }

    void drive_out_artificials(long& pivots) {
        const T eps = ScalarTraits<T>::eps();
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < first_art_) continue;
            for (std::size_t j = 0; j < first_art_; ++j) {
                const T v = t_[i][j];
                if (v > eps || v < -eps) {
                    pivot(i, j);
                    ++pivots;
                    break;
                }
            }
            // A row with no eligible column is redundant; its artificial stays at zero.
        }
    }

    std::size_t rows_, n_, cols_ = 0, first_art_ = 0;
    std::vector<std::vector<T>> t_;
    std::vector<std::size_t> basis_, aux_col_, art_col_;
    std::vector<bool> flipped_;
    std::vector<T> c_;
};

}  // namespace detail

template <class T>
Solution<T> solve(const Problem<T>& problem) {
    detail::Tableau<T> t(problem);
    return t.solve();
}

}  // namespace umpvote::lp
