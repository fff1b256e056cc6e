#include "oracles/simplex_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vetl::testing {

namespace {

constexpr double kEps = 1e-9;

// Tableau with rows = constraints plus the objective row at the bottom.
// basis[r] holds the variable index basic in row r. Bland's rule pivoting.
class Tableau {
public:
    Tableau(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    double& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    double at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    void pivot(size_t pr, size_t pc) {
        const double pv = at(pr, pc);
        for (size_t c = 0; c < cols_; ++c) at(pr, c) /= pv;
        for (size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double factor = at(r, pc);
            if (factor == 0.0) continue;
            for (size_t c = 0; c < cols_; ++c) at(r, c) -= factor * at(pr, c);
        }
    }

    // Minimizes the bottom row. Returns false on unboundedness.
    bool run(std::vector<size_t>& basis, size_t n_vars) {
        const size_t m = rows_ - 1;
        while (true) {
            size_t pc = n_vars;
            for (size_t c = 0; c < n_vars; ++c) {
                if (at(m, c) < -kEps) {  // Bland: first improving column
                    pc = c;
                    break;
                }
            }
            if (pc == n_vars) return true;
            size_t pr = m;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (size_t r = 0; r < m; ++r) {
                if (at(r, pc) > kEps) {
                    const double ratio = at(r, cols_ - 1) / at(r, pc);
                    if (ratio < best_ratio - kEps ||
                        (ratio < best_ratio + kEps && (pr == m || basis[r] < basis[pr]))) {
                        best_ratio = ratio;
                        pr = r;
                    }
                }
            }
            if (pr == m) return false;  // unbounded
            pivot(pr, pc);
            basis[pr] = pc;
        }
    }

private:
    size_t rows_, cols_;
    std::vector<double> data_;
};

}  // namespace

SimplexOutcome simplex_maximize(const std::vector<double>& c,
                                const std::vector<std::vector<double>>& a_eq,
                                const std::vector<double>& b_eq,
                                const std::vector<std::vector<double>>& a_ub,
                                const std::vector<double>& b_ub) {
    const size_t n = c.size();
    const size_t m_eq = a_eq.size();
    const size_t m_ub = a_ub.size();
    const size_t m = m_eq + m_ub;
    const size_t n_slack = m_ub;
    const size_t n_art = m_eq;
    const size_t total = n + n_slack + n_art;

    // Columns: structural, slack, artificial, rhs.
    Tableau t(m + 1, total + 1);
    std::vector<size_t> basis(m, 0);

    for (size_t r = 0; r < m_eq; ++r) {
        double rhs = b_eq[r];
        std::vector<double> row = a_eq[r];
        if (rhs < 0) {
            rhs = -rhs;
            for (double& v : row) v = -v;
        }
        for (size_t cix = 0; cix < n; ++cix) t.at(r, cix) = row[cix];
        t.at(r, n + n_slack + r) = 1.0;
        t.at(r, total) = rhs;
        basis[r] = n + n_slack + r;
    }
    for (size_t r = 0; r < m_ub; ++r) {
        const size_t row = m_eq + r;
        for (size_t cix = 0; cix < n; ++cix) t.at(row, cix) = a_ub[r][cix];
        t.at(row, n + r) = 1.0;
        t.at(row, total) = b_ub[r];
        basis[row] = n + r;
    }

    // Phase 1: minimize the sum of artificials.
    for (size_t a = 0; a < n_art; ++a) t.at(m, n + n_slack + a) = 1.0;
    for (size_t r = 0; r < m_eq; ++r)
        for (size_t cix = 0; cix <= total; ++cix) t.at(m, cix) -= t.at(r, cix);
    if (!t.run(basis, total)) return {false, 0.0};
    if (t.at(m, total) < -1e-7) return {false, 0.0};  // residual artificial mass

    // Pivot any artificial still basic (degenerate) out of the basis.
    for (size_t r = 0; r < m; ++r) {
        if (basis[r] < n + n_slack) continue;
        size_t pc = total;
        for (size_t cix = 0; cix < n + n_slack; ++cix) {
            if (std::abs(t.at(r, cix)) > kEps) {
                pc = cix;
                break;
            }
        }
        if (pc != total) {
            t.pivot(r, pc);
            basis[r] = pc;
        }
    }

    // Phase 2: minimize -c.x over structural and slack columns only.
    for (size_t cix = 0; cix <= total; ++cix) t.at(m, cix) = 0.0;
    for (size_t cix = 0; cix < n; ++cix) t.at(m, cix) = -c[cix];
    for (size_t r = 0; r < m; ++r) {
        const double coef = t.at(m, basis[r]);
        if (coef == 0.0) continue;
        for (size_t cix = 0; cix <= total; ++cix) t.at(m, cix) -= coef * t.at(r, cix);
    }
    // Forbid artificials from re-entering.
    for (size_t a = 0; a < n_art; ++a) t.at(m, n + n_slack + a) = 1e18;
    if (!t.run(basis, n + n_slack)) return {false, 0.0};

    return {true, t.at(m, total)};
}

double simplex_plan_objective(const std::vector<StreamPlanInput>& streams, double budget) {
    // One variable per (stream, category, config).
    size_t n = 0;
    for (const auto& s : streams) n += s.forecast.size() * s.scaled_costs.size();

    std::vector<double> c(n, 0.0);
    std::vector<std::vector<double>> a_eq;
    std::vector<double> b_eq;
    std::vector<double> budget_row(n, 0.0);

    size_t offset = 0;
    for (const auto& s : streams) {
        const size_t n_cat = s.forecast.size();
        const size_t n_cfg = s.scaled_costs.size();
        for (size_t cat = 0; cat < n_cat; ++cat) {
            std::vector<double> row(n, 0.0);
            for (size_t k = 0; k < n_cfg; ++k) {
                const size_t var = offset + cat * n_cfg + k;
                c[var] = s.forecast[cat] * s.centers.centers[cat][k];
                budget_row[var] = s.forecast[cat] * s.scaled_costs[k];
                row[var] = 1.0;
            }
            a_eq.push_back(std::move(row));
            b_eq.push_back(1.0);
        }
        offset += n_cat * n_cfg;
    }

    const SimplexOutcome out =
        simplex_maximize(c, a_eq, b_eq, {budget_row}, {budget});
    if (!out.feasible) throw EngineError("simplex oracle: infeasible instance");
    return out.objective;
}

double grid_plan_objective(const std::vector<double>& forecast,
                           const ContentCategorySet& centers,
                           const std::vector<double>& costs, double budget, int grid_steps) {
    const size_t n_cat = forecast.size();
    const size_t n_cfg = costs.size();
    const double step = budget / grid_steps;

    // best_q[c][b] = best quality contribution of category c within budget
    // share b*step, from all two-config mixtures on the 1e-3 weight grid.
    std::vector<std::vector<double>> best_q(
        n_cat,
        std::vector<double>(static_cast<size_t>(grid_steps) + 1,
                            -std::numeric_limits<double>::infinity()));
    for (size_t cat = 0; cat < n_cat; ++cat) {
        const double r = forecast[cat];
        auto consider = [&](double cost, double quality) {
            const auto bin =
                static_cast<int64_t>(std::ceil(cost / step - 1e-12));
            if (bin > grid_steps) return;
            const auto b = static_cast<size_t>(std::max<int64_t>(0, bin));
            best_q[cat][b] = std::max(best_q[cat][b], quality);
        };
        for (size_t k1 = 0; k1 < n_cfg; ++k1) {
            for (size_t k2 = k1; k2 < n_cfg; ++k2) {
                for (int w = 0; w <= 1000; ++w) {
                    const double f = w / 1000.0;
                    const double cost = r * (f * costs[k1] + (1 - f) * costs[k2]);
                    const double quality = r * (f * centers.centers[cat][k1] +
                                                (1 - f) * centers.centers[cat][k2]);
                    consider(cost, quality);
                }
                if (k1 == k2) break;  // singleton covered by f = 1
            }
        }
        for (size_t b = 1; b < best_q[cat].size(); ++b)
            best_q[cat][b] = std::max(best_q[cat][b], best_q[cat][b - 1]);
    }

    if (n_cat == 1) return best_q[0][static_cast<size_t>(grid_steps)];

    double best = -std::numeric_limits<double>::infinity();
    if (n_cat == 2) {
        for (int b1 = 0; b1 <= grid_steps; ++b1)
            best = std::max(best, best_q[0][static_cast<size_t>(b1)] +
                                      best_q[1][static_cast<size_t>(grid_steps - b1)]);
        return best;
    }
    if (n_cat == 3) {
        for (int b1 = 0; b1 <= grid_steps; ++b1) {
            const double q1 = best_q[0][static_cast<size_t>(b1)];
            if (q1 == -std::numeric_limits<double>::infinity()) continue;
            for (int b2 = 0; b1 + b2 <= grid_steps; ++b2) {
                const double q2 = best_q[1][static_cast<size_t>(b2)];
                if (q2 == -std::numeric_limits<double>::infinity()) continue;
                best = std::max(
                    best, q1 + q2 + best_q[2][static_cast<size_t>(grid_steps - b1 - b2)]);
            }
        }
        return best;
    }
    throw ValidationError("grid oracle: supports up to 3 categories");
}

}  // namespace vetl::testing
