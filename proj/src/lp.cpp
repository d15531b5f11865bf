#include "wdc/lp.hpp"

#include <cmath>
#include <limits>

#include "wdc/errors.hpp"

namespace wdc {

bool solve_linear(std::vector<Vec>& m, Vec& rhs, double pivot_tol) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < pivot_tol) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
  return true;
}

namespace lp {
namespace {

constexpr double kEps = 1e-11;

// Tableau in equality form: T[i] = [coefficients | rhs], basis[i] = basic column.
struct Tableau {
  std::vector<Vec> t;
  std::vector<std::size_t> basis;
  std::size_t ncols = 0;  // excluding rhs

  void pivot(std::size_t row, std::size_t col) {
    Vec& pr = t[row];
    const double p = pr[col];
    for (double& v : pr) v /= p;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (r == row) continue;
      const double f = t[r][col];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k <= ncols; ++k) t[r][k] -= f * pr[k];
    }
    basis[row] = col;
  }

  // Maximizes obj.x over columns [0, active_cols). Returns false on unboundedness.
  bool run(const Vec& obj, std::size_t active_cols) {
    for (int iter = 0; iter < 100000; ++iter) {
      // reduced costs: obj_j - sum_i obj_{basis_i} * t[i][j]
      std::size_t enter = active_cols;
      for (std::size_t j = 0; j < active_cols; ++j) {
        double rc = obj[j];
        for (std::size_t i = 0; i < t.size(); ++i) rc -= obj[basis[i]] * t[i][j];
        if (rc > kEps) {
          enter = j;
          break;  // Bland: lowest index
        }
      }
      if (enter == active_cols) return true;
      std::size_t leave = t.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double a = t[i][enter];
        if (a > kEps) {
          const double ratio = t[i][ncols] / a;
          if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == t.size()) return false;
      pivot(leave, enter);
    }
    fail(ErrorKind::Limit, "simplex iteration limit reached");
  }
};

}  // namespace

Result maximize(const Vec& c, const std::vector<Vec>& rows, const Vec& rhs, const Vec& lower,
                const Vec& upper) {
  const std::size_t n = c.size();
  // Shift x = lower + z, z in [0, upper - lower].
  std::vector<Vec> a;
  Vec b;
  a.reserve(rows.size() + n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a.push_back(rows[i]);
    b.push_back(rhs[i] - dot(rows[i], lower));
  }
  for (std::size_t k = 0; k < n; ++k) {
    Vec r(n, 0.0);
    r[k] = 1.0;
    a.push_back(std::move(r));
    b.push_back(upper[k] - lower[k]);
  }
  const std::size_t m = a.size();
  // columns: z (n), slacks (m), artificials (one per negative row)
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0.0) neg.push_back(i);
  Tableau tab;
  tab.ncols = n + m + neg.size();
  tab.t.assign(m, Vec(tab.ncols + 1, 0.0));
  tab.basis.assign(m, 0);
  std::size_t art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) tab.t[i][k] = sign * a[i][k];
    tab.t[i][n + i] = sign;
    tab.t[i][tab.ncols] = sign * b[i];
    if (sign < 0.0) {
      tab.t[i][n + m + art] = 1.0;
      tab.basis[i] = n + m + art;
      ++art;
    } else {
      tab.basis[i] = n + i;
    }
  }
  Result res;
  if (!neg.empty()) {
    Vec obj1(tab.ncols, 0.0);
    for (std::size_t j = n + m; j < tab.ncols; ++j) obj1[j] = -1.0;
    tab.run(obj1, tab.ncols);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (tab.basis[i] >= n + m) infeas += tab.t[i][tab.ncols];
    if (infeas > 1e-9) return res;
    // Drive remaining (degenerate) artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] < n + m) continue;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (std::abs(tab.t[i][j]) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }
  Vec obj2(tab.ncols, 0.0);
  for (std::size_t k = 0; k < n; ++k) obj2[k] = c[k];
  tab.run(obj2, n + m);
  res.status = Status::Optimal;
  res.x = lower;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < n) res.x[tab.basis[i]] += tab.t[i][tab.ncols];
  res.value = dot(c, res.x);
  return res;
}

}  // namespace lp
}  // namespace wdc
