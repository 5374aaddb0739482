#include "pdwg/quadrature.hpp"

#include "pdwg/errors.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <vector>

namespace pdwg {

namespace {

/// Rule on the reference triangle (0,0)-(1,0)-(0,1); weights sum to 1/2.
struct RefCellRule {
  std::vector<double> x, y, w;
};

/// Rule on [0,1]; weights sum to 1.
struct RefEdgeRule {
  std::vector<double> t, w;
};

void push_symmetric(RefCellRule& r, double l1, double weight) {
  // the three cyclic placements of barycentric (l1, a, a), a = (1-l1)/2;
  // cartesian point = (lambda_2, lambda_3)
  const double a = 0.5 * (1.0 - l1);
  r.x.insert(r.x.end(), {a, l1, a});
  r.y.insert(r.y.end(), {a, a, l1});
  r.w.insert(r.w.end(), 3, weight * 0.5);
}

/// Gauss-Legendre nodes/weights on [0,1] via Newton iteration on P_n.
RefEdgeRule gauss_rule(int n) {
  RefEdgeRule rule;
  rule.t.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) { p1 = x; }
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pm = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = -pn / dp;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.t[i] = 0.5 * (1.0 + x);
    rule.w[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// Collapsed-square product rule of exactness >= d on the reference triangle.
RefCellRule duffy_rule(int d) {
  const int m = (d + 3) / 2; // Gauss order per direction
  const RefEdgeRule g = gauss_rule(m);
  RefCellRule r;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double xi = g.t[i], eta = g.t[j];
      r.x.push_back(xi * (1.0 - eta));
      r.y.push_back(eta);
      r.w.push_back(g.w[i] * g.w[j] * (1.0 - eta));
    }
  }
  return r;
}

RefCellRule make_cell_rule(int exactness) {
  RefCellRule r;
  if (exactness <= 1) {
    r.x = {1.0 / 3.0};
    r.y = {1.0 / 3.0};
    r.w = {0.5};
  } else if (exactness == 2) {
    push_symmetric(r, 2.0 / 3.0, 1.0 / 3.0);
  } else if (exactness <= 4) {
    push_symmetric(r, 1.0 - 2.0 * 0.44594849091596489, 0.22338158967801147);
    push_symmetric(r, 1.0 - 2.0 * 0.09157621350977074, 0.10995174365532187);
  } else if (exactness == 5) {
    const double s15 = std::sqrt(15.0);
    r.x = {1.0 / 3.0};
    r.y = {1.0 / 3.0};
    r.w = {0.5 * 9.0 / 40.0};
    push_symmetric(r, 1.0 - 2.0 * (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
    push_symmetric(r, 1.0 - 2.0 * (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
  } else {
    r = duffy_rule(exactness);
  }
  return r;
}

const RefCellRule& cell_rule_table(int exactness) {
  static std::array<RefCellRule, kMaxCellExactness + 1> table;
  static std::array<std::once_flag, kMaxCellExactness + 1> flags;
  std::call_once(flags[exactness],
                 [exactness] { table[exactness] = make_cell_rule(exactness); });
  return table[exactness];
}

const RefEdgeRule& edge_rule_table(int exactness) {
  static std::array<RefEdgeRule, kMaxEdgeExactness + 1> table;
  static std::array<std::once_flag, kMaxEdgeExactness + 1> flags;
  std::call_once(flags[exactness], [exactness] {
    table[exactness] = gauss_rule(exactness / 2 + 1);
  });
  return table[exactness];
}

} // namespace

QuadRule cell_quadrature(const TriangleGeometry& tri, int exactness) {
  if (exactness < 0 || exactness > kMaxCellExactness) {
    throw QuadratureError("cell quadrature exactness " +
                          std::to_string(exactness) + " outside supported range [0, " +
                          std::to_string(kMaxCellExactness) + "]");
  }
  const RefCellRule& ref = cell_rule_table(std::max(exactness, 0));
  const double jac = 2.0 * tri.area(); // ref triangle has area 1/2
  QuadRule rule;
  rule.exactness = exactness;
  const int n = static_cast<int>(ref.w.size());
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (int q = 0; q < n; ++q) {
    rule.points.push_back(tri.v[0] + ref.x[q] * (tri.v[1] - tri.v[0]) +
                          ref.y[q] * (tri.v[2] - tri.v[0]));
    rule.weights.push_back(ref.w[q] * jac);
  }
  return rule;
}

QuadRule edge_quadrature(const Vec2& a, const Vec2& b, int exactness) {
  if (exactness < 0 || exactness > kMaxEdgeExactness) {
    throw QuadratureError("edge quadrature exactness " +
                          std::to_string(exactness) + " outside supported range [0, " +
                          std::to_string(kMaxEdgeExactness) + "]");
  }
  const RefEdgeRule& ref = edge_rule_table(std::max(exactness, 0));
  const double len = (b - a).norm();
  QuadRule rule;
  rule.exactness = exactness;
  const int n = static_cast<int>(ref.w.size());
  for (int q = 0; q < n; ++q) {
    rule.points.push_back(a + ref.t[q] * (b - a));
    rule.params.push_back(ref.t[q]);
    rule.weights.push_back(ref.w[q] * len);
  }
  return rule;
}

} // namespace pdwg
