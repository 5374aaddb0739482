#include "pdwg/analysis.hpp"

#include "pdwg/errors.hpp"
#include "pdwg/parallel.hpp"
#include "pdwg/quadrature.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace pdwg {

ErrorRecord error_norms(const Space& space, const ProblemSpec& problem,
                        const WeakFunction& lambda, const PrimalFunction& u,
                        double tau, QuadratureConfig quad) {
  const Mesh& mesh = space.mesh();
  const int nt = mesh.triangle_count();
  const int cell_exactness = quad.cell_for(space.k());

  std::vector<double> h1(nt, 0.0), l2(nt, 0.0), ul2(nt, 0.0);
  parallel_for(0, nt, [&](int t) {
    const TriangleGeometry tri = mesh.geometry(t);
    const QuadRule rule = cell_quadrature(tri, cell_exactness);
    const int sub = mesh.triangle(t).subdomain;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double w = rule.weights[q];
      const double v = lambda.interior_value(space, t, x);
      const Vec2 g = lambda.interior_gradient(space, t, x);
      l2[t] += w * v * v;
      h1[t] += w * g.squaredNorm();
      if (problem.has_exact) {
        const double diff = problem.exact_u(sub, x) - u.value(space, t, x);
        ul2[t] += w * diff * diff;
      }
    }
  });

  ErrorRecord record;
  record.lambda_w = std::sqrt(stabilizer_energy(space, problem, tau, lambda, quad));
  double sum_h1 = 0.0, sum_l2 = 0.0, sum_u = 0.0;
  for (int t = 0; t < nt; ++t) {
    sum_h1 += h1[t];
    sum_l2 += l2[t];
    sum_u += ul2[t];
  }
  record.lambda0_h1 = std::sqrt(sum_h1 + sum_l2);
  record.lambda0_l2 = std::sqrt(sum_l2);
  if (problem.has_exact) record.u_l2 = std::sqrt(sum_u);
  return record;
}

std::optional<double> convergence_rate(double coarse_error, double fine_error) {
  if (!(coarse_error > 0.0) || !(fine_error > 0.0)) return std::nullopt;
  return std::log2(coarse_error / fine_error);
}

StudyResult convergence_study(const ProblemSpec& problem, const Mesh& initial,
                              int k, int levels, double tau,
                              QuadratureConfig quad, SolverMethod method) {
  if (levels < 1) throw ConfigError("a convergence study needs at least one level");

  ConvergenceReport report;
  report.problem = problem.name;
  report.k = k;
  report.tau = tau;

  Mesh mesh = initial;
  Solution solution;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = mesh.refined();
    Space space(mesh, k);

    const auto start = std::chrono::steady_clock::now();
    const SaddleSystem system = assemble_system(space, problem, tau, quad);
    solution = solve(space, system, method);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;

    ConvergenceRow row;
    row.level = level;
    row.h = mesh.max_diameter();
    row.n_lambda = space.dofs().n_lambda();
    row.n_primal = space.dofs().n_primal;
    row.errors = error_norms(space, problem, solution.lambda, solution.u, tau, quad);
    row.seconds = elapsed.count();
    if (!report.rows.empty()) {
      const ErrorRecord& prev = report.rows.back().errors;
      row.rate_w = convergence_rate(prev.lambda_w, row.errors.lambda_w);
      row.rate_h1 = convergence_rate(prev.lambda0_h1, row.errors.lambda0_h1);
      row.rate_l2 = convergence_rate(prev.lambda0_l2, row.errors.lambda0_l2);
      if (prev.u_l2 && row.errors.u_l2)
        row.rate_u = convergence_rate(*prev.u_l2, *row.errors.u_l2);
    }
    report.rows.push_back(row);
  }
  return StudyResult{std::move(report), std::move(mesh), std::move(solution)};
}

namespace {

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

std::string csv_number(const std::optional<double>& value, const char* pattern) {
  return value ? fmt(pattern, *value) : std::string();
}

} // namespace

void write_csv(const ConvergenceReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "level,h,err_lambda_w,rate_w,err_lambda0_h1,rate_h1,"
         "err_lambda0_l2,rate_l2,err_u_l2,rate_u\n";
  for (const ConvergenceRow& row : report.rows) {
    out << row.level << ',' << fmt("%.6e", row.h) << ','
        << fmt("%.6e", row.errors.lambda_w) << ',' << csv_number(row.rate_w, "%.2f")
        << ',' << fmt("%.6e", row.errors.lambda0_h1) << ','
        << csv_number(row.rate_h1, "%.2f") << ','
        << fmt("%.6e", row.errors.lambda0_l2) << ','
        << csv_number(row.rate_l2, "%.2f") << ','
        << csv_number(row.errors.u_l2, "%.6e") << ','
        << csv_number(row.rate_u, "%.2f") << '\n';
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_json(const ConvergenceReport& report, const std::string& path) {
  nlohmann::json root;
  root["problem"] = report.problem;
  root["k"] = report.k;
  root["tau"] = report.tau;
  nlohmann::json rows = nlohmann::json::array();
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  for (const ConvergenceRow& row : report.rows) {
    nlohmann::json r;
    r["level"] = row.level;
    r["h"] = row.h;
    r["err_lambda_w"] = row.errors.lambda_w;
    r["rate_w"] = opt(row.rate_w);
    r["err_lambda0_h1"] = row.errors.lambda0_h1;
    r["rate_h1"] = opt(row.rate_h1);
    r["err_lambda0_l2"] = row.errors.lambda0_l2;
    r["rate_l2"] = opt(row.rate_l2);
    r["err_u_l2"] = opt(row.errors.u_l2);
    r["rate_u"] = opt(row.rate_u);
    rows.push_back(std::move(r));
  }
  root["rows"] = std::move(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << root.dump(2) << '\n';
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void print_table(const ConvergenceReport& report, std::ostream& out) {
  out << "problem " << report.problem << "  (k=" << report.k
      << ", tau=" << fmt("%g", report.tau) << ")\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%5s %10s %9s  %9s %6s  %9s %6s  %9s %6s  %9s %6s  %8s\n",
                "level", "h", "n_lambda", "|e|_w", "rate", "|e0|_1", "rate",
                "|e0|_0", "rate", "|eu|_0", "rate", "time");
  out << line;
  const auto rate_text = [](const std::optional<double>& r) {
    char buf[16];
    if (r)
      std::snprintf(buf, sizeof(buf), "%6.2f", *r);
    else
      std::snprintf(buf, sizeof(buf), "%6s", "-");
    return std::string(buf);
  };
  const auto err_text = [](const std::optional<double>& e) {
    char buf[16];
    if (e)
      std::snprintf(buf, sizeof(buf), "%9.2e", *e);
    else
      std::snprintf(buf, sizeof(buf), "%9s", "-");
    return std::string(buf);
  };
  for (const ConvergenceRow& row : report.rows) {
    std::snprintf(line, sizeof(line), "%5d %10.3e %9d  %s %s  %s %s  %s %s  %s %s  %7.2fs\n",
                  row.level, row.h, row.n_lambda,
                  err_text(row.errors.lambda_w).c_str(), rate_text(row.rate_w).c_str(),
                  err_text(row.errors.lambda0_h1).c_str(), rate_text(row.rate_h1).c_str(),
                  err_text(row.errors.lambda0_l2).c_str(), rate_text(row.rate_l2).c_str(),
                  err_text(row.errors.u_l2).c_str(), rate_text(row.rate_u).c_str(),
                  row.seconds);
    out << line;
  }
}

} // namespace pdwg
