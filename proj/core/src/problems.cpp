#include "pdwg/problems.hpp"

#include "pdwg/errors.hpp"
#include "pdwg/expression.hpp"
#include "pdwg/quadrature.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace pdwg {

namespace {

using Field1 = std::function<double(const Vec2&)>;

/// One subdomain branch of a manufactured solution with the derivatives
/// needed to form the source term and the interface data.
struct Branch {
  Field1 u, ux, uy, uxx, uyy;
};

/// Coefficients of one subdomain; da is grad(a), div_b is div(b).
struct Coeffs {
  Field1 a, ax, ay;
  Field1 b1, b2, div_b;
  Field1 c;
};

Field1 zero1() {
  return [](const Vec2&) { return 0.0; };
}

Coeffs constant_coeffs(double a, Vec2 b, double c) {
  return Coeffs{[a](const Vec2&) { return a; },
                zero1(),
                zero1(),
                [b](const Vec2&) { return b.x(); },
                [b](const Vec2&) { return b.y(); },
                zero1(),
                [c](const Vec2&) { return c; }};
}

/// Assembles a full problem from closed-form branches: the source is
///   f = -div(a grad u) + div(b u) + c u
/// per subdomain, the boundary data is the trace of u, and the interface
/// jumps are derived from the branch difference (plus side = subdomain 1).
ProblemSpec from_branches(std::string name, std::vector<Branch> branches,
                          std::vector<Coeffs> coeffs, MeshRecipe recipe) {
  ProblemSpec p;
  p.name = std::move(name);
  p.subdomain_count = static_cast<int>(branches.size());
  p.mesh_recipe = std::move(recipe);

  const auto pick = [n = p.subdomain_count](int i) {
    if (i < 1 || i > n)
      throw ConfigError("subdomain id " + std::to_string(i) + " out of range");
    return i - 1;
  };

  p.a = [coeffs, pick](int i, const Vec2& x) { return coeffs[pick(i)].a(x); };
  p.b = [coeffs, pick](int i, const Vec2& x) {
    const Coeffs& co = coeffs[pick(i)];
    return Vec2(co.b1(x), co.b2(x));
  };
  p.c = [coeffs, pick](int i, const Vec2& x) { return coeffs[pick(i)].c(x); };
  p.f = [branches, coeffs, pick](int i, const Vec2& x) {
    const Branch& br = branches[pick(i)];
    const Coeffs& co = coeffs[pick(i)];
    const double diffusion =
        co.ax(x) * br.ux(x) + co.ay(x) * br.uy(x) + co.a(x) * (br.uxx(x) + br.uyy(x));
    const double convection =
        co.div_b(x) * br.u(x) + co.b1(x) * br.ux(x) + co.b2(x) * br.uy(x);
    return -diffusion + convection + co.c(x) * br.u(x);
  };
  p.g = [branches, pick](int i, const Vec2& x) { return branches[pick(i)].u(x); };

  p.any_piece = true;
  p.phi = [branches](int, const Vec2& x) {
    return branches[0].u(x) - branches[1].u(x);
  };
  p.psi = [branches, coeffs](int, const Vec2& x, const Vec2& n) {
    const auto conormal = [&](int side) {
      const Branch& br = branches[side];
      const Coeffs& co = coeffs[side];
      const Vec2 flux(co.a(x) * br.ux(x) - co.b1(x) * br.u(x),
                      co.a(x) * br.uy(x) - co.b2(x) * br.u(x));
      return flux.dot(n);
    };
    return conormal(0) - conormal(1);
  };

  p.has_exact = true;
  p.exact_u = [branches, pick](int i, const Vec2& x) { return branches[pick(i)].u(x); };
  p.exact_grad = [branches, pick](int i, const Vec2& x) {
    const Branch& br = branches[pick(i)];
    return Vec2(br.ux(x), br.uy(x));
  };
  return p;
}

MeshRecipe square_recipe() {
  MeshRecipe r;
  r.kind = MeshRecipe::Kind::structured;
  r.n = 4;
  r.square = InterfaceSquare{0.25, 0.75, 0.25, 0.75};
  return r;
}

MeshRecipe import_recipe() {
  MeshRecipe r;
  r.kind = MeshRecipe::Kind::import_required;
  return r;
}

ProblemSpec example1() {
  Branch inner{
      [](const Vec2& p) { return 10.0 - p.x() * p.x() - p.y() * p.y(); },
      [](const Vec2& p) { return -2.0 * p.x(); },
      [](const Vec2& p) { return -2.0 * p.y(); },
      [](const Vec2&) { return -2.0; },
      [](const Vec2&) { return -2.0; },
  };
  Branch outer{
      [](const Vec2& p) { return std::sin(M_PI * p.x()) * std::sin(M_PI * p.y()); },
      [](const Vec2& p) { return M_PI * std::cos(M_PI * p.x()) * std::sin(M_PI * p.y()); },
      [](const Vec2& p) { return M_PI * std::sin(M_PI * p.x()) * std::cos(M_PI * p.y()); },
      [](const Vec2& p) {
        return -M_PI * M_PI * std::sin(M_PI * p.x()) * std::sin(M_PI * p.y());
      },
      [](const Vec2& p) {
        return -M_PI * M_PI * std::sin(M_PI * p.x()) * std::sin(M_PI * p.y());
      },
  };
  const Coeffs co = constant_coeffs(1.0, Vec2(1.0, 1.0), 1.0);
  return from_branches("example-1", {inner, outer}, {co, co}, square_recipe());
}

ProblemSpec example2() {
  Branch inner{
      [](const Vec2& p) { return std::sin(p.x() + p.y()) + std::cos(p.x() + p.y()) + 5.0; },
      [](const Vec2& p) { return std::cos(p.x() + p.y()) - std::sin(p.x() + p.y()); },
      [](const Vec2& p) { return std::cos(p.x() + p.y()) - std::sin(p.x() + p.y()); },
      [](const Vec2& p) { return -std::sin(p.x() + p.y()) - std::cos(p.x() + p.y()); },
      [](const Vec2& p) { return -std::sin(p.x() + p.y()) - std::cos(p.x() + p.y()); },
  };
  Branch outer{
      [](const Vec2& p) { return p.x() + p.y() + 1.0; },
      [](const Vec2&) { return 1.0; },
      [](const Vec2&) { return 1.0; },
      zero1(),
      zero1(),
  };
  Coeffs co;
  co.a = [](const Vec2& p) { return 2.0 + std::sin(p.x() + p.y()); };
  co.ax = [](const Vec2& p) { return std::cos(p.x() + p.y()); };
  co.ay = [](const Vec2& p) { return std::cos(p.x() + p.y()); };
  co.b1 = [](const Vec2& p) { return p.x(); };
  co.b2 = [](const Vec2& p) { return p.y(); };
  co.div_b = [](const Vec2&) { return 2.0; };
  co.c = [](const Vec2& p) { return 4.0 + p.x(); };
  return from_branches("example-2", {inner, outer}, {co, co}, import_recipe());
}

ProblemSpec example3() {
  Branch inner{
      [](const Vec2& p) { return std::exp(p.x()) * std::cos(p.y()) + 10.0; },
      [](const Vec2& p) { return std::exp(p.x()) * std::cos(p.y()); },
      [](const Vec2& p) { return -std::exp(p.x()) * std::sin(p.y()); },
      [](const Vec2& p) { return std::exp(p.x()) * std::cos(p.y()); },
      [](const Vec2& p) { return -std::exp(p.x()) * std::cos(p.y()); },
  };
  Branch outer{
      [](const Vec2& p) { return 5.0 * std::exp(-p.x() * p.x() - p.y() * p.y()); },
      [](const Vec2& p) {
        return -2.0 * p.x() * 5.0 * std::exp(-p.x() * p.x() - p.y() * p.y());
      },
      [](const Vec2& p) {
        return -2.0 * p.y() * 5.0 * std::exp(-p.x() * p.x() - p.y() * p.y());
      },
      [](const Vec2& p) {
        return (4.0 * p.x() * p.x() - 2.0) * 5.0 *
               std::exp(-p.x() * p.x() - p.y() * p.y());
      },
      [](const Vec2& p) {
        return (4.0 * p.y() * p.y() - 2.0) * 5.0 *
               std::exp(-p.x() * p.x() - p.y() * p.y());
      },
  };
  Coeffs inner_co;
  inner_co.a = [](const Vec2& p) { return 1.0 + p.x() + p.y(); };
  inner_co.ax = [](const Vec2&) { return 1.0; };
  inner_co.ay = [](const Vec2&) { return 1.0; };
  Coeffs outer_co;
  outer_co.a = [](const Vec2&) { return 1.0; };
  outer_co.ax = zero1();
  outer_co.ay = zero1();
  for (Coeffs* co : {&inner_co, &outer_co}) {
    co->b1 = [](const Vec2&) { return 1.0; };
    co->b2 = [](const Vec2& p) { return 1.0 + p.y(); };
    co->div_b = [](const Vec2&) { return 1.0; };
    co->c = [](const Vec2&) { return 2.0; };
  }
  return from_branches("example-3", {inner, outer}, {inner_co, outer_co},
                       import_recipe());
}

ProblemSpec example4() {
  Branch inner{
      [](const Vec2& p) { return p.x() + p.y() + 2.0; },
      [](const Vec2&) { return 1.0; },
      [](const Vec2&) { return 1.0; },
      zero1(),
      zero1(),
  };
  Branch outer{
      [](const Vec2& p) {
        return 0.5 * std::sin(p.x() + p.y()) + 0.5 * std::cos(p.x() + p.y()) + 0.3;
      },
      [](const Vec2& p) {
        return 0.5 * (std::cos(p.x() + p.y()) - std::sin(p.x() + p.y()));
      },
      [](const Vec2& p) {
        return 0.5 * (std::cos(p.x() + p.y()) - std::sin(p.x() + p.y()));
      },
      [](const Vec2& p) {
        return -0.5 * (std::sin(p.x() + p.y()) + std::cos(p.x() + p.y()));
      },
      [](const Vec2& p) {
        return -0.5 * (std::sin(p.x() + p.y()) + std::cos(p.x() + p.y()));
      },
  };
  Coeffs inner_co;
  inner_co.a = [](const Vec2& p) { return (p.x() * p.y() + 2.0) / 5.0; };
  inner_co.ax = [](const Vec2& p) { return p.y() / 5.0; };
  inner_co.ay = [](const Vec2& p) { return p.x() / 5.0; };
  inner_co.b1 = zero1();
  inner_co.b2 = [](const Vec2&) { return 1.0; };
  inner_co.div_b = zero1();
  inner_co.c = [](const Vec2&) { return 2.0; };
  Coeffs outer_co;
  outer_co.a = [](const Vec2& p) { return (p.x() * p.x() - p.y() * p.y() + 3.0) / 7.0; };
  outer_co.ax = [](const Vec2& p) { return 2.0 * p.x() / 7.0; };
  outer_co.ay = [](const Vec2& p) { return -2.0 * p.y() / 7.0; };
  outer_co.b1 = [](const Vec2&) { return 1.0; };
  outer_co.b2 = zero1();
  outer_co.div_b = zero1();
  outer_co.c = [](const Vec2&) { return 1.0; };
  return from_branches("example-4", {inner, outer}, {inner_co, outer_co},
                       import_recipe());
}

ProblemSpec example5() {
  Branch inner{
      [](const Vec2& p) {
        const double X = 2.0 * p.x() - 1.0, Y = 2.0 * p.y() - 1.0;
        return std::exp(X * X + Y * Y);
      },
      [](const Vec2& p) {
        const double X = 2.0 * p.x() - 1.0, Y = 2.0 * p.y() - 1.0;
        return 4.0 * X * std::exp(X * X + Y * Y);
      },
      [](const Vec2& p) {
        const double X = 2.0 * p.x() - 1.0, Y = 2.0 * p.y() - 1.0;
        return 4.0 * Y * std::exp(X * X + Y * Y);
      },
      [](const Vec2& p) {
        const double X = 2.0 * p.x() - 1.0, Y = 2.0 * p.y() - 1.0;
        return (8.0 + 16.0 * X * X) * std::exp(X * X + Y * Y);
      },
      [](const Vec2& p) {
        const double X = 2.0 * p.x() - 1.0, Y = 2.0 * p.y() - 1.0;
        return (8.0 + 16.0 * Y * Y) * std::exp(X * X + Y * Y);
      },
  };
  // 0.1 (x^2+y^2)^2 - 0.01 ln(2 sqrt(x^2+y^2)); the log part is harmonic
  Branch outer{
      [](const Vec2& p) {
        const double s = p.x() * p.x() + p.y() * p.y();
        return 0.1 * s * s - 0.01 * std::log(2.0 * std::sqrt(s));
      },
      [](const Vec2& p) {
        const double s = p.x() * p.x() + p.y() * p.y();
        return 0.4 * s * p.x() - 0.01 * p.x() / s;
      },
      [](const Vec2& p) {
        const double s = p.x() * p.x() + p.y() * p.y();
        return 0.4 * s * p.y() - 0.01 * p.y() / s;
      },
      [](const Vec2& p) {
        const double s = p.x() * p.x() + p.y() * p.y();
        return 0.4 * s + 0.8 * p.x() * p.x() - 0.01 * (s - 2.0 * p.x() * p.x()) / (s * s);
      },
      [](const Vec2& p) {
        const double s = p.x() * p.x() + p.y() * p.y();
        return 0.4 * s + 0.8 * p.y() * p.y() - 0.01 * (s - 2.0 * p.y() * p.y()) / (s * s);
      },
  };
  return from_branches("example-5", {inner, outer},
                       {constant_coeffs(0.01, Vec2::Zero(), 0.0),
                        constant_coeffs(0.1, Vec2::Zero(), 0.0)},
                       import_recipe());
}

ProblemSpec example6() {
  ProblemSpec p;
  p.name = "example-6";
  p.subdomain_count = 2;
  p.mesh_recipe = square_recipe();
  p.a = [](int i, const Vec2& x) {
    return i == 1 ? 2.0 + std::sin(x.x() + x.y()) : 5.0;
  };
  p.b = [](int, const Vec2&) { return Vec2::Zero(); };
  p.c = [](int, const Vec2&) { return 0.4; };
  p.f = [](int, const Vec2&) { return 0.0; };
  p.g = [](int, const Vec2& x) {
    return 0.2 * std::sin(x.x() + x.y()) + std::cos(x.x() + x.y()) + 1.0;
  };
  p.piece_count = 4;
  p.phi = [](int m, const Vec2&) { return static_cast<double>(m); };
  p.psi = [](int m, const Vec2& x, const Vec2& n) {
    switch (m) {
      case 1: return Vec2(4.0, 0.0).dot(n);
      case 2: return Vec2(2.0 * std::exp(x.x() - 0.75), 0.0).dot(n);
      case 3: return Vec2(0.0, 6.0 * M_PI * std::cos(2.0 * M_PI * x.y())).dot(n);
      case 4: return Vec2(1.0, 0.0).dot(n);
      default: throw ConfigError("interface piece id out of range");
    }
  };
  return p;
}

ProblemSpec example7() {
  ProblemSpec p;
  p.name = "example-7";
  p.subdomain_count = 2;
  p.mesh_recipe = square_recipe();
  p.a = [](int i, const Vec2&) { return i == 1 ? 1.0 : 100.0; };
  p.b = [](int, const Vec2& x) { return Vec2(2.0 + x.y(), 1.0 + x.x()); };
  p.c = [](int, const Vec2&) { return 0.0; };
  p.f = [](int, const Vec2&) { return 0.0; };
  p.g = [](int, const Vec2& x) {
    const double s = x.x() + x.y();
    return 0.5 * (x.x() * x.x() + x.y() * x.y() * x.y()) *
               (0.5 * std::sin(s) + std::cos(s) / 3.0) -
           std::log(x.x() * x.x() + x.y() * x.y()) / 3.0;
  };
  p.piece_count = 4;
  p.phi = [](int m, const Vec2&) { return m <= 2 ? 1.0 : 0.0; };
  p.psi = [](int m, const Vec2& x, const Vec2& n) {
    switch (m) {
      case 1: return Vec2(M_PI * std::cos(2.0 * M_PI * x.x()), 0.0).dot(n);
      case 2:
        return Vec2(0.5 * std::sin(x.x()) + 0.25 * std::cos(x.x()) + x.y(), 0.0).dot(n);
      case 3:
      case 4: {
        const Vec2 jump((x.y() - 0.25) * (x.y() - 0.75) * (std::cos(x.x()) + 2.0 * x.x()),
                        (std::sin(x.x()) + x.x() * x.x()) * (2.0 * x.y() - 1.0));
        return jump.dot(n);
      }
      default: throw ConfigError("interface piece id out of range");
    }
  };
  return p;
}

} // namespace

ProblemSpec example_problem(int id) {
  switch (id) {
    case 1: return example1();
    case 2: return example2();
    case 3: return example3();
    case 4: return example4();
    case 5: return example5();
    case 6: return example6();
    case 7: return example7();
    default:
      throw ConfigError("unknown example id " + std::to_string(id) +
                        " (valid ids are 1..7)");
  }
}

// ---------------------------------------------------------------------------
// config files
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

Expression parse_expr(const json& node, const std::string& key) {
  if (!node.is_string())
    throw ConfigError("config field '" + key + "' must be an expression string");
  try {
    return Expression::parse(node.get<std::string>());
  } catch (const ExpressionError& err) {
    throw ConfigError("config field '" + key + "': " + err.what());
  }
}

Field1 scalar_field(const json& node, const std::string& key) {
  Expression e = parse_expr(node, key);
  return [e](const Vec2& x) { return e(x.x(), x.y()); };
}

std::pair<Field1, Field1> vector_field(const json& node, const std::string& key) {
  if (!node.is_array() || node.size() != 2)
    throw ConfigError("config field '" + key + "' must be a pair of expressions");
  return {scalar_field(node[0], key + "[0]"), scalar_field(node[1], key + "[1]")};
}

} // namespace

ProblemSpec load_problem(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open config file '" + config_path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("config file '" + config_path + "': " + err.what());
  }

  if (!root.is_object() || !root.contains("subdomains") ||
      !root["subdomains"].is_array() || root["subdomains"].empty())
    throw ConfigError("config must contain a non-empty 'subdomains' array");

  struct SubData {
    Field1 a, c, f;
    Field1 b1, b2;
    bool has_exact = false;
    Field1 u, gx, gy;
    bool has_grad = false;
  };
  const int n_sub = static_cast<int>(root["subdomains"].size());
  std::vector<SubData> subs(n_sub);
  std::vector<char> seen(n_sub + 1, 0);
  for (const auto& node : root["subdomains"]) {
    if (!node.contains("id") || !node["id"].is_number_integer())
      throw ConfigError("each subdomain needs an integer 'id'");
    const int id = node["id"].get<int>();
    if (id < 1 || id > n_sub || seen[id])
      throw ConfigError("subdomain ids must be 1..N and unique");
    seen[id] = 1;
    SubData& s = subs[id - 1];
    if (!node.contains("a")) throw ConfigError("subdomain " + std::to_string(id) +
                                               " needs a diffusion coefficient 'a'");
    s.a = scalar_field(node["a"], "a");
    s.c = node.contains("c") ? scalar_field(node["c"], "c") : zero1();
    s.f = node.contains("f") ? scalar_field(node["f"], "f") : zero1();
    if (node.contains("b")) {
      std::tie(s.b1, s.b2) = vector_field(node["b"], "b");
    } else {
      s.b1 = s.b2 = zero1();
    }
    if (node.contains("exact")) {
      const auto& ex = node["exact"];
      if (!ex.contains("u"))
        throw ConfigError("subdomain 'exact' block needs a field 'u'");
      s.u = scalar_field(ex["u"], "exact.u");
      s.has_exact = true;
      if (ex.contains("grad")) {
        std::tie(s.gx, s.gy) = vector_field(ex["grad"], "exact.grad");
        s.has_grad = true;
      }
    }
  }

  ProblemSpec p;
  p.name = root.value("name", std::string("config-problem"));
  p.subdomain_count = n_sub;
  const auto pick = [n_sub](int i) {
    if (i < 1 || i > n_sub)
      throw ConfigError("subdomain id " + std::to_string(i) + " out of range");
    return i - 1;
  };
  p.a = [subs, pick](int i, const Vec2& x) { return subs[pick(i)].a(x); };
  p.b = [subs, pick](int i, const Vec2& x) {
    return Vec2(subs[pick(i)].b1(x), subs[pick(i)].b2(x));
  };
  p.c = [subs, pick](int i, const Vec2& x) { return subs[pick(i)].c(x); };
  p.f = [subs, pick](int i, const Vec2& x) { return subs[pick(i)].f(x); };

  const bool all_exact = [&] {
    for (const auto& s : subs) {
      if (!s.has_exact) return false;
    }
    return true;
  }();
  const bool all_grad = all_exact && [&] {
    for (const auto& s : subs) {
      if (!s.has_grad) return false;
    }
    return true;
  }();
  if (all_exact) {
    p.has_exact = true;
    p.exact_u = [subs, pick](int i, const Vec2& x) { return subs[pick(i)].u(x); };
    if (all_grad) {
      p.exact_grad = [subs, pick](int i, const Vec2& x) {
        return Vec2(subs[pick(i)].gx(x), subs[pick(i)].gy(x));
      };
    }
  }

  if (root.contains("boundary")) {
    const auto& bd = root["boundary"];
    if (!bd.is_object() || !bd.contains("g"))
      throw ConfigError("'boundary' must be an object with a field 'g'");
    const Field1 g = scalar_field(bd["g"], "boundary.g");
    p.g = [g](int, const Vec2& x) { return g(x); };
  } else if (all_exact) {
    p.g = [subs, pick](int i, const Vec2& x) { return subs[pick(i)].u(x); };
  } else {
    throw ConfigError("config needs 'boundary.g' (or exact solutions to derive it)");
  }

  if (root.contains("interfaces")) {
    const auto& arr = root["interfaces"];
    if (!arr.is_array()) throw ConfigError("'interfaces' must be an array");
    const int n_pieces = static_cast<int>(arr.size());
    struct PieceData {
      Field1 phi;
      Field1 psi_scalar;
      Field1 psi_x, psi_y;
      bool vector = false;
    };
    std::vector<PieceData> pieces(n_pieces);
    std::vector<char> piece_seen(n_pieces + 1, 0);
    for (const auto& node : arr) {
      if (!node.contains("id") || !node["id"].is_number_integer())
        throw ConfigError("each interface piece needs an integer 'id'");
      const int id = node["id"].get<int>();
      if (id < 1 || id > n_pieces || piece_seen[id])
        throw ConfigError("interface piece ids must be 1..M and unique");
      piece_seen[id] = 1;
      PieceData& pd = pieces[id - 1];
      pd.phi = node.contains("phi") ? scalar_field(node["phi"], "phi") : zero1();
      if (node.contains("psi_vector")) {
        std::tie(pd.psi_x, pd.psi_y) = vector_field(node["psi_vector"], "psi_vector");
        pd.vector = true;
      } else if (node.contains("psi")) {
        pd.psi_scalar = scalar_field(node["psi"], "psi");
      } else {
        pd.psi_scalar = zero1();
      }
    }
    p.piece_count = n_pieces;
    const auto pick_piece = [n_pieces](int m) {
      if (m < 1 || m > n_pieces)
        throw ConfigError("interface piece id " + std::to_string(m) + " out of range");
      return m - 1;
    };
    p.phi = [pieces, pick_piece](int m, const Vec2& x) {
      return pieces[pick_piece(m)].phi(x);
    };
    p.psi = [pieces, pick_piece](int m, const Vec2& x, const Vec2& n) {
      const PieceData& pd = pieces[pick_piece(m)];
      if (pd.vector) return Vec2(pd.psi_x(x), pd.psi_y(x)).dot(n);
      return pd.psi_scalar(x);
    };
  } else if (all_exact && all_grad) {
    // derive jump data from the exact branches (plus side = subdomain 1)
    p.any_piece = true;
    p.phi = [subs](int, const Vec2& x) { return subs[0].u(x) - subs[1].u(x); };
    p.psi = [subs](int, const Vec2& x, const Vec2& n) {
      const auto conormal = [&](const SubData& s) {
        const Vec2 flux(s.a(x) * s.gx(x) - s.b1(x) * s.u(x),
                        s.a(x) * s.gy(x) - s.b2(x) * s.u(x));
        return flux.dot(n);
      };
      return conormal(subs[0]) - conormal(subs[1]);
    };
  }

  if (root.contains("mesh")) {
    const auto& mesh = root["mesh"];
    if (mesh.contains("file")) {
      p.mesh_recipe.kind = MeshRecipe::Kind::import_required;
      p.mesh_recipe.file = mesh["file"].get<std::string>();
    } else if (mesh.contains("structured")) {
      const auto& st = mesh["structured"];
      p.mesh_recipe.kind = MeshRecipe::Kind::structured;
      p.mesh_recipe.n = st.value("n", 4);
      if (st.contains("square")) {
        const auto& sq = st["square"];
        if (!sq.is_array() || sq.size() != 4)
          throw ConfigError("'mesh.structured.square' must be [x0, x1, y0, y1]");
        p.mesh_recipe.square = InterfaceSquare{sq[0].get<double>(), sq[1].get<double>(),
                                               sq[2].get<double>(), sq[3].get<double>()};
      }
    } else {
      throw ConfigError("'mesh' must contain either 'file' or 'structured'");
    }
  } else {
    p.mesh_recipe.kind = MeshRecipe::Kind::import_required;
  }
  return p;
}

Mesh recipe_mesh(const ProblemSpec& problem,
                 const std::optional<std::string>& mesh_file) {
  if (mesh_file) return Mesh::load(*mesh_file);
  if (problem.mesh_recipe.file) return Mesh::load(*problem.mesh_recipe.file);
  if (problem.mesh_recipe.kind == MeshRecipe::Kind::structured)
    return Mesh::structured(problem.mesh_recipe.n, problem.mesh_recipe.square);
  throw ConfigError("problem '" + problem.name +
                    "' has a curved interface: a fitted mesh file must be "
                    "supplied (--mesh)");
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

std::string ValidationReport::summary() const {
  if (ok) return "problem/mesh validation passed";
  std::ostringstream out;
  out << "problem/mesh validation found " << issues.size() << " issue(s):";
  for (const auto& issue : issues) out << "\n  - " << issue;
  return out.str();
}

ValidationReport validate_problem(const ProblemSpec& problem, const Mesh& mesh) {
  ValidationReport report;
  const auto complain = [&report](const std::string& what) {
    report.ok = false;
    report.issues.push_back(what);
  };

  if (mesh.subdomain_count() > problem.subdomain_count)
    complain("mesh uses subdomain ids beyond the problem definition");
  if (mesh.interface_piece_count() > 0 && !problem.any_piece &&
      mesh.interface_piece_count() > problem.piece_count)
    complain("mesh has interface pieces without data");
  if (mesh.interface_piece_count() > 0 && (!problem.phi || !problem.psi))
    complain("mesh has interface edges but the problem carries no jump data");
  if (mesh.boundary_edge_count() > 0 && !problem.g)
    complain("no Dirichlet boundary data");
  if (!problem.a) complain("no diffusion coefficient");

  // ellipticity at interior quadrature points
  if (problem.a && mesh.subdomain_count() <= problem.subdomain_count) {
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const QuadRule rule = cell_quadrature(mesh.geometry(t), 2);
      const int sub = mesh.triangle(t).subdomain;
      for (const Vec2& x : rule.points) {
        if (!(problem.a(sub, x) > 0.0)) {
          complain("diffusion coefficient is not positive on subdomain " +
                   std::to_string(sub));
          break;
        }
      }
    }
  }

  // consistency of prescribed data with the exact branches
  if (problem.has_exact && problem.exact_grad && problem.phi && problem.psi) {
    double worst_phi = 0.0, worst_psi = 0.0;
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const MeshEdge& edge = mesh.edge(e);
      if (edge.kind != EdgeKind::interface) continue;
      const int plus = mesh.triangle(edge.plus_tri).subdomain;
      const int other_tri =
          edge.plus_tri == edge.tris[0] ? edge.tris[1] : edge.tris[0];
      const int minus = mesh.triangle(other_tri).subdomain;
      const auto pts = mesh.edge_points(e);
      const QuadRule rule = edge_quadrature(pts[0], pts[1], 3);
      for (const Vec2& x : rule.points) {
        const double phi_exact =
            problem.exact_u(plus, x) - problem.exact_u(minus, x);
        worst_phi = std::max(worst_phi,
                             std::abs(problem.phi(edge.piece, x) - phi_exact));
        const auto conormal = [&](int side) {
          const Vec2 bb = problem.b ? problem.b(side, x) : Vec2::Zero();
          const Vec2 flux = problem.a(side, x) * problem.exact_grad(side, x) -
                            bb * problem.exact_u(side, x);
          return flux.dot(edge.normal);
        };
        const double psi_exact = conormal(plus) - conormal(minus);
        worst_psi = std::max(
            worst_psi, std::abs(problem.psi(edge.piece, x, edge.normal) - psi_exact));
      }
    }
    if (worst_phi > 1e-8)
      complain("prescribed solution jump disagrees with the exact branches (max " +
               std::to_string(worst_phi) + ")");
    if (worst_psi > 1e-8)
      complain("prescribed flux jump disagrees with the exact branches (max " +
               std::to_string(worst_psi) + ")");
  }

  // boundary data versus exact trace
  if (problem.has_exact && problem.g) {
    double worst = 0.0;
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const MeshEdge& edge = mesh.edge(e);
      if (edge.kind != EdgeKind::boundary) continue;
      const int sub = mesh.triangle(edge.plus_tri).subdomain;
      const auto pts = mesh.edge_points(e);
      const QuadRule rule = edge_quadrature(pts[0], pts[1], 3);
      for (const Vec2& x : rule.points) {
        worst = std::max(worst, std::abs(problem.g(sub, x) - problem.exact_u(sub, x)));
      }
    }
    if (worst > 1e-8)
      complain("boundary data disagrees with the exact solution trace (max " +
               std::to_string(worst) + ")");
  }
  return report;
}

} // namespace pdwg
