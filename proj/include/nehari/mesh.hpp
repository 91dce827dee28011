#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nehari {

/// Uniform 1D grid on (a,b) with n interior nodes and implicit zero
/// boundary values at both endpoints.
struct Mesh {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  double h = 0.0;

  Mesh() = default;
  Mesh(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
    if (!(b > a)) throw std::invalid_argument("Mesh: requires b > a");
    if (n < 2) throw std::invalid_argument("Mesh: requires n >= 2");
    h = (b - a) / (n + 1);
  }

  double length() const { return b - a; }
  /// Coordinate of interior node i (0-based), x in (a,b).
  double node(int i) const { return a + h * (i + 1); }

  bool operator==(const Mesh& o) const {
    return a == o.a && b == o.b && n == o.n;
  }
  bool operator!=(const Mesh& o) const { return !(*this == o); }
};

/// Nodal values of a piecewise-linear function vanishing on the boundary.
/// Only interior values are stored; the endpoint values are implicitly 0.
struct Field {
  Mesh mesh;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Mesh& m) : mesh(m), values(m.n, 0.0) {}
  Field(const Mesh& m, std::vector<double> v) : mesh(m), values(std::move(v)) {
    if (static_cast<int>(values.size()) != m.n)
      throw std::invalid_argument("Field: value count must equal mesh.n");
  }

  int size() const { return mesh.n; }
  double& operator[](int i) { return values[i]; }
  double operator[](int i) const { return values[i]; }

  /// Nodal value with ghost zeros: index -1 and n map to the boundary.
  double at(int i) const {
    if (i < 0 || i >= mesh.n) return 0.0;
    return values[i];
  }

  Field& operator*=(double c) {
    for (double& v : values) v *= c;
    return *this;
  }
  Field& operator+=(const Field& o) {
    check_same_mesh(o);
    for (int i = 0; i < size(); ++i) values[i] += o.values[i];
    return *this;
  }
  friend Field operator*(double c, Field f) {
    f *= c;
    return f;
  }
  friend Field operator+(Field f, const Field& g) {
    f += g;
    return f;
  }
  friend Field operator-(const Field& f, const Field& g) {
    f.check_same_mesh(g);
    Field r(f.mesh);
    for (int i = 0; i < f.size(); ++i) r[i] = f[i] - g[i];
    return r;
  }

  void check_same_mesh(const Field& o) const {
    if (mesh != o.mesh) throw std::invalid_argument("Field: mesh mismatch");
  }
};

inline double dot(const Field& f, const Field& g) {
  f.check_same_mesh(g);
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s;
}

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::fabs(v));
  return m;
}

inline void check_exponent(double r) {
  if (!(r > 1.0)) throw std::invalid_argument("exponent must satisfy r > 1");
}

/// ||u||_r^r by the composite trapezoid rule (boundary nodes contribute 0).
inline double lp_norm_pow(const Field& u, double r) {
  check_exponent(r);
  double s = 0.0;
  for (double v : u.values) s += std::pow(std::fabs(v), r);
  return u.mesh.h * s;
}

/// L^r norm of the nodal function.
inline double lp_norm(const Field& u, double r) {
  return std::pow(lp_norm_pow(u, r), 1.0 / r);
}

/// ||u'||_r^r with edge-constant gradients, u_0 = u_{n+1} = 0.
inline double grad_norm_pow(const Field& u, double r) {
  check_exponent(r);
  const double h = u.mesh.h;
  double s = 0.0;
  for (int j = 0; j <= u.mesh.n; ++j) {
    const double g = (u.at(j) - u.at(j - 1)) / h;
    s += std::pow(std::fabs(g), r);
  }
  return h * s;
}

/// W^{1,r}_0 norm of the nodal function.
inline double grad_norm(const Field& u, double r) {
  return std::pow(grad_norm_pow(u, r), 1.0 / r);
}

/// L2 distance between sign-aligned L2-normalized copies of f and g.
inline double normalized_l2_distance(const Field& f, const Field& g) {
  f.check_same_mesh(g);
  const double nf = lp_norm(f, 2.0), ng = lp_norm(g, 2.0);
  if (nf == 0.0 || ng == 0.0) return (nf == ng) ? 0.0 : 1.0;
  const double s = dot(f, g) >= 0.0 ? 1.0 : -1.0;
  double acc = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double d = f[i] / nf - s * g[i] / ng;
    acc += d * d;
  }
  return std::sqrt(f.mesh.h * acc);
}

/// Positive bump sin(pi (x-a)/(b-a)) sampled at interior nodes.
inline Field bump(const Mesh& m) {
  Field u(m);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < m.n; ++i)
    u[i] = std::sin(pi * (m.node(i) - m.a) / m.length());
  return u;
}

}  // namespace nehari
