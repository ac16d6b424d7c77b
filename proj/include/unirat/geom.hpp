#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "unirat/errors.hpp"
#include "unirat/matrix.hpp"
#include "unirat/mpoly.hpp"
#include "unirat/rational.hpp"
#include "unirat/slp.hpp"
#include "unirat/traced.hpp"

namespace unirat {

// Homogeneous coordinates. Nothing here normalises the scale; use
// same_point() to compare.
template <class K>
using Point = std::vector<K>;

bool same_point(const Point<Rational>& a, const Point<Rational>& b);
bool is_zero_vector(const Point<Rational>& v);

// A linear subspace of k^n, kept both as independent spanning rows and as
// independent cutting equations.
class LinearSubspace {
 public:
  LinearSubspace() = default;
  static LinearSubspace from_basis(const Matrix<Rational>& basis);
  static LinearSubspace from_equations(const Matrix<Rational>& equations);
  // {x_i = 0 for i in zero_coords} in k^n.
  static LinearSubspace coordinate(std::size_t n, const std::vector<std::size_t>& zero_coords);

  std::size_t ambient() const { return ambient_; }
  std::size_t dimension() const { return basis_.rows(); }  // projective dimension + 1
  const Matrix<Rational>& basis() const { return basis_; }
  const Matrix<Rational>& equations() const { return equations_; }
  std::vector<Point<Rational>> basis_vectors() const;
  bool contains(const Point<Rational>& v) const;

 private:
  std::size_t ambient_ = 0;
  Matrix<Rational> basis_;
  Matrix<Rational> equations_;
};

// Symmetric bilinear form value a^T G b; G may hold constants while the
// vectors are traced.
template <class K, class G>
K polar(const Matrix<G>& g, const Point<K>& a, const Point<K>& b) {
  if (a.size() != g.rows() || b.size() != g.cols()) fail(ErrorKind::ArityMismatch, "vector length differs from Gram size");
  K acc(0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (coeff_is_zero(a[i])) continue;
    K row(0);
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!coeff_is_zero(g(i, j))) row = row + K(g(i, j)) * b[j];
    acc = acc + a[i] * row;
  }
  return acc;
}

// A quadric hypersurface with its Gram matrix cached.
class QuadricHypersurface {
 public:
  explicit QuadricHypersurface(MPoly<Rational> form);
  const MPoly<Rational>& form() const { return form_; }
  const Matrix<Rational>& gram() const { return gram_; }
  std::size_t nvars() const { return form_.nvars(); }

  template <class K>
  K value(const Point<K>& x) const { return polar(gram_, x, x); }
  template <class K>
  K bilinear(const Point<K>& a, const Point<K>& b) const { return polar(gram_, a, b); }

 private:
  MPoly<Rational> form_;
  Matrix<Rational> gram_;
};

// Gradient of F at a point, over whichever field the point lives in. Only the
// first point.size() variables are differentiated; the rest are held at tail.
template <class K>
std::vector<K> gradient_at(const MPoly<Rational>& f, const Point<K>& point, const std::vector<K>& tail = {}) {
  std::vector<K> full = point;
  full.insert(full.end(), tail.begin(), tail.end());
  std::vector<K> g;
  g.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i)
    g.push_back(evaluate_with(partial_derivative(f, i), std::span<const K>(full), [](const Rational& c) { return K(c); }));
  return g;
}

// {y : grad F(s) . y = 0}. PointNotOnVariety unless F(s) = 0, SingularPoint if
// the gradient vanishes.
LinearSubspace tangent_space(const MPoly<Rational>& f, const Point<Rational>& s);

// Projection from p on the quadric: d -> q(d) p - 2 B(p, d) d, the second
// intersection of the line through p in direction d.
template <class K, class G>
Point<K> stereographic_point(const Matrix<G>& gram, const Point<K>& p, const Point<K>& d) {
  const K qd = polar(gram, d, d);
  const K two_b = K(2) * polar(gram, p, d);
  Point<K> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = qd * p[i] - two_b * d[i];
  return out;
}

// Stereographic parametrisation of Q from p, with directions taken in the
// hyperplane `chart` (d = sum v_i * chart basis_i). With affine = true the
// first chart coordinate is fixed to 1, leaving dim - 1 inputs.
Slp stereographic_param(const QuadricHypersurface& q, const Point<Rational>& p, const LinearSubspace& chart,
                        bool affine = false);

// Third intersection of a line with a cubic that already meets it doubly at
// `base`: g3 * base - g2 * dir for g(tau) = c(base + tau * dir). Variables of
// c beyond base.size() are held at `tail`. LineInsideCubic when g2 = g3 = 0.
template <class K>
Point<K> residual_point(const MPoly<Rational>& c, const Point<K>& base, const Point<K>& dir,
                        const std::vector<K>& tail = {}) {
  const UPoly<K> g = restrict_to_line(c, base, dir, tail);
  if (g.degree() > 3) fail(ErrorKind::InvalidArgument, "residual_point needs a cubic");
  if (!coeff_is_zero(g.coefficient(0)) || !coeff_is_zero(g.coefficient(1)))
    fail(ErrorKind::InvalidArgument, "line does not meet the cubic doubly at the base point");
  const K g2 = g.coefficient(2), g3 = g.coefficient(3);
  if (coeff_is_zero(g2) && coeff_is_zero(g3)) fail(ErrorKind::LineInsideCubic, "line lies on the cubic");
  Point<K> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = g3 * base[i] - g2 * dir[i];
  return out;
}

struct ConeData {
  Point<Rational> vertex;
  MPoly<Rational> lifted;  // in ambient coordinates
  // Columns: the base basis vectors, then the vertex. Ambient y = T z.
  Matrix<Rational> change_of_basis;
};

// Cone with a point vertex over {F = 0} in the hyperplane spanned by the rows
// of base_basis. The base has F.nvars() vectors in F.nvars() + 1 coordinates.
// VertexOnBase if the vertex lies in the base span.
ConeData cone_over(const MPoly<Rational>& f, const Matrix<Rational>& base_basis, const Point<Rational>& vertex);
// Normalised chart: base {x_last = 0}, vertex the last coordinate point.
ConeData cone_over(const MPoly<Rational>& f);

template <class K>
struct FiberQuadric {
  std::vector<Point<K>> basis;  // of L_s = T_s(q) cap T_s(c)
  Matrix<K> gram;               // q restricted to L_s in that basis
};

// The quadric of directions through s on {q = c = 0}. q must be a quadratic
// form in s.size() variables; c may carry extra variables held at tail.
// Zero tests use the sample values for traced points.
template <class K>
FiberQuadric<K> fiber_quadric(const MPoly<Rational>& q, const MPoly<Rational>& c, const Point<K>& s,
                              const std::vector<K>& tail = {}) {
  if (q.nvars() != s.size()) fail(ErrorKind::ArityMismatch, "quadric arity differs from point length");
  std::vector<K> full = s;
  full.insert(full.end(), tail.begin(), tail.end());
  auto embed = [](const Rational& r) { return K(r); };
  if (!coeff_is_zero(evaluate_with(q, std::span<const K>(s), embed)) ||
      !coeff_is_zero(evaluate_with(c, std::span<const K>(full), embed)))
    fail(ErrorKind::PointNotOnVariety, "fiber_quadric needs a point on both hypersurfaces");
  const auto gq = gradient_at(q, s);
  const auto gc = gradient_at(c, s, tail);
  auto all_zero = [](const std::vector<K>& v) {
    for (const auto& x : v)
      if (!coeff_is_zero(x)) return false;
    return true;
  };
  if (all_zero(gq) || all_zero(gc)) fail(ErrorKind::SingularPoint, "gradient vanishes at the base point");
  Matrix<K> m(2, s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    m(0, j) = gq[j];
    m(1, j) = gc[j];
  }
  if (rank(pivot_view(m)) < 2) fail(ErrorKind::TangentsCoincide, "tangent hyperplanes coincide");
  FiberQuadric<K> out;
  out.basis = kernel_basis_cramer(m);
  const QuadricHypersurface qh(q);
  const std::size_t r = out.basis.size();
  out.gram = Matrix<K>(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      out.gram(i, j) = qh.bilinear(out.basis[i], out.basis[j]);
      out.gram(j, i) = out.gram(i, j);
    }
  return out;
}

// Linear projection from p: after moving p to the last nonzero coordinate k,
// z_i = y_i - (p_i / p_k) y_k for i != k. Coordinate deletion when p is a
// coordinate point.
Slp project_from_point(const Point<Rational>& p);
// The same map applied to one point; PoleHit when y is a multiple of p.
Point<Rational> project_point(const Point<Rational>& p, const Point<Rational>& y);

// Degree-2 parametrisation t -> gamma(t) of the conic Q cap plane through pt.
// The plane is given by three spanning vectors. DegenerateConic unless q
// restricted to the plane has full rank.
Slp conic_param(const QuadricHypersurface& q, const LinearSubspace& plane, const Point<Rational>& pt);

}  // namespace unirat
