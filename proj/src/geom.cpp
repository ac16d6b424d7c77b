#include "unirat/geom.hpp"

namespace unirat {

bool is_zero_vector(const Point<Rational>& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

bool same_point(const Point<Rational>& a, const Point<Rational>& b) {
  if (a.size() != b.size() || is_zero_vector(a) || is_zero_vector(b)) return false;
  // a_i b_j = a_j b_i for all pairs, checked against one nonzero index.
  std::size_t k = 0;
  while (a[k].is_zero()) ++k;
  if (b[k].is_zero()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] * b[k] != b[i] * a[k]) return false;
  return true;
}

namespace {

Matrix<Rational> rows_matrix(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
  Matrix<Rational> m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

LinearSubspace LinearSubspace::from_basis(const Matrix<Rational>& basis) {
  if (rank(basis) != basis.rows()) fail(ErrorKind::InvalidArgument, "spanning vectors are dependent");
  LinearSubspace s;
  s.ambient_ = basis.cols();
  s.basis_ = basis;
  s.equations_ = rows_matrix(kernel_basis(basis), basis.cols());
  return s;
}

LinearSubspace LinearSubspace::from_equations(const Matrix<Rational>& equations) {
  if (rank(equations) != equations.rows()) fail(ErrorKind::InvalidArgument, "cutting equations are dependent");
  LinearSubspace s;
  s.ambient_ = equations.cols();
  s.equations_ = equations;
  s.basis_ = rows_matrix(kernel_basis(equations), equations.cols());
  return s;
}

LinearSubspace LinearSubspace::coordinate(std::size_t n, const std::vector<std::size_t>& zero_coords) {
  Matrix<Rational> eq(zero_coords.size(), n);
  for (std::size_t k = 0; k < zero_coords.size(); ++k) {
    if (zero_coords[k] >= n) fail(ErrorKind::InvalidArgument, "coordinate index out of range");
    eq(k, zero_coords[k]) = 1;
  }
  return from_equations(eq);
}

std::vector<Point<Rational>> LinearSubspace::basis_vectors() const {
  std::vector<Point<Rational>> out;
  for (std::size_t i = 0; i < basis_.rows(); ++i) out.push_back(basis_.row(i));
  return out;
}

bool LinearSubspace::contains(const Point<Rational>& v) const {
  if (v.size() != ambient_) return false;
  for (const auto& x : equations_.apply(v))
    if (!x.is_zero()) return false;
  return true;
}

QuadricHypersurface::QuadricHypersurface(MPoly<Rational> form) : form_(std::move(form)), gram_(gram_matrix(form_)) {}

LinearSubspace tangent_space(const MPoly<Rational>& f, const Point<Rational>& s) {
  if (!evaluate(f, s).is_zero()) fail(ErrorKind::PointNotOnVariety, "tangent_space at a point off the hypersurface");
  const auto g = gradient_at(f, s);
  if (is_zero_vector(g)) fail(ErrorKind::SingularPoint, "gradient vanishes");
  return LinearSubspace::from_equations(Matrix<Rational>(1, g.size(), g));
}

namespace {

void check_smooth_point(const QuadricHypersurface& q, const Point<Rational>& p) {
  if (p.size() != q.nvars()) fail(ErrorKind::ArityMismatch, "point length differs from quadric arity");
  if (!q.value(p).is_zero()) fail(ErrorKind::PointNotOnQuadric, "base point is not on the quadric");
  if (is_zero_vector(q.gram().apply(p))) fail(ErrorKind::SingularBasePoint, "base point is singular on the quadric");
}

bool independent(const std::vector<Point<Rational>>& vs) {
  if (vs.empty()) return true;
  return rank(rows_matrix(vs, vs.front().size())) == vs.size();
}

}  // namespace

Slp stereographic_param(const QuadricHypersurface& q, const Point<Rational>& p, const LinearSubspace& chart,
                        bool affine) {
  check_smooth_point(q, p);
  if (chart.ambient() != q.nvars() || chart.dimension() + 1 != q.nvars())
    fail(ErrorKind::InvalidArgument, "chart must be a hyperplane of the ambient space");
  if (chart.contains(p)) fail(ErrorKind::InvalidArgument, "chart contains the base point");
  const auto basis = chart.basis_vectors();
  const std::size_t nin = affine ? basis.size() - 1 : basis.size();
  SlpBuilder b(nin, std::vector<Rational>(nin, Rational(1)));
  Point<Traced> d(q.nvars(), Traced(0));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Traced coef = affine ? (k == 0 ? Traced(1) : b.input(k - 1)) : b.input(k);
    for (std::size_t j = 0; j < q.nvars(); ++j)
      if (!basis[k][j].is_zero()) d[j] = d[j] + coef * Traced(basis[k][j]);
  }
  Point<Traced> pt(p.begin(), p.end());
  return b.finish(stereographic_point(q.gram(), pt, d), {"stereographic", {}});
}

ConeData cone_over(const MPoly<Rational>& f, const Matrix<Rational>& base_basis, const Point<Rational>& vertex) {
  const std::size_t m1 = f.nvars();
  if (base_basis.rows() != m1) fail(ErrorKind::ArityMismatch, "need one base vector per variable of F");
  if (base_basis.cols() != m1 + 1 || vertex.size() != m1 + 1)
    fail(ErrorKind::InvalidArgument, "a point vertex needs the base in a hyperplane of the ambient space");
  Matrix<Rational> t(m1 + 1, m1 + 1);
  for (std::size_t j = 0; j < m1; ++j)
    for (std::size_t i = 0; i <= m1; ++i) t(i, j) = base_basis(j, i);
  for (std::size_t i = 0; i <= m1; ++i) t(i, m1) = vertex[i];
  if (rank(t) != m1 + 1) fail(ErrorKind::VertexOnBase, "vertex lies in the span of the base");
  // z = T^{-1} y; the lift is F(z_0..z_{m}).
  Matrix<Rational> aug(m1 + 1, 2 * (m1 + 1));
  for (std::size_t i = 0; i <= m1; ++i) {
    for (std::size_t j = 0; j <= m1; ++j) aug(i, j) = t(i, j);
    aug(i, m1 + 1 + i) = 1;
  }
  auto e = rref(aug);
  Matrix<Rational> sub(m1, m1 + 1);
  for (std::size_t i = 0; i < m1; ++i)
    for (std::size_t j = 0; j <= m1; ++j) sub(i, j) = e.reduced(i, m1 + 1 + j);
  ConeData out;
  out.vertex = vertex;
  out.lifted = substitute_linear(f, sub);
  out.change_of_basis = std::move(t);
  return out;
}

ConeData cone_over(const MPoly<Rational>& f) {
  const std::size_t m1 = f.nvars();
  Matrix<Rational> base(m1, m1 + 1);
  for (std::size_t i = 0; i < m1; ++i) base(i, i) = 1;
  Point<Rational> v(m1 + 1, Rational(0));
  v[m1] = 1;
  return cone_over(f, base, v);
}

namespace {

std::size_t projection_index(const Point<Rational>& p) {
  if (is_zero_vector(p)) fail(ErrorKind::InvalidArgument, "projection centre must be nonzero");
  std::size_t k = p.size() - 1;
  while (p[k].is_zero()) --k;
  return k;
}

}  // namespace

Slp project_from_point(const Point<Rational>& p) {
  const std::size_t k = projection_index(p);
  SlpBuilder b(p.size(), std::vector<Rational>(p.size(), Rational(1)));
  std::vector<Traced> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == k) continue;
    out.push_back(b.input(i) - Traced(p[i] / p[k]) * b.input(k));
  }
  return b.finish(out, {"projection", {}});
}

Point<Rational> project_point(const Point<Rational>& p, const Point<Rational>& y) {
  if (y.size() != p.size()) fail(ErrorKind::ArityMismatch, "point length differs from projection centre");
  const std::size_t k = projection_index(p);
  Point<Rational> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (i != k) out.push_back(y[i] - p[i] / p[k] * y[k]);
  if (is_zero_vector(out)) throw PoleHit(-1);
  return out;
}

Slp conic_param(const QuadricHypersurface& q, const LinearSubspace& plane, const Point<Rational>& pt) {
  if (plane.ambient() != q.nvars() || plane.dimension() != 3)
    fail(ErrorKind::InvalidArgument, "conic_param needs a plane (three spanning vectors)");
  if (!plane.contains(pt)) fail(ErrorKind::InvalidArgument, "conic point is not in the plane");
  const auto basis = plane.basis_vectors();
  Matrix<Rational> restricted(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) restricted(i, j) = q.bilinear(basis[i], basis[j]);
  if (det_fraction_free(restricted).is_zero()) fail(ErrorKind::DegenerateConic, "quadric restricted to the plane is singular");
  if (!q.value(pt).is_zero()) fail(ErrorKind::PointNotOnQuadric, "conic point is not on the quadric");
  // Directions w0 + t w1 in the span of the first basis pair independent with pt.
  std::size_t a = 0, c = 1;
  bool found = false;
  for (std::size_t i = 0; i < 3 && !found; ++i)
    for (std::size_t j = i + 1; j < 3 && !found; ++j)
      if (independent({pt, basis[i], basis[j]})) {
        a = i;
        c = j;
        found = true;
      }
  SlpBuilder b(1, {Rational(1)});
  const Traced t = b.input(0);
  Point<Traced> d(q.nvars(), Traced(0));
  for (std::size_t j = 0; j < q.nvars(); ++j) d[j] = Traced(basis[a][j]) + t * Traced(basis[c][j]);
  Point<Traced> p(pt.begin(), pt.end());
  return b.finish(stereographic_point(q.gram(), p, d), {"conic", {}});
}

}  // namespace unirat
