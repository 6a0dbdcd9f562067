#include "curvlab/curvature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace curvlab {

namespace {

std::size_t flat(int n, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

// Symmetry orbit of an index quadruple: both antisymmetries and the pair
// symmetry generate at most 8 signed images.
struct OrbitEntry {
  int i, j, k, l;
  double sign;
};

std::array<OrbitEntry, 8> orbit(int i, int j, int k, int l) {
  return {{{i, j, k, l, 1.0},
           {j, i, k, l, -1.0},
           {i, j, l, k, -1.0},
           {j, i, l, k, 1.0},
           {k, l, i, j, 1.0},
           {l, k, i, j, -1.0},
           {k, l, j, i, -1.0},
           {l, k, j, i, 1.0}}};
}

}  // namespace

CurvTensor CurvTensor::zero(int n) {
  if (n < 0) throw WrongDimension("negative dimension");
  CurvTensor r;
  r.n_ = n;
  r.comp_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  return r;
}

CurvTensor CurvTensor::from_components(int n, std::vector<double> comp,
                                       double tol) {
  CurvTensor r = from_components_unchecked(n, std::move(comp));
  r.validate(tol);
  return r;
}

CurvTensor CurvTensor::from_components_unchecked(int n,
                                                 std::vector<double> comp) {
  if (n < 0) throw WrongDimension("negative dimension");
  if (comp.size() != static_cast<std::size_t>(n) * n * n * n)
    throw WrongDimension("component array size is not n^4");
  CurvTensor r;
  r.n_ = n;
  r.comp_ = std::move(comp);
  return r;
}

double CurvTensor::at(int i, int j, int k, int l) const {
  for (int idx : {i, j, k, l})
    if (idx < 0 || idx >= n_) throw IndexOutOfRange("tensor index out of range");
  return (*this)(i, j, k, l);
}

double CurvTensor::sup() const {
  double m = 0.0;
  for (double v : comp_) m = std::max(m, std::abs(v));
  return m;
}

double CurvTensor::symmetry_residual() const {
  const int n = n_;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = (*this)(i, j, k, l);
          worst = std::max(worst, std::abs(v + (*this)(j, i, k, l)));
          worst = std::max(worst, std::abs(v + (*this)(i, j, l, k)));
          worst = std::max(worst, std::abs(v - (*this)(k, l, i, j)));
          worst = std::max(worst,
                           std::abs(v + (*this)(i, k, l, j) + (*this)(i, l, j, k)));
        }
  return worst;
}

void CurvTensor::validate(double tol) const {
  const double res = symmetry_residual();
  if (!within(res, tol, sup())) {
    std::ostringstream os;
    os << "curvature symmetry violated: residual " << res;
    throw SymmetryViolation(os.str());
  }
}

CurvTensor make_curvature(int n, const std::vector<CurvEntry>& entries,
                          double tol) {
  if (n < 2) throw WrongDimension("curvature tensor needs dimension >= 2");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> comp(static_cast<std::size_t>(n) * n * n * n, nan);
  for (const CurvEntry& e : entries) {
    for (int idx : {e.i, e.j, e.k, e.l})
      if (idx < 0 || idx >= n) throw IndexOutOfRange("entry index out of range");
    for (const OrbitEntry& o : orbit(e.i, e.j, e.k, e.l)) {
      double& slot = comp[flat(n, o.i, o.j, o.k, o.l)];
      const double v = o.sign * e.value;
      if (std::isnan(slot)) {
        slot = v;
      } else if (!within(std::abs(slot - v), tol, std::abs(v))) {
        std::ostringstream os;
        os << "conflicting assignment for component (" << o.i << "," << o.j
           << "," << o.k << "," << o.l << "): " << slot << " vs " << v;
        throw SymmetryViolation(os.str());
      }
    }
  }
  for (double& v : comp)
    if (std::isnan(v)) v = 0.0;
  return CurvTensor::from_components(n, std::move(comp), tol);
}

CurvTensor constant_curvature(int n, double c) {
  if (n < 2) throw WrongDimension("constant curvature needs dimension >= 2");
  std::vector<double> comp(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      comp[flat(n, i, j, j, i)] = c;
      comp[flat(n, i, j, i, j)] = -c;
    }
  return CurvTensor::from_components_unchecked(n, std::move(comp));
}

CurvTensor diagonal_type(int n, const Mat& K) {
  if (K.rows() != n || K.cols() != n)
    throw WrongDimension("sectional matrix must be n x n");
  std::vector<double> comp(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double k = 0.5 * (K(i, j) + K(j, i));
      comp[flat(n, i, j, j, i)] = k;
      comp[flat(n, i, j, i, j)] = -k;
    }
  return CurvTensor::from_components_unchecked(n, std::move(comp));
}

CurvTensor direct_sum(const CurvTensor& a, const CurvTensor& b) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  if (na == 0) return b;
  if (nb == 0) return a;
  std::vector<double> comp(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < na; ++l)
          comp[flat(n, i, j, k, l)] = a(i, j, k, l);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l)
          comp[flat(n, na + i, na + j, na + k, na + l)] = b(i, j, k, l);
  return CurvTensor::from_components_unchecked(n, std::move(comp));
}

CurvTensor warped_product_point(double f, double fp, double c, int m) {
  if (f <= 0.0) throw NonPositiveWarp("warping value must be positive");
  if (m < 2) throw BadRange("base dimension must be >= 2");
  const int n = m + 1;
  const double kappa = (c - fp * fp) / (f * f);
  Mat K = Mat::Constant(n, n, kappa);
  for (int j = 1; j < n; ++j) {
    K(0, j) = -kappa;
    K(j, 0) = -kappa;
  }
  return diagonal_type(n, K);
}

CurvTensor three_dim_from_ricci(const Mat& rho, double tol) {
  if (rho.rows() != 3 || rho.cols() != 3)
    throw WrongDimension("Ricci matrix must be 3 x 3");
  if (!within(sup_norm(Mat(rho - rho.transpose())), tol, sup_norm(rho)))
    throw NotSymmetric("Ricci matrix must be symmetric");
  const double tau = rho.trace();
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  std::vector<double> comp(81, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          comp[flat(3, i, j, k, l)] =
              rho(i, l) * d(j, k) + rho(j, k) * d(i, l) - rho(i, k) * d(j, l) -
              rho(j, l) * d(i, k) -
              0.5 * tau * (d(i, l) * d(j, k) - d(i, k) * d(j, l));
  return CurvTensor::from_components_unchecked(3, std::move(comp));
}

DerivedCurvature derive(const CurvTensor& R) {
  const int n = R.dim();
  DerivedCurvature out;
  out.rho = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += R(a, i, j, a);
      out.rho(i, j) = s;
    }
  out.tau = out.rho.trace();
  out.checkR = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) s += R(i, a, b, c) * R(j, a, b, c);
      out.checkR(i, j) = s;
      out.checkR(j, i) = s;
    }
  out.checkRho = out.rho * out.rho;
  out.RofRho = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += R(i, a, b, j) * out.rho(a, b);
      out.RofRho(i, j) = s;
    }
  out.normR2 = out.checkR.trace();
  out.normRho2 = out.checkRho.trace();
  return out;
}

double sectional(const CurvTensor& R, const Vec& u, const Vec& v, double tol) {
  const int n = R.dim();
  if (u.size() != n || v.size() != n)
    throw WrongDimension("plane vectors must match tensor dimension");
  const double gram = u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
  if (gram <= tol) throw DegeneratePlane("plane spanned by u, v is degenerate");
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (v[j] == 0.0) continue;
      double inner = 0.0;
      for (int k = 0; k < n; ++k) {
        if (v[k] == 0.0) continue;
        for (int l = 0; l < n; ++l) inner += R(i, j, k, l) * v[k] * u[l];
      }
      num += u[i] * v[j] * inner;
    }
  }
  return num / gram;
}

Mat jacobi(const CurvTensor& R, const Vec& x) {
  const int n = R.dim();
  if (x.size() != n)
    throw WrongDimension("direction must match tensor dimension");
  Mat J = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        if (x[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) s += R(a, i, j, b) * x[i] * x[j];
      }
      J(a, b) = s;
    }
  return 0.5 * (J + J.transpose());
}

Mat berger_residual(const CurvTensor& R) {
  if (R.dim() != 4) throw WrongDimension("identity is four-dimensional");
  const DerivedCurvature d = derive(R);
  const Mat id = Mat::Identity(4, 4);
  return (d.checkR - d.normR2 / 4.0 * id) - 2.0 * (d.checkRho - d.normRho2 / 4.0 * id) -
         2.0 * (d.RofRho - d.normRho2 / 4.0 * id) + d.tau * (d.rho - d.tau / 4.0 * id);
}

double semisym_derivation_norm(const CurvTensor& R) {
  const int n = R.dim();
  // Endomorphisms E[i][j] = R(e_i, e_j) with (E_ij)_ab = comp(i,j,b,a).
  std::vector<Mat> E(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat m(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a, b) = R(i, j, b, a);
      E[static_cast<std::size_t>(i) * n + j] = std::move(m);
    }
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Mat& Eij = E[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const Mat& Ekl = E[static_cast<std::size_t>(k) * n + l];
          Mat D = Eij * Ekl - Ekl * Eij;
          for (int a = 0; a < n; ++a) {
            const double wk = R(i, j, k, a);
            if (wk != 0.0) D -= wk * E[static_cast<std::size_t>(a) * n + l];
            const double wl = R(i, j, l, a);
            if (wl != 0.0) D -= wl * E[static_cast<std::size_t>(k) * n + a];
          }
          worst = std::max(worst, sup_norm(D));
        }
    }
  return worst;
}

CurvOperator curvature_operator(const CurvTensor& R, double rank_tol) {
  const int n = R.dim();
  CurvOperator op;
  op.dim2 = n * (n - 1) / 2;
  op.rank_tol = rank_tol;
  op.mat = Mat::Zero(op.dim2, op.dim2);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(op.dim2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  for (int p = 0; p < op.dim2; ++p)
    for (int q = 0; q < op.dim2; ++q)
      op.mat(p, q) = -R(pairs[p].first, pairs[p].second, pairs[q].first,
                        pairs[q].second);
  Eigen::SelfAdjointEigenSolver<Mat> es(op.mat);
  op.singular_values.resize(op.dim2);
  for (int i = 0; i < op.dim2; ++i)
    op.singular_values[i] = std::abs(es.eigenvalues()[i]);
  std::sort(op.singular_values.rbegin(), op.singular_values.rend());
  const double cutoff =
      rank_tol * std::max(1.0, op.singular_values.empty() ? 0.0
                                                          : op.singular_values[0]);
  op.rank = 0;
  for (double s : op.singular_values)
    if (s > cutoff) ++op.rank;
  return op;
}

}  // namespace curvlab
