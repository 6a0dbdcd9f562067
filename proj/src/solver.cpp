#include "curvlab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace curvlab {

namespace {

double k_numerator(const CurvTensor& R, const Vec& u, const Vec& v) {
  const int n = R.dim();
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (v[j] == 0.0) continue;
      double inner = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) inner += R(i, j, k, l) * v[k] * u[l];
      num += u[i] * v[j] * inner;
    }
  }
  return num;
}

// Scale-invariant objective; safe slightly off the manifold, which is where
// the finite-difference probes live.
double k_ratio(const CurvTensor& R, const Vec& u, const Vec& v) {
  const double gram = u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
  if (gram < 1e-14) return std::numeric_limits<double>::infinity();
  return k_numerator(R, u, v) / gram;
}

void gram_schmidt(Vec& u, Vec& v) {
  u.normalize();
  v -= u.dot(v) * u;
  v.normalize();
}

struct DescentResult {
  Vec u, v;
  double value;
  bool converged;
};

// Projected gradient descent on orthonormal pairs with Gram-Schmidt
// retraction and backtracking (halving) line search.
DescentResult descend(const CurvTensor& R, Vec u, Vec v, double grad_tol,
                      int max_iters) {
  const int n = R.dim();
  const double h = 1e-6;
  gram_schmidt(u, v);
  double f = k_ratio(R, u, v);
  bool converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    Vec gu(n), gv(n);
    for (int i = 0; i < n; ++i) {
      Vec up = u, um = u;
      up[i] += h;
      um[i] -= h;
      gu[i] = (k_ratio(R, up, v) - k_ratio(R, um, v)) / (2 * h);
      Vec vp = v, vm = v;
      vp[i] += h;
      vm[i] -= h;
      gv[i] = (k_ratio(R, u, vp) - k_ratio(R, u, vm)) / (2 * h);
    }
    // tangent projection for the orthonormal 2-frame {u, v}
    const double a = u.dot(gu), bsym = 0.5 * (u.dot(gv) + v.dot(gu)),
                 c = v.dot(gv);
    Vec tu = gu - a * u - bsym * v;
    Vec tv = gv - bsym * u - c * v;
    const double gnorm = std::sqrt(tu.squaredNorm() + tv.squaredNorm());
    if (gnorm <= grad_tol) {
      converged = true;
      break;
    }
    double step = 1.0 / std::max(1.0, gnorm);
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      Vec nu = u - step * tu;
      Vec nv = v - step * tv;
      gram_schmidt(nu, nv);
      const double nf = k_ratio(R, nu, nv);
      if (nf < f - 1e-4 * step * gnorm * gnorm) {
        u = std::move(nu);
        v = std::move(nv);
        f = nf;
        moved = true;
        break;
      }
    }
    if (!moved) {
      // line search stalled: at numerical resolution of the objective
      converged = gnorm <= std::max(grad_tol, 1e-5 * std::max(1.0, std::abs(f)));
      break;
    }
  }
  return {std::move(u), std::move(v), f, converged};
}

// Deterministic in-plane gauge: u points along the lowest-index coordinate
// direction meeting the plane; the first significant component of v is
// positive.
void canonicalize_plane(Vec& u, Vec& v) {
  const int n = static_cast<int>(u.size());
  const Mat P = u * u.transpose() + v * v.transpose();
  Vec nu;
  for (int k = 0; k < n; ++k) {
    Vec w = P.col(k);
    if (w.norm() > 1e-6) {
      nu = w.normalized();
      break;
    }
  }
  Vec nv;
  for (int m = 0; m < n; ++m) {
    Vec w = P.col(m) - nu * nu.dot(P.col(m));
    if (w.norm() > 1e-8) {
      nv = w.normalized();
      break;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(nv[i]) > 1e-8) {
      if (nv[i] < 0) nv = -nv;
      break;
    }
  }
  u = nu;
  v = nv;
}

}  // namespace

PlaneMin inf_sectional(const CurvTensor& R, int restarts, std::uint64_t seed,
                       double tol) {
  const int n = R.dim();
  if (n < 2) throw WrongDimension("need dimension >= 2");
  const double scale = std::max(1.0, R.sup());
  const double grad_tol = tol * scale;
  const int max_iters = 10000;

  std::vector<DescentResult> results;
  // coordinate planes first: cheap certificates and a guaranteed upper bound
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec u = Vec::Zero(n), v = Vec::Zero(n);
      u[i] = 1.0;
      v[j] = 1.0;
      results.push_back(descend(R, u, v, grad_tol, max_iters));
    }
  for (int r = 0; r < restarts; ++r) {
    auto rng = substream(seed, static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = gauss(rng);
      v[i] = gauss(rng);
    }
    if (u.norm() < 1e-8 || v.norm() < 1e-8) continue;
    results.push_back(descend(R, u, v, grad_tol, max_iters));
  }

  bool any_converged = false;
  for (const auto& res : results) any_converged |= res.converged;
  if (!any_converged)
    throw NonConvergence("no descent run reached the gradient tolerance");

  int best = 0;
  for (int i = 1; i < static_cast<int>(results.size()); ++i)
    if (results[i].value < results[best].value) best = i;

  PlaneMin out;
  out.u = results[best].u;
  out.v = results[best].v;
  out.value = results[best].value;
  out.restarts_used = static_cast<int>(results.size());
  out.converged = true;
  canonicalize_plane(out.u, out.v);

  double second = std::numeric_limits<double>::infinity();
  const double cluster = 1e-8 * scale;
  for (const auto& res : results)
    if (res.value - out.value > cluster) second = std::min(second, res.value);
  out.spread = second - out.value;  // +inf when all runs agree
  return out;
}

namespace {

Mat exp_skew(const Mat& S) {
  const int n = static_cast<int>(S.rows());
  double nrm = S.cwiseAbs().sum();
  int squarings = 0;
  while (nrm > 0.25 && squarings < 60) {
    nrm *= 0.5;
    ++squarings;
  }
  Mat A = S / std::ldexp(1.0, squarings);
  Mat E = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int i = 1; i <= 18; ++i) {
    term = term * A / static_cast<double>(i);
    E += term;
  }
  for (int i = 0; i < squarings; ++i) E = E * E;
  return E;
}

Mat skew_from(const Vec& theta) {
  Mat S = Mat::Zero(4, 4);
  int idx = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j, ++idx) {
      S(i, j) = theta[idx];
      S(j, i) = -theta[idx];
    }
  return S;
}

std::vector<double> rotate_tensor(const CurvTensor& R, const Mat& Q) {
  const int n = R.dim();
  const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
  std::vector<double> cur(R.raw());
  std::vector<double> next(n4, 0.0);
  // contract one slot at a time; slot order keeps the layout stable
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double v = cur[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
            if (v == 0.0) continue;
            switch (slot) {
              case 0:
                for (int a = 0; a < n; ++a)
                  next[((static_cast<std::size_t>(a) * n + j) * n + k) * n + l] += Q(i, a) * v;
                break;
              case 1:
                for (int a = 0; a < n; ++a)
                  next[((static_cast<std::size_t>(i) * n + a) * n + k) * n + l] += Q(j, a) * v;
                break;
              case 2:
                for (int a = 0; a < n; ++a)
                  next[((static_cast<std::size_t>(i) * n + j) * n + a) * n + l] += Q(k, a) * v;
                break;
              default:
                for (int a = 0; a < n; ++a)
                  next[((static_cast<std::size_t>(i) * n + j) * n + k) * n + a] += Q(l, a) * v;
            }
          }
    cur.swap(next);
  }
  return cur;
}

// Canonical off-form components of a 4-dim tensor: R(i,j,i,k) with j < k,
// both different from i.  Every component with exactly three distinct
// indices is a signed copy of one of these.
Vec off_form_components(const std::vector<double>& comp) {
  const int n = 4;
  Vec r(12);
  int idx = 0;
  auto at = [&](int i, int j, int k, int l) {
    return comp[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = j + 1; k < n; ++k) {
        if (k == i) continue;
        r[idx++] = at(i, j, i, k);
      }
    }
  return r;
}

struct EntrySet {
  double a, b, c, ap, bp, cp, d, e;
};

EntrySet read_entries(const std::vector<double>& comp) {
  auto at = [&](int i, int j, int k, int l) {
    return comp[((static_cast<std::size_t>(i) * 4 + j) * 4 + k) * 4 + l];
  };
  EntrySet s;
  s.a = at(0, 1, 1, 0);
  s.b = at(0, 2, 2, 0);
  s.c = at(0, 3, 3, 0);
  s.ap = at(2, 3, 3, 2);
  s.bp = at(1, 3, 3, 1);
  s.cp = at(1, 2, 2, 1);
  s.d = at(0, 1, 2, 3);
  s.e = at(0, 2, 3, 1);
  return s;
}

}  // namespace

STBasisResult singer_thorpe_search(const CurvTensor& R, std::uint64_t seed,
                                   int restarts, double tol) {
  if (R.dim() != 4) throw WrongDimension("basis search is four-dimensional");
  const double scale = std::max(1.0, R.sup());
  const double target = 1e-13 * scale;

  auto residual_norm = [](const Vec& r) {
    return std::sqrt(8.0) * r.norm();  // Frobenius over the full orbit
  };

  Mat best_q = Mat::Identity(4, 4);
  double best_res = residual_norm(off_form_components(R.raw()));

  for (int restart = 0; restart < restarts && best_res > target; ++restart) {
    Mat Q;
    if (restart == 0) {
      Q = Mat::Identity(4, 4);
    } else {
      auto rng = substream(seed, static_cast<std::uint64_t>(restart));
      Q = random_rotation(4, rng);
    }
    Vec r = off_form_components(rotate_tensor(R, Q));
    double lambda = 1e-3;
    for (int iter = 0; iter < 80; ++iter) {
      if (residual_norm(r) <= target) break;
      const double h = 1e-6;
      Mat J(12, 6);
      for (int pcol = 0; pcol < 6; ++pcol) {
        Vec tp = Vec::Zero(6), tm = Vec::Zero(6);
        tp[pcol] = h;
        tm[pcol] = -h;
        const Vec rp = off_form_components(rotate_tensor(R, Q * exp_skew(skew_from(tp))));
        const Vec rm = off_form_components(rotate_tensor(R, Q * exp_skew(skew_from(tm))));
        J.col(pcol) = (rp - rm) / (2 * h);
      }
      bool accepted = false;
      for (int attempt = 0; attempt < 25; ++attempt) {
        const Mat lhs = J.transpose() * J + lambda * Mat::Identity(6, 6);
        const Vec delta = lhs.ldlt().solve(-J.transpose() * r);
        const Mat Qt = Q * exp_skew(skew_from(delta));
        const Vec rt = off_form_components(rotate_tensor(R, Qt));
        if (rt.norm() < r.norm()) {
          Q = Qt;
          r = rt;
          lambda = std::max(lambda * 0.3, 1e-12);
          accepted = true;
          break;
        }
        lambda *= 8.0;
        if (lambda > 1e12) break;
      }
      if (!accepted) break;
    }
    const double res = residual_norm(r);
    if (res < best_res) {
      best_res = res;
      best_q = Q;
    }
  }

  STBasisResult out;
  out.residual = best_res;
  out.converged = within(best_res, tol, scale);

  // canonicalize over coordinate relabelings (det-corrected permutations)
  Mat canon_q = best_q;
  EntrySet canon = read_entries(rotate_tensor(R, best_q));
  std::array<int, 4> perm{0, 1, 2, 3};
  std::sort(perm.begin(), perm.end());
  std::array<double, 6> canon_key{canon.a, canon.b, canon.c,
                                  canon.ap, canon.bp, canon.cp};
  do {
    Mat P = Mat::Zero(4, 4);
    for (int i = 0; i < 4; ++i) P(perm[i], i) = 1.0;
    if (P.determinant() < 0) P.col(0) *= -1.0;
    const Mat Qp = best_q * P;
    const EntrySet s = read_entries(rotate_tensor(R, Qp));
    const std::array<double, 6> key{s.a, s.b, s.c, s.ap, s.bp, s.cp};
    if (key > canon_key) {
      canon_key = key;
      canon = s;
      canon_q = Qp;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  out.Q = canon_q;
  out.a = canon.a;
  out.b = canon.b;
  out.c = canon.c;
  out.ap = canon.ap;
  out.bp = canon.bp;
  out.cp = canon.cp;
  out.d = canon.d;
  out.e = canon.e;
  out.relation_residual =
      std::max({std::abs(std::abs(out.a) - std::abs(out.ap)),
                std::abs(std::abs(out.b) - std::abs(out.bp)),
                std::abs(std::abs(out.c) - std::abs(out.cp))});
  out.relations_ok = out.converged && within(out.relation_residual, tol, scale);
  return out;
}

Vec refine_family_params(const std::function<Vec(const Vec&)>& residual,
                         const Vec& x0, const LMOptions& opts) {
  Vec x = x0;
  Vec r = residual(x);
  const int m = static_cast<int>(r.size());
  const int k = static_cast<int>(x.size());
  double lambda = opts.initial_lambda;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if (r.norm() <= opts.tol) return x;
    Mat J(m, k);
    for (int col = 0; col < k; ++col) {
      const double h = opts.fd_step * std::max(1.0, std::abs(x[col]));
      Vec xp = x, xm = x;
      xp[col] += h;
      xm[col] -= h;
      J.col(col) = (residual(xp) - residual(xm)) / (2 * h);
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const Mat lhs = J.transpose() * J + lambda * Mat::Identity(k, k);
      const Vec delta = lhs.ldlt().solve(-J.transpose() * r);
      const Vec xt = x + delta;
      const Vec rt = residual(xt);
      if (rt.norm() < r.norm()) {
        x = xt;
        r = rt;
        lambda = std::max(lambda * 0.3, 1e-14);
        accepted = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!accepted) break;
  }
  if (r.norm() <= opts.tol) return x;
  throw NoSolution("constraint system did not reach the residual tolerance");
}

}  // namespace curvlab
