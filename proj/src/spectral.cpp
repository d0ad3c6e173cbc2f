#include "fklab/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fklab {

SchrodingerOperator::SchrodingerOperator(Grid grid, std::vector<double> potential)
    : grid_(std::move(grid)), v_(std::move(potential)) {
  if (v_.size() != grid_.size()) throw std::invalid_argument("assemble: potential size does not match grid");
  for (double v : v_)
    if (!std::isfinite(v)) throw std::invalid_argument("assemble: non-finite potential value");
}

SchrodingerOperator assemble(const GridField& V) { return SchrodingerOperator(V.grid, V.values); }

double SchrodingerOperator::kinetic_diagonal() const {
  const double h = grid_.spacing();
  return grid_.dim() / (h * h);
}

double SchrodingerOperator::coupling() const {
  const double h = grid_.spacing();
  return -0.5 / (h * h);
}

void SchrodingerOperator::apply(std::span<const double> in, std::span<double> out) const {
  const double dg = kinetic_diagonal(), c = coupling();
  const std::size_t N = size();
  if (grid_.dim() == 1) {
    for (std::size_t i = 0; i < N; ++i) {
      double s = (dg + v_[i]) * in[i];
      if (i > 0) s += c * in[i - 1];
      if (i + 1 < N) s += c * in[i + 1];
      out[i] = s;
    }
    return;
  }
  const std::size_t n0 = grid_.extent(0), n1 = grid_.extent(1);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      const std::size_t p = i * n1 + j;
      double s = (dg + v_[p]) * in[p];
      if (i > 0) s += c * in[p - n1];
      if (i + 1 < n0) s += c * in[p + n1];
      if (j > 0) s += c * in[p - 1];
      if (j + 1 < n1) s += c * in[p + 1];
      out[p] = s;
    }
}

SchrodingerOperator SchrodingerOperator::restricted(double center, double radius) const {
  if (grid_.dim() != 1) throw std::invalid_argument("restricted: d = 1 only");
  std::size_t lo = grid_.size(), hi = 0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (std::abs(grid_.coord(0, i) - center) < radius) {
      lo = std::min(lo, i);
      hi = i;
    }
  }
  if (lo > hi) throw std::invalid_argument("restricted: empty sub-box");
  const double h = grid_.spacing();
  const double lower = grid_.coord(0, lo) - h;
  const double upper = grid_.coord(0, hi) + h;
  Grid sub(Box({0.5 * (lower + upper)}, {0.5 * (upper - lower)}), h);
  return SchrodingerOperator(sub, std::vector<double>(v_.begin() + lo, v_.begin() + hi + 1));
}

namespace {

Eigen::SparseMatrix<double> sparse_matrix(const SchrodingerOperator& op, double shift) {
  const Grid& g = op.grid();
  const std::size_t N = op.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * N);
  const std::size_t n0 = g.extent(0), n1 = g.dim() == 2 ? g.extent(1) : 1;
  const double dg = op.kinetic_diagonal(), c = op.coupling();
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      const int p = static_cast<int>(i * n1 + j);
      trip.emplace_back(p, p, dg + op.potential()[p] - shift);
      if (i > 0) trip.emplace_back(p, p - static_cast<int>(n1), c);
      if (i + 1 < n0) trip.emplace_back(p, p + static_cast<int>(n1), c);
      if (n1 > 1 && j > 0) trip.emplace_back(p, p - 1, c);
      if (n1 > 1 && j + 1 < n1) trip.emplace_back(p, p + 1, c);
    }
  Eigen::SparseMatrix<double> A(static_cast<int>(N), static_cast<int>(N));
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::size_t sturm_count(const std::vector<double>& diag, double off, double lambda) {
  std::size_t neg = 0;
  double q = 1;
  const double tiny = std::numeric_limits<double>::min() * 1e3;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    q = (diag[i] - lambda) - (i > 0 ? off * off / q : 0.0);
    if (q == 0) q = -tiny;
    if (q < 0) ++neg;
  }
  return neg;
}

double bisect_eigenvalue(const std::vector<double>& diag, double off, std::size_t k) {
  // k-th smallest (0-based)
  double lo = *std::min_element(diag.begin(), diag.end()) - 2 * std::abs(off);
  double hi = *std::max_element(diag.begin(), diag.end()) + 2 * std::abs(off);
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (A - sigma I) x = b for the d = 1 tridiagonal operator (LAPACK dgtsv, partial pivoting).
void tridiagonal_solve(const std::vector<double>& diag, double off, double sigma, std::vector<double>& b) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  std::vector<double> dl(std::max<lapack_int>(n - 1, 1), off), du(std::max<lapack_int>(n - 1, 1), off), d(n);
  for (lapack_int i = 0; i < n; ++i) d[i] = diag[i] - sigma;
  lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), b.data(), n);
  if (info > 0) {
    // exactly singular shift: nudge it
    std::fill(dl.begin(), dl.end(), off);
    std::fill(du.begin(), du.end(), off);
    for (lapack_int i = 0; i < n; ++i) d[i] = diag[i] - sigma * (1 - 1e-13) - 1e-300;
    info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), b.data(), n);
  }
  if (info != 0) throw std::runtime_error("tridiagonal_solve: dgtsv failed");
}

struct Pair {
  double lambda = 0;
  std::vector<double> v;
  double residual = 0;
  int iterations = 0;
  double tol = 0;  // requested tolerance, raised to the rounding floor of A v
};

double relative_residual(const SchrodingerOperator& op, const std::vector<double>& v, double lambda) {
  std::vector<double> av(v.size());
  op.apply(v, av);
  double r2 = 0, n2 = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = av[i] - lambda * v[i];
    r2 += r * r;
    n2 += v[i] * v[i];
  }
  return std::sqrt(r2 / n2) / std::abs(lambda);
}

void normalize(std::vector<double>& v, double cell) {
  const double n = std::sqrt(dot(v, v) * cell);
  for (double& x : v) x /= n;
}

void deflate(std::vector<double>& v, const std::vector<double>& phi, double cell) {
  const double c = dot(v, phi) * cell;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * phi[i];
}

double rq(const SchrodingerOperator& op, const std::vector<double>& v) {
  std::vector<double> av(v.size());
  op.apply(v, av);
  return dot(av, v) / dot(v, v);
}

template <class Solve>
Pair inverse_iteration(const SchrodingerOperator& op, Solve&& solve, std::vector<double> x,
                       const std::vector<double>* deflate_against, double tol, int max_iter) {
  const double cell = op.grid().cell_volume();
  if (deflate_against) deflate(x, *deflate_against, cell);
  normalize(x, cell);
  // |A v - lambda v| cannot drop below ~eps |A| |v|, which dominates |lambda| on fine grids
  double vmax = 0;
  for (double v : op.potential()) vmax = std::max(vmax, std::abs(v));
  const double op_norm = 2 * op.kinetic_diagonal() + vmax;
  Pair p{rq(op, x), x, 0, 0, tol};
  for (int it = 1; it <= max_iter; ++it) {
    solve(x);
    if (deflate_against) deflate(x, *deflate_against, cell);
    normalize(x, cell);
    const double lam = rq(op, x);
    const double res = relative_residual(op, x, lam);
    const double eff = std::max(tol, 64 * std::numeric_limits<double>::epsilon() * op_norm / std::abs(lam));
    p = {lam, x, res, it, eff};
    if (res <= eff) return p;
  }
  return p;
}

}  // namespace

EigenResult smallest_eigs(const SchrodingerOperator& op, int k, double tol, int max_iter) {
  if (!(tol > 0)) throw std::invalid_argument("smallest_eigs: tol > 0 required");
  if (k != 1 && k != 2) throw std::invalid_argument("smallest_eigs: k in {1, 2}");
  const Grid& g = op.grid();
  const std::size_t N = op.size();
  if (k == 2 && N < 2) throw std::invalid_argument("smallest_eigs: grid too small for two eigenpairs");
  EigenResult out;

  std::vector<double> start1(N, 1.0);
  std::vector<double> start2(N);
  for (std::size_t i = 0; i < N; ++i) start2[i] = static_cast<double>(i) - 0.5 * (N - 1) + 0.25;

  Pair p1, p2;
  if (g.dim() == 1) {
    std::vector<double> diag(N);
    for (std::size_t i = 0; i < N; ++i) diag[i] = op.kinetic_diagonal() + op.potential()[i];
    const double off = op.coupling();
    const double s1 = bisect_eigenvalue(diag, off, 0);
    p1 = inverse_iteration(op, [&](std::vector<double>& x) { tridiagonal_solve(diag, off, s1, x); }, start1, nullptr,
                           tol, max_iter);
    if (k == 2) {
      const double s2 = bisect_eigenvalue(diag, off, 1);
      p2 = inverse_iteration(op, [&](std::vector<double>& x) { tridiagonal_solve(diag, off, s2, x); }, start2, &p1.v,
                             tol, max_iter);
    }
  } else {
    using SpMat = Eigen::SparseMatrix<double>;
    const std::size_t n0 = g.extent(0), n1 = g.extent(1);
    const SpMat A = sparse_matrix(op, 0.0);
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("smallest_eigs: factorization failed");
    auto solve = [&](std::vector<double>& x) {
      Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<int>(N));
      Eigen::VectorXd y = ldlt.solve(xv);
      xv = y;
    };
    p1 = inverse_iteration(op, solve, start1, nullptr, tol, max_iter);
    if (k == 2) {
      for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j)
          start2[i * n1 + j] = (static_cast<double>(i) - 0.5 * (n0 - 1)) + 0.37 * (static_cast<double>(j) - 0.5 * (n1 - 1));
      p2 = inverse_iteration(op, solve, start2, &p1.v, tol, max_iter);
    }
  }
  if (p1.residual > p1.tol)
    throw EigenNonConvergence("smallest_eigs: lambda1 did not converge (relative residual " +
                                  std::to_string(p1.residual) + ")",
                              p1.residual);
  if (k == 2 && p2.residual > p2.tol)
    throw EigenNonConvergence("smallest_eigs: lambda2 did not converge (relative residual " +
                                  std::to_string(p2.residual) + ")",
                              p2.residual);
  // Perron: the ground state has one sign
  for (double& v : p1.v) v = std::abs(v);
  out.lambda1 = p1.lambda;
  out.phi1 = GridField{g, p1.v};
  out.residual1 = p1.residual;
  out.iterations = p1.iterations;
  if (k == 2) {
    out.lambda2 = p2.lambda;
    out.phi2 = GridField{g, p2.v};
    out.residual2 = p2.residual;
    out.iterations += p2.iterations;
  } else {
    out.lambda2 = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double rayleigh_quotient(const SchrodingerOperator& op, const GridField& f) {
  if (f.values.size() != op.size()) throw std::invalid_argument("rayleigh_quotient: size mismatch");
  const double n2 = dot(f.values, f.values);
  if (!(n2 > 0)) throw std::invalid_argument("rayleigh_quotient: zero field");
  return rq(op, f.values);
}

std::size_t count_eigenvalues_below(const SchrodingerOperator& op, double lambda) {
  if (op.grid().dim() == 2) {
    // Sylvester inertia of A - lambda I from a sparse LDL^T factorization
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sparse_matrix(op, lambda));
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("count_eigenvalues_below: factorization failed");
    const Eigen::VectorXd D = ldlt.vectorD();
    return static_cast<std::size_t>((D.array() < 0).count());
  }
  std::vector<double> diag(op.size());
  for (std::size_t i = 0; i < op.size(); ++i) diag[i] = op.kinetic_diagonal() + op.potential()[i];
  return sturm_count(diag, op.coupling(), lambda);
}

namespace {

Eigensystem run_dstevr(const SchrodingerOperator& op, char range, double vu, lapack_int iu) {
  if (op.grid().dim() != 1) throw std::invalid_argument("tridiagonal_eigensystem: d = 1 only");
  const lapack_int n = static_cast<lapack_int>(op.size());
  std::vector<double> d(n), e(std::max<lapack_int>(n, 1), op.coupling());
  for (lapack_int i = 0; i < n; ++i) d[i] = op.kinetic_diagonal() + op.potential()[i];
  lapack_int mfound = 0;
  const lapack_int cols = range == 'I' ? iu : n;
  std::vector<double> w(n), z(static_cast<std::size_t>(n) * std::max<lapack_int>(cols, 1));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  const double vl = -std::numeric_limits<double>::max();
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', range, n, d.data(), e.data(), vl, vu, 1,
                                         range == 'I' ? iu : n, 0.0, &mfound, w.data(), z.data(), n, isuppz.data());
  if (info != 0) throw std::runtime_error("tridiagonal_eigensystem: dstevr failed");
  Eigensystem es;
  es.n = static_cast<std::size_t>(n);
  es.values.assign(w.begin(), w.begin() + mfound);
  es.vectors.assign(z.begin(), z.begin() + static_cast<std::size_t>(mfound) * n);
  const double scale = 1.0 / std::sqrt(op.grid().cell_volume());
  for (double& v : es.vectors) v *= scale;
  return es;
}

}  // namespace

Eigensystem tridiagonal_eigensystem(const SchrodingerOperator& op, std::size_t m) {
  if (m == 0 || m >= op.size()) return run_dstevr(op, 'A', 0, 0);
  return run_dstevr(op, 'I', 0, static_cast<lapack_int>(m));
}

Eigensystem tridiagonal_eigensystem_below(const SchrodingerOperator& op, double upper) {
  std::vector<double> diag(op.size());
  for (std::size_t i = 0; i < op.size(); ++i) diag[i] = op.kinetic_diagonal() + op.potential()[i];
  const std::size_t m = std::max<std::size_t>(1, sturm_count(diag, op.coupling(), upper));
  return tridiagonal_eigensystem(op, m);
}

}  // namespace fklab
