#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fklab/grid.hpp"

namespace fklab {

// -1/2 Delta_h + V with Dirichlet rows eliminated (second-order central differences).
class SchrodingerOperator {
 public:
  SchrodingerOperator(Grid grid, std::vector<double> potential);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& potential() const { return v_; }
  std::size_t size() const { return v_.size(); }
  double kinetic_diagonal() const;  // d / h^2
  double coupling() const;          // -1 / (2 h^2)

  void apply(std::span<const double> in, std::span<double> out) const;
  // Restriction to the nodes with |x_k - center_k| < radius (d = 1 only; used for sub-boxes).
  SchrodingerOperator restricted(double center, double radius) const;

 private:
  Grid grid_;
  std::vector<double> v_;
};

SchrodingerOperator assemble(const GridField& V);

class EigenNonConvergence : public std::runtime_error {
 public:
  EigenNonConvergence(const std::string& w, double r) : std::runtime_error(w), residual(r) {}
  double residual;
};

struct EigenResult {
  double lambda1 = 0;
  double lambda2 = 0;
  GridField phi1;
  std::optional<GridField> phi2;
  double residual1 = 0;  // ||A phi - lambda phi|| / |lambda|
  double residual2 = 0;
  int iterations = 0;
};

// Shifted inverse iteration; k = 2 deflates against phi1.
EigenResult smallest_eigs(const SchrodingerOperator& op, int k = 2, double tol = 1e-10, int max_iter = 2000);

double rayleigh_quotient(const SchrodingerOperator& op, const GridField& f);

// Number of eigenvalues < lambda (Sturm sequence in d = 1, LDL^T inertia in d = 2).
std::size_t count_eigenvalues_below(const SchrodingerOperator& op, double lambda);

// Lowest m eigenpairs (all when m = 0) of a d = 1 operator via LAPACK dstevr.
// Vectors are column-major (size x count), normalized in the grid L2 norm.
struct Eigensystem {
  std::vector<double> values;
  std::vector<double> vectors;
  std::size_t n = 0;
  std::size_t count() const { return values.size(); }
  const double* vector(std::size_t k) const { return vectors.data() + k * n; }
};

Eigensystem tridiagonal_eigensystem(const SchrodingerOperator& op, std::size_t m = 0);
// All eigenpairs with eigenvalue <= upper (at least one).
Eigensystem tridiagonal_eigensystem_below(const SchrodingerOperator& op, double upper);

}  // namespace fklab
