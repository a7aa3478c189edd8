#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cliff {

struct EigenOptions {
    double shift = -0.05;  // shift-invert pole; below the spectrum of a positive semidefinite K
    double tol = 1e-8;     // ||K x - l M x||_{M^-1} / max(1, l) for M-normalized x
    int max_restarts = 12;
    unsigned seed = 12345;
};

struct EigenResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // M-orthonormal columns
    double max_residual = 0.0;  // max ||K x - l M x||_{M^-1} / max(1, l) over the returned pairs
    int iterations = 0;  // total Lanczos steps
};

// Smallest `count` eigenpairs of K x = l M x with K symmetric positive semidefinite and M = diag(mass) positive.
// Shift-invert Lanczos in the M inner product with full reorthogonalization; throws SolverFailure.
EigenResult smallest_generalized(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& mass, int count,
                                 const EigenOptions& opts = {});

}  // namespace cliff
