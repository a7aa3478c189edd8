#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cliff/eigensolver.hpp"
#include "cliff/mesh.hpp"

namespace cliff {

// Cotangent stiffness (positive semidefinite) and lumped (barycentric) mass of a mesh in R^4.
struct LaplaceSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::VectorXd mass;
};
LaplaceSystem laplace_system(const SurfaceMesh& mesh);

enum class Parity { Even, Odd, Mixed };
const char* parity_name(Parity p);

struct EigenEntry {
    double value = 0.0;
    Parity parity = Parity::Mixed;
    bool group_invariant = false;
    double parity_score = 0.0;         // <u, u o rho> / <u, u>
    double invariant_fraction = 0.0;   // |P_G u|^2 / |u|^2 with P_G the orbit average
    double coordinate_alignment = 0.0; // |projection onto the coordinate functions| / |u|
};

struct Spectrum {
    std::vector<EigenEntry> entries;  // ascending
    Eigen::MatrixXd vectors;          // M-orthonormal, rotated within clusters to diagonalize rho then P_G
    double max_residual = 0.0;
    int iterations = 0;
};

// Smallest `count` eigenvalues of the mesh Laplacian with parity and invariance classification.
Spectrum laplace_spectrum(const SurfaceMesh& mesh, int count, const EigenOptions& opts = {});

// Smallest `count` eigenvalues on rho-odd, group-invariant functions (restriction to orbits).
std::vector<double> odd_invariant_spectrum(const SurfaceMesh& mesh, int count);

// Rayleigh quotients of the four ambient coordinate functions.
std::array<double, 4> coordinate_rayleigh(const SurfaceMesh& mesh);

// "index,eigenvalue,parity,group_invariant" rows.
std::string spectrum_csv(const Spectrum& s);

}  // namespace cliff
