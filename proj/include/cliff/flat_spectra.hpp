#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cliff/torus.hpp"

namespace cliff {

// Flat torus R^2 / (Z (1, 0) + Z (a, b)) in normalized position: 0 <= a <= 1/2, b > 0, a^2 + b^2 >= 1.
struct FlatLattice {
    double a = 0.0;
    double b = 1.0;
};
void validate_lattice(const FlatLattice& lat);

struct FlatLevel {
    double lambda = 0.0;
    int multiplicity = 0;
    std::vector<std::pair<long, long>> witnesses;  // (p, q) with q > 0, or q = 0 and p >= 0
};

// lambda_pq = 4 pi^2 (q^2 + ((p - q a) / b)^2).
double flat_eigenvalue(const FlatLattice& lat, long p, long q);

// The first `count` distinct eigenvalues with multiplicities, ascending.
std::vector<FlatLevel> flat_eigenvalues(const FlatLattice& lat, int count);
// Number of eigenvalues <= lambda (relative slack 1e-9), with multiplicity.
long flat_counting_function(const FlatLattice& lat, double lambda);

// Translation lattice of the symmetry group acting on the chart, normalized to shorter generator 1.
struct QuotientLattice {
    FlatLattice lattice;
    double shorter_side = 0.0;         // chart length of the shortest translation
    double shorter_side_scaled = 0.0;  // the same in the metric m^2 g
};
QuotientLattice quotient_lattice(const DoublingConfig& cfg);

// Normalizes the lattice spanned by two independent plane vectors.
FlatLattice normalize_lattice(double e1x, double e1y, double e2x, double e2y, double* shortest = nullptr);

// "lambda,multiplicity,witnesses" rows, witnesses as "p:q" joined by ';'.
std::string flat_csv(const std::vector<FlatLevel>& levels);

}  // namespace cliff
