#include "cliff/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>

#include "cliff/error.hpp"

namespace cliff {

namespace {

struct Problem {
    const Eigen::SparseMatrix<double>& K;
    const Eigen::VectorXd& mass;
    const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt;
    const EigenOptions& opts;

    double mdot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(mass.cwiseProduct(b)); }
    double true_residual(const Eigen::VectorXd& y, double lambda) const {
        const Eigen::VectorXd x = y / std::sqrt(mdot(y, y));
        const Eigen::VectorXd r = K * x - lambda * mass.cwiseProduct(x);
        return std::sqrt(r.cwiseQuotient(mass).dot(r)) / std::max(1.0, std::abs(lambda));
    }
};

// Remove the M-projection onto the columns of B (two passes).
void m_orthogonalize(const Problem& pr, const Eigen::MatrixXd& B, Eigen::VectorXd& w) {
    if (B.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) w -= B * (B.transpose() * pr.mass.cwiseProduct(w));
}

// Krylov-Schur shift-invert Lanczos on the M-orthogonal complement of `locked`.
EigenResult lanczos(const Problem& pr, const Eigen::MatrixXd& locked, int count, std::mt19937& rng, int& steps) {
    const EigenOptions& opts = pr.opts;
    const Eigen::Index n = pr.K.rows();
    const Eigen::Index room = n - locked.cols();
    // op = (K - shift M)^{-1} M is self-adjoint in the M inner product; its largest eigenvalues are the wanted ones.
    auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        Eigen::VectorXd w = pr.ldlt.solve(pr.mass.cwiseProduct(v));
        m_orthogonalize(pr, locked, w);
        return w;
    };

    const int p = int(std::min<Eigen::Index>(room, std::max(2 * count + 10, count + 30)));
    const int keep = std::min(p - 1, count + (p - count) / 2);
    Eigen::MatrixXd V(n, p + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, p);

    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd v0(n);
    for (Eigen::Index i = 0; i < n; ++i) v0[i] = uni(rng);
    m_orthogonalize(pr, locked, v0);
    V.col(0) = v0 / std::sqrt(pr.mdot(v0, v0));

    int start = 0;
    Eigen::VectorXd theta;
    Eigen::MatrixXd S;
    double beta = 0.0;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        for (int j = start; j < p; ++j) {
            Eigen::VectorXd w = op(V.col(j));
            ++steps;
            Eigen::VectorXd c = Eigen::VectorXd::Zero(j + 1);
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::VectorXd mw = pr.mass.cwiseProduct(w);
                const Eigen::VectorXd d = V.leftCols(j + 1).transpose() * mw;
                w -= V.leftCols(j + 1) * d;
                c += d;
            }
            for (int i = 0; i <= j; ++i) H(i, j) = H(j, i) = c[i];
            beta = std::sqrt(std::max(0.0, pr.mdot(w, w)));
            if (beta < 1e-14 * std::abs(c[j])) {
                // Invariant subspace: continue with a fresh random direction orthogonal to the basis.
                for (Eigen::Index i = 0; i < n; ++i) w[i] = uni(rng);
                m_orthogonalize(pr, locked, w);
                for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * pr.mass.cwiseProduct(w));
                V.col(j + 1) = w / std::sqrt(pr.mdot(w, w));
                beta = 0.0;
            } else {
                V.col(j + 1) = w / beta;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        theta = es.eigenvalues().reverse();
        S = es.eigenvectors().rowwise().reverse();

        bool done = true;
        for (int i = 0; i < count && done; ++i)
            if (std::abs(beta * S(p - 1, i)) > opts.tol * std::abs(theta[i])) done = false;
        if (done) {
            // The operator residual can understate the residual of K x = l M x by the stiffness norm; check it directly.
            const Eigen::MatrixXd Y = V.leftCols(p) * S.leftCols(count);
            for (int i = 0; i < count && done; ++i)
                if (pr.true_residual(Y.col(i), opts.shift + 1.0 / theta[i]) > opts.tol) done = false;
        }
        if (done) break;
        if (restart == opts.max_restarts) throw Error(ErrorKind::SolverFailure, "Lanczos iteration did not reach the residual tolerance");

        // Krylov-Schur restart: keep the leading Ritz vectors and the current residual direction.
        const Eigen::MatrixXd Y = V.leftCols(p) * S.leftCols(keep);
        const Eigen::VectorXd next = V.col(p);
        H.setZero();
        for (int i = 0; i < keep; ++i) H(i, i) = theta[i];
        V.leftCols(keep) = Y;
        V.col(keep) = next;
        // The coupling column of `keep` is filled when its image is orthogonalized.
        start = keep;
    }

    // Ascending order in lambda equals descending order in theta.
    EigenResult out;
    out.values.resize(count);
    out.vectors = V.leftCols(p) * S.leftCols(count);
    for (int i = 0; i < count; ++i) {
        out.values[i] = opts.shift + 1.0 / theta[i];
        Eigen::VectorXd x = out.vectors.col(i);
        x /= std::sqrt(pr.mdot(x, x));
        out.vectors.col(i) = x;
    }
    return out;
}

}  // namespace

EigenResult smallest_generalized(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& mass, int count,
                                 const EigenOptions& opts) {
    const Eigen::Index n = K.rows();
    if (count < 1 || count >= n) throw Error(ErrorKind::DomainError, "eigenpair count out of range");
    Eigen::SparseMatrix<double> A = K;
    for (Eigen::Index i = 0; i < n; ++i) A.coeffRef(i, i) -= opts.shift * mass[i];
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "factorization of the shifted operator failed");
    const Problem pr{K, mass, ldlt, opts};
    std::mt19937 rng(opts.seed);
    int steps = 0;

    EigenResult out = lanczos(pr, Eigen::MatrixXd(n, 0), count, rng, steps);
    // A single start vector can miss copies of a repeated eigenvalue. Search the complement of the
    // accepted pairs until it holds nothing below the largest accepted value.
    for (int round = 0; round < count && count < n - 1; ++round) {
        const EigenResult extra = lanczos(pr, out.vectors, 1, rng, steps);
        const double top = out.values[count - 1];
        if (extra.values[0] >= top - 1e-9 * std::max(1.0, std::abs(top))) break;
        // Insert the new pair and drop the largest.
        Eigen::VectorXd values(count);
        Eigen::MatrixXd vectors(n, count);
        int src = 0;
        bool inserted = false;
        for (int i = 0; i < count; ++i) {
            if (!inserted && (src == count || extra.values[0] < out.values[src])) {
                values[i] = extra.values[0];
                vectors.col(i) = extra.vectors.col(0);
                inserted = true;
            } else {
                values[i] = out.values[src];
                vectors.col(i) = out.vectors.col(src);
                ++src;
            }
        }
        out.values = values;
        out.vectors = vectors;
    }

    out.iterations = steps;
    out.max_residual = 0.0;
    for (int i = 0; i < count; ++i) out.max_residual = std::max(out.max_residual, pr.true_residual(out.vectors.col(i), out.values[i]));
    return out;
}

}  // namespace cliff
