#include "cliff/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cliff/error.hpp"

namespace cliff {

const char* parity_name(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        case Parity::Mixed: return "mixed";
    }
    return "mixed";
}

LaplaceSystem laplace_system(const SurfaceMesh& mesh) {
    const size_t n = mesh.vertices.size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.triangles.size() * 12);
    LaplaceSystem sys;
    sys.mass = Eigen::VectorXd::Zero(Eigen::Index(n));
    auto sub = [](const Vec4& a, const Vec4& b) { return Eigen::Vector4d(a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]); };
    for (const auto& t : mesh.triangles) {
        const Eigen::Vector4d e1 = sub(mesh.vertices[t[1]], mesh.vertices[t[0]]);
        const Eigen::Vector4d e2 = sub(mesh.vertices[t[2]], mesh.vertices[t[0]]);
        const double area = 0.5 * std::sqrt(std::max(0.0, e1.squaredNorm() * e2.squaredNorm() - std::pow(e1.dot(e2), 2)));
        if (area <= 0.0) throw Error(ErrorKind::DegenerateTriangles, "zero-area triangle");
        for (int e = 0; e < 3; ++e) {
            const int i = t[e], j = t[(e + 1) % 3], k = t[(e + 2) % 3];
            sys.mass[i] += area / 3.0;
            const Eigen::Vector4d u = sub(mesh.vertices[i], mesh.vertices[k]);
            const Eigen::Vector4d v = sub(mesh.vertices[j], mesh.vertices[k]);
            const double w = 0.5 * u.dot(v) / (2.0 * area);
            trip.emplace_back(i, j, -w);
            trip.emplace_back(j, i, -w);
            trip.emplace_back(i, i, w);
            trip.emplace_back(j, j, w);
        }
    }
    sys.K.resize(Eigen::Index(n), Eigen::Index(n));
    sys.K.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

namespace {

// Orbits of the vertex set under the permutations; returns the orbit id of each vertex.
std::vector<int> vertex_orbits(size_t n, const std::vector<std::vector<int>>& perms, int& count) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& p : perms)
        for (size_t i = 0; i < n; ++i) {
            const int a = find(int(i)), b = find(p[i]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<int> id(n, -1), root_id(n, -1);
    count = 0;
    for (size_t i = 0; i < n; ++i) {
        const int r = find(int(i));
        if (root_id[r] < 0) root_id[r] = count++;
        id[i] = root_id[r];
    }
    return id;
}

Eigen::VectorXd permute(const Eigen::VectorXd& u, const std::vector<int>& perm) {
    Eigen::VectorXd out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = u[perm[size_t(i)]];
    return out;
}

// Rotates the columns of U (M-orthonormal) to diagonalize the symmetric form Uᵀ M op(U).
template <class Op>
void diagonalize_in_span(Eigen::MatrixXd& U, const Eigen::VectorXd& mass, Op op) {
    if (U.cols() < 2) return;
    Eigen::MatrixXd W(U.rows(), U.cols());
    for (Eigen::Index c = 0; c < U.cols(); ++c) W.col(c) = op(Eigen::VectorXd(U.col(c)));
    Eigen::MatrixXd R = U.transpose() * mass.asDiagonal() * W;
    R = 0.5 * (R + R.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
    U = (U * es.eigenvectors().rowwise().reverse()).eval();
}

}  // namespace

Spectrum laplace_spectrum(const SurfaceMesh& mesh, int count, const EigenOptions& opts) {
    const LaplaceSystem sys = laplace_system(mesh);
    const EigenResult er = smallest_generalized(sys.K, sys.mass, count, opts);
    const size_t n = mesh.vertices.size();
    const Eigen::VectorXd& mass = sys.mass;

    int norb = 0;
    const std::vector<int> orbit = vertex_orbits(n, mesh.group_perms, norb);
    Eigen::VectorXd orbit_mass = Eigen::VectorXd::Zero(norb);
    for (size_t i = 0; i < n; ++i) orbit_mass[orbit[i]] += mass[Eigen::Index(i)];
    auto group_average = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(norb);
        for (size_t i = 0; i < n; ++i) acc[orbit[i]] += mass[Eigen::Index(i)] * u[Eigen::Index(i)];
        Eigen::VectorXd out(u.size());
        for (size_t i = 0; i < n; ++i) out[Eigen::Index(i)] = acc[orbit[i]] / orbit_mass[orbit[i]];
        return out;
    };
    auto rho = [&](const Eigen::VectorXd& u) { return permute(u, mesh.rho_perm); };

    Eigen::MatrixXd X(Eigen::Index(n), 4);
    for (size_t i = 0; i < n; ++i)
        for (int c = 0; c < 4; ++c) X(Eigen::Index(i), c) = mesh.vertices[i][c];
    const Eigen::MatrixXd MX = mass.asDiagonal() * X;
    const Eigen::LDLT<Eigen::MatrixXd> gram((X.transpose() * MX).eval());

    Spectrum s;
    s.max_residual = er.max_residual;
    s.iterations = er.iterations;
    s.vectors = er.vectors;
    s.entries.resize(size_t(count));
    for (int begin = 0; begin < count;) {
        int end = begin + 1;
        while (end < count && std::abs(er.values[end] - er.values[begin]) <= 1e-6 * std::max(1.0, er.values[begin])) ++end;
        Eigen::MatrixXd U = s.vectors.middleCols(begin, end - begin);
        diagonalize_in_span(U, mass, rho);
        // Within each parity sign, rotate toward group invariance.
        std::vector<Eigen::Index> pos, neg;
        for (Eigen::Index c = 0; c < U.cols(); ++c)
            (U.col(c).dot(mass.cwiseProduct(rho(U.col(c)))) >= 0.0 ? pos : neg).push_back(c);
        for (const auto* idx : {&pos, &neg}) {
            Eigen::MatrixXd Us(U.rows(), Eigen::Index(idx->size()));
            for (size_t i = 0; i < idx->size(); ++i) Us.col(Eigen::Index(i)) = U.col((*idx)[i]);
            diagonalize_in_span(Us, mass, group_average);
            for (size_t i = 0; i < idx->size(); ++i) U.col((*idx)[i]) = Us.col(Eigen::Index(i));
        }
        s.vectors.middleCols(begin, end - begin) = U;
        for (int i = begin; i < end; ++i) {
            const Eigen::VectorXd u = s.vectors.col(i);
            const double uu = u.dot(mass.cwiseProduct(u));
            EigenEntry& e = s.entries[size_t(i)];
            e.value = er.values[i];
            e.parity_score = u.dot(mass.cwiseProduct(rho(u))) / uu;
            e.parity = e.parity_score >= 0.9 ? Parity::Even : e.parity_score <= -0.9 ? Parity::Odd : Parity::Mixed;
            const Eigen::VectorXd pu = group_average(u);
            e.invariant_fraction = pu.dot(mass.cwiseProduct(pu)) / uu;
            e.group_invariant = e.invariant_fraction >= 0.9;
            const Eigen::VectorXd c = MX.transpose() * u;
            e.coordinate_alignment = std::sqrt(std::max(0.0, c.dot(gram.solve(c)) / uu));
        }
        begin = end;
    }
    return s;
}

std::vector<double> odd_invariant_spectrum(const SurfaceMesh& mesh, int count) {
    const LaplaceSystem sys = laplace_system(mesh);
    const size_t n = mesh.vertices.size();
    int norb = 0;
    const std::vector<int> orbit = vertex_orbits(n, mesh.group_perms, norb);
    // One basis function per orbit pair {O, rho O} with O on the top sheet: +1 on O, -1 on rho O.
    std::vector<int> col(size_t(norb), -1);
    int dim = 0;
    for (size_t i = 0; i < n; ++i) {
        const int o = orbit[i], r = orbit[size_t(mesh.rho_perm[i])];
        if (mesh.sheet[i] > 0 && o != r && col[size_t(o)] < 0) col[size_t(o)] = dim++;
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (size_t i = 0; i < n; ++i) {
        if (mesh.sheet[i] > 0 && col[size_t(orbit[i])] >= 0) trip.emplace_back(Eigen::Index(i), col[size_t(orbit[i])], 1.0);
        if (mesh.sheet[i] < 0) {
            const int o = orbit[size_t(mesh.rho_perm[i])];
            if (col[size_t(o)] >= 0) trip.emplace_back(Eigen::Index(i), col[size_t(o)], -1.0);
        }
    }
    if (dim == 0) return {};
    Eigen::SparseMatrix<double> B(Eigen::Index(n), dim);
    B.setFromTriplets(trip.begin(), trip.end());
    const Eigen::SparseMatrix<double> Kr = B.transpose() * sys.K * B;
    const Eigen::VectorXd Mr = B.cwiseAbs().transpose() * sys.mass;
    count = std::min(count, dim - 1);
    std::vector<double> out;
    if (dim <= 3000) {
        const Eigen::MatrixXd Kd(Kr);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Eigen::MatrixXd(Mr.asDiagonal()), Eigen::EigenvaluesOnly);
        for (int i = 0; i < count; ++i) out.push_back(es.eigenvalues()[i]);
    } else {
        const EigenResult er = smallest_generalized(Kr, Mr, count);
        for (int i = 0; i < count; ++i) out.push_back(er.values[i]);
    }
    return out;
}

std::array<double, 4> coordinate_rayleigh(const SurfaceMesh& mesh) {
    const LaplaceSystem sys = laplace_system(mesh);
    std::array<double, 4> out{};
    for (int c = 0; c < 4; ++c) {
        Eigen::VectorXd x(Eigen::Index(mesh.vertices.size()));
        for (size_t i = 0; i < mesh.vertices.size(); ++i) x[Eigen::Index(i)] = mesh.vertices[i][c];
        out[size_t(c)] = x.dot(sys.K * x) / x.dot(sys.mass.cwiseProduct(x));
    }
    return out;
}

std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream os;
    os.precision(12);
    os << "index,eigenvalue,parity,group_invariant\n";
    for (size_t i = 0; i < s.entries.size(); ++i)
        os << i << ',' << s.entries[i].value << ',' << parity_name(s.entries[i].parity) << ','
           << (s.entries[i].group_invariant ? "true" : "false") << '\n';
    return os.str();
}

}  // namespace cliff
