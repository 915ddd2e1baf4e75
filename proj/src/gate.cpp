#include "dulab/gate.hpp"

#include <cmath>
#include <random>

#include <Eigen/SVD>

namespace dulab {

json GateRecipe::to_json() const {
    return json{{"kind", kind}, {"params", params}};
}

GateRecipe GateRecipe::from_json(const json& j) {
    GateRecipe r;
    r.kind = j.at("kind").get<std::string>();
    r.params = j.value("params", json::object());
    return r;
}

UnitaryGate::UnitaryGate(int q_, Mat m_, GateRecipe r)
    : q(q_), m(std::move(m_)), recipe(std::move(r)) {
    if (q < 2) throw std::invalid_argument("UnitaryGate: q must be >= 2");
    if (m.rows() != dim() || m.cols() != dim())
        throw std::invalid_argument("UnitaryGate: matrix must be q^2 x q^2");
}

double UnitaryGate::unitarity_residual() const {
    Mat r = m * m.adjoint() - Mat::Identity(dim(), dim());
    return r.norm();
}

Tensor UnitaryGate::as_tensor() const {
    Tensor t({q, q, q, q});
    for (int o1 = 0; o1 < q; ++o1)
        for (int o2 = 0; o2 < q; ++o2)
            for (int i1 = 0; i1 < q; ++i1)
                for (int i2 = 0; i2 < q; ++i2)
                    t.data[((o1 * q + o2) * q + i1) * q + i2] = m(o1 * q + o2, i1 * q + i2);
    return t;
}

int FoldedGate::leg_dim() const {
    std::int64_t d = 1;
    for (int k = 0; k < 2 * alpha; ++k) d *= q;
    return static_cast<int>(d);
}

Mat reshuffle_matrix(const Mat& m, int q) {
    const int d = q * q;
    Mat out(d, d);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int e = 0; e < q; ++e)
                    out(a * q + b, c * q + e) = m(a * q + c, b * q + e);
    return out;
}

Mat reshuffle(const UnitaryGate& U) { return reshuffle_matrix(U.m, U.q); }

Mat partial_transpose_matrix(const Mat& m, int q) {
    const int d = q * q;
    Mat out(d, d);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int e = 0; e < q; ++e)
                    out(a * q + b, c * q + e) = m(a * q + e, c * q + b);
    return out;
}

Mat partial_transpose(const UnitaryGate& U) { return partial_transpose_matrix(U.m, U.q); }

FoldedGate fold(const UnitaryGate& U, int alpha, std::int64_t budget_bytes) {
    if (alpha < 1) throw std::invalid_argument("fold: alpha must be >= 1");
    const int q = U.q;
    std::int64_t leg = 1;
    for (int k = 0; k < 2 * alpha; ++k) leg *= q;
    const std::int64_t total = leg * leg * leg * leg;
    if (total * static_cast<std::int64_t>(sizeof(cd)) > budget_bytes)
        throw std::runtime_error("fold: tensor exceeds memory budget");

    // Single-replica folded tensor: legs [O1, I1, O2, I2], each (ket, bra).
    const int d1 = q * q;
    Tensor w1({d1, d1, d1, d1});
    for (int a = 0; a < q; ++a)            // o1 ket
        for (int A = 0; A < q; ++A)        // o1 bra
            for (int b = 0; b < q; ++b)    // i1 ket
                for (int B = 0; B < q; ++B)
                    for (int e = 0; e < q; ++e)  // o2 ket
                        for (int E = 0; E < q; ++E)
                            for (int f = 0; f < q; ++f)  // i2 ket
                                for (int F = 0; F < q; ++F) {
                                    cd v = U.entry(a, e, b, f) *
                                           std::conj(U.entry(A, E, B, F));
                                    w1.at({a * q + A, b * q + B, e * q + E, f * q + F}) = v;
                                }
    if (alpha == 1) return FoldedGate{q, 1, std::move(w1)};

    // Higher replicas: outer product of alpha single-replica tensors, then
    // regroup legs so each spacetime leg collects all replica pairs.
    Tensor acc = w1;
    for (int r = 2; r <= alpha; ++r) {
        Tensor prod = Tensor::outer(acc, w1);
        // acc legs: [O1..I2] with extents leg_prev per leg; w1 legs at the end.
        // Interleave: for each of the 4 spacetime legs, (existing, new pair).
        prod = prod.reshaped({acc.shape[0], acc.shape[1], acc.shape[2], acc.shape[3],
                              d1, d1, d1, d1});
        prod = prod.transposed({0, 4, 1, 5, 2, 6, 3, 7});
        std::int64_t nl = acc.shape[0] * d1;
        acc = prod.reshaped({nl, nl, nl, nl});
    }
    return FoldedGate{q, alpha, std::move(acc)};
}

BoundaryVector boundary_vector(BoundaryVector::Kind kind, int q, int alpha) {
    if (alpha < 1) throw std::invalid_argument("boundary_vector: alpha must be >= 1");
    std::int64_t d = 1;
    for (int k = 0; k < 2 * alpha; ++k) d *= q;
    Tensor v({d});
    const double nrm = std::pow(static_cast<double>(q), -0.5 * alpha);
    // Index layout per leg: (k_1, b_1, ..., k_alpha, b_alpha).
    // circle: b_r = k_r for each replica (identity permutation pairing).
    // square: b_r = k_{r+1 mod alpha} (cyclic permutation pairing).
    std::vector<std::int64_t> idx(2 * alpha, 0);
    std::vector<std::int64_t> ks(alpha, 0);
    std::int64_t combos = 1;
    for (int r = 0; r < alpha; ++r) combos *= q;
    for (std::int64_t c = 0; c < combos; ++c) {
        std::int64_t rem = c;
        for (int r = alpha - 1; r >= 0; --r) {
            ks[r] = rem % q;
            rem /= q;
        }
        std::int64_t f = 0;
        for (int r = 0; r < alpha; ++r) {
            std::int64_t k = ks[r];
            std::int64_t b = (kind == BoundaryVector::Kind::circle)
                                 ? k
                                 : ks[(r + 1) % alpha];
            f = (f * q + k) * q + b;
        }
        v.data[f] = nrm;
    }
    return BoundaryVector{kind, q, alpha, std::move(v)};
}

SchmidtData schmidt_decompose(const UnitaryGate& U, double cutoff) {
    const int q = U.q, d = q * q;
    Mat R = reshuffle(U);
    Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtData out;
    out.values.resize(d);
    for (int i = 0; i < d; ++i) out.values[i] = svd.singularValues()(i);
    const double smax = out.values.empty() ? 0.0 : out.values[0];
    out.rank = 0;
    for (double s : out.values)
        if (s > cutoff * smax) ++out.rank;
    // Row index of reshuffle is (o1, i1): site-1 operator. Column is (o2, i2).
    for (int i = 0; i < d; ++i) {
        Mat X(q, q), Y(q, q);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                X(a, b) = svd.matrixU()(a * q + b, i);
                Y(a, b) = std::conj(svd.matrixV()(a * q + b, i));
            }
        out.left_basis.push_back(X);
        out.right_basis.push_back(Y);
    }
    return out;
}

std::vector<double> schmidt_values(const UnitaryGate& U) {
    Eigen::JacobiSVD<Mat> svd(reshuffle(U));
    std::vector<double> out(svd.singularValues().size());
    for (int i = 0; i < svd.singularValues().size(); ++i)
        out[i] = svd.singularValues()(i);
    return out;
}

std::vector<double> dual_schmidt_values(const UnitaryGate& U) {
    Eigen::JacobiSVD<Mat> svd(partial_transpose(U));
    std::vector<double> out(svd.singularValues().size());
    for (int i = 0; i < svd.singularValues().size(); ++i)
        out[i] = svd.singularValues()(i);
    return out;
}

Mat haar_unitary(int dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Mat A(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = cd(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(A);
    Mat Q = qr.householderQ() * Mat::Identity(dim, dim);
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        cd r = R(j, j);
        cd ph = (std::abs(r) > 0) ? r / std::abs(r) : cd(1.0, 0.0);
        Q.col(j) *= ph;
    }
    return Q;
}

Mat swap_matrix(int q) {
    Mat s = Mat::Zero(q * q, q * q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) s(a * q + b, b * q + a) = 1.0;
    return s;
}

}  // namespace dulab
