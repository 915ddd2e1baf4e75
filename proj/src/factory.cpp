#include "dulab/factory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/SVD>

#include "dulab/analysis.hpp"

namespace dulab {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat pauli_x() {
    Mat x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

Mat shift_matrix(int d) {
    Mat x = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
    return x;
}

// exp(i r n.sigma) = cos(r) 1 + i sin(r) n.sigma for a unit vector n.
Mat su2_exp(double r, double theta, double phi) {
    double nx = std::sin(theta) * std::cos(phi);
    double ny = std::sin(theta) * std::sin(phi);
    double nz = std::cos(theta);
    Mat u(2, 2);
    cd c = std::cos(r), is = cd(0, 1) * std::sin(r);
    u(0, 0) = c + is * nz;
    u(0, 1) = is * (nx - cd(0, 1) * ny);
    u(1, 0) = is * (nx + cd(0, 1) * ny);
    u(1, 1) = c - is * nz;
    return u;
}

Mat zz_phase(double a) {
    // exp(i a ZZ) on two qubits
    Mat v = Mat::Zero(4, 4);
    v(0, 0) = std::exp(cd(0, a));
    v(1, 1) = std::exp(cd(0, -a));
    v(2, 2) = std::exp(cd(0, -a));
    v(3, 3) = std::exp(cd(0, a));
    return v;
}

bool is_flat_spectrum(const std::vector<double>& s, double rel = 1e-8) {
    double smax = s.empty() ? 0.0 : s[0];
    for (double v : s) {
        if (v <= kSchmidtCutoff * smax) continue;
        if (std::abs(v - smax) > rel * smax) return false;
    }
    return true;
}

const char* kO8Signs[8] = {"---+-+++", "---++---", "--+--+--", "++-+-+--",
                           "-+----+-", "+-++--+-", "+---+++-", "+------+"};

Mat o8_matrix() {
    Mat o(8, 8);
    const double s = 1.0 / std::sqrt(8.0);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) o(i, j) = (kO8Signs[i][j] == '+' ? s : -s);
    return o;
}

Mat f2x4_matrix() {
    // normalized 8-dimensional Fourier matrix
    Mat f(8, 8);
    const double s = 1.0 / std::sqrt(8.0);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            f(i, j) = s * std::exp(cd(0, 2.0 * kPi * ((i * j) % 8) / 8.0));
    return f;
}

}  // namespace

double HadamardMatrix::invariant_residual() const {
    double r1 = 0.0;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) r1 = std::max(r1, std::abs(std::abs(h(i, j)) - 1.0));
    double r2 = (h * h.adjoint() - static_cast<double>(q) * Mat::Identity(q, q)).norm();
    return std::max(r1, r2);
}

void HadamardMatrix::validate() const {
    double r1 = 0.0;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) r1 = std::max(r1, std::abs(std::abs(h(i, j)) - 1.0));
    if (r1 > 1e-12) throw std::invalid_argument("HadamardMatrix: non-unimodular entry");
    double r2 = (h * h.adjoint() - static_cast<double>(q) * Mat::Identity(q, q)).norm();
    if (r2 > 1e-10) throw std::invalid_argument("HadamardMatrix: rows not orthogonal");
}

UnitaryGate qubit_L2(double r1, double theta1, double phi1, double r2,
                     double theta2, double phi2) {
    for (auto [r, th] : {std::pair{r1, theta1}, std::pair{r2, theta2}}) {
        double c = std::sqrt(2.0) * std::sin(r) * std::sin(th);
        if (std::abs(std::abs(c) - 1.0) > 1e-10)
            throw std::invalid_argument("qubit_L2: constraint sqrt(2) sin r sin theta = +/-1 violated");
    }
    Mat u1 = su2_exp(r1, theta1, phi1);
    Mat u2 = su2_exp(r2, theta2, phi2);
    Mat U = kron(u1, u2) * zz_phase(kPi / 4.0);
    GateRecipe rec;
    rec.kind = "qubit_L2";
    rec.params = {{"r1", r1}, {"theta1", theta1}, {"phi1", phi1},
                  {"r2", r2}, {"theta2", theta2}, {"phi2", phi2}};
    return UnitaryGate(2, std::move(U), std::move(rec));
}

UnitaryGate qubit_L2_random(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double p[6];
    for (int i = 0; i < 2; ++i) {
        double r, s;
        do {
            r = uni(rng);
            s = 1.0 / (std::sqrt(2.0) * std::sin(r));
        } while (std::abs(s) > 1.0);
        double th = (u01(rng) < 0.5) ? std::asin(s) : kPi - std::asin(s);
        p[3 * i] = r;
        p[3 * i + 1] = th;
        p[3 * i + 2] = uni(rng);
    }
    UnitaryGate g = qubit_L2(p[0], p[1], p[2], p[3], p[4], p[5]);
    g.recipe.params["seed"] = seed;
    return g;
}

UnitaryGate qubit_L3(double j_z, double phi1, double phi2) {
    if (j_z < 0.0 || j_z > kPi / 4.0 + 1e-12)
        throw std::invalid_argument("qubit_L3: J_z out of [0, pi/4]");
    if (phi1 < 0.0 || phi1 > 2.0 * kPi || phi2 < 0.0 || phi2 > 2.0 * kPi)
        throw std::invalid_argument("qubit_L3: phi out of [0, 2pi]");
    Mat x = pauli_x();
    Mat y(2, 2);
    y << 0, cd(0, -1), cd(0, 1), 0;
    Mat v1 = std::cos(phi1) * x + std::sin(phi1) * y;
    Mat v2 = std::cos(phi2) * x + std::sin(phi2) * y;
    Mat U = kron(v1, v2) * zz_phase(-j_z);
    GateRecipe rec;
    rec.kind = "qubit_L3";
    rec.params = {{"j_z", j_z}, {"phi1", phi1}, {"phi2", phi2}};
    return UnitaryGate(2, std::move(U), std::move(rec));
}

UnitaryGate qubit_L3_random(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jz(0.0, kPi / 4.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    double j = jz(rng), p1 = ph(rng), p2 = ph(rng);
    UnitaryGate g = qubit_L3(j, p1, p2);
    g.recipe.params["seed"] = seed;
    return g;
}

ControlledGateResult controlled_unitary(const std::vector<Mat>& u_list) {
    const int q = static_cast<int>(u_list.size());
    if (q < 2) throw std::invalid_argument("controlled_unitary: need q >= 2 blocks");
    for (const Mat& u : u_list) {
        if (u.rows() != q || u.cols() != q)
            throw std::invalid_argument("controlled_unitary: blocks must be q x q");
        if ((u * u.adjoint() - Mat::Identity(q, q)).norm() > kUnitTol)
            throw std::invalid_argument("controlled_unitary: non-unitary block");
    }
    Mat U = Mat::Zero(q * q, q * q);
    for (int i = 0; i < q; ++i) U.block(i * q, i * q, q, q) = u_list[i];

    bool flat = true;
    for (int i = 0; i < q && flat; ++i)
        for (int j = 0; j < q && flat; ++j) {
            cd tr = (u_list[i].adjoint() * u_list[j]).trace();
            if (i == j) continue;
            if (std::abs(tr) > 1e-9) flat = false;
        }
    bool l2ok = true;
    for (int j = 0; j < q && l2ok; ++j) {
        Mat acc = Mat::Zero(q, q);
        for (int i = 0; i < q; ++i)
            acc += u_list[i].col(j) * u_list[i].col(j).adjoint();
        if ((acc - Mat::Identity(q, q)).norm() > 1e-9) l2ok = false;
    }
    GateRecipe rec;
    rec.kind = "controlled_unitary";
    rec.params["q"] = q;
    return ControlledGateResult{UnitaryGate(q, std::move(U), std::move(rec)), flat, l2ok};
}

UnitaryGate named_gate(const std::string& name, int q) {
    GateRecipe rec;
    rec.kind = "named_gate";
    rec.params = {{"name", name}, {"q", q}};
    auto make = [&](int qq, Mat m) { return UnitaryGate(qq, std::move(m), rec); };

    if (name == "identity") return make(q, Mat::Identity(q * q, q * q));
    if (name == "SWAP") return make(q, swap_matrix(q));
    if (name == "CNOT") {
        if (q != 2) throw std::invalid_argument("named_gate: CNOT requires q=2");
        Mat m = Mat::Zero(4, 4);
        m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
        return make(2, std::move(m));
    }
    if (name == "CZ") {
        if (q != 2) throw std::invalid_argument("named_gate: CZ requires q=2");
        Mat m = Mat::Identity(4, 4);
        m(3, 3) = -1.0;
        return make(2, std::move(m));
    }
    if (name == "CX") {
        if (q % 2 != 0) throw std::invalid_argument("named_gate: CX requires even q");
        std::vector<Mat> blocks;
        Mat x = shift_matrix(q);
        for (int i = 0; i < q; ++i)
            blocks.push_back(i % 2 == 0 ? Mat(Mat::Identity(q, q)) : x);
        UnitaryGate g = controlled_unitary(blocks).gate;
        g.recipe = rec;
        return g;
    }
    if (name == "P_CXSCXS") {
        if (q != 4) throw std::invalid_argument("named_gate: P_CXSCXS requires q=4");
        Mat cx = named_gate("CX", 4).m;
        Mat s = swap_matrix(4);
        return make(4, cx * s * cx * s);
    }
    if (name == "O8_rank4" || name == "O8_rank8" || name == "F2x4_block" ||
        name == "F2x4_rank8") {
        if (q != 4) throw std::invalid_argument("named_gate: " + name + " requires q=4");
        Mat base = (name[0] == 'O') ? o8_matrix() : f2x4_matrix();
        Mat second = base;
        if (name == "O8_rank8") second = shift_matrix(8) * shift_matrix(8) * base;
        if (name == "F2x4_rank8") {
            Mat x2 = shift_matrix(8) * shift_matrix(8);
            second = x2 * base * x2;
        }
        UnitaryGate g = block_diagonal_gate({base, second}).gate;
        g.recipe = rec;
        return g;
    }
    throw std::invalid_argument("named_gate: unknown name " + name);
}

HadamardMatrix chm_fourier(int q) {
    HadamardMatrix h;
    h.q = q;
    h.h = Mat(q, q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            h.h(a, b) = std::exp(cd(0, 2.0 * kPi * ((a * b) % q) / q));
    return h;
}

HadamardMatrix chm_qubit_standard() {
    HadamardMatrix h;
    h.q = 2;
    h.h = Mat(2, 2);
    h.h << 1, 1, 1, -1;
    return h;
}

HadamardMatrix chm_dephased(const HadamardMatrix& base,
                            const std::vector<cd>& row_phases,
                            const std::vector<cd>& col_phases) {
    if (static_cast<int>(row_phases.size()) != base.q ||
        static_cast<int>(col_phases.size()) != base.q)
        throw std::invalid_argument("chm_dephased: phase list size mismatch");
    for (const auto& lists : {row_phases, col_phases})
        for (cd p : lists)
            if (std::abs(std::abs(p) - 1.0) > 1e-12)
                throw std::invalid_argument("chm_dephased: non-unimodular phase");
    HadamardMatrix out = base;
    for (int a = 0; a < base.q; ++a)
        for (int b = 0; b < base.q; ++b) out.h(a, b) = row_phases[a] * base.h(a, b) * col_phases[b];
    return out;
}

UnitaryGate hadamard_gate(HadamardLattice lattice, const HadamardMatrix& H) {
    H.validate();
    const int q = H.q;
    Mat U = Mat::Zero(q * q, q * q);
    const double sq = std::sqrt(static_cast<double>(q));
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < q; ++d) {
                    cd v(0.0, 0.0);
                    switch (lattice) {
                        case HadamardLattice::square_du:
                            v = H.h(a, b) * H.h(b, d) * H.h(c, d) * H.h(a, c) /
                                static_cast<double>(q);
                            break;
                        case HadamardLattice::honeycomb:
                            if (a == c) {
                                for (int f = 0; f < q; ++f)
                                    v += H.h(a, f) * H.h(b, f) * H.h(d, f);
                                v /= static_cast<double>(q);
                            }
                            break;
                        case HadamardLattice::triangular:
                            if (a == c) v = H.h(a, b) * H.h(a, d) * H.h(b, d) / sq;
                            break;
                        case HadamardLattice::sheared:
                            if (a == c) v = H.h(a, b) * H.h(b, d) / sq;
                            break;
                    }
                    U(a * q + b, c * q + d) = v;
                }
    GateRecipe rec;
    rec.kind = "hadamard_gate";
    rec.params["lattice"] = static_cast<int>(lattice);
    UnitaryGate g(q, std::move(U), std::move(rec));
    if (g.unitarity_residual() > 1e-8)
        throw std::runtime_error("hadamard_gate: resulting gate is not unitary");
    return g;
}

UnitaryGate tensor_product_gate(const UnitaryGate& V1, const UnitaryGate& V2) {
    const int q1 = V1.q, q2 = V2.q, q = q1 * q2;
    if (q > 6) throw std::runtime_error("tensor_product_gate: q > 6 exceeds budget");
    Mat U(q * q, q * q);
    for (int a1 = 0; a1 < q1; ++a1)
        for (int a2 = 0; a2 < q2; ++a2)
            for (int b1 = 0; b1 < q1; ++b1)
                for (int b2 = 0; b2 < q2; ++b2)
                    for (int c1 = 0; c1 < q1; ++c1)
                        for (int c2 = 0; c2 < q2; ++c2)
                            for (int d1 = 0; d1 < q1; ++d1)
                                for (int d2 = 0; d2 < q2; ++d2) {
                                    int row = (a1 * q2 + a2) * q + (b1 * q2 + b2);
                                    int col = (c1 * q2 + c2) * q + (d1 * q2 + d2);
                                    U(row, col) = V1.m(a1 * q1 + b1, c1 * q1 + d1) *
                                                  V2.m(a2 * q2 + b2, c2 * q2 + d2);
                                }
    GateRecipe rec;
    rec.kind = "tensor_product_gate";
    rec.params["q1"] = q1;
    rec.params["q2"] = q2;
    return UnitaryGate(q, std::move(U), std::move(rec));
}

BlockDiagonalResult block_diagonal_gate(const std::vector<Mat>& blocks) {
    const int K = static_cast<int>(blocks.size());
    if (K < 2) throw std::invalid_argument("block_diagonal_gate: need at least 2 blocks");
    const int d = static_cast<int>(blocks[0].rows());
    for (const Mat& b : blocks) {
        if (b.rows() != d || b.cols() != d)
            throw std::invalid_argument("block_diagonal_gate: inconsistent block sizes");
        if ((b * b.adjoint() - Mat::Identity(d, d)).norm() > kUnitTol)
            throw std::invalid_argument("block_diagonal_gate: non-unitary block");
    }
    int p2 = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d) / K)));
    if (p2 * p2 * K != d)
        throw std::invalid_argument("block_diagonal_gate: dimensions inconsistent (need d = K p2^2)");
    const int q = K * p2;  // site dimension; site 1 regrouped as (k, m)
    Mat U = Mat::Zero(q * q, q * q);
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < p2; ++m)
            for (int n = 0; n < q; ++n)
                for (int m2 = 0; m2 < p2; ++m2)
                    for (int n2 = 0; n2 < q; ++n2)
                        U((k * p2 + m) * q + n, (k * p2 + m2) * q + n2) =
                            blocks[k](m * q + n, m2 * q + n2);
    GateRecipe rec;
    rec.kind = "block_diagonal_gate";
    rec.params["K"] = K;
    rec.params["p2"] = p2;
    UnitaryGate g(q, std::move(U), std::move(rec));
    bool flat = is_flat_spectrum(schmidt_values(g));
    return BlockDiagonalResult{std::move(g), flat};
}

UnitaryGate permutation_gate(int q, const std::vector<int>& image) {
    const int d = q * q;
    if (static_cast<int>(image.size()) != d)
        throw std::invalid_argument("permutation_gate: image must cover q^2 points");
    Mat m = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) m(image[j], j) = 1.0;
    GateRecipe rec;
    rec.kind = "permutation_gate";
    rec.params["q"] = q;
    rec.params["image"] = image;
    return UnitaryGate(q, std::move(m), std::move(rec));
}

namespace {

// Schmidt values of a permutation gate without a dense SVD: the reshuffled
// matrix partitions into q x q blocks B_{a c}(b, d) = delta_{image(...)};
// its Gram spectrum is cheap, but for q <= 4 a direct SVD is already fast.
std::vector<double> perm_schmidt(const std::vector<int>& image, int q) {
    const int d = q * q;
    Mat R = Mat::Zero(d, d);
    // reshuffle: Rt_{(a c),(b e)} = U_{(a b),(c e)}
    for (int c = 0; c < q; ++c)
        for (int e = 0; e < q; ++e) {
            int row = image[c * q + e];
            int a = row / q, b = row % q;
            R(a * q + c, b * q + e) += 1.0;
        }
    Eigen::JacobiSVD<Mat> svd(R);
    std::vector<double> s(d);
    for (int i = 0; i < d; ++i) s[i] = svd.singularValues()(i);
    return s;
}

}  // namespace

PermutationSearchResult permutation_search_L2(int q, std::int64_t samples,
                                              std::uint64_t seed) {
    if (q > 4) throw std::invalid_argument("permutation_search_L2: q > 4 not supported");
    PermutationSearchResult res;
    const int d = q * q;

    auto consider = [&](const std::vector<int>& image) {
        ++res.examined;
        std::vector<double> s = perm_schmidt(image, q);
        if (!is_flat_spectrum(s)) return;  // flatness is necessary
        int rank = 0;
        for (double v : s)
            if (v > kSchmidtCutoff * s[0]) ++rank;
        UnitaryGate g = permutation_gate(q, image);
        if (!verify_Lk(g, 2, LightconeDir::left).ok) return;
        if (!verify_Lk(g, 2, LightconeDir::right).ok) return;
        res.l2_members.emplace_back(image, rank);
        if (rank > 1) ++res.rank_histogram[rank];
    };

    if (q <= 3) {
        std::vector<int> image(d);
        std::iota(image.begin(), image.end(), 0);
        do {
            consider(image);
        } while (std::next_permutation(image.begin(), image.end()));
    } else {
        std::mt19937_64 rng(seed);
        std::vector<int> image(d);
        std::iota(image.begin(), image.end(), 0);
        for (std::int64_t i = 0; i < samples; ++i) {
            std::shuffle(image.begin(), image.end(), rng);
            consider(image);
        }
    }
    return res;
}

}  // namespace dulab
