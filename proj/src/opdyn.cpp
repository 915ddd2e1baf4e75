#include "dulab/opdyn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dulab/analysis.hpp"
#include "dulab/membrane.hpp"
#include "znet.hpp"

namespace dulab {

namespace {

using detail::NetT;
using detail::RMat;

std::int64_t ipow64(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

Tensor circle2(int q) { return boundary_vector(BoundaryVector::Kind::circle, q, 2).data; }
Tensor square2(int q) { return boundary_vector(BoundaryVector::Kind::square, q, 2).data; }

void drop_axes(NetT& cur, int a1, int a2) {
    std::vector<std::string> keep;
    for (std::size_t k = 0; k < cur.labels.size(); ++k)
        if (static_cast<int>(k) != a1 && static_cast<int>(k) != a2)
            keep.push_back(cur.labels[k]);
    cur.labels = std::move(keep);
}

// Shared body of lctm_apply / lctm_apply_transpose: one diagonal row of n
// folded gates, first gate's I2 closed with the circle, last gate's O1 with
// the square, input legs fed into `feed`, outputs read off `read`.
Vec lctm_apply_impl(const UnitaryGate& U, const Vec& v, int n, bool transpose) {
    const int q = U.q;
    const std::int64_t L = ipow64(q, 4);
    if (n < 1) throw std::invalid_argument("lctm_apply: n >= 1");
    if (v.size() != ipow64(L, n))
        throw std::invalid_argument("lctm_apply: vector dimension mismatch");
    const Tensor W = fold(U, 2).t;  // [O1, I1, O2, I2]
    const Tensor o = circle2(q), s = square2(q);
    const int feed = transpose ? FoldedGate::O2 : FoldedGate::I1;
    const int read = transpose ? FoldedGate::I1 : FoldedGate::O2;

    Tensor V(std::vector<std::int64_t>(n, L));
    for (std::int64_t i = 0; i < V.size(); ++i) V.data[i] = v[i];

    Tensor Wc = Tensor::tensordot(W, o, {FoldedGate::I2}, {0});  // [O1, I1, O2]
    // leg positions within Wc (I2 removed)
    const int feed_c = feed == FoldedGate::I1 ? 1 : 2;
    const int read_c = feed == FoldedGate::I1 ? 2 : 1;

    NetT cur;
    cur.t = Tensor::tensordot(Wc, V, {feed_c}, {0});
    cur.labels = read_c < feed_c ? std::vector<std::string>{"R", "O1"}
                                 : std::vector<std::string>{"O1", "R"};
    cur.labels[cur.labels[0] == "R" ? 0 : 1] = "out1";
    for (int j = 2; j <= n; ++j) cur.labels.push_back("v" + std::to_string(j));

    for (int j = 2; j <= n; ++j) {
        const int ac = cur.axis("O1");
        cur.t = Tensor::tensordot(cur.t, W, {ac}, {FoldedGate::I2});
        cur.labels.erase(cur.labels.begin() + ac);
        cur.labels.push_back("O1");
        cur.labels.push_back("I1");
        cur.labels.push_back("O2");
        const std::string rd = read == FoldedGate::I1 ? "I1" : "O2";
        const std::string fd = feed == FoldedGate::I1 ? "I1" : "O2";
        const int af = cur.axis(fd), av = cur.axis("v" + std::to_string(j));
        cur.t = Tensor::trace_axes(cur.t, af, av);
        drop_axes(cur, af, av);
        cur.labels[cur.axis(rd)] = "out" + std::to_string(j);
    }
    {
        const int ac = cur.axis("O1");
        cur.t = Tensor::tensordot(cur.t, s, {ac}, {0});
        cur.labels.erase(cur.labels.begin() + ac);
    }
    std::vector<int> perm(n);
    for (int j = 1; j <= n; ++j) perm[j - 1] = cur.axis("out" + std::to_string(j));
    Tensor outT = cur.t.transposed(perm);
    Vec out(outT.size());
    for (std::int64_t i = 0; i < outT.size(); ++i)
        out[i] = outT.data[i] * double(q);
    return out;
}

// Triangular staircase patch on i sites with step height h: rows r = 1..h*i,
// row r holding ceil(r/h) gates chained gate_j.O1 -> gate_{j+1}.I2.  The
// first gate's I2 is closed with the square, gates without a predecessor
// below get circles on I1, the top gate's O1 gets a circle; O2 legs feed the
// next row.  Output legs are ordered (site i, ..., site 1) reversed to
// (site 1 first), and the vector is normalized so that the overlap with the
// all-square product equals q^{-i}.
Tensor stair_patch(const Tensor& W2, int i, int h, int q) {
    const Tensor o = circle2(q), s = square2(q);
    if (i < 1) throw std::invalid_argument("stair_patch: i >= 1");
    NetT B;  // axes b_1..b_g of the previous row's O2 legs
    int prev_g = 0;
    const int rows = h * i;
    for (int r = 1; r <= rows; ++r) {
        const int g = (r + h - 1) / h;
        NetT cur;
        // gate 1: I2 capped with the square
        cur.t = Tensor::tensordot(W2, s, {FoldedGate::I2}, {0});  // [O1, I1, O2]
        cur.labels = {"O1", "I1", "O2"};
        if (prev_g >= 1) {
            const int ai = cur.axis("I1");
            cur.t = Tensor::tensordot(cur.t, B.t, {ai}, {B.axis("b1")});
            cur.labels.erase(cur.labels.begin() + ai);
            for (int bj = 2; bj <= prev_g; ++bj)
                cur.labels.push_back("b" + std::to_string(bj));
        } else {
            const int ai = cur.axis("I1");
            cur.t = Tensor::tensordot(cur.t, o, {ai}, {0});
            cur.labels.erase(cur.labels.begin() + ai);
        }
        cur.labels[cur.axis("O2")] = "f1";
        if (g == 1) {
            const int ao = cur.axis("O1");
            cur.t = Tensor::tensordot(cur.t, o, {ao}, {0});
            cur.labels.erase(cur.labels.begin() + ao);
        }
        for (int j = 2; j <= g; ++j) {
            // attach gate j via its I2 to the chain leg O1
            const int ac = cur.axis("O1");
            cur.t = Tensor::tensordot(cur.t, W2, {ac}, {FoldedGate::I2});
            cur.labels.erase(cur.labels.begin() + ac);
            cur.labels.push_back("O1");
            cur.labels.push_back("I1");
            cur.labels.push_back("O2");
            if (j <= prev_g) {
                const int ai = cur.axis("I1"), ab = cur.axis("b" + std::to_string(j));
                cur.t = Tensor::trace_axes(cur.t, ai, ab);
                drop_axes(cur, ai, ab);
            } else {
                const int ai = cur.axis("I1");
                cur.t = Tensor::tensordot(cur.t, o, {ai}, {0});
                cur.labels.erase(cur.labels.begin() + ai);
            }
            if (j == g) {
                const int ao = cur.axis("O1");
                cur.t = Tensor::tensordot(cur.t, o, {ao}, {0});
                cur.labels.erase(cur.labels.begin() + ao);
            }
            cur.labels[cur.axis("O2")] = "f" + std::to_string(j);
        }
        std::vector<int> perm(g);
        for (int j = 1; j <= g; ++j) perm[j - 1] = cur.axis("f" + std::to_string(j));
        B.t = cur.t.transposed(perm);
        B.labels.clear();
        for (int j = 1; j <= g; ++j) B.labels.push_back("b" + std::to_string(j));
        prev_g = g;
    }
    // reverse to site order (gate i first was last axis)
    std::vector<int> rev(i);
    for (int j = 0; j < i; ++j) rev[j] = i - 1 - j;
    Tensor v = B.t.transposed(rev);
    // normalize <v | square^i> = q^{-i}
    Tensor c = v;
    const Tensor s1 = square2(q);
    for (int j = 0; j < i; ++j) c = Tensor::tensordot(c, s1, {0}, {0});
    const cd overlap = c.data[0];
    if (std::abs(overlap) < 1e-300)
        throw std::runtime_error("stair_patch: vanishing square overlap");
    v *= std::pow(double(q), -double(i)) / overlap;
    return v;
}

Tensor reverse_all_legs(const Tensor& t) {
    std::vector<int> perm(t.rank());
    for (int j = 0; j < t.rank(); ++j) perm[j] = t.rank() - 1 - j;
    return t.transposed(perm);
}

Vec tensor_to_vec(const Tensor& t) {
    Vec v(t.size());
    for (std::int64_t i = 0; i < t.size(); ++i) v[i] = t.data[i];
    return v;
}

}  // namespace

// ---- light-cone transfer matrix ------------------------------------------------

Vec lctm_apply(const UnitaryGate& U, const Vec& v, int n) {
    return lctm_apply_impl(U, v, n, false);
}

Vec lctm_apply_transpose(const UnitaryGate& U, const Vec& v, int n) {
    return lctm_apply_impl(U, v, n, true);
}

Lctm lctm_build(const UnitaryGate& U, int n, std::int64_t budget_bytes) {
    const int q = U.q;
    if (n < 1) throw std::invalid_argument("lctm_build: n >= 1");
    const std::int64_t D = std::int64_t(q) * q;
    const std::int64_t dim = ipow64(D, 2 * n);
    {
        long double bytes = 8.0L * static_cast<long double>(dim) * dim;
        if (bytes > static_cast<long double>(budget_bytes)) {
            std::ostringstream os;
            os << "lctm_build: dense map at q=" << q << ", n=" << n
               << " exceeds the memory budget";
            throw std::runtime_error(os.str());
        }
    }
    const detail::RealGate G = detail::real_step_gate(U, false);

    // Per-sheet chain tensor K[(i_1,o_1),...,(i_n,o_n), c]: the single-sheet
    // row with the circle (e_0) seeding the chain, the final chain leg c left
    // open for the square closure.
    std::vector<double> K(D, 0.0);
    K[0] = 1.0;
    for (int j = 1; j <= n; ++j) {
        const std::int64_t P = ipow64(D, 2 * (j - 1));
        std::vector<double> next(P * D * D * D, 0.0);
        for (std::int64_t p = 0; p < P; ++p)
            for (std::int64_t c = 0; c < D; ++c) {
                const double kv = K[p * D + c];
                if (kv == 0.0) continue;
                for (std::int64_t ij = 0; ij < D; ++ij)
                    for (std::int64_t oc = 0; oc < D * D; ++oc)
                        next[((p * D + ij) * D + oc / D) * D + oc % D] +=
                            kv * G.g[(ij * D + c) * D * D + oc];
            }
        K = std::move(next);
    }

    // Reorganize into A[o-digits, i-digits, c].
    const std::int64_t Dn = ipow64(D, n);
    std::vector<double> A(Dn * Dn * D, 0.0);
    {
        std::vector<std::int64_t> dig(2 * n);
        for (std::int64_t idx = 0; idx < Dn * Dn; ++idx) {
            std::int64_t r = idx;
            for (int k = 2 * n - 1; k >= 0; --k) {
                dig[k] = r % D;
                r /= D;
            }
            std::int64_t oi = 0, ii = 0;
            for (int s = 0; s < n; ++s) {
                ii = ii * D + dig[2 * s];
                oi = oi * D + dig[2 * s + 1];
            }
            for (std::int64_t c = 0; c < D; ++c)
                A[(oi * Dn + ii) * D + c] = K[idx * D + c];
        }
    }

    // Interleave table: site digits of sheets a and b merged per site.
    std::vector<std::int64_t> il(Dn * Dn);
    for (std::int64_t a = 0; a < Dn; ++a)
        for (std::int64_t b = 0; b < Dn; ++b) {
            std::int64_t av = a, bv = b, r = 0, w = 1;
            for (int s = 0; s < n; ++s) {
                r += ((av % D) * D + bv % D) * w;
                w *= D * D;
                av /= D;
                bv /= D;
            }
            il[a * Dn + b] = r;
        }

    Lctm out;
    out.q = q;
    out.n = n;
    out.matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (std::int64_t oa = 0; oa < Dn; ++oa)
        for (std::int64_t ob = 0; ob < Dn; ++ob) {
            const std::int64_t row = il[oa * Dn + ob];
            for (std::int64_t ia = 0; ia < Dn; ++ia) {
                const double* Aa = &A[(oa * Dn + ia) * D];
                for (std::int64_t ib = 0; ib < Dn; ++ib) {
                    const double* Ab = &A[(ob * Dn + ib) * D];
                    double acc = 0.0;
                    for (std::int64_t c = 0; c < D; ++c) acc += Aa[c] * Ab[c];
                    out.matrix(row, il[ia * Dn + ib]) = acc;
                }
            }
        }

    // All-circle fixed point: e_0 in this basis.
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(dim);
    e0[0] = 1.0;
    out.fixed_point_residual = (out.matrix * e0 - e0).norm();

    // Power-iteration estimate of the spectral radius.
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        x[i] = std::cos(0.7 * double(i) + 0.3);  // deterministic start
    x.normalize();
    double lam = 0.0;
    for (int it = 0; it < 300; ++it) {
        Eigen::VectorXd y = out.matrix * x;
        const double ny = y.norm();
        if (ny == 0.0) {
            lam = 0.0;
            break;
        }
        lam = ny;
        x = y / ny;
    }
    out.spectral_radius = lam;
    return out;
}

// ---- staircases -----------------------------------------------------------------

json OverlapMatrix::to_json() const {
    json g = json::array(), p = json::array();
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        json gr = json::array(), pr = json::array();
        for (Eigen::Index j = 0; j < gram.cols(); ++j) {
            gr.push_back({{"re", gram(i, j).real()}, {"im", gram(i, j).imag()}});
            pr.push_back(predicted(i, j).real());
        }
        g.push_back(gr);
        p.push_back(pr);
    }
    return json{{"gram", g},
                {"predicted", p},
                {"max_deviation", max_deviation},
                {"hankel_residual", hankel_residual},
                {"rank", rank},
                {"full_rank", full_rank}};
}

std::pair<StaircaseBasis, OverlapMatrix> staircase_overlaps(
    const UnitaryGate& U, int n, int k, std::int64_t budget_bytes) {
    const int q = U.q;
    if (n < 1) throw std::invalid_argument("staircase_overlaps: n >= 1");
    if (k < 2) throw std::invalid_argument("staircase_overlaps: k >= 2");
    const std::int64_t L = ipow64(q, 4);
    {
        long double bytes = 16.0L * static_cast<long double>(ipow64(L, n)) * (n + 1);
        if (bytes > static_cast<long double>(budget_bytes))
            throw std::runtime_error("staircase_overlaps: basis exceeds the memory budget");
    }
    const Tensor W2 = fold(U, 2).t;
    const Tensor o = circle2(q), s = square2(q);
    const int h = k - 1;

    StaircaseBasis basis;
    basis.q = q;
    basis.n = n;
    basis.k = k;

    // Right vectors r_j = rtilde_j (x) square^{(n-j)}; rtilde from the patch
    // of the fully leg-reversed gate.  Left vectors l_i = circle^{(n-i)} (x)
    // stilde_i.
    const Tensor W2r = W2.transposed({3, 2, 1, 0});
    for (int j = 0; j <= n; ++j) {
        Tensor rt;
        if (j == 0) {
            rt = s;
            for (int p = 1; p < n; ++p) rt = Tensor::outer(rt, s);
        } else {
            rt = stair_patch(W2r, j, h, q);
            for (int p = j; p < n; ++p) rt = Tensor::outer(rt, s);
        }
        basis.right.push_back(tensor_to_vec(rt));
    }
    for (int i = 0; i <= n; ++i) {
        Tensor lt;
        if (i == 0) {
            lt = o;
            for (int p = 1; p < n; ++p) lt = Tensor::outer(lt, o);
        } else {
            Tensor st = stair_patch(W2, i, h, q);
            if (i == n) {
                lt = st;
            } else {
                lt = o;
                for (int p = 1; p < n - i; ++p) lt = Tensor::outer(lt, o);
                lt = Tensor::outer(lt, st);
            }
        }
        basis.left.push_back(tensor_to_vec(lt));
    }
    for (int j = 0; j <= n; ++j) {
        const Vec& r = basis.right[j];
        basis.right_residuals.push_back((lctm_apply(U, r, n) - r).norm());
        const Vec& l = basis.left[j];
        basis.left_residuals.push_back((lctm_apply_transpose(U, l, n) - l).norm());
    }

    OverlapMatrix om;
    om.gram = Mat::Zero(n + 1, n + 1);
    om.predicted = Mat::Zero(n + 1, n + 1);
    const double Bk = purity_B(U, k - 1);
    const double b = Bk / double(q * q);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            // plain bilinear pairing <l_i| r_j> (no conjugation): the left
            // vectors are rows of the transfer eigenproblem
            om.gram(i, j) = basis.left[i].transpose() * basis.right[j];
            om.predicted(i, j) = std::pow(double(q), -double(n)) *
                                 std::pow(b, double(std::max(0, i + j - n)));
        }
    om.max_deviation = (om.gram - om.predicted).cwiseAbs().maxCoeff();
    double hr = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int r = 1; i + r <= n && j - r >= 0; ++r)
                hr = std::max(hr, std::abs(om.gram(i, j) - om.gram(i + r, j - r)));
    om.hankel_residual = hr;
    {
        Eigen::JacobiSVD<Mat> svd(om.gram);
        const auto& sv = svd.singularValues();
        om.rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > 1e-8 * sv[0]) ++om.rank;
        om.full_rank = om.rank == n + 1;
    }
    return {std::move(basis), om};
}

// ---- tripartite information -----------------------------------------------------

double tripartite_info(const UnitaryGate& U, int x, int t,
                       std::int64_t budget_bytes) {
    const auto cut = CutCoordinates::from_xt(x, t);
    const int q = U.q;
    const double z2 = z_alpha_exact(U, cut.m, cut.n, 2, budget_bytes);
    const double zt = detail::znet_value(
        U, cut.m, cut.n,
        detail::uniform_zcaps(q, BoundaryVector::Kind::circle,
                              BoundaryVector::Kind::square,
                              BoundaryVector::Kind::circle,
                              BoundaryVector::Kind::square),
        budget_bytes);
    return std::log(std::pow(double(q), double(cut.m + cut.n)) * z2) + std::log(zt);
}

// ---- Jordan-block growth ----------------------------------------------------------

json JordanProfile::to_json() const {
    return json{{"q", q},
                {"n_max", n_max},
                {"m", m},
                {"m_by_threshold", m_by_threshold},
                {"threshold_stable", threshold_stable}};
}

namespace {

int numerical_rank(const Eigen::MatrixXd& M, double tau, double scale) {
    if (M.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] <= tau * scale) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > tau * s[0]) ++r;
    return r;
}

// Largest Jordan block of the nilpotent part: the smallest p with
// rank(T^p) = rank(T^{p+1}).  One column compression T = Q1 S gives
// rank(T^p) = rank(C^{p-1}) with C = Q1^T T Q1.
int largest_block(const Eigen::MatrixXd& T,
                  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr,
                  double tau) {
    const Eigen::Index N = T.rows();
    const auto diag = qr.matrixQR().diagonal();
    const double d0 = std::abs(diag[0]);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        if (std::abs(diag[i]) > tau * d0) ++r;
    if (r == 0) return 1;  // T itself vanishes: rank(T^1) = rank(T^2) = 0
    Eigen::MatrixXd Q1 = qr.householderQ() * Eigen::MatrixXd::Identity(N, r);
    Eigen::MatrixXd C = Q1.transpose() * (T * Q1);
    const double scale = std::max(1.0, C.norm());
    int prev = static_cast<int>(r);  // rank(T^1)
    Eigen::MatrixXd M = C;           // C^{p-1} for p = 2
    for (int p = 2; p <= static_cast<int>(r) + 1; ++p) {
        const int rk = numerical_rank(M, tau, scale);
        if (rk == prev) return p - 1;
        prev = rk;
        if (rk == 0) return p - 1 == 0 ? 1 : p - 1;
        M = M * C;
    }
    return static_cast<int>(r) + 1;
}

}  // namespace

JordanProfile jordan_profile(const UnitaryGate& U, int n_max,
                             std::int64_t budget_bytes) {
    if (n_max < 1) throw std::invalid_argument("jordan_profile: n_max >= 1");
    JordanProfile out;
    out.q = U.q;
    out.n_max = n_max;
    const std::vector<double> thresholds = {1e-6, 1e-8, 1e-10};
    out.m_by_threshold.assign(thresholds.size(), {});
    for (int n = 1; n <= n_max; ++n) {
        const Lctm T = lctm_build(U, n, budget_bytes);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(T.matrix);
        for (std::size_t ti = 0; ti < thresholds.size(); ++ti)
            out.m_by_threshold[ti].push_back(
                largest_block(T.matrix, qr, thresholds[ti]));
    }
    out.m = out.m_by_threshold[1];
    out.threshold_stable = out.m_by_threshold[0] == out.m_by_threshold[1] &&
                           out.m_by_threshold[1] == out.m_by_threshold[2];
    return out;
}

}  // namespace dulab
