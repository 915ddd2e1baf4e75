#include "dulab/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace dulab {

namespace {

double sum4(const std::vector<double>& s) {
    double v = 0.0;
    for (double x : s) v += x * x * x * x;
    return v;
}

// Labeled-tensor chain builder for the hierarchical diagrams.
struct Net {
    Tensor t;
    std::vector<std::string> labels;

    int axis(const std::string& l) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return static_cast<int>(i);
        throw std::logic_error("Net: missing label " + l);
    }
    void cap(const std::string& l, const Tensor& v) {
        int i = axis(l);
        t = Tensor::tensordot(t, v, {i}, {0});
        labels.erase(labels.begin() + i);
    }
    // Contract our `chain_label` leg with leg `wleg` of W, appending W's
    // remaining legs with the given labels.
    void attach(const std::string& chain_label, const Tensor& W, int wleg,
                const std::vector<std::string>& wlabels) {
        int i = axis(chain_label);
        t = Tensor::tensordot(t, W, {i}, {wleg});
        labels.erase(labels.begin() + i);
        for (const auto& l : wlabels) labels.push_back(l);
    }
};

// Max-abs residual of the factorization T = corner_vector (x) rest, with the
// corner leg moved first; normalized by the max-abs of the right-hand side.
double factorization_residual(const Net& net, const std::string& corner,
                              const Tensor& v) {
    int ci = net.axis(corner);
    std::vector<int> perm{ci};
    for (int k = 0; k < net.t.rank(); ++k)
        if (k != ci) perm.push_back(k);
    Tensor T = net.t.transposed(perm);
    Tensor rest = Tensor::tensordot(v.conjugated(), T, {0}, {0});
    Tensor rhs = Tensor::outer(v, rest);
    double denom = std::max(rhs.max_abs(), 1e-300);
    return (T - rhs).max_abs() / denom;
}

// Residual of one mirror orientation of the k-gate hierarchical diagram.
// W: folded gate with legs [O1, I1, O2, I2]; v: cap vector of matching leg
// dimension (circle or square at the chosen replica level).
double chain_residual(const Tensor& W, const Tensor& v, int k, bool mirror) {
    Net net;
    if (!mirror) {
        // caps on 1.O1, 1.I1 and O1 of gates 2..k; chain j.O2 -> (j+1).I1;
        // open legs: I2 of every gate and k.O2; the free corner is 1.I2.
        net.t = Tensor::tensordot(W, v, {0}, {0});  // O1 -> [I1, O2, I2]
        net.labels = {"I1", "chain", "I2_1"};
        net.cap("I1", v);
        for (int j = 2; j <= k; ++j) {
            net.attach("chain", W, FoldedGate::I1,
                       {"O1", "chain", "I2_" + std::to_string(j)});
            net.cap("O1", v);
        }
        return factorization_residual(net, "I2_1", v);
    }
    // Mirror: caps on I2 of every gate and on k.O2; open legs: every O1 and
    // 1.I1; the free corner is k.O1.  Built from the top gate downwards.
    Tensor Wc = Tensor::tensordot(W, v, {FoldedGate::I2}, {0});  // [O1, I1, O2]
    net.t = Tensor::tensordot(Wc, v, {2}, {0});  // top gate, O2 capped
    net.labels = {"O1_" + std::to_string(k), "chain"};
    for (int j = k - 1; j >= 1; --j) {
        // chain leg is the current gate's I1, fed by the lower gate's O2
        net.attach("chain", Wc, 2, {"O1_" + std::to_string(j), "chain"});
    }
    return factorization_residual(net, "O1_" + std::to_string(k), v);
}

UnitaryGate oriented(const UnitaryGate& U, LightconeDir dir) {
    if (dir == LightconeDir::right) return U;
    Mat s = swap_matrix(U.q);
    return UnitaryGate(U.q, s * U.m * s, U.recipe);
}

}  // namespace

json HierarchyReport::to_json() const {
    json j;
    j["dual_unitary"] = {{"ok", dual_unitary.ok}, {"residual", dual_unitary.residual}};
    j["t_dual"] = {{"ok", t_dual.ok}, {"residual", t_dual.residual}};
    j["level_left"] = level_left ? json(*level_left) : json(nullptr);
    j["level_right"] = level_right ? json(*level_right) : json(nullptr);
    j["residuals"] = residuals;
    return j;
}

json EntanglingMeasures::to_json() const {
    return json{{"B", B}, {"b1", b1}, {"EP", EP}, {"GT", GT}};
}

CheckResult verify_dual_unitary(const UnitaryGate& U, double tol) {
    Mat R = reshuffle(U);
    double r = (R * R.adjoint() - Mat::Identity(R.rows(), R.cols())).norm();
    return {r <= tol, r};
}

CheckResult verify_t_dual(const UnitaryGate& U, double tol) {
    Mat G = partial_transpose(U);
    double r = (G * G.adjoint() - Mat::Identity(G.rows(), G.cols())).norm();
    return {r <= tol, r};
}

CheckResult verify_Lk(const UnitaryGate& U, int k, LightconeDir dir, double tol) {
    if (k < 2) throw std::invalid_argument("verify_Lk: k must be >= 2");
    UnitaryGate V = oriented(U, dir);
    FoldedGate F = fold(V, 1);
    Tensor c = boundary_vector(BoundaryVector::Kind::circle, U.q, 1).data;
    double r = std::max(chain_residual(F.t, c, k, false),
                        chain_residual(F.t, c, k, true));
    return {r <= tol, r};
}

std::optional<double> verify_Lk_alpha2(const UnitaryGate& U, int k,
                                       LightconeDir dir,
                                       BoundaryVector::Kind cap,
                                       std::int64_t budget_bytes) {
    UnitaryGate V = oriented(U, dir);
    FoldedGate F;
    try {
        F = fold(V, 2, budget_bytes);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
    Tensor v = boundary_vector(cap, U.q, 2).data;
    return std::max(chain_residual(F.t, v, k, false),
                    chain_residual(F.t, v, k, true));
}

HierarchyReport classify_hierarchy(const UnitaryGate& U, int k_max, double tol) {
    if (k_max < 2) throw std::invalid_argument("classify_hierarchy: k_max must be >= 2");
    HierarchyReport rep;
    rep.dual_unitary = verify_dual_unitary(U, tol);
    rep.t_dual = verify_t_dual(U, tol);
    for (LightconeDir dir : {LightconeDir::left, LightconeDir::right}) {
        std::optional<int>& level =
            dir == LightconeDir::left ? rep.level_left : rep.level_right;
        for (int k = 2; k <= k_max; ++k) {
            CheckResult cr = verify_Lk(U, k, dir, tol);
            std::string base = "k=" + std::to_string(k) + " dir=" +
                               to_string(dir);
            rep.residuals[base + " alpha=1 cap=circle"] = cr.residual;
            for (auto cap : {BoundaryVector::Kind::circle, BoundaryVector::Kind::square}) {
                auto r2 = verify_Lk_alpha2(U, k, dir, cap);
                std::string key = base + " alpha=2 cap=" +
                                  (cap == BoundaryVector::Kind::circle ? "circle" : "square");
                rep.residuals[key] = r2 ? *r2 : -1.0;
            }
            if (cr.ok && !level) level = k;
        }
    }
    return rep;
}

double purity_B(const UnitaryGate& U, int l) {
    if (l < 1) throw std::invalid_argument("purity_B: l must be >= 1");
    const int q = U.q;
    double sites = static_cast<double>(l + 1) * std::log2(static_cast<double>(q));
    if (sites > 13.0)
        throw std::runtime_error("purity_B: staircase exceeds memory budget");
    std::int64_t d = 1;
    for (int s = 0; s <= l; ++s) d *= q;

    // Diagonal composition D_l = U_{l-1,l} ... U_{0,1}: each gate's right
    // site is the next gate's left site, later gates applied last.
    Mat D = Mat::Identity(d, d);
    for (int j = 0; j < l; ++j) {
        std::int64_t dl = 1, dr = 1;
        for (int s = 0; s < j; ++s) dl *= q;
        for (int s = j + 2; s <= l; ++s) dr *= q;
        Mat M = kron(kron(Mat::Identity(dl, dl), U.m), Mat::Identity(dr, dr));
        D = M * D;
    }

    // Operator purity of the reduced Choi state keeping the legs
    // {site-0 input} and {site-j output : j < l}.  Arrange the Choi tensor as
    // a (kept) x (traced) matrix G; then B_l = q^{l+1} tr(rho^2) with
    // rho = G G^dag / tr(G G^dag).
    // Kept row index: (o_0, ..., o_{l-1}, i_0); traced: (o_l, i_1, ..., i_l).
    Mat G(d, d);
    std::vector<std::int64_t> out_idx(l + 1), in_idx(l + 1);
    for (std::int64_t row = 0; row < d; ++row) {
        // row decodes (o_0..o_{l-1}, i_0)
        std::int64_t rem = row;
        std::int64_t i0 = rem % q;
        rem /= q;
        for (int s = l - 1; s >= 0; --s) {
            out_idx[s] = rem % q;
            rem /= q;
        }
        for (std::int64_t col = 0; col < d; ++col) {
            std::int64_t r2 = col;
            for (int s = l; s >= 1; --s) {
                in_idx[s] = r2 % q;
                r2 /= q;
            }
            out_idx[l] = r2;  // o_l
            in_idx[0] = i0;
            std::int64_t ro = 0, ci = 0;
            for (int s = 0; s <= l; ++s) {
                ro = ro * q + out_idx[s];
                ci = ci * q + in_idx[s];
            }
            G(row, col) = D(ro, ci);
        }
    }
    Mat rho = G * G.adjoint();
    double tr = rho.trace().real();
    double p = (rho * rho).trace().real() / (tr * tr);
    return static_cast<double>(d) * p;
}

EntanglingMeasures ep_gt(const UnitaryGate& U, int l_max) {
    const double q2 = static_cast<double>(U.q) * U.q;
    const double q4 = q2 * q2;
    double sl = sum4(schmidt_values(U));
    double sg = sum4(dual_schmidt_values(U));
    EntanglingMeasures m;
    m.EP = q2 / (q2 - 1.0) * ((1.0 + 1.0 / q2) - (sl + sg) / q4);
    m.GT = q2 / (2.0 * (q2 - 1.0)) * ((1.0 - 1.0 / q2) - (sl - sg) / q4);
    for (int l = 1; l <= l_max; ++l) m.B.push_back(purity_B(U, l));
    m.b1 = sl / q4;  // equals B_1 / q^2
    return m;
}

UnitaryGate local_dress(const UnitaryGate& U, const Mat& u_in_left,
                        const Mat& u_in_right, const Mat& u_out_left,
                        const Mat& u_out_right) {
    const int q = U.q;
    for (const Mat* u : {&u_in_left, &u_in_right, &u_out_left, &u_out_right})
        if (u->rows() != q || u->cols() != q)
            throw std::invalid_argument("local_dress: dressing dimension mismatch");
    Mat V = kron(u_out_left, u_out_right) * U.m * kron(u_in_left, u_in_right);
    GateRecipe r;
    r.kind = "local_dress";
    r.params["base"] = U.recipe.to_json();
    return UnitaryGate(q, std::move(V), std::move(r));
}

}  // namespace dulab
