#include "znet.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace dulab::detail {

// ---- Hermitian operator basis ------------------------------------------------

Mat op_basis(int q) {
    const int D = q * q;
    Mat T = Mat::Zero(D, D);
    int col = 0;
    // identity
    for (int k = 0; k < q; ++k) T(k * q + k, col) = 1.0 / std::sqrt(double(q));
    ++col;
    // off-diagonal symmetric and antisymmetric pairs
    const double s2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j) {
            T(i * q + j, col) = s2;
            T(j * q + i, col) = s2;
            ++col;
            T(i * q + j, col) = cd(0.0, s2);
            T(j * q + i, col) = cd(0.0, -s2);
            ++col;
        }
    // traceless diagonal
    for (int d = 1; d < q; ++d) {
        const double nrm = 1.0 / std::sqrt(double(d) * (d + 1));
        for (int k = 0; k < d; ++k) T(k * q + k, col) = nrm;
        T(d * q + d, col) = -double(d) * nrm;
        ++col;
    }
    if (col != D) throw std::logic_error("op_basis: count mismatch");
    return T;
}

// ---- real step gate ------------------------------------------------------------

RealGate real_step_gate(const UnitaryGate& U, bool reflected) {
    const int q = U.q, D = q * q;
    Tensor w = fold(U, 1).t;  // [O1, I1, O2, I2]
    if (reflected) w = w.transposed({2, 3, 0, 1});
    const Mat T = op_basis(q);
    const Tensor Tt = Tensor::from_matrix(T, {D, D});
    const Tensor Tc = Tensor::from_matrix(T.conjugate(), {D, D});
    // out-legs rotate with conj(T), in-legs with T
    Tensor a = Tensor::tensordot(w, Tc, {0}, {0});  // [I1, O2, I2, i1]
    a = Tensor::tensordot(a, Tt, {0}, {0});         // [O2, I2, i1, j1]
    a = Tensor::tensordot(a, Tc, {0}, {0});         // [I2, i1, j1, i2]
    a = Tensor::tensordot(a, Tt, {0}, {0});         // [i1, j1, i2, j2]
    // step matrix G[(j1 j2), (i2 i1)] = W~[i1, j1, i2, j2]
    const Tensor g = a.transposed({1, 3, 2, 0});
    RealGate out;
    out.q = q;
    out.g.resize(g.data.size());
    double imax = 0.0;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        out.g[i] = g.data[i].real();
        imax = std::max(imax, std::abs(g.data[i].imag()));
    }
    if (imax > 1e-8)
        throw std::logic_error("real_step_gate: non-real operator-basis gate");
    return out;
}

RMat real_cap(BoundaryVector::Kind kind, int q) {
    const int D = q * q;
    RMat m = RMat::Zero(D, D);
    if (kind == BoundaryVector::Kind::circle)
        m(0, 0) = 1.0;
    else
        m = RMat::Identity(D, D) / double(q);
    return m;
}

ZCaps uniform_zcaps(int q, BoundaryVector::Kind bottom, BoundaryVector::Kind left,
                    BoundaryVector::Kind top, BoundaryVector::Kind right) {
    return {real_cap(bottom, q), real_cap(left, q), real_cap(top, q),
            real_cap(right, q)};
}

void check_sweep_budget(int q, int width, std::int64_t budget_bytes) {
    // largest sweep array: q^{4(width+1)} entries, accounted at 16 bytes each
    long double bytes = 16.0L;
    for (int i = 0; i < 4 * (width + 1); ++i) bytes *= q;
    if (bytes > static_cast<long double>(budget_bytes)) {
        std::ostringstream os;
        os << "network sweep at q=" << q << ", width=" << width
           << " exceeds the memory budget (" << budget_bytes << " bytes)";
        throw std::runtime_error(os.str());
    }
}

// ---- kernel --------------------------------------------------------------------

void contract_step(const double* cur, std::int64_t P, std::int64_t S,
                   std::int64_t M, std::int64_t C, const double* W,
                   std::int64_t R, double* out) {
    if (R >= 8) {
#pragma omp parallel for schedule(static) if (P >= 4)
        for (std::int64_t p = 0; p < P; ++p) {
            for (std::int64_t m = 0; m < M; ++m) {
                double* om = out + (p * M + m) * R;
                for (std::int64_t s = 0; s < S; ++s) {
                    const double* am = cur + ((p * S + s) * M + m) * C;
                    for (std::int64_t c = 0; c < C; ++c) {
                        const double av = am[c];
                        if (av == 0.0) continue;
                        const double* w = W + (s * C + c) * R;
                        for (std::int64_t r = 0; r < R; ++r) om[r] += av * w[r];
                    }
                }
            }
        }
    } else {
#pragma omp parallel for schedule(static) if (P >= 4)
        for (std::int64_t p = 0; p < P; ++p)
            for (std::int64_t m = 0; m < M; ++m)
                for (std::int64_t r = 0; r < R; ++r) {
                    double acc = 0.0;
                    for (std::int64_t s = 0; s < S; ++s) {
                        const double* am = cur + ((p * S + s) * M + m) * C;
                        const double* w = W + s * C * R + r;
                        for (std::int64_t c = 0; c < C; ++c) acc += am[c] * w[c * R];
                    }
                    out[(p * M + m) * R + r] += acc;
                }
    }
}

// ---- row application -------------------------------------------------------------

static std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

std::vector<double> apply_row_real(const std::vector<double>& state,
                                   const RealGate& G, const RMat& lcap,
                                   const RMat& rcap, int n) {
    const std::int64_t D = G.D();
    const std::int64_t sz = ipow(D, 2 * n);
    if (static_cast<std::int64_t>(state.size()) != sz)
        throw std::invalid_argument("apply_row_real: state size mismatch");
    std::vector<double> result(sz, 0.0);
    // right-cap step matrix, flattened (cra * D + crb) x 1
    std::vector<double> rw(D * D);
    for (std::int64_t a = 0; a < D; ++a)
        for (std::int64_t b = 0; b < D; ++b) rw[a * D + b] = rcap(a, b);

    for (std::int64_t term = 0; term < D; ++term) {
        if (lcap.col(term).squaredNorm() == 0.0) continue;
        // seed the sheet-a chain with the left-cap column, sheet b with e_term
        std::vector<double> cur(sz * D);
        for (std::int64_t i = 0; i < sz; ++i)
            for (std::int64_t x = 0; x < D; ++x) cur[i * D + x] = state[i] * lcap(x, term);
        // sheet a: legs [b_n..b_1, a_n..a_j, oa_1..oa_{j-1}, ca]
        for (int j = 1; j <= n; ++j) {
            std::vector<double> next(sz * D, 0.0);
            contract_step(cur.data(), ipow(D, 2 * n - j), D, ipow(D, j - 1), D,
                          G.g.data(), D * D, next.data());
            cur = std::move(next);
        }
        // insert the sheet-b chain leg: [b_n..b_1, oa_1..oa_n, cra, cb]
        {
            std::vector<double> wide(sz * D * D, 0.0);
            for (std::int64_t i = 0; i < sz * D; ++i) wide[i * D + term] = cur[i];
            cur = std::move(wide);
        }
        // sheet b: legs [b_n..b_j, oa_1..oa_n, cra, ob_1..ob_{j-1}, cb]
        for (int j = 1; j <= n; ++j) {
            std::vector<double> next(sz * D * D, 0.0);
            contract_step(cur.data(), ipow(D, n - j), D, ipow(D, n + j), D,
                          G.g.data(), D * D, next.data());
            cur = std::move(next);
        }
        // close the chain legs: [oa_1..oa_n, cra, ob_1..ob_n, crb] -> [oa, ob]
        std::vector<double> closed(sz, 0.0);
        contract_step(cur.data(), ipow(D, n), D, ipow(D, n), D, rw.data(), 1,
                      closed.data());
        for (std::int64_t i = 0; i < sz; ++i) result[i] += closed[i];
    }
    return result;
}

std::vector<double> bottom_state_real(const RMat& cap, int n) {
    const std::int64_t D = cap.rows();
    const std::int64_t sz = ipow(D, 2 * n);
    std::vector<double> state(sz);
    std::vector<std::int64_t> dig(2 * n);
    for (std::int64_t idx = 0; idx < sz; ++idx) {
        std::int64_t r = idx;
        for (int k = 2 * n - 1; k >= 0; --k) {
            dig[k] = r % D;
            r /= D;
        }
        double v = 1.0;
        // layout [b_n..b_1, a_n..a_1]: digits k and n+k carry the same site
        for (int k = 0; k < n; ++k) v *= cap(dig[n + k], dig[k]);
        state[idx] = v;
    }
    return state;
}

std::vector<double> reverse_legs_real(const std::vector<double>& state, int legs,
                                      int D) {
    const std::int64_t sz = static_cast<std::int64_t>(state.size());
    std::vector<double> out(sz);
    std::vector<std::int64_t> dig(legs);
    for (std::int64_t idx = 0; idx < sz; ++idx) {
        std::int64_t r = idx;
        for (int k = legs - 1; k >= 0; --k) {
            dig[k] = r % D;
            r /= D;
        }
        std::int64_t rev = 0;
        for (int k = legs - 1; k >= 0; --k) rev = rev * D + dig[k];
        out[rev] = state[idx];
    }
    return out;
}

double close_top_real(const std::vector<double>& state, const RMat& cap, int n) {
    const std::int64_t D = cap.rows();
    std::vector<double> w(D * D);
    for (std::int64_t a = 0; a < D; ++a)
        for (std::int64_t b = 0; b < D; ++b) w[a * D + b] = cap(a, b);
    std::vector<double> cur = state;
    for (int j = n; j >= 1; --j) {
        std::vector<double> next(ipow(D, 2 * (j - 1)), 0.0);
        contract_step(cur.data(), ipow(D, j - 1), D, ipow(D, j - 1), D, w.data(), 1,
                      next.data());
        cur = std::move(next);
    }
    return cur[0];
}

std::vector<double> bottom_state_real_pos(const std::vector<RMat>& caps) {
    const int n = static_cast<int>(caps.size());
    const std::int64_t D = caps.at(0).rows();
    const std::int64_t sz = ipow(D, 2 * n);
    std::vector<double> state(sz);
    std::vector<std::int64_t> dig(2 * n);
    for (std::int64_t idx = 0; idx < sz; ++idx) {
        std::int64_t r = idx;
        for (int k = 2 * n - 1; k >= 0; --k) {
            dig[k] = r % D;
            r /= D;
        }
        double v = 1.0;
        // layout [b_n..b_1, a_n..a_1]: digit k carries position n-k
        for (int k = 0; k < n; ++k) v *= caps[n - k - 1](dig[n + k], dig[k]);
        state[idx] = v;
    }
    return state;
}

double close_top_real_pos(const std::vector<double>& state,
                          const std::vector<RMat>& caps) {
    const int n = static_cast<int>(caps.size());
    const std::int64_t D = caps.at(0).rows();
    std::vector<double> cur = state;
    std::vector<double> w(D * D);
    for (int j = n; j >= 1; --j) {
        for (std::int64_t a = 0; a < D; ++a)
            for (std::int64_t b = 0; b < D; ++b) w[a * D + b] = caps[j - 1](a, b);
        std::vector<double> next(ipow(D, 2 * (j - 1)), 0.0);
        contract_step(cur.data(), ipow(D, j - 1), D, ipow(D, j - 1), D, w.data(), 1,
                      next.data());
        cur = std::move(next);
    }
    return cur[0];
}

double znet_value_pos(const UnitaryGate& U, int m, int n,
                      const std::vector<RMat>& bottom,
                      const std::vector<RMat>& left,
                      const std::vector<RMat>& top,
                      const std::vector<RMat>& right, bool reflected,
                      std::int64_t budget_bytes) {
    if (m < 1 || n < 1) throw std::invalid_argument("znet_value_pos: m, n >= 1");
    if (static_cast<int>(bottom.size()) != n || static_cast<int>(top.size()) != n ||
        static_cast<int>(left.size()) != m || static_cast<int>(right.size()) != m)
        throw std::invalid_argument("znet_value_pos: cap count mismatch");
    check_sweep_budget(U.q, n, budget_bytes);
    const RealGate G = real_step_gate(U, reflected);
    std::vector<double> state = bottom_state_real_pos(bottom);
    for (int i = 1; i <= m; ++i) {
        std::vector<double> raw = apply_row_real(state, G, left[i - 1], right[i - 1], n);
        if (i == m) return close_top_real_pos(raw, top);
        state = reverse_legs_real(raw, 2 * n, U.q * U.q);
    }
    throw std::logic_error("znet_value_pos: unreachable");
}

double znet_value(const UnitaryGate& U, int m, int n, const ZCaps& caps,
                  std::int64_t budget_bytes) {
    const int q = U.q;
    if (m <= 0 || n <= 0) {
        const int mm = std::max(m, 0), nn = std::max(n, 0);
        return std::pow(double(q), -double(mm + nn));
    }
    ZCaps c = caps;
    bool reflected = false;
    if (m < n) {
        std::swap(m, n);
        c = {caps.left, caps.bottom, caps.right, caps.top};
        reflected = true;
    }
    check_sweep_budget(q, n, budget_bytes);
    const RealGate G = real_step_gate(U, reflected);
    std::vector<double> state = bottom_state_real(c.bottom, n);
    for (int i = 1; i <= m; ++i) {
        std::vector<double> raw = apply_row_real(state, G, c.left, c.right, n);
        if (i == m) return close_top_real(raw, c.top, n);
        state = reverse_legs_real(raw, 2 * n, q * q);
    }
    throw std::logic_error("znet_value: unreachable");
}

std::vector<double> znet_scan(const UnitaryGate& U, int m_max, int n,
                              const ZCaps& caps, std::int64_t budget_bytes) {
    const int q = U.q;
    if (m_max < 1 || n < 1) throw std::invalid_argument("znet_scan: m_max, n >= 1");
    check_sweep_budget(q, n, budget_bytes);
    const RealGate G = real_step_gate(U, false);
    std::vector<double> out;
    out.reserve(m_max);
    std::vector<double> state = bottom_state_real(caps.bottom, n);
    for (int i = 1; i <= m_max; ++i) {
        std::vector<double> raw = apply_row_real(state, G, caps.left, caps.right, n);
        out.push_back(close_top_real(raw, caps.top, n));
        if (i < m_max) state = reverse_legs_real(raw, 2 * n, q * q);
    }
    return out;
}

// ---- complex reference implementation ---------------------------------------------

static Tensor circle_leg(int q) {
    Tensor c({static_cast<std::int64_t>(q) * q});
    for (int k = 0; k < q; ++k) c.data[k * q + k] = 1.0 / std::sqrt(double(q));
    return c;
}

static Tensor cap_pair(BoundaryVector::Kind kind, int q) {
    const std::int64_t D = static_cast<std::int64_t>(q) * q;
    if (kind == BoundaryVector::Kind::circle) {
        const Tensor c = circle_leg(q);
        return Tensor::outer(c, c);
    }
    Tensor s({D, D});
    for (int k1 = 0; k1 < q; ++k1)
        for (int b1 = 0; b1 < q; ++b1)
            for (int k2 = 0; k2 < q; ++k2)
                for (int b2 = 0; b2 < q; ++b2)
                    if (b1 == k2 && k1 == b2)
                        s.data[(k1 * q + b1) * D + (k2 * q + b2)] = 1.0 / double(q);
    return s;
}

static void contract_pair(NetT& cur, const std::string& l1, const std::string& l2,
                          const Tensor& pair_tensor) {
    const int a1 = cur.axis(l1), a2 = cur.axis(l2);
    cur.t = Tensor::tensordot(cur.t, pair_tensor, {a1, a2}, {0, 1});
    std::vector<std::string> keep;
    for (std::size_t k = 0; k < cur.labels.size(); ++k)
        if (static_cast<int>(k) != a1 && static_cast<int>(k) != a2)
            keep.push_back(cur.labels[k]);
    cur.labels = std::move(keep);
}

double znet_value_reference(const UnitaryGate& U, int m, int n,
                            BoundaryVector::Kind bottom, BoundaryVector::Kind left,
                            BoundaryVector::Kind top, BoundaryVector::Kind right) {
    const int q = U.q;
    if (m <= 0 || n <= 0)
        return std::pow(double(q), -double(std::max(m, 0) + std::max(n, 0)));
    const Tensor w1 = fold(U, 1).t;
    const Tensor bcap = cap_pair(bottom, q), lcap = cap_pair(left, q);
    const Tensor tcap = cap_pair(top, q), rcap = cap_pair(right, q);

    auto leg = [](const char* base, int j, char sheet) {
        return std::string(base) + std::to_string(j) + sheet;
    };

    NetT state;
    state.t = bcap;
    state.labels = {leg("s", 1, 'a'), leg("s", 1, 'b')};
    for (int j = 2; j <= n; ++j) {
        state.t = Tensor::outer(state.t, bcap);
        state.labels.push_back(leg("s", j, 'a'));
        state.labels.push_back(leg("s", j, 'b'));
    }

    for (int i = 1; i <= m; ++i) {
        NetT cur;
        cur.t = Tensor::outer(state.t, lcap);
        cur.labels = state.labels;
        cur.labels.push_back("ca");
        cur.labels.push_back("cb");
        for (int j = 1; j <= n; ++j)
            for (char sheet : {'a', 'b'}) {
                const std::string cl = sheet == 'a' ? "ca" : "cb";
                const int ac = cur.axis(cl), as = cur.axis(leg("s", j, sheet));
                // chain leg into I2, vertical input into I1
                cur.t = Tensor::tensordot(cur.t, w1, {ac, as}, {3, 1});
                std::vector<std::string> keep;
                for (std::size_t k = 0; k < cur.labels.size(); ++k)
                    if (static_cast<int>(k) != ac && static_cast<int>(k) != as)
                        keep.push_back(cur.labels[k]);
                cur.labels = std::move(keep);
                cur.labels.push_back(cl);  // O1 continues the chain
                cur.labels.push_back(leg("o", j, sheet));
            }
        contract_pair(cur, "ca", "cb", rcap);
        for (auto& l : cur.labels)
            if (l[0] == 'o') l[0] = 's';
        state = std::move(cur);
    }
    for (int j = 1; j <= n; ++j)
        contract_pair(state, leg("s", j, 'a'), leg("s", j, 'b'), tcap);
    return state.t.data[0].real();
}

}  // namespace dulab::detail
