#ifndef TOWERS3_SIGMA_HPP
#define TOWERS3_SIGMA_HPP

#include <functional>
#include <optional>

#include "towers3/pquotient.hpp"

namespace towers3 {

struct SigmaCapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A verified involutory automorphism acting as inversion on the Frattini
// quotient; images are given on all pc generators of the standardized copy.
struct SigmaWitness {
    std::vector<Vec> images;
    bool inverts_h1 = false;
    bool inverts_h2 = false;
};

namespace sigdetail {

// images of all generators from images of the weight-1 generators, by
// definition recursion; requires standard tags
inline bool fill_images(const PcPresentation& G, std::vector<Vec>& img) {
    for (int g = 0; g < G.ngens; ++g) {
        if (G.weights[g] == 1) continue;
        const auto& d = G.defs[g];
        if (d.kind == PcPresentation::Def::None) return false;
        Vec rhs = d.kind == PcPresentation::Def::Power ? G.power_rhs[d.a]
                                                       : G.comm_rhs(d.a, d.b);
        if (rhs.empty() || rhs[g] != 1) return false;
        Vec pref = rhs;
        pref[g] = 0;
        Vec value = d.kind == PcPresentation::Def::Power
                        ? G.power(img[d.a], G.prime)
                        : G.commutator(img[d.a], img[d.b]);
        Vec pref_img = G.id();
        for (int m = 0; m < g; ++m)
            if (pref[m]) pref_img = G.mul(pref_img, G.power(img[m], pref[m]));
        img[g] = G.mul(G.inverse(pref_img), value);
    }
    return true;
}

inline Vec apply_map(const PcPresentation& G, const std::vector<Vec>& img, const Vec& x) {
    Vec out = G.id();
    for (int m = 0; m < G.ngens; ++m)
        if (x[m]) out = G.mul(out, G.power(img[m], x[m]));
    return out;
}

inline bool is_endomorphism(const PcPresentation& G, const std::vector<Vec>& img) {
    // power relations first and from the top: the variant-distinguishing
    // relators sit at high weight and refute candidates earliest
    for (int i = G.ngens - 1; i >= 0; --i) {
        Vec lhs = G.power(img[i], G.prime);
        Vec rhs = apply_map(G, img, G.power_rhs[i]);
        if (lhs != rhs) return false;
    }
    for (int j = G.ngens - 1; j >= 1; --j)
        for (int i = 0; i < j; ++i) {
            Vec lhs = G.commutator(img[j], img[i]);
            const Vec& r = G.comm_rhs(j, i);
            Vec rhs = r.empty() ? G.id() : apply_map(G, img, r);
            if (lhs != rhs) return false;
        }
    return true;
}

inline std::vector<Vec> compose(const PcPresentation& G, const std::vector<Vec>& f,
                                const std::vector<Vec>& g) {
    std::vector<Vec> out(G.ngens);
    for (int i = 0; i < G.ngens; ++i) out[i] = apply_map(G, f, g[i]);
    return out;
}

inline bool is_identity_map(const PcPresentation& G, const std::vector<Vec>& f) {
    for (int i = 0; i < G.ngens; ++i)
        if (f[i] != G.gen(i)) return false;
    return true;
}

} // namespace sigdetail

// Search for an automorphism sending each generator to a Frattini multiple
// of its inverse, lifting through the p-central quotients.  Candidates are
// pruned by the homomorphism test once per branch and reduced modulo inner
// twists from the previous layer.  Any find yields an involutory witness:
// an odd power of the found automorphism has order two and the same action
// on the Frattini quotient.
inline std::optional<SigmaWitness> find_sigma(const PcPresentation& G0, bool check_h2 = false,
                                              int max_log_order = 10) {
    if (G0.ngens > max_log_order)
        throw SigmaCapacityError("sigma search refused at log order " +
                                 std::to_string(G0.ngens) + " (ceiling " +
                                 std::to_string(max_log_order) + ")");
    PcPresentation S = with_standard_tags(G0);
    const int p = S.prime;
    int d1 = 0;
    for (int i = 0; i < S.ngens; ++i)
        if (S.weights[i] == 1) ++d1;
    if (d1 != 2)
        throw std::invalid_argument("sigma search expects generator rank 2, got " +
                                    std::to_string(d1));
    for (int i = 1; i < S.ngens; ++i)
        if (S.weights[i] < S.weights[i - 1])
            throw std::logic_error("standard copy must have ascending weights");

    int L = S.weights.empty() ? 1 : S.weights[S.ngens - 1];
    std::vector<int> cut(L + 1, 0);
    for (int k = 1; k <= L; ++k) {
        int m = 0;
        while (m < S.ngens && S.weights[m] <= k) ++m;
        cut[k] = m;
    }
    std::vector<PcPresentation> quots(L + 1);
    for (int k = 1; k <= L; ++k) quots[k] = (k == L) ? S : truncate_gens(S, cut[k]);

    std::optional<CoverResult> cov;
    if (check_h2) cov = p_cover(S);

    // finalize: turn a full-depth inverting automorphism into an involutory
    // witness and run the optional multiplicator check
    auto finalize = [&](const std::vector<Vec>& alpha,
                        std::optional<SigmaWitness>& out) -> bool {
        std::vector<Vec> sq = sigdetail::compose(S, alpha, alpha);
        long q = 1;
        std::vector<Vec> beta = alpha;
        std::vector<Vec> acc = sq;
        while (!sigdetail::is_identity_map(S, acc)) {
            // cube: ord(alpha^2) is a power of p
            acc = sigdetail::compose(S, sigdetail::compose(S, acc, acc), acc);
            q *= p;
            if (q > (1L << 40)) throw std::logic_error("runaway automorphism order");
        }
        // beta = alpha^q with q = p^i (odd)
        long e = q;
        std::vector<Vec> pw = alpha;
        std::vector<Vec> res(S.ngens);
        for (int i = 0; i < S.ngens; ++i) res[i] = S.gen(i);
        while (e) {
            if (e & 1) res = sigdetail::compose(S, res, pw);
            e >>= 1;
            if (e) pw = sigdetail::compose(S, pw, pw);
        }
        beta = std::move(res);
        if (!sigdetail::is_identity_map(S, sigdetail::compose(S, beta, beta)))
            throw std::logic_error("involution construction failed");
        SigmaWitness w;
        w.images = beta;
        w.inverts_h1 = true;
        if (check_h2) {
            const PcPresentation& C = cov->cover;
            int n = cov->base_ngens;
            std::vector<Vec> cimg(C.ngens, C.id());
            for (int i = 0; i < 2; ++i) {
                Vec x(C.ngens, 0);
                std::copy(beta[i].begin(), beta[i].end(), x.begin());
                cimg[i] = std::move(x);
            }
            if (!sigdetail::fill_images(C, cimg)) return false;
            for (int t = n; t < C.ngens; ++t) {
                const Vec& got = cimg[t];
                for (int i = 0; i < n; ++i)
                    if (got[i]) return false;
                for (int t2 = n; t2 < C.ngens; ++t2)
                    if (got[t2] != (t2 == t ? p - 1 : 0)) return false;
            }
            w.inverts_h2 = true;
        }
        out = w;
        return true;
    };

    std::optional<SigmaWitness> found;

    // depth-first lift; phi1/phi2 are sized cut[k] on entry and have passed
    // the homomorphism test in quots[k]
    std::function<bool(int, const Vec&, const Vec&)> descend =
        [&](int k, const Vec& phi1, const Vec& phi2) -> bool {
        const PcPresentation& Q = quots[k];
        std::vector<Vec> img(Q.ngens, Q.id());
        auto padded = [&](const Vec& v) {
            Vec x(Q.ngens, 0);
            std::copy(v.begin(), v.end(), x.begin());
            return x;
        };
        img[0] = Q.mul(Q.inverse(Q.gen(0)), padded(phi1));
        img[1] = Q.mul(Q.inverse(Q.gen(1)), padded(phi2));
        if (!sigdetail::fill_images(Q, img)) return false;
        if (!sigdetail::is_endomorphism(Q, img)) return false;
        if (k == L) return finalize(img, found);

        // spawn layer-(k+1) corrections modulo inner twists by weight-k gens
        const PcPresentation& Qn = quots[k + 1];
        int lo = cut[k], hi = cut[k + 1];
        int layer = hi - lo;
        std::vector<Vec> img_n(Qn.ngens, Qn.id());
        auto padn = [&](const Vec& v) {
            Vec x(Qn.ngens, 0);
            std::copy(v.begin(), v.end(), x.begin());
            return x;
        };
        Vec sx = Qn.mul(Qn.inverse(Qn.gen(0)), padn(phi1));
        Vec sy = Qn.mul(Qn.inverse(Qn.gen(1)), padn(phi2));
        std::vector<std::vector<uint8_t>> twists;
        for (int g = cut[k - 1]; g < cut[k]; ++g) {
            std::vector<uint8_t> row(2 * layer, 0);
            Vec cx = Qn.commutator(sx, Qn.gen(g));
            Vec cy = Qn.commutator(sy, Qn.gen(g));
            bool nz = false;
            for (int t = 0; t < layer; ++t) {
                row[t] = cx[lo + t];
                row[layer + t] = cy[lo + t];
                if (row[t] || row[layer + t]) nz = true;
            }
            for (int m = 0; m < lo; ++m)
                if (cx[m] || cy[m]) nz = false;  // twist escapes the layer; skip
            if (nz) twists.push_back(std::move(row));
        }
        auto rr = pqdetail::rref_modp(std::move(twists), 2 * layer, p);
        std::vector<int> free_cols;
        for (int c2 = 0; c2 < 2 * layer; ++c2)
            if (!rr.is_pivot(c2)) free_cols.push_back(c2);

        long combos = 1;
        for (size_t t = 0; t < free_cols.size(); ++t) combos *= p;
        for (long code = 0; code < combos; ++code) {
            Vec d1v(hi, 0), d2v(hi, 0);
            std::copy(phi1.begin(), phi1.end(), d1v.begin());
            std::copy(phi2.begin(), phi2.end(), d2v.begin());
            long x = code;
            for (size_t t = 0; t < free_cols.size(); ++t) {
                int c2 = free_cols[t];
                int val = (int)(x % p);
                x /= p;
                if (c2 < layer)
                    d1v[lo + c2] = (uint8_t)val;
                else
                    d2v[lo + (c2 - layer)] = (uint8_t)val;
            }
            if (descend(k + 1, d1v, d2v)) return true;
        }
        return false;
    };

    Vec phi0(cut[1], 0);
    descend(1, phi0, phi0);
    return found;
}

// ---------------------------------------------------------------------------
// Schur classification and the Shafarevich bound
// ---------------------------------------------------------------------------

struct SchurStatus {
    bool sigma = false;
    int d1 = 0, d2 = 0, nu = 0;
    enum Class { Schur, SchurPlusOne, Neither } cls = Neither;
    const char* class_name() const {
        switch (cls) {
            case Schur: return "Schur";
            case SchurPlusOne: return "Schur+1";
            default: return "Neither";
        }
    }
};

inline SchurStatus schur_status(const PcPresentation& G, int max_log_order = 10,
                                bool check_h2 = false) {
    PcPresentation S = with_standard_tags(G);
    auto cov = p_cover(S);
    SchurStatus st;
    st.d1 = cov.ranks.d1;
    st.d2 = cov.ranks.d2;
    st.nu = cov.ranks.nu;
    st.sigma = find_sigma(S, check_h2, max_log_order).has_value();
    if (st.sigma && st.d2 == st.d1)
        st.cls = SchurStatus::Schur;
    else if (st.sigma && st.d2 == st.d1 + 1)
        st.cls = SchurStatus::SchurPlusOne;
    else
        st.cls = SchurStatus::Neither;
    return st;
}

struct FieldSignature {
    int r1 = 0, r2 = 0;
    int theta = 0;  // 1 when a primitive p-th root of unity is present
    int unit_rank() const {
        if (r1 < 0 || r2 < 0 || r1 + r2 < 1)
            throw std::invalid_argument("signature needs r1, r2 >= 0 and r1 + r2 >= 1");
        return r1 + r2 - 1;
    }
    static FieldSignature imaginary_quadratic() { return {0, 1, 0}; }
    static FieldSignature real_quadratic() { return {2, 0, 0}; }
};

struct ShafarevichVerdict {
    bool admissible = false;
    int slack = 0;  // d1 + r + theta - d2
};

inline ShafarevichVerdict shafarevich_admissible(int d1, int d2, const FieldSignature& sig) {
    ShafarevichVerdict v;
    v.slack = d1 + sig.unit_rank() + sig.theta - d2;
    v.admissible = (d1 <= d2) && (v.slack >= 0);
    return v;
}

} // namespace towers3

#endif
