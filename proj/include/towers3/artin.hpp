#ifndef TOWERS3_ARTIN_HPP
#define TOWERS3_ARTIN_HPP

#include <array>
#include <optional>

#include "towers3/subgrp.hpp"
#include "towers3/typeinv.hpp"

namespace towers3 {

// Transfer kernel type: one entry per maximal subgroup; 0 means the kernel
// is all of G/G', j in 1..4 names the maximal subgroup whose image equals
// the kernel.
struct Tkt {
    std::array<int, 4> entries{0, 0, 0, 0};
    bool operator==(const Tkt& o) const { return entries == o.entries; }
    bool operator<(const Tkt& o) const { return entries < o.entries; }
    std::string str() const {
        std::string s = "(";
        for (int e : entries) s += char('0' + e);
        return s + ")";
    }
};

inline Tkt parse_tkt(const std::string& s) {
    std::string t;
    for (char c : s)
        if (isdigit((unsigned char)c)) t += c;
    if (t.size() != 4) throw std::invalid_argument("a transfer kernel type has four digits");
    Tkt k;
    for (int i = 0; i < 4; ++i) {
        k.entries[i] = t[i] - '0';
        if (k.entries[i] > 4) throw std::invalid_argument("kernel indices run from 0 to 4");
    }
    return k;
}

// Lexicographically least element of the orbit under simultaneous S_4
// relabeling of positions and values (0 is fixed).
inline Tkt tkt_canonical(const Tkt& k) {
    std::array<int, 4> perm{0, 1, 2, 3};
    Tkt best;
    bool first = true;
    do {
        Tkt cand;
        for (int i = 0; i < 4; ++i) {
            int from = perm[i];  // position i reads old position perm[i]
            int v = k.entries[from];
            cand.entries[i] = v == 0 ? 0 : [&] {
                for (int w = 0; w < 4; ++w)
                    if (perm[w] == v - 1) return w + 1;
                return -1;
            }();
        }
        if (first || cand < best) {
            best = cand;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline bool tkt_equivalent(const Tkt& a, const Tkt& b) {
    return tkt_canonical(a) == tkt_canonical(b);
}

// ---------------------------------------------------------------------------
// Transfer maps
// ---------------------------------------------------------------------------

struct TransferMap {
    // invariant-factor data of G/G' and H/H'
    AbelianizationData source, target;
    std::vector<int> basis_idx;                       // ambient generator indices spanning G/G'
    std::vector<std::vector<long long>> basis_image;  // transfer image per basis element
};

// Artin transfer to a maximal subgroup: product of the coset-return factors
// over a right transversal.  `twist` (optional) multiplies each transversal
// representative by an element of H; the induced map must not change.
inline TransferMap transfer(const PcPresentation& G, const SubgroupCGS& H,
                            const std::vector<Vec>* twist = nullptr) {
    if (log_index(G, H) != 1) throw std::invalid_argument("transfer target must be maximal");
    const int p = G.prime;

    TransferMap T;
    SubgroupCGS derived = derived_subgroup(G);
    T.source = abelianization(G, whole_group(G));
    T.target = abelianization(G, H);
    for (int i = 0; i < G.ngens; ++i)
        if (!derived.has_lead(i)) T.basis_idx.push_back(i);

    int f = -1;  // transversal direction: the one generator outside H
    for (int i = 0; i < G.ngens; ++i)
        if (!H.has_lead(i)) f = i;
    std::vector<Vec> reps;
    for (int k = 0; k < p; ++k) reps.push_back(G.power(G.gen(f), k));
    if (twist) {
        if (twist->size() != reps.size()) throw std::invalid_argument("bad transversal twist");
        for (size_t i = 0; i < reps.size(); ++i) {
            if (!contains(G, H, (*twist)[i]))
                throw std::invalid_argument("transversal twist must lie in the subgroup");
            reps[i] = G.mul((*twist)[i], reps[i]);
        }
    }
    std::vector<Vec> rep_inv;
    for (const Vec& r : reps) rep_inv.push_back(G.inverse(r));

    for (int bi : T.basis_idx) {
        Vec g = G.gen(bi);
        Vec prod = G.id();
        for (size_t r = 0; r < reps.size(); ++r) {
            Vec w = G.mul(reps[r], g);
            int to = -1;
            for (size_t r2 = 0; r2 < reps.size(); ++r2)
                if (contains(G, H, G.mul(w, rep_inv[r2]))) {
                    to = (int)r2;
                    break;
                }
            if (to < 0) throw std::logic_error("coset action lost a representative");
            prod = G.mul(prod, G.mul(w, rep_inv[to]));
        }
        auto c = coords_in(G, H, prod);
        T.basis_image.push_back(T.target.to_invariant_coords(c));
    }
    return T;
}

// ---------------------------------------------------------------------------
// First- and second-order patterns
// ---------------------------------------------------------------------------

struct Ati1 {
    std::vector<TypeInvariants> raw;  // per maximal subgroup, enumeration order
    TypeInvariants alpha0;            // invariants of the derived quotient section

    std::vector<TypeInvariants> display() const {
        auto v = raw;
        std::stable_sort(v.begin(), v.end(), display_before);
        return v;
    }
    std::string str() const { return quad_str(display()); }
};

struct ArtinPattern {
    Tkt tkt_raw;
    Tkt tkt;  // canonical form
    Ati1 ati1;
    std::optional<Ati2> ati2;
};

struct TktError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// kernel of one transfer as a set of invariant-coordinate vectors of G/G'
namespace artdetail {

inline std::vector<std::vector<long long>> kernel_vectors(const PcPresentation& G,
                                                          const TransferMap& T) {
    const int p = G.prime;
    std::vector<std::vector<long long>> kernel;
    int d = (int)T.basis_idx.size();
    if (d != 2) throw TktError("transfer kernels are computed for 2-generated groups");
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
            std::vector<long long> img(T.target.diag.size(), 0);
            for (size_t k = 0; k < img.size(); ++k) {
                long long dk = T.target.diag[k] ? T.target.diag[k] : 1;
                img[k] = ((a * T.basis_image[0][k] + b * T.basis_image[1][k]) % dk + dk) % dk;
            }
            bool zero = true;
            for (auto x : img)
                if (x) zero = false;
            if (!zero) continue;
            Vec e = G.mul(G.power(G.gen(T.basis_idx[0]), a), G.power(G.gen(T.basis_idx[1]), b));
            auto c = coords_in(G, whole_group(G), e);
            kernel.push_back(T.source.to_invariant_coords(c));
        }
    std::sort(kernel.begin(), kernel.end());
    kernel.erase(std::unique(kernel.begin(), kernel.end()), kernel.end());
    return kernel;
}

inline std::vector<std::vector<long long>> subgroup_image(const PcPresentation& G,
                                                          const AbelianizationData& source,
                                                          const SubgroupCGS& H) {
    const int p = G.prime;
    // image of H in G/G': span of the generators' invariant coordinates
    std::vector<std::vector<long long>> span = {
        std::vector<long long>(source.diag.size(), 0)};
    for (const Vec& h : H.gens) {
        auto c = coords_in(G, whole_group(G), h);
        auto v = source.to_invariant_coords(c);
        std::vector<std::vector<long long>> next = span;
        for (int mult = 1; mult < p; ++mult) {
            for (const auto& base : span) {
                std::vector<long long> w(base.size());
                for (size_t k = 0; k < base.size(); ++k) {
                    long long dk = source.diag[k] ? source.diag[k] : 1;
                    w[k] = (base[k] + mult * v[k]) % dk;
                }
                next.push_back(std::move(w));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        span = std::move(next);
    }
    return span;
}

} // namespace artdetail

// Raw transfer kernel type in the fixed maximal-subgroup enumeration order.
inline Tkt tkt(const PcPresentation& G, const std::vector<SubgroupCGS>* maximals = nullptr) {
    std::vector<SubgroupCGS> own;
    if (!maximals) {
        own = maximal_subgroups(G);
        maximals = &own;
    }
    if (maximals->size() != 4)
        throw TktError("transfer kernel types need generator rank 2 (got " +
                       std::to_string(maximals->size()) + " maximal subgroups)");

    AbelianizationData source = abelianization(G, whole_group(G));
    if (source.invariants != TypeInvariants({1, 1}))
        throw TktError("transfer kernel types need an elementary bicyclic derived quotient");
    long src_order = 1;
    for (auto d : source.diag) src_order *= (long)std::max<long long>(d, 1);
    std::vector<std::vector<std::vector<long long>>> lines;
    for (const auto& H : *maximals)
        lines.push_back(artdetail::subgroup_image(G, source, H));

    Tkt out;
    for (int i = 0; i < 4; ++i) {
        TransferMap T = transfer(G, (*maximals)[i]);
        auto ker = artdetail::kernel_vectors(G, T);
        if ((long)ker.size() == src_order) {
            out.entries[i] = 0;
            continue;
        }
        if (ker.size() == 1) throw TktError("trivial transfer kernel contradicts Hilbert 94");
        int hit = -1;
        for (int j = 0; j < 4; ++j)
            if (lines[j] == ker) {
                if (hit >= 0) throw TktError("transfer kernel matches two subgroup images");
                hit = j;
            }
        if (hit < 0) throw TktError("transfer kernel matches no maximal-subgroup image");
        out.entries[i] = hit + 1;
    }
    return out;
}

inline Ati1 ati1(const PcPresentation& G, const std::vector<SubgroupCGS>* maximals = nullptr) {
    std::vector<SubgroupCGS> own;
    if (!maximals) {
        own = maximal_subgroups(G);
        maximals = &own;
    }
    Ati1 out;
    for (const auto& H : *maximals) out.raw.push_back(abelian_quotient_invariants(G, H));
    out.alpha0 = abelian_quotient_invariants(G, derived_subgroup(G));
    return out;
}

// Second-order invariants: per maximal subgroup, its own invariants (head)
// and the invariants of all of its index-p subgroups (tail), computed inside
// the ambient group through induced presentations.
inline Ati2 ati2(const PcPresentation& G, const std::vector<SubgroupCGS>* maximals = nullptr) {
    std::vector<SubgroupCGS> own;
    if (!maximals) {
        own = maximal_subgroups(G);
        maximals = &own;
    }
    Ati2 out;
    for (const auto& H : *maximals) {
        PcPresentation S = induced_presentation(G, H);
        Ati2Bracket b;
        b.head = abelian_quotient_invariants(S, whole_group(S));
        for (const auto& K : maximal_subgroups(S))
            b.tail.push_back(abelian_quotient_invariants(S, K));
        size_t want = b.head.rank() >= 3 ? 13 : 4;
        if (b.tail.size() != want)
            throw std::logic_error("index-3 subgroup count does not match the head rank");
        out.brackets.push_back(std::move(b));
    }
    return out;
}

inline ArtinPattern artin_pattern(const PcPresentation& G, bool with_ati2 = false) {
    auto maximals = maximal_subgroups(G);
    ArtinPattern ap;
    ap.tkt_raw = tkt(G, &maximals);
    ap.tkt = tkt_canonical(ap.tkt_raw);
    ap.ati1 = ati1(G, &maximals);
    if (with_ati2) ap.ati2 = ati2(G, &maximals);
    return ap;
}

} // namespace towers3

#endif
