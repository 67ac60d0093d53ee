#ifndef TOWERS3_SUBGRP_HPP
#define TOWERS3_SUBGRP_HPP

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>

#include "towers3/pc.hpp"
#include "towers3/snf.hpp"
#include "towers3/typeinv.hpp"

namespace towers3 {

struct NotNormalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical generating sequence of a subgroup: normal words echelonized by
// leading generator index, leading exponent 1, zero at the other leading
// positions.  Sifting any subgroup element through the sequence reaches the
// identity; the canonical form is unique per subgroup.
struct SubgroupCGS {
    std::vector<Vec> gens;   // strictly increasing leading indices
    std::vector<int> leads;

    int rank() const { return (int)gens.size(); }
    int entry_at_lead(int lead) const {
        auto it = std::lower_bound(leads.begin(), leads.end(), lead);
        if (it == leads.end() || *it != lead) return -1;
        return (int)(it - leads.begin());
    }
    bool has_lead(int lead) const { return entry_at_lead(lead) >= 0; }
};

// log_p of the index of H in its ambient group.
inline int log_index(const PcPresentation& G, const SubgroupCGS& H) {
    return G.ngens - H.rank();
}

inline Vec sift(const PcPresentation& G, const SubgroupCGS& H, Vec x) {
    for (;;) {
        int l = PcPresentation::leading(x);
        if (l < 0) return x;
        int e = H.entry_at_lead(l);
        if (e < 0) return x;
        int t = G.prime - x[l];  // leading exponents are 1
        x = G.mul(G.power(H.gens[e], t), x);
    }
}

inline bool contains(const PcPresentation& G, const SubgroupCGS& H, const Vec& x) {
    return G.is_id(sift(G, H, x));
}

// Exponents t with x = h_1^{t_1} ... h_r^{t_r}; throws if x is not a member.
inline std::vector<int> coords_in(const PcPresentation& G, const SubgroupCGS& H, Vec x) {
    std::vector<int> t(H.rank(), 0);
    for (;;) {
        int l = PcPresentation::leading(x);
        if (l < 0) return t;
        int e = H.entry_at_lead(l);
        if (e < 0) throw std::invalid_argument("element not in subgroup");
        t[e] = x[l];
        x = G.mul(G.power(H.gens[e], G.prime - x[l]), x);
    }
}

namespace detail {

// Insert raw generators and close under p-th powers and commutators so the
// echelon table spans the generated subgroup; optionally close under
// conjugation by the given elements (for normal closures).
inline SubgroupCGS close_and_echelonize(const PcPresentation& G, std::vector<Vec> seeds,
                                        const std::vector<Vec>* conjugators) {
    struct Entry {
        Vec v;
        int lead;
    };
    std::vector<Entry> table;
    auto find_lead = [&](int l) -> int {
        for (size_t i = 0; i < table.size(); ++i)
            if (table[i].lead == l) return (int)i;
        return -1;
    };
    auto sift_raw = [&](Vec x) {
        for (;;) {
            int l = PcPresentation::leading(x);
            if (l < 0) return x;
            int e = find_lead(l);
            if (e < 0) return x;
            int lead_exp = table[e].v[l];
            // solve lead_exp * t + x[l] == 0 mod p
            int t = 0;
            for (t = 0; t < G.prime; ++t)
                if ((lead_exp * t + x[l]) % G.prime == 0) break;
            x = G.mul(G.power(table[e].v, t), x);
        }
    };

    std::deque<Vec> work(seeds.begin(), seeds.end());
    while (!work.empty()) {
        Vec x = sift_raw(std::move(work.front()));
        work.pop_front();
        int l = PcPresentation::leading(x);
        if (l < 0) continue;
        for (const auto& e : table) {
            work.push_back(G.commutator(x, e.v));
            work.push_back(G.commutator(e.v, x));
        }
        work.push_back(G.power(x, G.prime));
        if (conjugators)
            for (const Vec& c : *conjugators) {
                work.push_back(G.commutator(x, c));
                work.push_back(G.commutator(c, x));
            }
        table.push_back({std::move(x), l});
    }

    std::sort(table.begin(), table.end(),
              [](const Entry& a, const Entry& b) { return a.lead < b.lead; });

    // normalize leading exponents to 1
    for (auto& e : table) {
        int le = e.v[e.lead];
        if (le != 1) {
            int t = 0;
            for (t = 1; t < G.prime; ++t)
                if ((le * t) % G.prime == 1) break;
            e.v = G.power(e.v, t);
        }
    }
    // clear the other leading positions (ascending, so cleared spots stay 0)
    for (size_t i = 0; i < table.size(); ++i)
        for (size_t j = 0; j < table.size(); ++j) {
            if (i == j || table[j].lead <= table[i].lead) continue;
            int e = table[i].v[table[j].lead];
            if (e) table[i].v = G.mul(table[i].v, G.power(table[j].v, G.prime - e));
        }

    SubgroupCGS H;
    for (auto& e : table) {
        H.gens.push_back(std::move(e.v));
        H.leads.push_back(e.lead);
    }
    return H;
}

} // namespace detail

inline SubgroupCGS subgroup(const PcPresentation& G, const std::vector<Vec>& gens) {
    return detail::close_and_echelonize(G, gens, nullptr);
}

inline SubgroupCGS normal_closure(const PcPresentation& G, const std::vector<Vec>& gens) {
    std::vector<Vec> conj;
    for (int i = 0; i < G.ngens; ++i) conj.push_back(G.gen(i));
    return detail::close_and_echelonize(G, gens, &conj);
}

inline SubgroupCGS trivial_subgroup(const PcPresentation&) { return SubgroupCGS{}; }

inline SubgroupCGS whole_group(const PcPresentation& G) {
    SubgroupCGS H;
    for (int i = 0; i < G.ngens; ++i) {
        H.gens.push_back(G.gen(i));
        H.leads.push_back(i);
    }
    return H;
}

inline bool subgroup_equal(const SubgroupCGS& a, const SubgroupCGS& b) {
    return a.leads == b.leads && a.gens == b.gens;
}

// [A, B] closed under conjugation by the given elements.
inline SubgroupCGS commutator_subgroup(const PcPresentation& G, const std::vector<Vec>& a,
                                       const std::vector<Vec>& b,
                                       const std::vector<Vec>& conjugators) {
    std::vector<Vec> seeds;
    for (const auto& x : a)
        for (const auto& y : b) seeds.push_back(G.commutator(x, y));
    return detail::close_and_echelonize(G, seeds, &conjugators);
}

inline SubgroupCGS derived_subgroup(const PcPresentation& G) {
    std::vector<Vec> gens;
    for (int i = 0; i < G.ngens; ++i) gens.push_back(G.gen(i));
    return commutator_subgroup(G, gens, gens, gens);
}

inline SubgroupCGS derived_of(const PcPresentation& G, const SubgroupCGS& H) {
    return commutator_subgroup(G, H.gens, H.gens, H.gens);
}

// Frattini subgroup G' G^p.
inline SubgroupCGS frattini(const PcPresentation& G) {
    std::vector<Vec> seeds;
    for (int i = 0; i < G.ngens; ++i) seeds.push_back(G.power(G.gen(i), G.prime));
    for (int j = 0; j < G.ngens; ++j)
        for (int i = 0; i < j; ++i) seeds.push_back(G.commutator(G.gen(j), G.gen(i)));
    return normal_closure(G, seeds);
}

inline bool is_normal(const PcPresentation& G, const SubgroupCGS& N) {
    for (const Vec& n : N.gens)
        for (int i = 0; i < G.ngens; ++i)
            if (!contains(G, N, G.conj(n, G.gen(i)))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

// Canonical coset representative: zero exponents at the leading indices of N.
inline Vec coset_rep(const PcPresentation& G, const SubgroupCGS& N, Vec x) {
    for (int e = 0; e < N.rank(); ++e) {
        int l = N.leads[e];
        if (x[l]) x = G.mul(G.power(N.gens[e], G.prime - x[l]), x);
    }
    return x;
}

// Pc presentation of G/N on the generators away from N's leading indices.
// `kept` (optional out) receives those ambient indices in order.
inline PcPresentation quotient(const PcPresentation& G, const SubgroupCGS& N,
                               std::vector<int>* kept = nullptr) {
    if (!is_normal(G, N)) throw NotNormalError("quotient by non-normal subgroup");
    std::vector<int> free_idx;
    for (int i = 0; i < G.ngens; ++i)
        if (!N.has_lead(i)) free_idx.push_back(i);
    if (kept) *kept = free_idx;
    std::vector<int> pos(G.ngens, -1);
    for (size_t k = 0; k < free_idx.size(); ++k) pos[free_idx[k]] = (int)k;

    int m = (int)free_idx.size();
    PcPresentation Q = PcPresentation::make(G.prime, m);
    if (!G.weights.empty()) {
        Q.weights.resize(m);
        for (int k = 0; k < m; ++k) Q.weights[k] = G.weights[free_idx[k]];
    }
    auto compress = [&](Vec v) {
        v = coset_rep(G, N, std::move(v));
        Vec w(m, 0);
        for (int i = 0; i < G.ngens; ++i)
            if (v[i]) {
                if (pos[i] < 0) throw std::logic_error("coset representative not reduced");
                w[pos[i]] = v[i];
            }
        return w;
    };
    for (int k = 0; k < m; ++k)
        Q.set_power(k, compress(G.power_rhs[free_idx[k]]));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < k; ++l)
            Q.set_comm(k, l, compress(G.commutator(G.gen(free_idx[k]), G.gen(free_idx[l]))));
    return Q;
}

// Fast path: quotient by the span of a trailing block of generators.  Keeps
// weights and definition tags of the surviving prefix.
inline PcPresentation truncate_gens(const PcPresentation& G, int keep) {
    PcPresentation Q = PcPresentation::make(G.prime, keep);
    auto cut = [&](const Vec& v) { return Vec(v.begin(), v.begin() + keep); };
    for (int i = 0; i < keep; ++i) Q.set_power(i, cut(G.power_rhs[i]));
    for (int j = 0; j < keep; ++j)
        for (int i = 0; i < j; ++i)
            if (!G.comm_rhs(j, i).empty()) Q.set_comm(j, i, cut(G.comm_rhs(j, i)));
    if (!G.weights.empty()) Q.weights.assign(G.weights.begin(), G.weights.begin() + keep);
    if (!G.defs.empty()) Q.defs.assign(G.defs.begin(), G.defs.begin() + keep);
    return Q;
}

// ---------------------------------------------------------------------------
// Induced presentations of subgroups
// ---------------------------------------------------------------------------

// A subgroup as a pc group in its own right: generator k of the result is
// CGS entry k of H; right-hand sides are the coordinate vectors of powers
// and commutators, supported on later entries.
inline PcPresentation induced_presentation(const PcPresentation& G, const SubgroupCGS& H) {
    int r = H.rank();
    PcPresentation S = PcPresentation::make(G.prime, r);
    auto coords_vec = [&](const Vec& x) {
        std::vector<int> c = coords_in(G, H, x);
        Vec v(r, 0);
        for (int i = 0; i < r; ++i) v[i] = (uint8_t)c[i];
        return v;
    };
    for (int i = 0; i < r; ++i) S.set_power(i, coords_vec(G.power(H.gens[i], G.prime)));
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < j; ++i)
            S.set_comm(j, i, coords_vec(G.commutator(H.gens[j], H.gens[i])));
    return S;
}

// ---------------------------------------------------------------------------
// Series, class, coclass
// ---------------------------------------------------------------------------

struct GroupSizes {
    int log_order = 0;
    int cls = 0;        // nilpotency class
    int coclass = 0;
    int derived_length = 0;
    std::vector<int> lcs_ranks;      // CGS sizes of gamma_1, gamma_2, ...
    std::vector<int> derived_ranks;  // CGS sizes of G, G', G'', ...
};

inline std::vector<SubgroupCGS> lower_central_series(const PcPresentation& G) {
    std::vector<SubgroupCGS> series;
    std::vector<Vec> all;
    for (int i = 0; i < G.ngens; ++i) all.push_back(G.gen(i));
    series.push_back(whole_group(G));
    for (;;) {
        const SubgroupCGS& prev = series.back();
        if (prev.rank() == 0) break;
        SubgroupCGS next = commutator_subgroup(G, prev.gens, all, all);
        if (next.rank() == prev.rank()) break;  // cannot happen in a p-group
        series.push_back(next);
        if (series.back().rank() == 0) break;
    }
    return series;
}

inline std::vector<SubgroupCGS> derived_series(const PcPresentation& G) {
    std::vector<SubgroupCGS> series;
    series.push_back(whole_group(G));
    while (series.back().rank() > 0) {
        SubgroupCGS next = derived_of(G, series.back());
        series.push_back(next);
        if (next.rank() == 0) break;
    }
    return series;
}

inline GroupSizes series_and_sizes(const PcPresentation& G) {
    GroupSizes s;
    s.log_order = G.ngens;
    auto lcs = lower_central_series(G);
    for (auto& t : lcs) s.lcs_ranks.push_back(t.rank());
    s.cls = (int)lcs.size() - 1;  // gamma_{cls+1} = 1
    if (!lcs.empty() && lcs.back().rank() != 0) s.cls = (int)lcs.size();  // degenerate
    s.coclass = s.log_order - s.cls;
    auto ds = derived_series(G);
    for (auto& t : ds) s.derived_ranks.push_back(t.rank());
    s.derived_length = (int)ds.size() - 1;
    return s;
}

// Generator rank: dimension of G / Phi(G).
inline int generator_rank(const PcPresentation& G) { return G.ngens - frattini(G).rank(); }

// ---------------------------------------------------------------------------
// Maximal subgroups
// ---------------------------------------------------------------------------

// All subgroups of index p, each containing the Frattini subgroup, in a
// fixed order: kernels of the functionals on G/Phi(G) whose normalized
// coefficient vectors (first nonzero entry 1) are enumerated
// lexicographically.
inline std::vector<SubgroupCGS> maximal_subgroups(const PcPresentation& G) {
    const int p = G.prime;
    SubgroupCGS F = frattini(G);
    std::vector<int> basis_idx;  // ambient generators spanning G/Phi
    for (int i = 0; i < G.ngens; ++i)
        if (!F.has_lead(i)) basis_idx.push_back(i);
    int d = (int)basis_idx.size();

    std::vector<SubgroupCGS> out;
    // lexicographic enumeration of normalized functionals on G/Phi
    std::vector<std::vector<int>> funcs;
    std::vector<int> v(d, 0);
    for (;;) {
        int lead = -1;
        for (int i = 0; i < d; ++i)
            if (v[i]) {
                lead = i;
                break;
            }
        if (lead >= 0 && v[lead] == 1) funcs.push_back(v);
        int i = d - 1;
        while (i >= 0 && v[i] == p - 1) v[i--] = 0;
        if (i < 0) break;
        ++v[i];
    }
    for (const auto& f : funcs) {
        int pivot = 0;
        while (!f[pivot]) ++pivot;
        std::vector<Vec> seeds = F.gens;
        for (int j = 0; j < d; ++j) {
            if (j == pivot) continue;
            // kernel vector e_j - f_j * e_pivot
            Vec w = G.gen(basis_idx[j]);
            if (f[j]) w = G.mul(w, G.power(G.gen(basis_idx[pivot]), p - f[j]));
            seeds.push_back(w);
        }
        SubgroupCGS H = subgroup(G, seeds);
        if (log_index(G, H) != 1) throw std::logic_error("maximal subgroup has wrong index");
        out.push_back(std::move(H));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Abelian quotient invariants
// ---------------------------------------------------------------------------

// Abelianization data of a subgroup section H/H': invariants plus the right
// transform taking CGS coordinates to invariant-factor coordinates.
struct AbelianizationData {
    TypeInvariants invariants;
    std::vector<long long> diag;            // one per CGS generator, p-power or 1
    std::vector<std::vector<long long>> V;  // coordinate transform
    int rank() const { return (int)diag.size(); }

    // invariant-factor coordinates of an element given by CGS coords
    std::vector<long long> to_invariant_coords(const std::vector<int>& cgs_coords) const {
        size_t m = diag.size();
        std::vector<long long> y(m, 0);
        for (size_t j = 0; j < m; ++j) {
            long long acc = 0;
            for (size_t i = 0; i < m; ++i) acc += (long long)cgs_coords[i] * V[i][j];
            long long d = diag[j] ? diag[j] : 1;
            y[j] = ((acc % d) + d) % d;
        }
        return y;
    }
};

// Integer relation matrix of the abelianized section, reduced by SNF over Z;
// entries of the diagonal are p-powers, returned in logarithmic weakly
// decreasing form.
inline AbelianizationData abelianization(const PcPresentation& G, const SubgroupCGS& H) {
    const int p = G.prime;
    int r = H.rank();
    AbelianizationData out;
    if (r == 0) return out;

    std::vector<std::vector<long long>> rows;
    auto coords_row = [&](const Vec& x) {
        std::vector<int> c = coords_in(G, H, x);
        std::vector<long long> row(c.begin(), c.end());
        return row;
    };
    for (int i = 0; i < r; ++i) {
        auto row = coords_row(G.power(H.gens[i], p));
        row[i] -= p;
        for (auto& v : row) v = -v;
        rows.push_back(std::move(row));
    }
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < j; ++i) rows.push_back(coords_row(G.commutator(H.gens[j], H.gens[i])));
    // the power rows alone are p*I minus a strictly triangular matrix, so the
    // lattice has full rank and every divisor is a p-power

    SmithResult s = smith_normal_form(std::move(rows), r);
    out.diag = s.diag;
    out.V = s.V;
    std::vector<int> parts;
    for (long long d : s.diag) {
        if (d <= 1) continue;
        int e = 0;
        while (d > 1) {
            if (d % p) throw std::logic_error("abelianization divisor not a p-power");
            d /= p;
            ++e;
        }
        parts.push_back(e);
    }
    out.invariants = TypeInvariants(parts);
    return out;
}

inline TypeInvariants abelian_quotient_invariants(const PcPresentation& G, const SubgroupCGS& H) {
    return abelianization(G, H).invariants;
}

} // namespace towers3

#endif
