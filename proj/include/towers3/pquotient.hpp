#ifndef TOWERS3_PQUOTIENT_HPP
#define TOWERS3_PQUOTIENT_HPP

#include <algorithm>
#include <stdexcept>

#include "towers3/fp.hpp"
#include "towers3/pc.hpp"
#include "towers3/subgrp.hpp"

namespace towers3 {

struct PqInternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankReport {
    int d1 = 0;  // generator rank
    int d2 = 0;  // relation / multiplicator rank
    int nu = 0;  // nuclear rank
};

namespace pqdetail {

// Reduced row echelon form over F_p, pivot entries 1, sorted by pivot column.
struct Rref {
    std::vector<std::vector<uint8_t>> rows;
    std::vector<int> pivots;
    bool is_pivot(int col) const {
        return std::find(pivots.begin(), pivots.end(), col) != pivots.end();
    }
};

inline Rref rref_modp(std::vector<std::vector<uint8_t>> rows, int ncols, int p) {
    auto inv_mod = [&](int a) {
        for (int t = 1; t < p; ++t)
            if ((a * t) % p == 1) return t;
        throw std::logic_error("not invertible");
    };
    Rref out;
    int rank = 0;
    for (int col = 0; col < ncols; ++col) {
        int sel = -1;
        for (int r = rank; r < (int)rows.size(); ++r)
            if (rows[r][col]) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[rank], rows[sel]);
        int iv = inv_mod(rows[rank][col]);
        if (iv != 1)
            for (auto& x : rows[rank]) x = (uint8_t)((x * iv) % p);
        for (int r = 0; r < (int)rows.size(); ++r) {
            if (r == rank || !rows[r][col]) continue;
            int f = rows[r][col];
            for (int c2 = 0; c2 < ncols; ++c2)
                rows[r][c2] = (uint8_t)(((rows[r][c2] - f * rows[rank][c2]) % p + p) % p);
        }
        out.pivots.push_back(col);
        ++rank;
        if (rank == (int)rows.size()) break;
    }
    rows.resize(rank);
    out.rows = std::move(rows);
    return out;
}

// nullspace basis of M x = 0 over F_p; M given as rows of length ncols
inline std::vector<std::vector<uint8_t>> nullspace_modp(std::vector<std::vector<uint8_t>> M,
                                                        int ncols, int p) {
    Rref rr = rref_modp(std::move(M), ncols, p);
    std::vector<std::vector<uint8_t>> basis;
    std::vector<int> pivot_of_col(ncols, -1);
    for (size_t r = 0; r < rr.pivots.size(); ++r) pivot_of_col[rr.pivots[r]] = (int)r;
    for (int c = 0; c < ncols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<uint8_t> v(ncols, 0);
        v[c] = 1;
        for (int c2 = 0; c2 < ncols; ++c2)
            if (pivot_of_col[c2] >= 0)
                v[c2] = (uint8_t)((p - rr.rows[pivot_of_col[c2]][c]) % p);
        basis.push_back(std::move(v));
    }
    return basis;
}

struct RelRef {
    enum Kind : uint8_t { Power, Comm } kind;
    int a = -1, b = -1;  // Power: g_a^p;  Comm: [g_a, g_b], a > b
};

// Extended presentation before elimination.
struct RawExtension {
    PcPresentation E;
    int n = 0;  // base generators
    int q = 0;  // tails
    std::vector<RelRef> rels;
    std::vector<std::vector<uint8_t>> rows;  // consistency rows over the tails
};

// Add one central elementary tail per non-definition relation and collect
// the consistency discrepancies (weighted overlap tests).
inline RawExtension extend_raw(const PcPresentation& G) {
    const int p = G.prime;
    const int n = G.ngens;
    if ((int)G.weights.size() != n) throw PqInternalError("extension needs weights");
    int cls = 0;
    for (int w : G.weights) cls = std::max(cls, w);
    const int L = cls + 1;

    std::vector<bool> def_power(n, false);
    std::vector<std::vector<bool>> def_comm(n, std::vector<bool>(n, false));
    for (const auto& d : G.defs) {
        if (d.kind == PcPresentation::Def::Power) def_power[d.a] = true;
        if (d.kind == PcPresentation::Def::Comm) def_comm[d.a][d.b] = true;
    }

    // a relation may carry a tail only while its weight budget reaches the
    // new layer; heavier relations are forced trivial there already
    RawExtension X;
    X.n = n;
    for (int i = 0; i < n; ++i)
        if (!def_power[i] && G.weights[i] + 1 <= L) X.rels.push_back({RelRef::Power, i, -1});
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (!def_comm[j][i] && G.weights[j] + G.weights[i] <= L)
                X.rels.push_back({RelRef::Comm, j, i});
    X.q = (int)X.rels.size();
    const int q = X.q;

    PcPresentation& E = X.E;
    E = PcPresentation::make(p, n + q);
    E.weights = G.weights;
    E.weights.resize(n + q, L);
    E.defs = G.defs;
    E.defs.resize(n + q);
    auto pad = [&](const Vec& v) {
        Vec w(n + q, 0);
        std::copy(v.begin(), v.end(), w.begin());
        return w;
    };
    for (int i = 0; i < n; ++i) E.set_power(i, pad(G.power_rhs[i]));
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (!G.comm_rhs(j, i).empty()) E.set_comm(j, i, pad(G.comm_rhs(j, i)));
    for (int t = 0; t < q; ++t) {
        const RelRef& r = X.rels[t];
        if (r.kind == RelRef::Power) {
            Vec v = E.power_rhs[r.a];
            v[n + t] = 1;
            E.set_power(r.a, std::move(v));
        } else {
            Vec v = E.comm_rhs(r.a, r.b);
            if (v.empty()) v = Vec(n + q, 0);
            v[n + t] = 1;
            E.set_comm(r.a, r.b, std::move(v));
        }
    }

    auto add_row = [&](const Vec& lhs, const Vec& rhs) {
        for (int i = 0; i < n; ++i)
            if (lhs[i] != rhs[i])
                throw PqInternalError("inconsistent tail system: discrepancy outside the layer");
        std::vector<uint8_t> row(q, 0);
        bool nz = false;
        for (int t = 0; t < q; ++t) {
            int d = ((int)rhs[n + t] - (int)lhs[n + t]) % p;
            row[t] = (uint8_t)((d + p) % p);
            if (row[t]) nz = true;
        }
        if (nz) X.rows.push_back(std::move(row));
    };
    auto w = [&](int i) { return E.weights[i]; };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < j; ++i) {
                if (w(i) + w(j) + w(k) > L) continue;
                Vec lhs = E.mul(E.gen(k), E.mul(E.gen(j), E.gen(i)));
                Vec rhs = E.mul(E.mul(E.gen(k), E.gen(j)), E.gen(i));
                add_row(lhs, rhs);
            }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            if (w(i) + w(j) + 1 > L) continue;
            Vec lhs = E.mul(E.power_rhs[j], E.gen(i));
            Vec rhs = E.mul(E.power(E.gen(j), p - 1), E.mul(E.gen(j), E.gen(i)));
            add_row(lhs, rhs);
            lhs = E.mul(E.gen(j), E.power_rhs[i]);
            rhs = E.mul(E.mul(E.gen(j), E.gen(i)), E.power(E.gen(i), p - 1));
            add_row(lhs, rhs);
        }
    for (int i = 0; i < n; ++i) {
        if (2 * w(i) + 1 > L) continue;
        add_row(E.mul(E.gen(i), E.power_rhs[i]), E.mul(E.power_rhs[i], E.gen(i)));
    }
    return X;
}

struct Extension {
    PcPresentation E;           // extended consistent presentation, eliminated
    int ntails = 0;             // surviving tails
    std::vector<RelRef> tails;  // defining relation of each surviving tail
};

// Run the elimination: RREF the row space, substitute pivot tails away,
// renumber the survivors.
inline Extension finish_extension(const PcPresentation& G, RawExtension raw,
                                  std::vector<std::vector<uint8_t>> extra_rows) {
    const int p = G.prime;
    const int n = raw.n, q = raw.q;
    for (auto& r : extra_rows) raw.rows.push_back(std::move(r));
    Rref rr = rref_modp(std::move(raw.rows), q, p);

    std::vector<int> newpos(q, -1);
    std::vector<RelRef> kept;
    for (int t = 0; t < q; ++t)
        if (!rr.is_pivot(t)) {
            newpos[t] = (int)kept.size();
            kept.push_back(raw.rels[t]);
        }
    int q2 = (int)kept.size();
    int cls = 0;
    for (int w : G.weights) cls = std::max(cls, w);

    auto rewrite = [&](const Vec& v) {
        Vec out(n + q2, 0);
        std::copy(v.begin(), v.begin() + n, out.begin());
        for (int t = 0; t < q; ++t) {
            int e = v[n + t];
            if (!e) continue;
            if (newpos[t] >= 0) {
                out[n + newpos[t]] = (uint8_t)((out[n + newpos[t]] + e) % p);
            } else {
                int ri = 0;
                while (rr.pivots[ri] != t) ++ri;
                for (int t2 = 0; t2 < q; ++t2) {
                    if (t2 == t || !rr.rows[ri][t2]) continue;
                    if (newpos[t2] < 0) throw PqInternalError("RREF not fully reduced");
                    int add = (p - rr.rows[ri][t2]) % p * e % p;
                    out[n + newpos[t2]] = (uint8_t)((out[n + newpos[t2]] + add) % p);
                }
            }
        }
        return out;
    };

    Extension X;
    X.E = PcPresentation::make(p, n + q2);
    X.E.weights = G.weights;
    X.E.weights.resize(n + q2, cls + 1);
    X.E.defs = G.defs;
    X.E.defs.resize(n + q2);
    for (int t = 0; t < q2; ++t) {
        PcPresentation::Def d;
        d.kind = kept[t].kind == RelRef::Power ? PcPresentation::Def::Power
                                               : PcPresentation::Def::Comm;
        d.a = kept[t].a;
        d.b = kept[t].b;
        X.E.defs[n + t] = d;
    }
    for (int i = 0; i < n; ++i) X.E.set_power(i, rewrite(raw.E.power_rhs[i]));
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (!raw.E.comm_rhs(j, i).empty()) X.E.set_comm(j, i, rewrite(raw.E.comm_rhs(j, i)));
    X.ntails = q2;
    X.tails = kept;
    return X;
}

// A relator in which a redundant free generator occurs exactly once pins
// that generator's image: relator = u x^s v with s = +-1.
struct Pin {
    int gen;
    FreeWord before, after;
    int sign;
};

inline Vec eval_letters(const PcPresentation& g, const std::vector<Vec>& images,
                        const FreeWord& w) {
    Vec x = g.id();
    for (const Letter& l : w) x = g.mul(x, g.power(images[l.gen], l.exp));
    return x;
}

} // namespace pqdetail

// State of the class-by-class lifting: the current quotient, the images of
// the presentation generators, and pins for redundant generators.
struct PqResult {
    PcPresentation G;
    std::vector<Vec> images;
    bool complete = false;  // a lifting step added nothing: the pro-p quotient
    std::vector<pqdetail::Pin> pins;
    std::vector<bool> pinned;
};

namespace pqdetail {

inline PqResult class1(const FpPresentation& F, int p) {
    std::vector<std::vector<uint8_t>> rows;
    for (const auto& r : F.relators) {
        auto v = FpEvaluator::abelian_eval(r, F.ngens, p);
        std::vector<uint8_t> row(v.begin(), v.end());
        bool nz = false;
        for (auto x : row)
            if (x) nz = true;
        if (nz) rows.push_back(std::move(row));
    }
    Rref rr = rref_modp(std::move(rows), F.ngens, p);
    std::vector<int> pos(F.ngens, -1);
    int d = 0;
    for (int c = 0; c < F.ngens; ++c)
        if (!rr.is_pivot(c)) pos[c] = d++;

    PqResult st;
    st.G = PcPresentation::make(p, d);
    st.G.weights.assign(d, 1);
    st.G.defs.assign(d, PcPresentation::Def{});
    st.images.assign(F.ngens, Vec(d, 0));
    st.pinned.assign(F.ngens, false);
    for (int c = 0; c < F.ngens; ++c)
        if (pos[c] >= 0) st.images[c][pos[c]] = 1;

    // pin each redundant generator via a relator where it occurs once
    std::vector<int> pivot_cols;
    for (int c = 0; c < F.ngens; ++c)
        if (pos[c] < 0) pivot_cols.push_back(c);
    if (!pivot_cols.empty()) {
        std::vector<Pin> found;
        for (int k : pivot_cols) {
            bool ok = false;
            for (const auto& rel : F.relators) {
                FreeWord w = fp_flatten(rel);
                int occ = 0, at = -1;
                for (size_t i = 0; i < w.size(); ++i)
                    if (w[i].gen == k) {
                        occ += (int)std::labs(w[i].exp);
                        at = (int)i;
                    }
                if (occ != 1) continue;
                Pin pin;
                pin.gen = k;
                pin.sign = (int)w[at].exp;
                pin.before = FreeWord(w.begin(), w.begin() + at);
                pin.after = FreeWord(w.begin() + at + 1, w.end());
                found.push_back(std::move(pin));
                ok = true;
                break;
            }
            if (!ok)
                throw std::invalid_argument(
                    "cannot lift images: redundant generator g" + std::to_string(k + 1) +
                    " has no single-occurrence relator");
        }
        // topological order: a pin may only reference generators pinned earlier
        std::vector<bool> placed(F.ngens, true);
        for (int k : pivot_cols) placed[k] = false;
        while (!found.empty()) {
            bool progress = false;
            for (size_t i = 0; i < found.size(); ++i) {
                bool ready = true;
                for (const auto& part : {found[i].before, found[i].after})
                    for (const Letter& l : part)
                        if (!placed[l.gen]) ready = false;
                if (ready) {
                    placed[found[i].gen] = true;
                    st.pinned[found[i].gen] = true;
                    st.pins.push_back(std::move(found[i]));
                    found.erase(found.begin() + i);
                    progress = true;
                    break;
                }
            }
            if (!progress)
                throw std::invalid_argument(
                    "cannot lift images: circular dependency among redundant generators");
        }
    }
    return st;
}

inline void refresh_pinned_images(PqResult& st) {
    for (const Pin& pin : st.pins) {
        Vec u = eval_letters(st.G, st.images, pin.before);
        Vec v = eval_letters(st.G, st.images, pin.after);
        st.images[pin.gen] = pin.sign > 0
                                 ? st.G.mul(st.G.inverse(u), st.G.inverse(v))
                                 : st.G.mul(v, u);
    }
}

} // namespace pqdetail

// Largest quotient of F that is a p-group of exponent-p class at most
// `class_bound`, computed class by class.  `complete` is set when a lifting
// step added no generators, i.e. the full pro-p quotient was reached.
inline PqResult p_quotient(const FpPresentation& F, int p, int class_bound, int hard_cap = 40) {
    if (class_bound < 1) throw std::invalid_argument("class bound must be >= 1");
    class_bound = std::min(class_bound, hard_cap);
    PqResult st = pqdetail::class1(F, p);
    pqdetail::refresh_pinned_images(st);
    auto one_step = [&](bool commit) {
        auto raw = pqdetail::extend_raw(st.G);
        std::vector<std::vector<uint8_t>> relrows;
        {
            std::vector<Vec> imgs;
            for (const Vec& v : st.images) {
                Vec w(raw.E.ngens, 0);
                std::copy(v.begin(), v.end(), w.begin());
                imgs.push_back(std::move(w));
            }
            PqResult lifted;  // lift pinned images inside E before evaluating
            lifted.G = raw.E;
            lifted.images = imgs;
            lifted.pins = st.pins;
            pqdetail::refresh_pinned_images(lifted);
            FpEvaluator ev(raw.E, lifted.images);
            for (const auto& rel : F.relators) {
                Vec v = ev.eval(rel);
                std::vector<uint8_t> row(raw.q, 0);
                bool nz = false;
                for (int i = 0; i < raw.n; ++i)
                    if (v[i])
                        throw PqInternalError("relator image escapes the layer");
                for (int t = 0; t < raw.q; ++t) {
                    row[t] = v[raw.n + t];
                    if (row[t]) nz = true;
                }
                if (nz) relrows.push_back(std::move(row));
            }
        }
        auto fin = pqdetail::finish_extension(st.G, std::move(raw), std::move(relrows));
        if (fin.ntails == 0 || !commit) return fin.ntails;
        int n2 = fin.E.ngens;
        st.G = std::move(fin.E);
        for (auto& img : st.images) img.resize(n2, 0);
        pqdetail::refresh_pinned_images(st);
        return fin.ntails;
    };
    for (int cls = 2; cls <= class_bound; ++cls) {
        if (one_step(true) == 0) {
            st.complete = true;
            return st;
        }
    }
    st.complete = (one_step(false) == 0);
    return st;
}

// ---------------------------------------------------------------------------
// p-covering group
// ---------------------------------------------------------------------------

struct CoverResult {
    PcPresentation cover;
    SubgroupCGS multiplicator;
    SubgroupCGS nucleus;
    RankReport ranks;
    int base_ngens = 0;  // generators of the input group (prefix of the cover)
};

inline CoverResult p_cover(const PcPresentation& G) {
    if ((int)G.defs.size() != G.ngens || (int)G.weights.size() != G.ngens)
        throw std::invalid_argument("p_cover needs weights and definition tags");
    auto raw = pqdetail::extend_raw(G);
    auto fin = pqdetail::finish_extension(G, std::move(raw), {});
    CoverResult out;
    out.base_ngens = G.ngens;
    int n = G.ngens, q = fin.ntails, p = G.prime;
    out.cover = std::move(fin.E);

    for (int t = 0; t < q; ++t) {
        out.multiplicator.gens.push_back(out.cover.gen(n + t));
        out.multiplicator.leads.push_back(n + t);
    }

    int cls = 0;
    for (int i = 0; i < n; ++i) cls = std::max(cls, G.weights[i]);
    std::vector<std::vector<uint8_t>> rows;
    auto tail_row = [&](const Vec& v) {
        for (int i = 0; i < n; ++i)
            if (v[i]) throw PqInternalError("nucleus value escapes the layer");
        std::vector<uint8_t> row(v.begin() + n, v.end());
        bool nz = false;
        for (auto x : row)
            if (x) nz = true;
        if (nz) rows.push_back(std::move(row));
    };
    for (int i = 0; i < n; ++i) {
        if (G.weights[i] != cls) continue;
        for (int j = 0; j < n; ++j)
            if (j != i) tail_row(out.cover.commutator(out.cover.gen(i), out.cover.gen(j)));
        tail_row(out.cover.power_rhs[i]);
    }
    auto rr = pqdetail::rref_modp(std::move(rows), q, p);
    for (size_t r = 0; r < rr.rows.size(); ++r) {
        Vec v(out.cover.ngens, 0);
        for (int t = 0; t < q; ++t) v[n + t] = rr.rows[r][t];
        out.nucleus.gens.push_back(std::move(v));
        out.nucleus.leads.push_back(n + rr.pivots[r]);
    }

    out.ranks.d1 = 0;
    for (int i = 0; i < n; ++i)
        if (G.weights[i] == 1) ++out.ranks.d1;
    out.ranks.d2 = q;
    out.ranks.nu = (int)out.nucleus.gens.size();
    return out;
}

// ---------------------------------------------------------------------------
// Standardizing a concrete pc group
// ---------------------------------------------------------------------------

// Lower exponent-p central series P_1 = G, P_{k+1} = [P_k, G] P_k^p.
inline std::vector<SubgroupCGS> p_central_series(const PcPresentation& G) {
    std::vector<SubgroupCGS> series;
    series.push_back(whole_group(G));
    while (series.back().rank() > 0) {
        const SubgroupCGS& prev = series.back();
        std::vector<Vec> seeds;
        for (const Vec& h : prev.gens) {
            for (int i = 0; i < G.ngens; ++i) seeds.push_back(G.commutator(h, G.gen(i)));
            seeds.push_back(G.power(h, G.prime));
        }
        SubgroupCGS next = normal_closure(G, seeds);
        if (next.rank() >= prev.rank())
            throw PqInternalError("p-central series failed to descend");
        series.push_back(std::move(next));
    }
    return series;
}

// Isomorphic copy of G in standard form (ascending p-weights, definition
// tags), rebuilt class by class against the concrete group.  Accepts any
// consistent pc presentation.
inline PcPresentation standard_copy(const PcPresentation& G) {
    const int p = G.prime;
    auto series = p_central_series(G);  // series[k] = P_{k+1}
    int L = (int)series.size() - 1;     // p-class

    // class 1: the Frattini-free generators give a basis of G/P_2
    std::vector<int> basis_idx;
    for (int i = 0; i < G.ngens; ++i)
        if (!series[1].has_lead(i)) basis_idx.push_back(i);
    int d = (int)basis_idx.size();
    PcPresentation Q = PcPresentation::make(p, d);
    Q.weights.assign(d, 1);
    Q.defs.assign(d, PcPresentation::Def{});
    std::vector<Vec> wit;  // concrete witness in G for each generator of Q
    for (int i = 0; i < d; ++i) wit.push_back(G.gen(basis_idx[i]));

    for (int k = 1; k < L; ++k) {
        auto raw = pqdetail::extend_raw(Q);
        // concrete value of each tail's defining relation
        std::vector<Vec> delta(raw.q);
        auto wit_word = [&](const Vec& v) {
            Vec x = G.id();
            for (int m = 0; m < (int)v.size() && m < (int)wit.size(); ++m)
                if (v[m]) x = G.mul(x, G.power(wit[m], v[m]));
            return x;
        };
        for (int t = 0; t < raw.q; ++t) {
            const auto& r = raw.rels[t];
            Vec rhs_g(raw.E.power_rhs[0].size(), 0);
            if (r.kind == pqdetail::RelRef::Power)
                rhs_g = raw.E.power_rhs[r.a];
            else
                rhs_g = raw.E.comm_rhs(r.a, r.b);
            Vec base(Q.ngens, 0);
            for (int m = 0; m < Q.ngens; ++m) base[m] = rhs_g.empty() ? 0 : rhs_g[m];
            Vec lhs = r.kind == pqdetail::RelRef::Power
                          ? G.power(wit[r.a], p)
                          : G.commutator(wit[r.a], wit[r.b]);
            delta[t] = G.mul(G.inverse(wit_word(base)), lhs);
        }
        // coordinates of the deltas in the section P_{k+1}/P_{k+2}
        const SubgroupCGS& U = series[k + 1];
        std::vector<int> kept;
        PcPresentation Gbar = quotient(G, U, &kept);
        std::vector<int> posmap(G.ngens, -1);
        for (size_t i = 0; i < kept.size(); ++i) posmap[kept[i]] = (int)i;
        auto compress = [&](const Vec& v) {
            Vec r = coset_rep(G, U, v);
            Vec w(kept.size(), 0);
            for (int i = 0; i < G.ngens; ++i)
                if (r[i]) w[posmap[i]] = r[i];
            return w;
        };
        std::vector<Vec> wseeds;
        for (const Vec& h : series[k].gens) wseeds.push_back(compress(h));
        SubgroupCGS Wbar = subgroup(Gbar, wseeds);
        int s = Wbar.rank();
        std::vector<std::vector<uint8_t>> D(raw.q, std::vector<uint8_t>(s, 0));
        for (int t = 0; t < raw.q; ++t) {
            auto c = coords_in(Gbar, Wbar, compress(delta[t]));
            for (int i = 0; i < s; ++i) D[t][i] = (uint8_t)(c[i] % p);
        }
        // rows v with sum v_t delta_t = 0 in the section
        std::vector<std::vector<uint8_t>> Dt(s, std::vector<uint8_t>(raw.q, 0));
        for (int t = 0; t < raw.q; ++t)
            for (int i = 0; i < s; ++i) Dt[i][t] = D[t][i];
        auto rows = pqdetail::nullspace_modp(std::move(Dt), raw.q, p);

        std::vector<pqdetail::RelRef> rel_order = raw.rels;
        auto fin = pqdetail::finish_extension(Q, std::move(raw), std::move(rows));
        // witnesses for survivors: delta of their defining relation
        for (int t2 = 0; t2 < fin.ntails; ++t2) {
            const auto& want = fin.tails[t2];
            int idx = -1;
            for (size_t t = 0; t < rel_order.size(); ++t)
                if (rel_order[t].kind == want.kind && rel_order[t].a == want.a &&
                    rel_order[t].b == want.b) {
                    idx = (int)t;
                    break;
                }
            if (idx < 0) throw PqInternalError("lost tail witness");
            wit.push_back(delta[idx]);
        }
        Q = std::move(fin.E);
    }
    if (Q.ngens != G.ngens)
        throw PqInternalError("standard copy changed the order: " + std::to_string(G.ngens) +
                              " -> " + std::to_string(Q.ngens));
    return Q;
}

// Reuse a standard form when the input already carries one.
inline PcPresentation with_standard_tags(const PcPresentation& G) {
    if ((int)G.defs.size() == G.ngens && (int)G.weights.size() == G.ngens) {
        bool ok = true;
        for (int i = 0; i < G.ngens; ++i)
            if (G.weights[i] >= 2 && G.defs[i].kind == PcPresentation::Def::None) ok = false;
        if (ok) return G;
    }
    return standard_copy(G);
}

// ---------------------------------------------------------------------------
// Derived helpers
// ---------------------------------------------------------------------------

// G / G''.  Idempotent; groups of derived length <= 2 come back unchanged.
inline PcPresentation metabelianization(const PcPresentation& G) {
    SubgroupCGS d1 = derived_subgroup(G);
    if (d1.rank() == 0) return G;
    SubgroupCGS d2 = derived_of(G, d1);
    if (d2.rank() == 0) return G;
    return quotient(G, d2);
}

// Quotient by gamma_{cls+1} when the class exceeds cls.
inline PcPresentation class_truncate(const PcPresentation& G, int cls) {
    auto lcs = lower_central_series(G);
    int actual = (int)lcs.size() - 1;
    if (actual <= cls) return G;
    return quotient(G, lcs[cls]);
}

// Re-encode a pc presentation as relators on its own generators.
inline FpPresentation encode_as_fp(const PcPresentation& G) {
    FpPresentation f;
    f.ngens = G.ngens;
    auto vec_expr = [&](const Vec& v) {
        std::vector<FpExprPtr> ps;
        for (int i = 0; i < G.ngens; ++i)
            if (v[i]) ps.push_back(FpExpr::pow(FpExpr::generator(i), v[i]));
        return FpExpr::prod(std::move(ps));
    };
    for (int i = 0; i < G.ngens; ++i)
        f.relators.push_back(FpExpr::prod({FpExpr::pow(FpExpr::generator(i), G.prime),
                                           FpExpr::pow(vec_expr(G.power_rhs[i]), -1)}));
    for (int j = 1; j < G.ngens; ++j)
        for (int i = 0; i < j; ++i) {
            const Vec& rhs = G.comm_rhs(j, i);
            std::vector<FpExprPtr> ps = {
                FpExpr::comm(FpExpr::generator(j), FpExpr::generator(i))};
            if (!rhs.empty()) ps.push_back(FpExpr::pow(vec_expr(rhs), -1));
            f.relators.push_back(FpExpr::prod(std::move(ps)));
        }
    return f;
}

} // namespace towers3

#endif
