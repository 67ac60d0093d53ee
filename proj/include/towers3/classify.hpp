#ifndef TOWERS3_CLASSIFY_HPP
#define TOWERS3_CLASSIFY_HPP

#include <optional>

#include "towers3/artin.hpp"
#include "towers3/trees.hpp"
#include "towers3/typeinv.hpp"

namespace towers3 {

// ---------------------------------------------------------------------------
// Tower length verdicts
// ---------------------------------------------------------------------------

enum class Length { Exactly2, Exactly3, AtLeast3, TwoOrThree, Unknown };

inline const char* length_token(Length v) {
    switch (v) {
        case Length::Exactly2: return "Exactly2";
        case Length::Exactly3: return "Exactly3";
        case Length::AtLeast3: return "AtLeast3";
        case Length::TwoOrThree: return "TwoOrThree";
        default: return "Unknown";
    }
}

inline std::optional<Length> length_from_token(const std::string& s) {
    for (Length v : {Length::Exactly2, Length::Exactly3, Length::AtLeast3, Length::TwoOrThree,
                     Length::Unknown})
        if (s == length_token(v)) return v;
    if (s == "2") return Length::Exactly2;
    if (s == "3") return Length::Exactly3;
    if (s == ">=3") return Length::AtLeast3;
    if (s == "2or3" || s == "2-or-3") return Length::TwoOrThree;
    return std::nullopt;
}

struct LengthVerdict {
    Length value = Length::Unknown;
    std::string reason;        // matched pattern tag, or first mismatching bracket
    bool conjectural = false;  // complex criteria are proven for bounded state only
};

// ---------------------------------------------------------------------------
// State detection from first-order invariants
// ---------------------------------------------------------------------------

struct StateReading {
    int n = -1;
    std::optional<Tree> tree_hint;
    enum Family { Simple, Complex, Undetermined } family = Undetermined;
    std::string reason;
    bool determined() const { return n >= 0 && tree_hint.has_value(); }
};

namespace clsdetail {

inline bool is_heterocyclic_pol(const TypeInvariants& t) {
    return t.rank() == 2 && t.parts[0] >= 3 && t.parts[0] == t.parts[1] + 1;
}
inline bool is_homocyclic(const TypeInvariants& t) {
    return t.rank() == 2 && t.parts[0] == t.parts[1];
}

inline bool multiset_equal(std::vector<TypeInvariants> a, std::vector<TypeInvariants> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

} // namespace clsdetail

// Identify the unique heterocyclic component (n+3, n+2) and read the tree
// from the remainder: {111,21,21} points to the Q-side, {21,21,21} to the
// U-side.  Homocyclic polarizations and everything else come back
// undetermined with a reason.
inline StateReading detect_state(const std::vector<TypeInvariants>& ati) {
    StateReading out;
    if (ati.size() != 4) {
        out.reason = "expected four components";
        return out;
    }
    std::vector<size_t> candidates;
    for (size_t i = 0; i < ati.size(); ++i)
        if (clsdetail::is_heterocyclic_pol(ati[i])) candidates.push_back(i);
    if (candidates.empty()) {
        // name the dominant component for the reason
        auto dominant = std::max_element(ati.begin(), ati.end(),
                                         [](const TypeInvariants& a, const TypeInvariants& b) {
                                             return display_before(b, a);
                                         });
        out.reason = clsdetail::is_homocyclic(*dominant)
                         ? "homocyclic polarization " + dominant->str()
                         : "no heterocyclic polarization component";
        return out;
    }
    if (candidates.size() > 1) {
        out.reason = "polarization is ambiguous";
        return out;
    }
    const TypeInvariants& pol = ati[candidates[0]];
    std::vector<TypeInvariants> rest;
    for (size_t i = 0; i < ati.size(); ++i)
        if (i != candidates[0]) rest.push_back(ati[i]);
    TypeInvariants t21({2, 1}), t111({1, 1, 1});
    if (clsdetail::multiset_equal(rest, {t111, t21, t21})) {
        out.n = pol.parts[0] - 3;
        out.tree_hint = Tree::Q;
        out.reason = "stabilization {111,21,21}";
    } else if (clsdetail::multiset_equal(rest, {t21, t21, t21})) {
        out.n = pol.parts[0] - 3;
        out.tree_hint = Tree::U;
        out.reason = "stabilization {21,21,21}";
    } else {
        out.reason = "stabilization matches neither tree";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pattern builders for the second-order criteria
// ---------------------------------------------------------------------------

namespace clsdetail {

inline Ati2Bracket bracket(TypeInvariants head, std::vector<TypeInvariants> tail) {
    return Ati2Bracket{std::move(head), std::move(tail)};
}

inline Ati2Bracket polarization_bracket(int n, const TypeInvariants& a0, bool wild) {
    TypeInvariants tailinv({n + (wild ? 4 : 3), n + 1, 1});
    return bracket(TypeInvariants({n + 3, n + 2}), {a0, tailinv, tailinv, tailinv});
}
inline Ati2Bracket singular_bracket(const TypeInvariants& a0, bool wild) {
    std::vector<TypeInvariants> tail = {a0};
    TypeInvariants mid = wild ? TypeInvariants({2, 1, 1}) : TypeInvariants({1, 1, 1});
    for (int k = 0; k < 3; ++k) tail.push_back(mid);
    for (int k = 0; k < 9; ++k) tail.push_back(TypeInvariants({1, 1}));
    return bracket(TypeInvariants({1, 1, 1}), std::move(tail));
}
inline Ati2Bracket regular_bracket(const TypeInvariants& a0, bool wild) {
    std::vector<TypeInvariants> tail = {a0};
    TypeInvariants mid = wild ? TypeInvariants({3, 1}) : TypeInvariants({2, 1});
    for (int k = 0; k < 3; ++k) tail.push_back(mid);
    return bracket(TypeInvariants({2, 1}), std::move(tail));
}

// full quadruples; `qside` carries the singular component
inline Ati2 stage_pattern(int n, const TypeInvariants& a0, bool qside, bool wild_pol,
                          bool wild_stab) {
    Ati2 a;
    a.brackets.push_back(polarization_bracket(n, a0, wild_pol));
    if (qside) {
        a.brackets.push_back(singular_bracket(a0, wild_stab));
        a.brackets.push_back(regular_bracket(a0, wild_stab));
        a.brackets.push_back(regular_bracket(a0, wild_stab));
    } else {
        for (int k = 0; k < 3; ++k) a.brackets.push_back(regular_bracket(a0, wild_stab));
    }
    return a;
}

inline int state_from_ati2(const Ati2& a) {
    for (const auto& b : a.brackets)
        if (is_heterocyclic_pol(b.head)) return b.head.parts[0] - 3;
    return -1;
}

inline std::string first_mismatch(const Ati2& got, const Ati2& want,
                                  const TypeInvariants* a0) {
    std::vector<bool> used(want.brackets.size(), false);
    for (const auto& b : got.brackets) {
        bool hit = false;
        for (size_t j = 0; j < want.brackets.size(); ++j)
            if (!used[j] && b == want.brackets[j]) {
                used[j] = hit = true;
                break;
            }
        if (!hit) return bracket_str(b, a0);
    }
    return "(arity)";
}

} // namespace clsdetail

struct ClassifierTypeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline bool tkt_is_simple(const Tkt& k) {
    for (const char* t : {"1122", "3122", "1231", "2231"})
        if (tkt_canonical(k) == tkt_canonical(parse_tkt(t))) return true;
    return false;
}
inline bool tkt_is_complex(const Tkt& k) {
    for (const char* t : {"2122", "4231"})
        if (tkt_canonical(k) == tkt_canonical(parse_tkt(t))) return true;
    return false;
}

enum class QuadraticSignature { Real, Imaginary };

// Length criterion for the simple kernel types: imaginary fields always
// have three stages; real fields are decided by the second-order pattern,
// with alpha_0 = ((n+2)^2, 1).
inline LengthVerdict classify_simple(const Tkt& kappa, QuadraticSignature sig,
                                     const std::optional<Ati2>& ati2_opt) {
    if (!tkt_is_simple(kappa))
        throw ClassifierTypeError("kernel type " + kappa.str() + " is not simple");
    LengthVerdict v;
    if (sig == QuadraticSignature::Imaginary) {
        v.value = Length::Exactly3;
        v.reason = "imaginary";
        return v;
    }
    if (!ati2_opt) {
        v.reason = "second-order invariants unavailable";
        return v;
    }
    const Ati2& got = *ati2_opt;
    int n = clsdetail::state_from_ati2(got);
    if (n < 0) {
        v.reason = "no heterocyclic polarization bracket";
        return v;
    }
    bool qside = tkt_canonical(kappa) == tkt_canonical(parse_tkt("1122")) ||
                 tkt_canonical(kappa) == tkt_canonical(parse_tkt("3122"));
    TypeInvariants a0({n + 2, n + 2, 1});
    Ati2 two = clsdetail::stage_pattern(n, a0, qside, false, false);
    Ati2 three = clsdetail::stage_pattern(n, a0, qside, false, true);
    if (got == two) {
        v.value = Length::Exactly2;
        v.reason = "tame stabilization";
    } else if (got == three) {
        v.value = Length::Exactly3;
        v.reason = "wild stabilization";
    } else {
        v.reason = "mismatch at " + clsdetail::first_mismatch(got, two, &a0);
    }
    return v;
}

// Partial criterion for the complex kernel types, alpha_0 = (n+3, n+2, 1):
// the all-tame pattern allows two or three stages; each of the three wild
// patterns forces at least three.
inline LengthVerdict classify_complex(const Tkt& kappa, QuadraticSignature sig,
                                      const std::optional<Ati2>& ati2_opt) {
    if (!tkt_is_complex(kappa))
        throw ClassifierTypeError("kernel type " + kappa.str() + " is not complex");
    LengthVerdict v;
    if (sig == QuadraticSignature::Imaginary) {
        v.value = Length::AtLeast3;
        v.reason = "imaginary";
        return v;
    }
    if (!ati2_opt) {
        v.reason = "second-order invariants unavailable";
        return v;
    }
    const Ati2& got = *ati2_opt;
    int n = clsdetail::state_from_ati2(got);
    if (n < 0) {
        v.reason = "no heterocyclic polarization bracket";
        return v;
    }
    bool qside = tkt_canonical(kappa) == tkt_canonical(parse_tkt("2122"));
    TypeInvariants a0({n + 3, n + 2, 1});
    v.conjectural = n >= 5;
    if (got == clsdetail::stage_pattern(n, a0, qside, false, false)) {
        v.value = Length::TwoOrThree;
        v.reason = "all tame";
        return v;
    }
    if (got == clsdetail::stage_pattern(n, a0, qside, true, false)) {
        v.value = Length::AtLeast3;
        v.reason = "wild polarization";
        return v;
    }
    if (got == clsdetail::stage_pattern(n, a0, qside, false, true)) {
        v.value = Length::AtLeast3;
        v.reason = "wild stabilization";
        return v;
    }
    if (got == clsdetail::stage_pattern(n, a0, qside, true, true)) {
        v.value = Length::AtLeast3;
        v.reason = "wild polarization and stabilization";
        return v;
    }
    v.reason = "mismatch at " +
               clsdetail::first_mismatch(got, clsdetail::stage_pattern(n, a0, qside, false, false),
                                         &a0);
    return v;
}

// ---------------------------------------------------------------------------
// IPAD screening
// ---------------------------------------------------------------------------

struct MalformedIpadError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ScreenVerdict {
    enum Category {
        MaximalClass,      // at least three elementary bicyclic components
        SporadicBranch,    // epsilon = 3
        CoclassThreePlus,  // epsilon = 2
        QTree,
        UTree,
        HomocyclicExclusion,
        Other
    } category = Other;
    int n = -1;  // state for the tree categories
    std::string text;
};

inline ScreenVerdict screen_ipad(const std::vector<TypeInvariants>& ipad) {
    if (ipad.size() != 5) throw MalformedIpadError("an IPAD has five components");
    if (ipad[0] != TypeInvariants({1, 1}))
        throw MalformedIpadError("first IPAD component must be (1,1)");
    std::vector<TypeInvariants> comps(ipad.begin() + 1, ipad.end());

    ScreenVerdict out;
    int bicyclic = 0, eps = 0;
    for (const auto& c : comps) {
        if (c == TypeInvariants({1, 1})) ++bicyclic;
        if (c == TypeInvariants({1, 1, 1})) ++eps;
    }
    if (bicyclic >= 3) {
        out.category = ScreenVerdict::MaximalClass;
        out.text = "maximal class, cc=1";
        return out;
    }
    if (eps == 3) {
        out.category = ScreenVerdict::SporadicBranch;
        out.text = "sporadic <243,4> branch";
        return out;
    }
    if (eps == 2) {
        out.category = ScreenVerdict::CoclassThreePlus;
        out.text = "<243,7> or <243,3> branch";
        return out;
    }
    // unique component of maximal sum is the polarization candidate
    long best = -1;
    int arg = -1;
    bool unique = true;
    for (size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].sum() > best) {
            best = comps[i].sum();
            arg = (int)i;
            unique = true;
        } else if (comps[i].sum() == best) {
            unique = false;
        }
    }
    const TypeInvariants& pol = comps[arg];
    std::vector<TypeInvariants> rest;
    for (size_t i = 0; i < comps.size(); ++i)
        if ((int)i != arg) rest.push_back(comps[i]);
    TypeInvariants t21({2, 1}), t111({1, 1, 1});
    if (unique && eps == 1 && clsdetail::is_heterocyclic_pol(pol) &&
        clsdetail::multiset_equal(rest, {t111, t21, t21})) {
        out.category = ScreenVerdict::QTree;
        out.n = pol.parts[0] - 3;
        out.text = "Q-tree";
        return out;
    }
    if (unique && eps == 0 && clsdetail::is_heterocyclic_pol(pol)) {
        out.category = ScreenVerdict::UTree;
        out.n = pol.parts[0] - 3;
        out.text = "U-tree";
        return out;
    }
    if (unique && clsdetail::is_homocyclic(pol)) {
        out.category = ScreenVerdict::HomocyclicExclusion;
        out.text = "homocyclic polarization " + pol.str();
        return out;
    }
    out.text = "other";
    return out;
}

// ---------------------------------------------------------------------------
// Soluble length of the sporadic series
// ---------------------------------------------------------------------------

inline int babu_soluble_length(long m) {
    if (m < 2) throw std::invalid_argument("the series starts at m = 2");
    long v = 3 * m + 3;
    int k = 0;
    while ((2L << k) <= v) ++k;  // largest k with 2^k <= v
    return k;
}

} // namespace towers3

#endif
