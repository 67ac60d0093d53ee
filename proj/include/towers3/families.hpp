#ifndef TOWERS3_FAMILIES_HPP
#define TOWERS3_FAMILIES_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

#include "towers3/pquotient.hpp"
#include "towers3/trees.hpp"

namespace towers3 {

// The six relator variants of the coclass-2 one-parameter families; the
// pair name gives the transfer kernel type on the Q-tree / U-tree.
enum class Variant { MainlinePair, E6_E8, E14a_E9a, E14b_E9b, H4a_G16a, H4b_G16b };

inline const char* variant_name(Tree t, Variant v) {
    switch (v) {
        case Variant::MainlinePair: return "mainline";
        case Variant::E6_E8: return t == Tree::Q ? "E6" : "E8";
        case Variant::E14a_E9a: return t == Tree::Q ? "E14a" : "E9a";
        case Variant::E14b_E9b: return t == Tree::Q ? "E14b" : "E9b";
        case Variant::H4a_G16a: return t == Tree::Q ? "H4a" : "G16a";
        case Variant::H4b_G16b: return t == Tree::Q ? "H4b" : "G16b";
    }
    return "?";
}

inline std::optional<Variant> variant_from(const std::string& name) {
    std::string s;
    for (char c : name) s += (char)tolower((unsigned char)c);
    if (s == "mainline" || s == "mainline-pair" || s == "c18" || s == "c21")
        return Variant::MainlinePair;
    if (s == "e6" || s == "e8" || s == "e6/e8") return Variant::E6_E8;
    if (s == "e14a" || s == "e9a") return Variant::E14a_E9a;
    if (s == "e14b" || s == "e9b") return Variant::E14b_E9b;
    if (s == "h4a" || s == "g16a") return Variant::H4a_G16a;
    if (s == "h4b" || s == "g16b") return Variant::H4b_G16b;
    return std::nullopt;
}

// All six variants in a fixed enumeration order.
inline const std::vector<Variant>& all_variants() {
    static const std::vector<Variant> v = {Variant::MainlinePair, Variant::E6_E8,
                                           Variant::E14a_E9a,     Variant::E14b_E9b,
                                           Variant::H4a_G16a,     Variant::H4b_G16b};
    return v;
}

struct GroupDescriptor {
    enum Kind { Mainline, MetabelianFamily, CoverQuotient } kind;
    Tree tree = Tree::Q;
    int cls = 5;                         // nilpotency class c
    int r = 2;                           // Mainline: coclass
    Variant variant = Variant::E6_E8;    // MetabelianFamily
    int ell = 0;                         // CoverQuotient: -1, 0, +1

    void validate() const {
        switch (kind) {
            case Mainline:
                if (r < 2 || cls < 2 * r - 1)
                    throw std::invalid_argument("mainline vertex needs r >= 2, c >= 2r-1");
                break;
            case MetabelianFamily:
                if (cls < 5) throw std::invalid_argument("family groups need class >= 5");
                break;
            case CoverQuotient:
                if (cls < 5 || cls % 2 == 0)
                    throw std::invalid_argument("cover quotients need odd class >= 5");
                if (ell < -1 || ell > 1)
                    throw std::invalid_argument("cover parameter must be -1, 0 or +1");
                break;
        }
    }

    // state parameter, where defined
    int state() const {
        if (kind == MetabelianFamily) return cls % 2 ? (cls - 5) / 2 : (cls - 6) / 2;
        if (kind == CoverQuotient) return (cls - 5) / 2;
        return -1;
    }
    int expected_log_order() const {
        switch (kind) {
            case Mainline: return cls + r;
            case MetabelianFamily: return cls + 2;
            case CoverQuotient: return 3 * state() + 8;
        }
        return 0;
    }

    std::string str() const {
        std::ostringstream os;
        os << tree_char(tree) << ":";
        switch (kind) {
            case Mainline: os << "mainline(c=" << cls << ",r=" << r << ")"; break;
            case MetabelianFamily:
                os << "metab(c=" << cls << "," << variant_name(tree, variant) << ")";
                break;
            case CoverQuotient: os << "schur(c=" << cls << ",ell=" << ell << ")"; break;
        }
        return os.str();
    }

    bool operator<(const GroupDescriptor& o) const {
        auto key = [](const GroupDescriptor& d) {
            return std::tuple<int, int, int, int, int, int>(
                (int)d.kind, (int)d.tree, d.cls, d.r, (int)d.variant, d.ell);
        };
        return key(*this) < key(o);
    }
};

struct OrderGateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Presentations
// ---------------------------------------------------------------------------

namespace famdetail {

inline FpExprPtr gens_pow(FpExprPtr b, long e) { return FpExpr::pow(std::move(b), e); }

inline long pow3(int k) {
    long v = 1;
    while (k--) v *= 3;
    return v;
}

} // namespace famdetail

// Skeleton limit quotient X_c^r:
//   < a,t | (at)^3=a^3, [[t,a],t]=a^{-3} (Q) / a^{+3} (U),
//           a^{3^r}, [t,a]^{3^j} (c=2j+1) or t^{3^j} (c=2j) >
inline FpPresentation mainline_presentation(Tree tree, int r, int c) {
    auto a = FpExpr::generator(0), t = FpExpr::generator(1);
    std::vector<FpExprPtr> rel;
    rel.push_back(FpExpr::prod({FpExpr::pow(FpExpr::prod({a, t}), 3), FpExpr::pow(a, -3)}));
    rel.push_back(FpExpr::prod({FpExpr::comm(FpExpr::comm(t, a), t),
                                FpExpr::pow(a, tree == Tree::U ? -3 : 3)}));
    rel.push_back(FpExpr::pow(a, famdetail::pow3(r)));
    if (c % 2 == 1)
        rel.push_back(FpExpr::pow(FpExpr::comm(t, a), famdetail::pow3((c - 1) / 2)));
    else
        rel.push_back(FpExpr::pow(t, famdetail::pow3(c / 2)));
    return FpPresentation{2, rel};
}

// The six metabelian descendants of class c on either tree, by their listed
// relators; unlisted commutator relations are supplied by the quotient
// machinery and the order gate.
inline FpPresentation family_presentation(Tree tree, int c, Variant v) {
    auto x = FpExpr::generator(0), y = FpExpr::generator(1);
    std::vector<FpExprPtr> rel;
    if (tree == Tree::Q) {
        // s2=[y,x], t3=[s2,y], s_j=[s_{j-1},x]
        std::vector<FpExprPtr> s(c + 1);
        s[2] = FpExpr::comm(y, x);
        auto t3 = FpExpr::comm(s[2], y);
        for (int j = 3; j <= c; ++j) s[j] = FpExpr::comm(s[j - 1], x);
        for (int j = 2; j <= c - 3; ++j)
            rel.push_back(FpExpr::prod(
                {FpExpr::pow(s[j], 3), FpExpr::pow(s[j + 2], -2), FpExpr::pow(s[j + 3], -1)}));
        rel.push_back(FpExpr::prod({FpExpr::pow(s[c - 2], 3), FpExpr::pow(s[c], -2)}));
        rel.push_back(FpExpr::pow(t3, 3));
        bool rx_long = (v == Variant::E6_E8 || v == Variant::E14a_E9a || v == Variant::E14b_E9b);
        int ry_tail = (v == Variant::H4a_G16a || v == Variant::E14a_E9a)   ? 1
                      : (v == Variant::H4b_G16b || v == Variant::E14b_E9b) ? 2
                                                                           : 0;
        rel.push_back(rx_long
                          ? FpExpr::prod({FpExpr::pow(x, 3), FpExpr::pow(s[c], -1)})
                          : FpExpr::pow(x, 3));
        std::vector<FpExprPtr> ry = {FpExpr::pow(y, 3), FpExpr::pow(s[3], -2),
                                     FpExpr::pow(s[4], -1)};
        if (ry_tail) ry.push_back(FpExpr::pow(s[c], -ry_tail));
        rel.push_back(FpExpr::prod(std::move(ry)));
    } else {
        // t2=[y,x], s3=[t2,x], t_j=[t_{j-1},y]
        std::vector<FpExprPtr> t(c + 1);
        t[2] = FpExpr::comm(y, x);
        auto s3 = FpExpr::comm(t[2], x);
        for (int j = 3; j <= c; ++j) t[j] = FpExpr::comm(t[j - 1], y);
        for (int j = 2; j <= c - 3; ++j)
            rel.push_back(FpExpr::prod(
                {FpExpr::pow(t[j], 3), FpExpr::pow(t[j + 2], -2), FpExpr::pow(t[j + 3], -1)}));
        rel.push_back(FpExpr::prod({FpExpr::pow(t[c - 2], 3), FpExpr::pow(t[c], -2)}));
        rel.push_back(FpExpr::pow(s3, 3));
        bool ry_long = (v == Variant::E6_E8 || v == Variant::E14a_E9a || v == Variant::E14b_E9b);
        int rx_tail = (v == Variant::H4a_G16a || v == Variant::E14a_E9a)   ? 1
                      : (v == Variant::H4b_G16b || v == Variant::E14b_E9b) ? 2
                                                                           : 0;
        std::vector<FpExprPtr> ry = {FpExpr::pow(y, 3), FpExpr::pow(s3, -1)};
        if (ry_long) ry.push_back(FpExpr::pow(t[c], -1));
        rel.push_back(FpExpr::prod(std::move(ry)));
        std::vector<FpExprPtr> rx = {FpExpr::pow(x, 3), FpExpr::pow(t[3], -1),
                                     FpExpr::pow(t[4], -2), FpExpr::pow(t[5], -1)};
        if (rx_tail) rx.push_back(FpExpr::pow(t[c], -rx_tail));
        rel.push_back(FpExpr::prod(std::move(rx)));
    }
    return FpPresentation{2, rel};
}

// Cover limit C^(e) on a,t,u,y,z with the class-c parameter relations
// y w_c^l v_c and z w_c, where w_k = [t,a,...,a] and v_c = [w_{c-2},[t,a]].
inline FpPresentation cover_presentation(int e, int ell, int c) {
    auto a = FpExpr::generator(0), t = FpExpr::generator(1), u = FpExpr::generator(2),
         y = FpExpr::generator(3), z = FpExpr::generator(4);
    std::vector<FpExprPtr> w(c + 1);
    w[2] = FpExpr::comm(t, a);
    for (int k = 3; k <= c; ++k) w[k] = FpExpr::comm(w[k - 1], a);
    auto v_c = FpExpr::comm(w[c - 2], w[2]);

    std::vector<FpExprPtr> rel;
    rel.push_back(FpExpr::prod({FpExpr::conj(t, a), FpExpr::pow(u, -1)}));
    rel.push_back(FpExpr::prod(
        {FpExpr::conj(u, a), t, u, y, FpExpr::pow(FpExpr::comm(u, t), -e)}));
    rel.push_back(FpExpr::prod(
        {FpExpr::pow(a, 3), FpExpr::comm(FpExpr::comm(t, a), t), FpExpr::pow(z, -1)}));
    rel.push_back(FpExpr::comm(FpExpr::comm(u, t), t));
    rel.push_back(FpExpr::comm(FpExpr::comm(u, t), u));
    rel.push_back(FpExpr::pow(y, 3));
    rel.push_back(FpExpr::comm(a, y));
    rel.push_back(FpExpr::comm(t, y));
    rel.push_back(FpExpr::comm(u, y));
    rel.push_back(FpExpr::comm(z, y));
    rel.push_back(FpExpr::pow(z, 3));
    rel.push_back(FpExpr::comm(t, z));
    rel.push_back(FpExpr::comm(u, z));
    // class-c parameter relations
    std::vector<FpExprPtr> yw = {y};
    if (ell) yw.push_back(FpExpr::pow(w[c], ell));
    yw.push_back(v_c);
    rel.push_back(FpExpr::prod(std::move(yw)));
    rel.push_back(FpExpr::prod({z, w[c]}));
    return FpPresentation{5, rel};
}

// ---------------------------------------------------------------------------
// Construction with hard gates
// ---------------------------------------------------------------------------

inline PcPresentation build(const GroupDescriptor& d) {
    d.validate();
    PcPresentation out;
    switch (d.kind) {
        case GroupDescriptor::Mainline: {
            auto res = p_quotient(mainline_presentation(d.tree, d.r, d.cls), 3, d.cls + d.r);
            out = class_truncate(res.G, d.cls);
            break;
        }
        case GroupDescriptor::MetabelianFamily: {
            auto res = p_quotient(family_presentation(d.tree, d.cls, d.variant), 3, d.cls + 2);
            out = metabelianization(class_truncate(res.G, d.cls));
            break;
        }
        case GroupDescriptor::CoverQuotient: {
            int e = d.tree == Tree::U ? 1 : 0;
            auto res =
                p_quotient(cover_presentation(e, d.ell, d.cls), 3, d.expected_log_order());
            out = class_truncate(res.G, d.cls);
            break;
        }
    }
    auto sz = series_and_sizes(out);
    if (sz.log_order != d.expected_log_order() || sz.cls != d.cls) {
        std::ostringstream os;
        os << "order gate failed for " << d.str() << ": got order 3^" << sz.log_order
           << " class " << sz.cls << ", expected 3^" << d.expected_log_order() << " class "
           << d.cls;
        throw OrderGateError(os.str());
    }
    return out;
}

// Process-wide construction cache; safe for concurrent readers.
inline std::shared_ptr<const PcPresentation> build_cached(const GroupDescriptor& d) {
    static std::mutex mu;
    static std::map<GroupDescriptor, std::shared_ptr<const PcPresentation>> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(d);
        if (it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const PcPresentation>(build(d));
    std::lock_guard<std::mutex> lk(mu);
    auto [it, inserted] = cache.emplace(d, built);
    return it->second;
}

// ---------------------------------------------------------------------------
// Relative identifiers:  BASE(-#s;j ...)^k [-#s;j ...] -#s;j
// ---------------------------------------------------------------------------

struct IdStep {
    int s = 1;
    int j = 1;
    bool operator==(const IdStep& o) const { return s == o.s && j == o.j; }
};

struct IdGroup {
    std::vector<IdStep> steps;
    long rep = 1;
    enum Shape { Paren, Bracket, Plain } shape = Paren;
};

struct RelativeIdentifier {
    std::string base;
    std::vector<IdGroup> groups;

    std::string str() const {
        std::string out = base;
        for (const auto& g : groups) {
            std::string body;
            for (const auto& st : g.steps)
                body += "-#" + std::to_string(st.s) + ";" + std::to_string(st.j);
            if (g.shape == IdGroup::Plain) {
                out += body;
            } else {
                char open = g.shape == IdGroup::Paren ? '(' : '[';
                char close = g.shape == IdGroup::Paren ? ')' : ']';
                out += open + body + close;
                if (g.rep != 1) out += "^" + std::to_string(g.rep);
            }
        }
        return out;
    }
};

struct IdentifierSyntaxError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline RelativeIdentifier parse_identifier(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!isspace((unsigned char)c)) s += c;
    size_t i = 0;
    auto fail = [&](const std::string& m) {
        throw IdentifierSyntaxError("identifier position " + std::to_string(i + 1) + ": " + m);
    };
    RelativeIdentifier id;
    while (i < s.size() && (isalnum((unsigned char)s[i]))) id.base += s[i++];
    if (id.base.empty()) fail("expected base symbol");
    auto integer = [&]() {
        bool neg = false;
        if (i < s.size() && s[i] == '-') {
            neg = true;
            ++i;
        }
        if (i >= s.size() || !isdigit((unsigned char)s[i])) fail("expected integer");
        long v = 0;
        while (i < s.size() && isdigit((unsigned char)s[i])) v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    };
    auto step = [&]() {
        if (i + 1 >= s.size() || s[i] != '-' || s[i + 1] != '#') fail("expected -#s;j step");
        i += 2;
        long sv = integer();
        if (i >= s.size() || s[i] != ';') fail("expected ';' in step");
        ++i;
        long jv = integer();
        if (sv < 1 || sv > 2) fail("step size must be 1 or 2");
        if (jv < 1) fail("counter must be >= 1");
        return IdStep{(int)sv, (int)jv};
    };
    while (i < s.size()) {
        IdGroup g;
        if (s[i] == '(' || s[i] == '[') {
            g.shape = s[i] == '(' ? IdGroup::Paren : IdGroup::Bracket;
            char close = s[i] == '(' ? ')' : ']';
            ++i;
            while (i < s.size() && s[i] != close) g.steps.push_back(step());
            if (i >= s.size()) fail("unterminated group");
            ++i;
            if (i < s.size() && s[i] == '^') {
                ++i;
                g.rep = integer();
                if (g.rep < 0) fail("negative repetition");
            }
            if (g.steps.empty()) fail("empty group");
        } else if (s[i] == '-') {
            g.shape = IdGroup::Plain;
            g.steps.push_back(step());
        } else {
            fail("unexpected character");
        }
        id.groups.push_back(std::move(g));
    }
    return id;
}

// ---------------------------------------------------------------------------
// Resolution of identifiers to descriptors
// ---------------------------------------------------------------------------

struct ResolvedIdentifier {
    enum Status { Constructible, Unconstructible, Unrecognized } status = Unrecognized;
    std::optional<GroupDescriptor> descriptor;
    std::string label;  // coordinates for recognized but unconstructible shapes
    std::string note;
};

struct UnrecognizedIdentifierError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace famdetail {

struct Segment {
    std::vector<IdStep> steps;
    bool bracket = false;
};

inline std::vector<Segment> expand(const RelativeIdentifier& id) {
    std::vector<Segment> segs;
    for (const auto& g : id.groups) {
        long rep = g.shape == IdGroup::Plain ? 1 : g.rep;
        if (rep > 64) throw IdentifierSyntaxError("repetition too large");
        for (long k = 0; k < rep; ++k)
            segs.push_back(Segment{g.steps, g.shape == IdGroup::Bracket});
    }
    return segs;
}

} // namespace famdetail

inline ResolvedIdentifier resolve_identifier(const RelativeIdentifier& id, Tree tree) {
    using famdetail::Segment;
    ResolvedIdentifier out;
    auto unresolved = [&](const std::string& why) {
        out.status = ResolvedIdentifier::Unrecognized;
        out.note = why;
        return out;
    };
    auto unconstructible = [&](const std::string& label, const std::string& why) {
        out.status = ResolvedIdentifier::Unconstructible;
        out.label = label;
        out.note = why;
        return out;
    };
    auto constructible = [&](GroupDescriptor d) {
        d.validate();
        out.status = ResolvedIdentifier::Constructible;
        out.descriptor = d;
        out.label = d.str();
        return out;
    };

    std::vector<Segment> segs = famdetail::expand(id);

    // BaBu coordinates N(-#2;1-#1;1)^(m-2)-#2;2
    if (id.base == "N") {
        int pairs = 0;
        size_t k = 0;
        while (k < segs.size() && !segs[k].bracket &&
               segs[k].steps == std::vector<IdStep>{{2, 1}, {1, 1}}) {
            ++pairs;
            ++k;
        }
        if (k + 1 == segs.size() && !segs[k].bracket &&
            segs[k].steps == std::vector<IdStep>{{2, 2}})
            return unconstructible("BaBu(m=" + std::to_string(pairs + 2) + ")",
                                   "sporadic-tree group: no presentation in scope");
        return unresolved("unknown shape from base N");
    }

    if (id.base != "F" && id.base != "R" && id.base != "Q" && id.base != "U")
        return unresolved("unknown base symbol " + id.base);
    if ((id.base == "Q" && tree != Tree::Q) || (id.base == "U" && tree != Tree::U))
        return unresolved("base names the other tree");

    // flatten to steps, remembering which belong to bracket groups
    struct Flat {
        IdStep st;
        bool bracket;
        size_t seg;
    };
    std::vector<Flat> flat;
    for (size_t k = 0; k < segs.size(); ++k)
        for (const auto& st : segs[k].steps) flat.push_back({st, segs[k].bracket, k});

    size_t pos = 0;
    // base R sits one step above the fork
    if (id.base == "R") {
        if (flat.empty()) return constructible({GroupDescriptor::Mainline, tree, 3, 2});
        if (flat[0].bracket || !(flat[0].st == IdStep{1, 1}))
            return unresolved("descent from the root must start with -#1;1");
        pos = 1;
    }

    // plain prefix: u trunk pairs (2;1)(1;1), then plain (1;1) steps
    int u = 0, ones = 0;
    bool pending_two = false, trunk_phase = true;
    while (pos < flat.size() && !flat[pos].bracket) {
        const IdStep& st = flat[pos].st;
        if (st.j != 1) return unresolved("plain step with counter > 1");
        if (st.s == 2) {
            if (!trunk_phase || pending_two)
                return unresolved("step-2 edges must alternate along the trunk");
            pending_two = true;
        } else if (pending_two) {
            ++u;
            pending_two = false;
        } else {
            trunk_phase = false;
            ++ones;
        }
        ++pos;
    }
    int cls = 4 + 2 * u + ones + (pending_two ? 1 : 0);
    int coclass = 2 + u + (pending_two ? 1 : 0);

    if (pos == flat.size())
        return constructible({GroupDescriptor::Mainline, tree, cls, coclass});

    const Flat& first = flat[pos];
    if (!first.bracket) return unresolved("plain step with counter > 1");
    if (pending_two) return unresolved("dangling step-2 edge before a bracket");
    const Segment& bseg = segs[first.seg];
    size_t after = pos + bseg.steps.size();

    // [-#1;i]: mainline child, metabelianization M_n^i, or Schur+1 witness T_{n,u}^i
    if (bseg.steps.size() == 1 && bseg.steps[0].s == 1) {
        int i = bseg.steps[0].j;
        if (after != flat.size()) return unresolved("trailing steps after bracket");
        if (i == 1) return constructible({GroupDescriptor::Mainline, tree, cls + 1, coclass});
        if (i < 2 || i > 4) return unresolved("bracket counter out of range for simple types");
        if (ones % 2 != 0) return unresolved("odd coclass-2 prefix before a leaf bracket");
        int n = u + ones / 2;
        if (u == 0) {
            GroupDescriptor d{GroupDescriptor::MetabelianFamily, tree, 2 * n + 5, 2};
            d.variant = i == 2 ? Variant::E6_E8 : i == 3 ? Variant::E14a_E9a : Variant::E14b_E9b;
            return constructible(d);
        }
        return unconstructible("T(n=" + std::to_string(n) + ",u=" + std::to_string(u) +
                                   ",i=" + std::to_string(i) + ")",
                               "fork-topology witness: no presentation in scope");
    }
    // [-#1;i-#1;1]: complex metabelianization M_n^i (i=5,6), its children R_{n,j},
    // or the complex fork-topology witnesses T_{n,u}^i.  These sit at depth 2,
    // below the reach of the parametrized presentations.
    if (bseg.steps.size() == 2 && bseg.steps[0].s == 1 && bseg.steps[1] == IdStep{1, 1}) {
        int i = bseg.steps[0].j;
        if (i != 5 && i != 6) return unresolved("complex metabelianization needs i in {5,6}");
        if (ones % 2 != 0) return unresolved("odd coclass-2 prefix before a leaf bracket");
        int n = u + ones / 2;
        if (after == flat.size()) {
            if (u > 0)
                return unconstructible("T(n=" + std::to_string(n) + ",u=" + std::to_string(u) +
                                           ",i=" + std::to_string(i) + ")",
                                       "fork-topology witness: no presentation in scope");
            return unconstructible(
                "M(n=" + std::to_string(n) + ",i=" + std::to_string(i) + ") complex",
                "depth-2 metabelianization: the parametrized presentations stop at depth 1");
        }
        if (u == 0 && after + 1 == flat.size() && !flat[after].bracket &&
            flat[after].st.s == 1)
            return unconstructible(
                "R(n=" + std::to_string(n) + ",j=" + std::to_string(flat[after].st.j) +
                    ",i=" + std::to_string(i) + ")",
                "immediate descendant of a complex metabelianization: no presentation given");
        return unresolved("trailing steps after a terminal bracket");
    }
    // [-#2;i]: Schur covers S_n^i and the step-2 mainline child
    if (bseg.steps.size() == 1 && bseg.steps[0].s == 2) {
        int i = bseg.steps[0].j;
        if (ones) return unresolved("step-2 bracket requires an alternating trunk prefix");
        int n = u;
        if (after == flat.size()) {
            if (i == 1)
                return constructible({GroupDescriptor::Mainline, tree, cls + 2, coclass + 1});
            if (i == 2 || i == 3 || (i == 4 && tree == Tree::U)) {
                GroupDescriptor d{GroupDescriptor::CoverQuotient, tree, 2 * n + 5, 2};
                d.ell = i == 2 ? 0 : i == 3 ? -1 : 1;
                return constructible(d);
            }
            if (i == 4 && tree == Tree::Q)
                return unconstructible("S(n=" + std::to_string(n) + ",i=4) on Q",
                                       "no cover-limit parameter corresponds to i=4 here");
            if (i == 5 || i == 6)
                return unresolved("complex covers need the longer bracket -#2;i-#1;1");
        }
        return unresolved("trailing steps after a step-2 bracket");
    }
    // [-#2;i-#1;1] ... : complex covers S_{n,t}^i
    if (bseg.steps.size() == 2 && bseg.steps[0].s == 2 && bseg.steps[1] == IdStep{1, 1}) {
        int i = bseg.steps[0].j;
        if (ones) return unresolved("step-2 bracket requires an alternating trunk prefix");
        int n = u;
        if (i == 5 || i == 6) {
            int t = 0;
            size_t seg_k = first.seg + 1;
            while (seg_k < segs.size() && segs[seg_k].bracket &&
                   segs[seg_k].steps == std::vector<IdStep>{{2, 1}, {1, 1}}) {
                ++t;
                ++seg_k;
            }
            if (seg_k + 1 == segs.size() && segs[seg_k].bracket &&
                segs[seg_k].steps == std::vector<IdStep>{{2, 2}})
                return unconstructible(
                    "S(n=" + std::to_string(n) + ",t=" + std::to_string(t) +
                        ",i=" + std::to_string(i) + ")",
                    "complex-type tower group: no presentation in scope");
            return unresolved("malformed complex cover shape");
        }
        return unresolved("two-step bracket with unexpected counter");
    }
    return unresolved("unrecognized bracket shape");
}

inline ResolvedIdentifier resolve_identifier(const std::string& text, Tree tree) {
    return resolve_identifier(parse_identifier(text), tree);
}

} // namespace towers3

#endif
