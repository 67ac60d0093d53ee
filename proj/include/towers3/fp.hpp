#ifndef TOWERS3_FP_HPP
#define TOWERS3_FP_HPP

#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "towers3/pc.hpp"

namespace towers3 {

// Relator words of a finitely presented group, kept as expression trees so
// that nested commutators and conjugates evaluate without expansion; the
// chain s_j = [s_{j-1}, x] shares subtrees and evaluates once per node.
struct FpExpr;
using FpExprPtr = std::shared_ptr<const FpExpr>;

struct FpExpr {
    enum Kind { Gen, Prod, Pow, Comm, Conj } kind;
    int gen = -1;                  // Gen
    std::vector<FpExprPtr> parts;  // Prod
    FpExprPtr a, b;                // Pow(a,e), Comm(a,b) = [a,b], Conj(a,b) = a^b
    long exp = 1;                  // Pow

    static FpExprPtr generator(int i) {
        auto e = std::make_shared<FpExpr>();
        e->kind = Gen;
        e->gen = i;
        return e;
    }
    static FpExprPtr prod(std::vector<FpExprPtr> ps) {
        if (ps.size() == 1) return ps[0];
        auto e = std::make_shared<FpExpr>();
        e->kind = Prod;
        e->parts = std::move(ps);
        return e;
    }
    static FpExprPtr pow(FpExprPtr base, long k) {
        if (k == 1) return base;
        auto e = std::make_shared<FpExpr>();
        e->kind = Pow;
        e->a = std::move(base);
        e->exp = k;
        return e;
    }
    static FpExprPtr comm(FpExprPtr x, FpExprPtr y) {
        auto e = std::make_shared<FpExpr>();
        e->kind = Comm;
        e->a = std::move(x);
        e->b = std::move(y);
        return e;
    }
    static FpExprPtr conj(FpExprPtr x, FpExprPtr y) {
        auto e = std::make_shared<FpExpr>();
        e->kind = Conj;
        e->a = std::move(x);
        e->b = std::move(y);
        return e;
    }
};

struct FpPresentation {
    int ngens = 0;
    std::vector<FpExprPtr> relators;
};

// Evaluate an expression at generator images inside a pc group, memoizing
// shared subtrees.
class FpEvaluator {
  public:
    FpEvaluator(const PcPresentation& g, std::vector<Vec> images)
        : g_(g), images_(std::move(images)) {}

    Vec eval(const FpExprPtr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Vec v;
        switch (e->kind) {
            case FpExpr::Gen:
                if (e->gen < 0 || e->gen >= (int)images_.size())
                    throw std::out_of_range("relator references unknown generator");
                v = images_[e->gen];
                break;
            case FpExpr::Prod: {
                v = g_.id();
                for (const auto& p : e->parts) v = g_.mul(v, eval(p));
                break;
            }
            case FpExpr::Pow:
                v = g_.power(eval(e->a), e->exp);
                break;
            case FpExpr::Comm:
                v = g_.commutator(eval(e->a), eval(e->b));
                break;
            case FpExpr::Conj:
                v = g_.conj(eval(e->a), eval(e->b));
                break;
        }
        memo_.emplace(e.get(), v);
        return v;
    }

    // Exponent-sum vector modulo p (commutators vanish, conjugation is
    // invisible); used for the class-1 quotient.
    static std::vector<int> abelian_eval(const FpExprPtr& e, int ngens, int p) {
        std::vector<int> v(ngens, 0);
        ab(e, 1, v, p);
        for (auto& x : v) x = ((x % p) + p) % p;
        return v;
    }

  private:
    static void ab(const FpExprPtr& e, long mult, std::vector<int>& v, int p) {
        switch (e->kind) {
            case FpExpr::Gen:
                v[e->gen] = (int)(((v[e->gen] + mult) % p + p) % p);
                break;
            case FpExpr::Prod:
                for (const auto& q : e->parts) ab(q, mult, v, p);
                break;
            case FpExpr::Pow:
                ab(e->a, (mult * (e->exp % p)) % p, v, p);
                break;
            case FpExpr::Comm:
                break;
            case FpExpr::Conj:
                ab(e->a, mult, v, p);
                break;
        }
    }

    const PcPresentation& g_;
    std::vector<Vec> images_;
    std::map<const FpExpr*, Vec> memo_;
};

// ---------------------------------------------------------------------------
// Text format
//
//   fp n=<ngens>
//   <relator word>
//   ...
//
// Words use generators g1..gn, products '*', powers '^k' (k may be
// negative), conjugation w^v, commutators [u,v] and parenthesized groups.
// The normalized (printed) form is the freely reduced plain word.
// ---------------------------------------------------------------------------

namespace fpdetail {

struct Tok {
    const std::string& s;
    size_t i = 0;
    explicit Tok(const std::string& str) : s(str) {}
    void ws() {
        while (i < s.size() && isspace((unsigned char)s[i])) ++i;
    }
    bool eof() {
        ws();
        return i >= s.size();
    }
    char peek() {
        ws();
        return i < s.size() ? s[i] : '\0';
    }
    void expect(char c, const std::string& ctx) {
        ws();
        if (i >= s.size() || s[i] != c)
            throw std::invalid_argument("col " + std::to_string(i + 1) + ": expected '" + c +
                                        "' in " + ctx);
        ++i;
    }
    long integer() {
        ws();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i++] == '-');
        if (i >= s.size() || !isdigit((unsigned char)s[i]))
            throw std::invalid_argument("col " + std::to_string(i + 1) + ": expected integer");
        long v = 0;
        while (i < s.size() && isdigit((unsigned char)s[i])) v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }
};

FpExprPtr parse_word(Tok& t, int ngens);

inline FpExprPtr parse_atom(Tok& t, int ngens) {
    t.ws();
    char c = t.peek();
    FpExprPtr base;
    if (c == '(') {
        t.expect('(', "group");
        base = parse_word(t, ngens);
        t.expect(')', "group");
    } else if (c == '[') {
        t.expect('[', "commutator");
        FpExprPtr u = parse_word(t, ngens);
        t.expect(',', "commutator");
        FpExprPtr v = parse_word(t, ngens);
        while (t.peek() == ',') {  // left-normed [u,v,w,...]
            t.expect(',', "commutator");
            u = FpExpr::comm(u, v);
            v = parse_word(t, ngens);
        }
        t.expect(']', "commutator");
        base = FpExpr::comm(u, v);
    } else if (c == 'g') {
        ++t.i;
        long idx = t.integer();
        if (idx < 1 || idx > ngens)
            throw std::invalid_argument("generator g" + std::to_string(idx) + " out of range");
        base = FpExpr::generator((int)idx - 1);
    } else {
        if (c == '1') {
            ++t.i;
            return FpExpr::prod({});
        }
        throw std::invalid_argument("col " + std::to_string(t.i + 1) + ": expected atom");
    }
    // postfix ^: integer power or conjugation by a parenthesized word/atom
    while (t.peek() == '^') {
        t.expect('^', "power");
        t.ws();
        char n = t.peek();
        if (n == '-' || isdigit((unsigned char)n)) {
            base = FpExpr::pow(base, t.integer());
        } else {
            FpExprPtr by = parse_atom(t, ngens);
            base = FpExpr::conj(base, by);
        }
    }
    return base;
}

inline FpExprPtr parse_word(Tok& t, int ngens) {
    std::vector<FpExprPtr> parts;
    parts.push_back(parse_atom(t, ngens));
    while (t.peek() == '*') {
        t.expect('*', "product");
        parts.push_back(parse_atom(t, ngens));
    }
    return FpExpr::prod(std::move(parts));
}

// flatten to letters with free reduction
inline void flatten(const FpExprPtr& e, long mult, FreeWord& out) {
    switch (e->kind) {
        case FpExpr::Gen:
            out.push_back({e->gen, mult});
            break;
        case FpExpr::Prod:
            if (mult >= 0) {
                for (long k = 0; k < mult; ++k)
                    for (const auto& p : e->parts) flatten(p, 1, out);
            } else {
                for (long k = 0; k < -mult; ++k)
                    for (auto it = e->parts.rbegin(); it != e->parts.rend(); ++it)
                        flatten(*it, -1, out);
            }
            break;
        case FpExpr::Pow:
            flatten(e->a, mult * e->exp, out);
            break;
        case FpExpr::Comm:
            for (long k = 0; k < std::labs(mult); ++k) {
                if (mult > 0) {
                    flatten(e->a, -1, out);
                    flatten(e->b, -1, out);
                    flatten(e->a, 1, out);
                    flatten(e->b, 1, out);
                } else {
                    flatten(e->b, -1, out);
                    flatten(e->a, -1, out);
                    flatten(e->b, 1, out);
                    flatten(e->a, 1, out);
                }
            }
            break;
        case FpExpr::Conj:
            for (long k = 0; k < std::labs(mult); ++k) {
                flatten(e->b, -1, out);
                flatten(e->a, mult > 0 ? 1 : -1, out);
                flatten(e->b, 1, out);
            }
            break;
    }
}

inline FreeWord reduce(FreeWord w) {
    FreeWord out;
    for (const Letter& l : w) {
        if (l.exp == 0) continue;
        if (!out.empty() && out.back().gen == l.gen) {
            out.back().exp += l.exp;
            if (out.back().exp == 0) out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    return out;
}

} // namespace fpdetail

inline FpExprPtr parse_fp_word(const std::string& s, int ngens) {
    fpdetail::Tok t(s);
    FpExprPtr e = fpdetail::parse_word(t, ngens);
    if (!t.eof())
        throw std::invalid_argument("col " + std::to_string(t.i + 1) + ": trailing text");
    return e;
}

inline FreeWord fp_flatten(const FpExprPtr& e) {
    FreeWord w;
    fpdetail::flatten(e, 1, w);
    return fpdetail::reduce(std::move(w));
}

inline std::string fp_word_str(const FpExprPtr& e) {
    FreeWord w = fp_flatten(e);
    if (w.empty()) return "1";
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += "*";
        s += "g" + std::to_string(w[i].gen + 1);
        if (w[i].exp != 1) s += "^" + std::to_string(w[i].exp);
    }
    return s;
}

inline std::string fp_format(const FpPresentation& f) {
    std::ostringstream os;
    os << "fp n=" << f.ngens << "\n";
    for (const auto& r : f.relators) os << fp_word_str(r) << "\n";
    return os.str();
}

inline FpPresentation fp_parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty fp text");
    FpPresentation f;
    {
        std::istringstream hs(line);
        std::string tag;
        hs >> tag;
        if (tag != "fp") throw std::invalid_argument("line 1: expected 'fp' header");
        std::string kv;
        while (hs >> kv) {
            if (kv.rfind("n=", 0) == 0)
                f.ngens = std::stoi(kv.substr(2));
            else
                throw std::invalid_argument("line 1: unknown header field " + kv);
        }
        if (f.ngens < 0) throw std::invalid_argument("line 1: bad generator count");
    }
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        std::string stripped;
        for (char c : line)
            if (!isspace((unsigned char)c)) stripped += c;
        if (stripped.empty() || stripped[0] == '#') continue;
        try {
            f.relators.push_back(parse_fp_word(line, f.ngens));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return f;
}

} // namespace towers3

#endif
