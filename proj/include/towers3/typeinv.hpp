#ifndef TOWERS3_TYPEINV_HPP
#define TOWERS3_TYPEINV_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace towers3 {

// Logarithmic abelian type invariants: a weakly decreasing list of positive
// integers, the base-p logarithms of the cyclic factor orders.  The empty
// list is the trivial group and renders as "0".
struct TypeInvariants {
    std::vector<int> parts;

    TypeInvariants() = default;
    explicit TypeInvariants(std::vector<int> p) : parts(std::move(p)) { normalize(); }
    TypeInvariants(std::initializer_list<int> p) : parts(p) { normalize(); }

    void normalize() {
        for (int x : parts)
            if (x < 1) throw std::invalid_argument("type invariant parts must be >= 1");
        std::sort(parts.begin(), parts.end(), std::greater<int>());
    }

    int  rank() const { return (int)parts.size(); }
    long sum() const {
        long s = 0;
        for (int x : parts) s += x;
        return s;
    }
    bool empty() const { return parts.empty(); }

    bool operator==(const TypeInvariants& o) const { return parts == o.parts; }
    bool operator!=(const TypeInvariants& o) const { return !(*this == o); }

    // Lexicographic on the part lists; a proper prefix is smaller.
    bool lex_less(const TypeInvariants& o) const {
        return std::lexicographical_compare(parts.begin(), parts.end(),
                                            o.parts.begin(), o.parts.end());
    }
    bool operator<(const TypeInvariants& o) const { return lex_less(o); }

    std::string str() const {
        if (parts.empty()) return "0";
        bool digits = true;
        for (int x : parts)
            if (x > 9) digits = false;
        std::string s;
        if (digits) {
            for (int x : parts) s += char('0' + x);
        } else {
            s = "(";
            for (size_t i = 0; i < parts.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(parts[i]);
            }
            s += ")";
        }
        return s;
    }
};

// Display order of pattern components: weakly decreasing by (sum, rank, lex).
// This puts the heterocyclic polarization first, then longer stabilization
// components, matching the customary listing [32,111,21,21].
inline bool display_before(const TypeInvariants& a, const TypeInvariants& b) {
    if (a.sum() != b.sum()) return a.sum() > b.sum();
    if (a.rank() != b.rank()) return a.rank() > b.rank();
    return b.lex_less(a);
}

// ---------------------------------------------------------------------------
// Text grammar for invariants, quadruples, and second-order brackets.
//
//   inv      := "0" | digit+ | "(" int ("," int)* ")"
//   quad     := "[" inv "," inv "," inv "," inv "]"
//   bracket  := "[" inv ";" item ("," item)* "]"
//   item     := inv | "(" inv-body ")" "^" count
//   full     := "(" bracket ("^" count)? ("," bracket ("^" count)?)* ")"
//
// Writers emit the compressed forms "(21)^3" / "[..]^2"; the parser accepts
// both compressed and fully expanded text.
// ---------------------------------------------------------------------------

namespace detail {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    explicit Cursor(const std::string& str) : s(str) {}
    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        if (i >= s.size()) throw std::invalid_argument("unexpected end of invariant text");
        return s[i];
    }
    char get() {
        char c = peek();
        ++i;
        return c;
    }
    void expect(char c) {
        char g = get();
        if (g != c)
            throw std::invalid_argument(std::string("expected '") + c + "' got '" + g +
                                        "' at offset " + std::to_string(i - 1));
    }
    bool try_consume(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    long integer() {
        skip_ws();
        bool neg = try_consume('-');
        if (i >= s.size() || !isdigit((unsigned char)s[i]))
            throw std::invalid_argument("expected integer at offset " + std::to_string(i));
        long v = 0;
        while (i < s.size() && isdigit((unsigned char)s[i])) v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }
};

// inv without surrounding parentheses: digit string or comma list
inline TypeInvariants parse_inv_body(const std::string& body) {
    Cursor c(body);
    std::vector<int> parts;
    if (body.find(',') != std::string::npos) {
        parts.push_back((int)c.integer());
        while (c.try_consume(',')) parts.push_back((int)c.integer());
    } else {
        while (!c.eof()) {
            char ch = c.get();
            if (!isdigit((unsigned char)ch))
                throw std::invalid_argument("bad invariant digit");
            if (ch == '0') {
                if (!parts.empty() || !c.eof())
                    throw std::invalid_argument("'0' must stand alone");
                return TypeInvariants{};
            }
            parts.push_back(ch - '0');
        }
    }
    return TypeInvariants(parts);
}

inline TypeInvariants parse_inv(Cursor& c) {
    if (c.peek() == '(') {
        c.expect('(');
        std::string body;
        while (c.peek() != ')') body += c.get();
        c.expect(')');
        return parse_inv_body(body);
    }
    std::string body;
    c.skip_ws();
    while (c.i < c.s.size() && isdigit((unsigned char)c.s[c.i])) body += c.s[c.i++];
    if (body.empty()) throw std::invalid_argument("expected invariant at offset " + std::to_string(c.i));
    return parse_inv_body(body);
}

} // namespace detail

inline TypeInvariants parse_invariants(const std::string& s) {
    detail::Cursor c(s);
    TypeInvariants t = detail::parse_inv(c);
    if (!c.eof()) throw std::invalid_argument("trailing text after invariant: " + s);
    return t;
}

// Quadruple [a,b,c,d]
inline std::string quad_str(const std::vector<TypeInvariants>& q) {
    std::string s = "[";
    for (size_t i = 0; i < q.size(); ++i) {
        if (i) s += ",";
        s += q[i].str();
    }
    return s + "]";
}

inline std::vector<TypeInvariants> parse_quad(const std::string& s) {
    detail::Cursor c(s);
    c.expect('[');
    std::vector<TypeInvariants> q;
    q.push_back(detail::parse_inv(c));
    while (c.try_consume(',')) q.push_back(detail::parse_inv(c));
    c.expect(']');
    if (!c.eof()) throw std::invalid_argument("trailing text after quadruple");
    return q;
}

// Five-component IPAD [first; a,b,c,d]: the base invariants then the four
// extension components.
inline std::vector<TypeInvariants> parse_ipad(const std::string& s) {
    detail::Cursor c(s);
    c.expect('[');
    std::vector<TypeInvariants> out;
    out.push_back(detail::parse_inv(c));
    c.expect(';');
    out.push_back(detail::parse_inv(c));
    while (c.try_consume(',')) out.push_back(detail::parse_inv(c));
    c.expect(']');
    if (!c.eof()) throw std::invalid_argument("trailing text after IPAD");
    if (out.size() != 5) throw std::invalid_argument("an IPAD has five components");
    return out;
}

inline std::string ipad_str(const std::vector<TypeInvariants>& ipad) {
    std::string s = "[" + ipad[0].str() + ";";
    for (size_t i = 1; i < ipad.size(); ++i) {
        if (i > 1) s += ",";
        s += ipad[i].str();
    }
    return s + "]";
}

// One second-order component [head; e1,e2,...].  The tail is a multiset.
struct Ati2Bracket {
    TypeInvariants head;
    std::vector<TypeInvariants> tail;

    bool operator==(const Ati2Bracket& o) const {
        if (head != o.head) return false;
        auto a = tail, b = o.tail;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    }
    bool operator!=(const Ati2Bracket& o) const { return !(*this == o); }
};

// Serialize one bracket; `first` (when present in the tail) is listed first,
// the remaining entries follow in weakly decreasing lexicographic order with
// run-length compression.
inline std::string bracket_str(const Ati2Bracket& b, const TypeInvariants* first = nullptr) {
    std::vector<TypeInvariants> rest = b.tail;
    std::string s = "[" + b.head.str() + ";";
    bool lead = false;
    if (first) {
        auto it = std::find(rest.begin(), rest.end(), *first);
        if (it != rest.end()) {
            rest.erase(it);
            s += first->str();
            lead = true;
        }
    }
    std::sort(rest.begin(), rest.end(), [](const TypeInvariants& x, const TypeInvariants& y) {
        return y.lex_less(x);
    });
    size_t i = 0;
    while (i < rest.size()) {
        size_t j = i;
        while (j < rest.size() && rest[j] == rest[i]) ++j;
        if (lead || i) s += ",";
        size_t n = j - i;
        if (n == 1)
            s += rest[i].str();
        else {
            std::string inner = rest[i].str();
            if (!inner.empty() && inner[0] == '(')
                s += "(" + inner + ")^" + std::to_string(n);
            else
                s += "(" + inner + ")^" + std::to_string(n);
        }
        lead = true;
        i = j;
    }
    return s + "]";
}

namespace detail {

inline Ati2Bracket parse_bracket(Cursor& c) {
    Ati2Bracket b;
    c.expect('[');
    b.head = parse_inv(c);
    c.expect(';');
    auto item = [&]() {
        if (c.peek() == '(') {
            c.expect('(');
            std::string body;
            int depth = 0;
            while (depth > 0 || c.peek() != ')') {
                char ch = c.get();
                if (ch == '(') ++depth;
                if (ch == ')') --depth;
                body += ch;
            }
            c.expect(')');
            TypeInvariants inv =
                (!body.empty() && body[0] == '(') ? parse_invariants(body) : parse_inv_body(body);
            long n = 1;
            if (c.try_consume('^')) n = c.integer();
            if (n < 1) throw std::invalid_argument("bad repetition count");
            for (long k = 0; k < n; ++k) b.tail.push_back(inv);
        } else {
            b.tail.push_back(parse_inv(c));
        }
    };
    item();
    while (c.try_consume(',')) item();
    c.expect(']');
    return b;
}

} // namespace detail

inline Ati2Bracket parse_bracket(const std::string& s) {
    detail::Cursor c(s);
    Ati2Bracket b = detail::parse_bracket(c);
    if (!c.eof()) throw std::invalid_argument("trailing text after bracket");
    return b;
}

// Full second-order pattern: a multiset of four brackets.
struct Ati2 {
    std::vector<Ati2Bracket> brackets;

    bool operator==(const Ati2& o) const {
        if (brackets.size() != o.brackets.size()) return false;
        std::vector<bool> used(o.brackets.size(), false);
        for (const auto& b : brackets) {
            bool hit = false;
            for (size_t j = 0; j < o.brackets.size(); ++j) {
                if (!used[j] && b == o.brackets[j]) {
                    used[j] = hit = true;
                    break;
                }
            }
            if (!hit) return false;
        }
        return true;
    }
    bool operator!=(const Ati2& o) const { return !(*this == o); }
};

inline std::string ati2_str(const Ati2& a, const TypeInvariants* alpha0 = nullptr) {
    // deterministic order: display order on heads, tie-broken by serialized text
    std::vector<std::string> txt;
    std::vector<const Ati2Bracket*> ord;
    for (const auto& b : a.brackets) ord.push_back(&b);
    std::stable_sort(ord.begin(), ord.end(), [&](const Ati2Bracket* x, const Ati2Bracket* y) {
        if (x->head != y->head) return display_before(x->head, y->head);
        return bracket_str(*x, alpha0) < bracket_str(*y, alpha0);
    });
    for (auto* b : ord) txt.push_back(bracket_str(*b, alpha0));
    std::string s = "(";
    size_t i = 0;
    bool leading = true;
    while (i < txt.size()) {
        size_t j = i;
        while (j < txt.size() && txt[j] == txt[i]) ++j;
        if (!leading) s += ",";
        s += txt[i];
        if (j - i > 1) s += "^" + std::to_string(j - i);
        leading = false;
        i = j;
    }
    return s + ")";
}

inline Ati2 parse_ati2(const std::string& s) {
    detail::Cursor c(s);
    Ati2 a;
    c.expect('(');
    auto item = [&]() {
        Ati2Bracket b = detail::parse_bracket(c);
        long n = 1;
        if (c.try_consume('^')) n = c.integer();
        for (long k = 0; k < n; ++k) a.brackets.push_back(b);
    };
    item();
    while (c.try_consume(',')) item();
    c.expect(')');
    if (!c.eof()) throw std::invalid_argument("trailing text after second-order pattern");
    return a;
}

} // namespace towers3

#endif
