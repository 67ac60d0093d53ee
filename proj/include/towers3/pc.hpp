#ifndef TOWERS3_PC_HPP
#define TOWERS3_PC_HPP

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace towers3 {

// Exponent vector of a normal word; entry i is the exponent of generator i,
// 0 <= e < p.  Dense byte storage, one byte per generator.
using Vec = std::vector<uint8_t>;

// A letter of a free word: generator index (0-based) and an integer exponent.
struct Letter {
    int gen;
    long exp;
};
using FreeWord = std::vector<Letter>;

struct CollectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A consistent weighted power-commutator presentation of a finite p-group.
// Every right-hand side is a normal word in generators of strictly higher
// index, so the index filtration is a central series and collection from
// the left terminates.
struct PcPresentation {
    struct Def {
        enum Kind : uint8_t { None, Power, Comm } kind = None;
        int a = -1, b = -1;  // Power: g_a^p; Comm: [g_a, g_b] with a > b
    };

    int prime = 3;
    int ngens = 0;
    std::vector<int> weights;              // may be empty when unknown
    std::vector<Vec> power_rhs;            // power_rhs[i] = normal word of g_i^p
    std::vector<std::vector<Vec>> comm_rhs_;  // comm_rhs_[j][i], i<j; empty Vec = trivial
    std::vector<Def> defs;                 // may be empty when unknown

    static PcPresentation make(int prime, int ngens) {
        PcPresentation g;
        g.prime = prime;
        g.ngens = ngens;
        g.power_rhs.assign(ngens, Vec(ngens, 0));
        g.comm_rhs_.assign(ngens, {});
        for (int j = 0; j < ngens; ++j) g.comm_rhs_[j].assign(j, Vec());
        return g;
    }

    int log_order() const { return ngens; }

    const Vec& comm_rhs(int j, int i) const {
        static const Vec empty;
        if (j <= i) throw std::logic_error("comm_rhs needs j > i");
        const Vec& v = comm_rhs_[j][i];
        return v.empty() ? empty : v;
    }
    void set_comm(int j, int i, Vec v) {
        if (j <= i) throw std::logic_error("set_comm needs j > i");
        bool allzero = true;
        for (auto e : v)
            if (e) allzero = false;
        comm_rhs_[j][i] = allzero ? Vec() : std::move(v);
    }
    void set_power(int i, Vec v) { power_rhs[i] = std::move(v); }

    Vec id() const { return Vec(ngens, 0); }
    bool is_id(const Vec& v) const {
        for (auto e : v)
            if (e) return false;
        return true;
    }
    Vec gen(int i) const {
        Vec v(ngens, 0);
        v[i] = 1;
        return v;
    }
    static int leading(const Vec& v) {
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i]) return (int)i;
        return -1;
    }

    // ---- collection ----------------------------------------------------

    // Multiply the collected normal word `acc` on the right by the stacked
    // letters.  Collection from the left: the lowest-index uncollected
    // letter is merged into `acc`, conjugating the tail of `acc` past it.
    void collect_into(Vec& acc, std::vector<std::pair<int, int>>& st) const {
        const int p = prime;
        long steps = 0;
        std::vector<std::pair<int, int>> tmp;
        while (!st.empty()) {
            if (++steps > 200000000L)
                throw CollectionError("collection step limit exceeded (inconsistent input?)");
            auto& top = st.back();
            int j = top.first;
            if (--top.second <= 0) st.pop_back();

            int hi = -1;
            for (int k = ngens - 1; k > j; --k)
                if (acc[k]) {
                    hi = k;
                    break;
                }
            if (hi < 0) {
                if (++acc[j] == p) {
                    acc[j] = 0;
                    push_vec(st, power_rhs[j]);
                }
                continue;
            }
            bool commutes = true;
            for (int k = j + 1; k <= hi; ++k)
                if (acc[k] && !comm_rhs_[k][j].empty()) {
                    commutes = false;
                    break;
                }
            if (commutes && acc[j] + 1 < p) {
                ++acc[j];
                continue;
            }
            // dismantle the tail, conjugated by g_j where needed
            tmp.clear();
            for (int k = j + 1; k <= hi; ++k) {
                int e = acc[k];
                if (!e) continue;
                acc[k] = 0;
                const Vec& w = comm_rhs_[k][j];
                if (w.empty()) {
                    tmp.emplace_back(k, e);
                } else {
                    for (int rep = 0; rep < e; ++rep) {
                        tmp.emplace_back(k, 1);
                        for (int m = 0; m < ngens; ++m)
                            if (w[m]) tmp.emplace_back(m, w[m]);
                    }
                }
            }
            bool overflow = (++acc[j] == p);
            if (overflow) acc[j] = 0;
            for (auto it = tmp.rbegin(); it != tmp.rend(); ++it) st.push_back(*it);
            if (overflow) push_vec(st, power_rhs[j]);
        }
    }

    static void push_vec(std::vector<std::pair<int, int>>& st, const Vec& v) {
        for (int k = (int)v.size() - 1; k >= 0; --k)
            if (v[k]) st.emplace_back(k, v[k]);
    }

    Vec mul(const Vec& a, const Vec& b) const {
        Vec acc = a;
        std::vector<std::pair<int, int>> st;
        push_vec(st, b);
        collect_into(acc, st);
        return acc;
    }

    Vec mul_gen(Vec a, int gen_index, int e) const {
        if (e == 0) return a;
        std::vector<std::pair<int, int>> st;
        st.emplace_back(gen_index, e);
        collect_into(a, st);
        return a;
    }

    // Unique x with a*x = 1, found index by index.
    Vec inverse(const Vec& a) const {
        Vec r = a;
        Vec x(ngens, 0);
        for (int i = 0; i < ngens; ++i) {
            if (!r[i]) continue;
            int t = (prime - r[i]) % prime;
            x[i] = (uint8_t)t;
            r = mul_gen(std::move(r), i, t);
        }
        if (!is_id(r)) throw CollectionError("inverse solve failed");
        return x;
    }

    Vec power(const Vec& a, long e) const {
        if (e < 0) return power(inverse(a), -e);
        Vec acc = id(), base = a;
        while (e) {
            if (e & 1) acc = mul(acc, base);
            e >>= 1;
            if (e) base = mul(base, base);
        }
        return acc;
    }

    Vec conj(const Vec& a, const Vec& b) const {  // a^b
        return mul(mul(inverse(b), a), b);
    }
    Vec commutator(const Vec& a, const Vec& b) const {  // [a,b]
        return mul(mul(inverse(a), inverse(b)), mul(a, b));
    }

    // Collect an arbitrary free word (negative exponents allowed).
    Vec collect(const FreeWord& w) const {
        Vec acc = id();
        for (const Letter& l : w) {
            if (l.gen < 0 || l.gen >= ngens) throw std::out_of_range("bad generator index");
            if (l.exp == 1)
                acc = mul_gen(std::move(acc), l.gen, 1);
            else if (l.exp > 0)
                acc = mul(acc, power(gen(l.gen), l.exp));
            else if (l.exp < 0)
                acc = mul(acc, power(inverse(gen(l.gen)), -l.exp));
        }
        return acc;
    }

    // Element order (a power of p).
    long element_order(const Vec& a) const {
        Vec x = a;
        long o = 1;
        while (!is_id(x)) {
            x = power(x, prime);
            o *= prime;
            if (o > (1L << 40)) throw CollectionError("element order runaway");
        }
        return o;
    }

    // ---- consistency ----------------------------------------------------

    struct Violation {
        std::string what;
    };

    // Full overlap test: associativity triples, the two mixed power
    // overlaps, and the power-by-itself overlap.  Empty result iff the
    // presentation is consistent.
    std::vector<Violation> consistency_check() const {
        std::vector<Violation> out;
        check_overlaps(&out, nullptr, 0, true);
        return out;
    }

    // Weighted variant used inside the quotient machinery: only overlaps
    // whose weight sum can reach the new class are evaluated; discrepancies
    // are appended to `rows` as exponent differences.
    void weighted_overlaps(std::vector<std::pair<Vec, Vec>>& pairs, int bound) const {
        std::vector<std::pair<Vec, Vec>> tmp;
        check_overlaps(nullptr, &tmp, bound, false);
        pairs = std::move(tmp);
    }

  private:
    void check_overlaps(std::vector<Violation>* out,
                        std::vector<std::pair<Vec, Vec>>* pairs, int weight_bound,
                        bool full) const {
        const int p = prime;
        auto report = [&](const Vec& lhs, const Vec& rhs, const std::string& name) {
            if (lhs == rhs) return;
            if (out) out->push_back({name});
            if (pairs) pairs->emplace_back(lhs, rhs);
        };
        auto w = [&](int i) { return weights.empty() ? 1 : weights[i]; };

        for (int k = 0; k < ngens; ++k)
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < j; ++i) {
                    if (!full && w(i) + w(j) + w(k) > weight_bound) continue;
                    Vec lhs = mul(gen(k), mul(gen(j), gen(i)));
                    Vec rhs = mul(mul(gen(k), gen(j)), gen(i));
                    report(lhs, rhs, "assoc(g" + std::to_string(k + 1) + ",g" +
                                         std::to_string(j + 1) + ",g" + std::to_string(i + 1) +
                                         ")");
                }
        for (int j = 0; j < ngens; ++j)
            for (int i = 0; i < j; ++i) {
                if (!full && w(i) + w(j) + 1 > weight_bound) continue;
                // g_j^p g_i  vs  g_j^{p-1}(g_j g_i)
                Vec lhs = mul(power_rhs[j], gen(i));
                Vec rhs = mul(power(gen(j), p - 1), mul(gen(j), gen(i)));
                report(lhs, rhs, "power-left(g" + std::to_string(j + 1) + ",g" +
                                     std::to_string(i + 1) + ")");
                // g_j g_i^p  vs  (g_j g_i) g_i^{p-1}
                lhs = mul(gen(j), power_rhs[i]);
                rhs = mul(mul(gen(j), gen(i)), power(gen(i), p - 1));
                report(lhs, rhs, "power-right(g" + std::to_string(j + 1) + ",g" +
                                     std::to_string(i + 1) + ")");
            }
        for (int i = 0; i < ngens; ++i) {
            if (!full && 2 * w(i) + 1 > weight_bound) continue;
            Vec lhs = mul(gen(i), power_rhs[i]);
            Vec rhs = mul(power_rhs[i], gen(i));
            report(lhs, rhs, "power-self(g" + std::to_string(i + 1) + ")");
        }
    }
};

// ---------------------------------------------------------------------------
// Presentation text format.
//
//   pc p=<prime> n=<ngens>
//   g<i>^p = <word>
//   [g<j>,g<i>] = <word>
//
// Words are '*'-separated generator powers like g3^2*g5; the identity is 1.
// Omitted lines mean trivial right-hand sides.  Writing then parsing then
// writing again is byte-identical.
// ---------------------------------------------------------------------------

inline std::string word_str(const Vec& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        if (!s.empty()) s += "*";
        s += "g" + std::to_string(i + 1);
        if (v[i] > 1) s += "^" + std::to_string((int)v[i]);
    }
    return s.empty() ? "1" : s;
}

inline std::string pc_format(const PcPresentation& g) {
    std::ostringstream os;
    os << "pc p=" << g.prime << " n=" << g.ngens << "\n";
    for (int i = 0; i < g.ngens; ++i)
        if (!g.is_id(g.power_rhs[i]))
            os << "g" << (i + 1) << "^" << g.prime << " = " << word_str(g.power_rhs[i]) << "\n";
    for (int j = 0; j < g.ngens; ++j)
        for (int i = 0; i < j; ++i)
            if (!g.comm_rhs(j, i).empty() && !g.is_id(g.comm_rhs(j, i)))
                os << "[g" << (j + 1) << ",g" << (i + 1) << "] = " << word_str(g.comm_rhs(j, i))
                   << "\n";
    return os.str();
}

namespace detail {

inline Vec parse_pc_word(const std::string& text, int ngens, int prime, int lineno) {
    Vec v(ngens, 0);
    std::string s;
    for (char c : text)
        if (!isspace((unsigned char)c)) s += c;
    if (s == "1" || s.empty()) return v;
    size_t i = 0;
    auto fail = [&](const std::string& m) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + m);
    };
    while (i < s.size()) {
        if (s[i] != 'g') fail("expected generator");
        ++i;
        int idx = 0;
        if (i >= s.size() || !isdigit((unsigned char)s[i])) fail("expected generator number");
        while (i < s.size() && isdigit((unsigned char)s[i])) idx = idx * 10 + (s[i++] - '0');
        if (idx < 1 || idx > ngens) fail("generator index out of range");
        long e = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            bool neg = false;
            if (i < s.size() && s[i] == '-') {
                neg = true;
                ++i;
            }
            if (i >= s.size() || !isdigit((unsigned char)s[i])) fail("expected exponent");
            e = 0;
            while (i < s.size() && isdigit((unsigned char)s[i])) e = e * 10 + (s[i++] - '0');
            if (neg) e = -e;
        }
        long r = ((e % prime) + prime) % prime;
        v[idx - 1] = (uint8_t)((v[idx - 1] + r) % prime);
        if (i < s.size()) {
            if (s[i] != '*') fail("expected '*'");
            ++i;
        }
    }
    return v;
}

} // namespace detail

inline PcPresentation pc_parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) throw std::invalid_argument("empty presentation text");
    ++lineno;
    int prime = 0, n = -1;
    {
        std::istringstream hs(line);
        std::string tag;
        hs >> tag;
        if (tag != "pc") throw std::invalid_argument("line 1: expected 'pc' header");
        std::string kv;
        while (hs >> kv) {
            if (kv.rfind("p=", 0) == 0)
                prime = std::stoi(kv.substr(2));
            else if (kv.rfind("n=", 0) == 0)
                n = std::stoi(kv.substr(2));
            else
                throw std::invalid_argument("line 1: unknown header field " + kv);
        }
        if (prime < 2 || n < 0) throw std::invalid_argument("line 1: bad header");
    }
    PcPresentation g = PcPresentation::make(prime, n);
    while (std::getline(is, line)) {
        ++lineno;
        std::string s;
        for (char c : line)
            if (!isspace((unsigned char)c)) s += c;
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": missing '='");
        std::string lhs = s.substr(0, eq), rhs = s.substr(eq + 1);
        Vec w = detail::parse_pc_word(rhs, n, prime, lineno);
        if (lhs.size() >= 2 && lhs[0] == '[') {
            auto comma = lhs.find(',');
            auto close = lhs.find(']');
            if (comma == std::string::npos || close == std::string::npos || lhs[1] != 'g')
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": bad commutator lhs");
            int j = std::stoi(lhs.substr(2, comma - 2));
            if (lhs[comma + 1] != 'g')
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": bad commutator lhs");
            int i = std::stoi(lhs.substr(comma + 2, close - comma - 2));
            if (j < 1 || j > n || i < 1 || i >= j)
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": commutator indices need j > i");
            g.set_comm(j - 1, i - 1, std::move(w));
        } else if (lhs.size() >= 2 && lhs[0] == 'g') {
            auto caret = lhs.find('^');
            if (caret == std::string::npos)
                throw std::invalid_argument("line " + std::to_string(lineno) + ": bad power lhs");
            int i = std::stoi(lhs.substr(1, caret - 1));
            int e = std::stoi(lhs.substr(caret + 1));
            if (i < 1 || i > n || e != prime)
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": power must be g<i>^" + std::to_string(prime));
            g.set_power(i - 1, std::move(w));
        } else {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": unrecognized line");
        }
    }
    return g;
}

} // namespace towers3

#endif
