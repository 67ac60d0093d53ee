#ifndef TOWERS3_INGEST_HPP
#define TOWERS3_INGEST_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "towers3/classify.hpp"

namespace towers3 {

// One line of ingested field data: discriminant, IPAD, optional kernel type
// and claimed tower length; the sign of the discriminant is the signature.
struct FieldRecord {
    long long disc = 0;
    std::vector<TypeInvariants> ipad;  // five components
    std::optional<Tkt> tkt;
    std::optional<Length> length_claim;
    std::optional<Ati2> ati2;

    QuadraticSignature signature() const {
        return disc < 0 ? QuadraticSignature::Imaginary : QuadraticSignature::Real;
    }
    std::string line() const {
        std::string s = "disc=" + std::to_string(disc) + " ipad=" + ipad_str(ipad);
        if (tkt) {
            s += " tkt=";
            for (int e : tkt->entries) s += char('0' + e);
        }
        if (length_claim) s += std::string(" len=") + length_token(*length_claim);
        return s;
    }
};

struct RecordParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Line grammar (one record per line, '#' comments):
//   disc=<int> ipad=[<inv>;<inv>,<inv>,<inv>,<inv>] [tkt=<4 digits>] [len=<token>]
inline std::vector<FieldRecord> parse_records(std::istream& in) {
    std::vector<FieldRecord> out;
    std::set<long long> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        FieldRecord rec;
        bool have_disc = false, have_ipad = false;
        auto fail = [&](size_t col, const std::string& m) {
            throw RecordParseError("line " + std::to_string(lineno) + ", column " +
                                   std::to_string(col + 1) + ": " + m);
        };
        while (ls >> tok) {
            size_t col = line.find(tok);
            auto eq = tok.find('=');
            if (eq == std::string::npos) fail(col, "expected key=value");
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            try {
                if (key == "disc") {
                    rec.disc = std::stoll(val);
                    if (rec.disc == 0) fail(col, "discriminant must be nonzero");
                    have_disc = true;
                } else if (key == "ipad") {
                    rec.ipad = parse_ipad(val);
                    have_ipad = true;
                } else if (key == "tkt") {
                    rec.tkt = parse_tkt(val);
                } else if (key == "len") {
                    auto l = length_from_token(val);
                    if (!l) fail(col, "unknown length token " + val);
                    rec.length_claim = l;
                } else {
                    fail(col, "unknown field " + key);
                }
            } catch (const RecordParseError&) {
                throw;
            } catch (const std::exception& e) {
                fail(col, e.what());
            }
        }
        if (!have_disc && !have_ipad) continue;  // blank or comment line
        if (!have_disc) fail(0, "record needs disc=");
        if (!have_ipad) fail(0, "record needs ipad=");
        if (!seen.insert(rec.disc).second)
            fail(0, "duplicate discriminant " + std::to_string(rec.disc));
        out.push_back(std::move(rec));
    }
    return out;
}

inline std::vector<FieldRecord> parse_records(const std::string& text) {
    std::istringstream is(text);
    return parse_records(is);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct Report {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const {
        std::string out;
        auto cell = [](const std::string& s) {
            if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
            std::string q = "\"";
            for (char c : s) {
                if (c == '"') q += '"';
                q += c;
            }
            return q + "\"";
        };
        for (size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + cell(header[i]);
        out += "\n";
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell(r[i]);
            out += "\n";
        }
        return out;
    }
};

enum class ReportMode { Screen, Classify, Stats };

inline LengthVerdict classify_record(const FieldRecord& rec) {
    LengthVerdict v;
    if (!rec.tkt) {
        v.reason = "no kernel type";
        return v;
    }
    if (tkt_is_simple(*rec.tkt)) return classify_simple(*rec.tkt, rec.signature(), rec.ati2);
    if (tkt_is_complex(*rec.tkt)) return classify_complex(*rec.tkt, rec.signature(), rec.ati2);
    v.reason = "kernel type outside the six families";
    return v;
}

inline Report report(const std::vector<FieldRecord>& records, ReportMode mode) {
    Report rep;
    if (mode == ReportMode::Stats) {
        rep.header = {"ipad", "count", "mindisc"};
        struct Agg {
            long long count = 0;
            long long mindisc = 0;
        };
        std::map<std::string, Agg> groups;
        for (const auto& r : records) {
            auto& g = groups[ipad_str(r.ipad)];
            ++g.count;
            long long a = std::llabs(r.disc);
            if (g.mindisc == 0 || a < g.mindisc) g.mindisc = a;
        }
        std::vector<std::pair<std::string, Agg>> rows(groups.begin(), groups.end());
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.second.mindisc < b.second.mindisc;
        });
        for (auto& [ipad, agg] : rows)
            rep.rows.push_back({ipad, std::to_string(agg.count), std::to_string(agg.mindisc)});
        return rep;
    }

    std::vector<const FieldRecord*> order;
    for (const auto& r : records) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(), [](const FieldRecord* a, const FieldRecord* b) {
        return std::llabs(a->disc) < std::llabs(b->disc);
    });

    if (mode == ReportMode::Screen) {
        rep.header = {"disc", "ipad", "screen", "state"};
        for (const auto* r : order) {
            ScreenVerdict s = screen_ipad(r->ipad);
            rep.rows.push_back({std::to_string(r->disc), ipad_str(r->ipad), s.text,
                                s.n >= 0 ? std::to_string(s.n) : ""});
        }
        return rep;
    }

    rep.header = {"disc", "ipad", "screen", "state", "tkt", "verdict", "reason"};
    for (const auto* r : order) {
        ScreenVerdict s = screen_ipad(r->ipad);
        std::vector<TypeInvariants> ati(r->ipad.begin() + 1, r->ipad.end());
        StateReading st = detect_state(ati);
        LengthVerdict v = classify_record(*r);
        std::string tkts;
        if (r->tkt)
            for (int e : r->tkt->entries) tkts += char('0' + e);
        rep.rows.push_back({std::to_string(r->disc), ipad_str(r->ipad), s.text,
                            st.n >= 0 ? std::to_string(st.n) : "", tkts,
                            length_token(v.value), v.reason});
    }
    return rep;
}

} // namespace towers3

#endif
