#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "towers3/artin.hpp"
#include "towers3/classify.hpp"
#include "towers3/families.hpp"
#include "towers3/ingest.hpp"
#include "towers3/pquotient.hpp"
#include "towers3/sigma.hpp"
#include "towers3/treedot.hpp"

using namespace towers3;
using nlohmann::json;

namespace {

struct Selector {
    std::string tree = "Q";
    std::string kind;
    int cls = 0;
    int r = 2;
    std::string variant;
    int ell = 2;  // sentinel: unset
    int n = -1;
    int i = 0;
    std::string id;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tree", tree, "descendant tree, Q or U");
        cmd->add_option("--kind", kind, "mainline | metab | schur");
        cmd->add_option("--class", cls, "nilpotency class c");
        cmd->add_option("--r", r, "mainline coclass (default 2)");
        cmd->add_option("--variant", variant, "relator variant, e.g. E6, E9a, mainline");
        cmd->add_option("--ell", ell, "cover parameter: -1, 0 or +1");
        cmd->add_option("--n", n, "state parameter (alternative to --class)");
        cmd->add_option("--i", i, "leaf counter 2..4 (alternative to --variant/--ell)");
        cmd->add_option("--id", id, "relative identifier string, e.g. F(-#2;1-#1;1)[-#2;3]");
    }

    GroupDescriptor descriptor() const {
        Tree t = tree_from(tree);
        if (!id.empty()) {
            auto res = resolve_identifier(id, t);
            if (res.status == ResolvedIdentifier::Constructible) return *res.descriptor;
            if (res.status == ResolvedIdentifier::Unconstructible)
                throw std::runtime_error("identifier names " + res.label +
                                         ": recognized but not constructible (" + res.note + ")");
            throw std::runtime_error("unrecognized identifier: " + res.note);
        }
        if (kind == "mainline") {
            GroupDescriptor d{GroupDescriptor::Mainline, t, cls ? cls : 2 * r - 1, r};
            return d;
        }
        if (kind == "metab") {
            GroupDescriptor d{GroupDescriptor::MetabelianFamily, t,
                              cls ? cls : (n >= 0 ? 2 * n + 5 : 5), 2};
            if (!variant.empty()) {
                auto v = variant_from(variant);
                if (!v) throw std::runtime_error("unknown variant " + variant);
                d.variant = *v;
            } else if (i >= 2 && i <= 4) {
                d.variant = i == 2 ? Variant::E6_E8 : i == 3 ? Variant::E14a_E9a
                                                             : Variant::E14b_E9b;
            } else {
                throw std::runtime_error("metab needs --variant or --i");
            }
            return d;
        }
        if (kind == "schur") {
            GroupDescriptor d{GroupDescriptor::CoverQuotient, t,
                              cls ? cls : (n >= 0 ? 2 * n + 5 : 5), 2};
            if (ell >= -1 && ell <= 1) {
                d.ell = ell;
            } else if (i >= 2 && i <= 4) {
                if (i == 4 && t == Tree::Q)
                    throw std::runtime_error("no cover parameter corresponds to i=4 on Q");
                d.ell = i == 2 ? 0 : i == 3 ? -1 : 1;
            } else {
                throw std::runtime_error("schur needs --ell or --i");
            }
            return d;
        }
        throw std::runtime_error("select a group with --kind mainline|metab|schur or --id");
    }
};

json sizes_json(const PcPresentation& g) {
    auto s = series_and_sizes(g);
    return json{{"log_order", s.log_order},
                {"class", s.cls},
                {"coclass", s.coclass},
                {"derived_length", s.derived_length}};
}

int run_group(const Selector& sel, bool info_only, const std::string& format) {
    GroupDescriptor d = sel.descriptor();
    auto g = build_cached(d);
    if (format == "json") {
        json j = sizes_json(*g);
        j["descriptor"] = d.str();
        j["generator_rank"] = generator_rank(*g);
        j["consistent"] = g->consistency_check().empty();
        if (!info_only) j["presentation"] = pc_format(*g);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (info_only) {
        auto s = series_and_sizes(*g);
        std::cout << d.str() << ": order 3^" << s.log_order << ", class " << s.cls
                  << ", coclass " << s.coclass << ", derived length " << s.derived_length
                  << ", d1 " << generator_rank(*g)
                  << (g->consistency_check().empty() ? ", consistent" : ", INCONSISTENT")
                  << "\n";
        return 0;
    }
    std::cout << pc_format(*g);
    return 0;
}

int run_pq(const std::string& file, int bound, int cap, const std::string& format) {
    std::string text;
    if (file.empty() || file == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open " + file);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    FpPresentation f = fp_parse(text);
    PqResult r = p_quotient(f, 3, bound, cap);
    if (format == "json") {
        json j = sizes_json(r.G);
        j["complete"] = r.complete;
        j["presentation"] = pc_format(r.G);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << pc_format(r.G);
    std::cerr << "# " << (r.complete ? "complete (pro-3 quotient reached)" : "capped")
              << ", log order " << r.G.ngens << "\n";
    return 0;
}

int run_pattern(const Selector& sel, bool with_ati2, const std::string& format) {
    GroupDescriptor d = sel.descriptor();
    auto g = build_cached(d);
    ArtinPattern ap = artin_pattern(*g, with_ati2);
    TypeInvariants a0 = ap.ati1.alpha0;
    if (format == "json") {
        json j;
        j["descriptor"] = d.str();
        j["tkt_raw"] = ap.tkt_raw.str();
        j["tkt"] = ap.tkt.str();
        j["ati"] = ap.ati1.str();
        json raw = json::array();
        for (const auto& t : ap.ati1.raw) raw.push_back(t.str());
        j["ati_raw"] = raw;
        j["alpha0"] = a0.str();
        if (ap.ati2) j["ati2"] = ati2_str(*ap.ati2, &a0);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << d.str() << "\n";
    std::cout << "tkt:    " << ap.tkt.str() << "  (raw " << ap.tkt_raw.str() << ")\n";
    std::cout << "ati:    " << ap.ati1.str() << "\n";
    std::cout << "alpha0: " << a0.str() << "\n";
    if (ap.ati2) std::cout << "ati2:   " << ati2_str(*ap.ati2, &a0) << "\n";
    return 0;
}

int run_sigma(const Selector& sel, bool check_h2, int max_lo, const std::string& format) {
    GroupDescriptor d = sel.descriptor();
    auto g = build_cached(d);
    SchurStatus st = schur_status(*g, max_lo, check_h2);
    if (format == "json") {
        json j{{"descriptor", d.str()}, {"sigma", st.sigma}, {"d1", st.d1},
               {"d2", st.d2},           {"nu", st.nu},       {"class", st.class_name()}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << d.str() << ": sigma=" << (st.sigma ? "yes" : "no") << " d1=" << st.d1
              << " d2=" << st.d2 << " nu=" << st.nu << " class=" << st.class_name() << "\n";
    return 0;
}

int run_classify(const std::string& tkt_s, const std::string& sig_s, const std::string& ati_s,
                 const std::string& ati2_file, const std::string& format) {
    Tkt k = parse_tkt(tkt_s);
    QuadraticSignature sig;
    if (sig_s == "real")
        sig = QuadraticSignature::Real;
    else if (sig_s == "imaginary" || sig_s == "imag")
        sig = QuadraticSignature::Imaginary;
    else
        throw std::runtime_error("--sig must be real or imaginary");

    std::optional<StateReading> state;
    if (!ati_s.empty()) state = detect_state(parse_quad(ati_s));

    std::optional<Ati2> a2;
    if (!ati2_file.empty()) {
        std::ifstream in(ati2_file);
        if (!in) throw std::runtime_error("cannot open " + ati2_file);
        std::string line, all;
        while (std::getline(in, line)) {
            auto h = line.find('#');
            if (h != std::string::npos) line = line.substr(0, h);
            for (char c : line)
                if (!isspace((unsigned char)c)) all += c;
        }
        a2 = parse_ati2(all);
    }

    LengthVerdict v;
    if (tkt_is_simple(k))
        v = classify_simple(k, sig, a2);
    else if (tkt_is_complex(k))
        v = classify_complex(k, sig, a2);
    else
        throw std::runtime_error("kernel type " + k.str() +
                                 " is outside the six classified families");

    if (format == "json") {
        json j{{"tkt", tkt_canonical(k).str()},
               {"verdict", length_token(v.value)},
               {"reason", v.reason},
               {"conjectural", v.conjectural}};
        if (state) {
            j["state"] = state->n;
            if (state->tree_hint) j["tree"] = std::string(1, tree_char(*state->tree_hint));
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << length_token(v.value) << " [" << v.reason << "]";
        if (v.conjectural) std::cout << " (conjectural for this state)";
        if (state && state->determined())
            std::cout << " state n=" << state->n << " tree "
                      << tree_char(*state->tree_hint);
        std::cout << "\n";
    }
    return v.value == Length::Unknown ? 2 : 0;
}

int run_ingest(const std::string& file, const std::string& mode_s, const std::string& format) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file);
    auto records = parse_records(in);
    ReportMode mode;
    if (mode_s == "screen")
        mode = ReportMode::Screen;
    else if (mode_s == "stats")
        mode = ReportMode::Stats;
    else if (mode_s == "classify")
        mode = ReportMode::Classify;
    else
        throw std::runtime_error("--mode must be screen, classify or stats");
    Report rep = report(records, mode);
    if (format == "json") {
        json rows = json::array();
        for (const auto& r : rep.rows) {
            json row;
            for (size_t i = 0; i < rep.header.size(); ++i) row[rep.header[i]] = r[i];
            rows.push_back(row);
        }
        std::cout << json{{"mode", mode_s}, {"rows", rows}}.dump(2) << "\n";
    } else {
        std::cout << rep.csv();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic engine for 3-class tower group families"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "output format: text or json")->capture_default_str();

    auto* group = app.add_subcommand("group", "construct or inspect a family group");
    group->require_subcommand(1);
    auto* gbuild = group->add_subcommand("build", "print the pc presentation");
    auto* ginfo = group->add_subcommand("info", "print order/class/coclass summary");
    Selector sel_build, sel_info;
    sel_build.attach(gbuild);
    sel_info.attach(ginfo);

    auto* pq = app.add_subcommand("pq", "3-quotient of a finitely presented group");
    std::string pq_file;
    int pq_bound = 10, pq_cap = 40;
    pq->add_option("--file", pq_file, "fp presentation file ('-' for stdin)");
    pq->add_option("--class-bound", pq_bound, "exponent-3 class bound")->capture_default_str();
    pq->add_option("--cap", pq_cap, "hard cap on the lifting loop")->capture_default_str();

    auto* pattern = app.add_subcommand("pattern", "transfer kernel type and type invariants");
    Selector sel_pat;
    sel_pat.attach(pattern);
    bool with_ati2 = false;
    pattern->add_flag("--ati2", with_ati2, "include second-order invariants");

    auto* sigma = app.add_subcommand("sigma", "sigma-automorphism and rank report");
    Selector sel_sig;
    sel_sig.attach(sigma);
    bool check_h2 = false;
    int max_lo = 10;
    sigma->add_flag("--check-h2", check_h2, "also verify inversion on the multiplicator");
    sigma->add_option("--max-lo", max_lo, "capacity ceiling (log order)")->capture_default_str();

    auto* classify = app.add_subcommand("classify", "tower length from kernel type and patterns");
    std::string cl_tkt, cl_sig = "real", cl_ati, cl_ati2;
    classify->add_option("--tkt", cl_tkt, "four digits, e.g. 2231")->required();
    classify->add_option("--sig", cl_sig, "real or imaginary")->capture_default_str();
    classify->add_option("--ati", cl_ati, "first-order quadruple, e.g. [43,21,21,21]");
    classify->add_option("--ati2-file", cl_ati2, "file holding one second-order pattern");

    auto* ingest = app.add_subcommand("ingest", "parse field records and report");
    std::string in_file, in_mode = "classify";
    ingest->add_option("--file", in_file, "record file")->required();
    ingest->add_option("--mode", in_mode, "screen | classify | stats")->capture_default_str();

    auto* treedot = app.add_subcommand("tree-dot", "DOT rendering of the root region");
    std::string td_tree = "Q";
    int td_maxlo = 12;
    treedot->add_option("--tree", td_tree, "Q or U");
    treedot->add_option("--max-lo", td_maxlo, "log-order bound (at most 20)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gbuild->parsed()) return run_group(sel_build, false, format);
        if (ginfo->parsed()) return run_group(sel_info, true, format);
        if (pq->parsed()) return run_pq(pq_file, pq_bound, pq_cap, format);
        if (pattern->parsed()) return run_pattern(sel_pat, with_ati2, format);
        if (sigma->parsed()) return run_sigma(sel_sig, check_h2, max_lo, format);
        if (classify->parsed()) return run_classify(cl_tkt, cl_sig, cl_ati, cl_ati2, format);
        if (ingest->parsed()) return run_ingest(in_file, in_mode, format);
        if (treedot->parsed()) {
            std::cout << emit_tree_dot(tree_from(td_tree), td_maxlo);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
