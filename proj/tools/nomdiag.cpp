// nomdiag: command-line front end for the nominal / ordered diagram engine.
//
// Exit codes: 0 ok or equal, 1 not equal, 2 type or domain error, 3 parse error,
// 4 search budget exhausted.

#include <nomdiag/bridge.hpp>
#include <nomdiag/graph.hpp>
#include <nomdiag/parse.hpp>
#include <nomdiag/rewrite.hpp>
#include <nomdiag/soundness.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace nomdiag;

namespace {

enum Exit { ok = 0, not_equal = 1, type_error = 2, parse_error = 3, budget = 4 };

struct Workspace {
    std::string theory_name = "nF";
    std::string sig_file;
    bool ordered = false; // --ordered: read inputs as ordered terms even for a nominal theory

    Theory theory() const { return parse_theory(theory_name); }
    bool nominal_input() const { return !ordered && is_nominal(theory()); }

    Signature signature() const {
        if (sig_file.empty()) return theory_signature(theory());
        return parse_signature(read(sig_file), theory());
    }

    static std::string read(const std::string& path) {
        if (path == "-") {
            std::stringstream ss;
            ss << std::cin.rdbuf();
            return ss.str();
        }
        std::ifstream in(path);
        if (!in) throw ParseError("cannot read '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Term load(const std::string& path, bool nominal) const {
        std::string text = read(path);
        return nominal ? parse_nmt(text, true) : parse_smt(text);
    }
};

std::string ord_json(const OrdSem& s) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(s.kind);
    j["dom"] = s.m;
    j["cod"] = s.n;
    j["pairs"] = nlohmann::json::array();
    for (auto& [x, y] : s.pairs) j["pairs"].push_back({x, y});
    return j.dump();
}

std::string iface_text(const Term& t, const Signature& sig, bool nominal) {
    if (nominal) return nmt_typecheck(t, &sig).str();
    Arity a = smt_typecheck(t, sig);
    return std::to_string(a.dom) + " -> " + std::to_string(a.cod);
}

// Semantic value lifted to names: ordered values use `_p<i>` on both sides.
SemMap value(const Term& t, const Workspace& ws, bool nominal) {
    if (nominal) {
        nmt_typecheck(t, nullptr);
        return eval_nmt(t, ws.theory());
    }
    OrdSem o = eval_smt(t, ws.theory());
    SemMap s{{}, {}, o.kind, {}};
    for (std::size_t i = 0; i < o.m; ++i) s.dom.insert(Name::ordinal(i));
    for (std::size_t i = 0; i < o.n; ++i) s.cod.insert(Name::ordinal(i));
    for (auto& [x, y] : o.pairs) s.pairs.insert({Name::ordinal(x), Name::ordinal(y)});
    return s;
}

int run(int argc, char** argv) {
    CLI::App app{"Nominal and ordered string-diagram terms: typing, evaluation, equality, translation."};
    app.require_subcommand(1);
    Workspace ws;
    app.add_option("--theory", ws.theory_name, "B I S F P R free | nB nI nS nF nP nR nfree")->capture_default_str();
    app.add_option("--sig", ws.sig_file, "signature file, one 'label : m -> n' per line");
    app.add_flag("--ordered", ws.ordered, "read terms in the ordered syntax");

    std::string file, file2;
    auto* check = app.add_subcommand("check", "parse and typecheck; print the interface");
    check->add_option("file", file, "term file or -")->required();

    auto* eval = app.add_subcommand("eval", "evaluate to a map, printed as JSON");
    eval->add_option("file", file)->required();

    auto* normalize = app.add_subcommand("normalize", "print the canonical term of the value");
    normalize->add_option("file", file)->required();

    bool derive = false;
    SearchOptions sopt;
    auto* eq = app.add_subcommand("eq", "decide equality; --derive also searches for a rewrite derivation");
    eq->add_option("file1", file)->required();
    eq->add_option("file2", file2)->required();
    eq->add_flag("--derive", derive);
    eq->add_option("--depth", sopt.max_depth)->capture_default_str();
    eq->add_option("--max-nodes", sopt.max_nodes)->capture_default_str();
    eq->add_option("--seconds", sopt.max_seconds, "wall-clock budget, 0 for none");
    eq->add_flag("--monotone", sopt.monotone, "only size-non-increasing steps");

    std::string dir, in_list, out_list;
    bool in_given = false, out_given = false;
    auto* translate = app.add_subcommand("translate", "nom: ordered -> nominal; ord: nominal -> ordered");
    translate->add_option("--dir", dir)->required()->check(CLI::IsMember({"nom", "ord"}));
    translate->add_option("file", file)->required();
    auto* in_opt = translate->add_option("--in", in_list, "domain names for nom, e.g. a,b");
    auto* out_opt = translate->add_option("--out", out_list, "codomain names for nom");

    auto* render = app.add_subcommand("render", "Graphviz DOT of the port graph");
    render->add_option("file", file)->required();

    std::string apply_list;
    auto* subst = app.add_subcommand("subst", "apply a substitution term to a list of names");
    subst->add_option("file", file)->required();
    subst->add_option("--apply", apply_list)->required();

    std::uint64_t seed = 0;
    std::size_t samples = 100;
    auto* sound = app.add_subcommand("soundness", "evaluate random instances of every rule of the theory");
    sound->add_option("--seed", seed)->required();
    sound->add_option("--samples", samples)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? ok : parse_error;
    }
    in_given = in_opt->count() > 0;
    out_given = out_opt->count() > 0;

    const Signature sig = ws.signature();
    const bool nom = ws.nominal_input();

    if (*check) {
        Term t = ws.load(file, nom);
        std::cout << iface_text(t, sig, nom) << "\n";
        return ok;
    }
    if (*eval) {
        Term t = ws.load(file, nom);
        if (nom) {
            nmt_typecheck(t, &sig);
            std::cout << sem_to_json(eval_nmt(t, ws.theory())) << "\n";
        } else {
            std::cout << ord_json(eval_smt(t, ws.theory())) << "\n";
        }
        return ok;
    }
    if (*normalize) {
        Term t = ws.load(file, nom);
        SemMap s = value(t, ws, nom);
        Term n = readback_nmt(s, nominal_of(ws.theory()));
        std::cout << (nom ? print_nmt(n) : print_smt(ord_term(n))) << "\n";
        return ok;
    }
    if (*eq) {
        Term t = ws.load(file, nom), u = ws.load(file2, nom);
        bool equal;
        if (is_free(ws.theory())) {
            if (!nom) throw UnsupportedGenerator("equality over a free ordered signature is not decided here");
            nmt_typecheck(t, &sig);
            nmt_typecheck(u, &sig);
            equal = alpha_eq(t, u);
        } else {
            equal = value(t, ws, nom) == value(u, ws, nom);
            if (nom) equal = equal && nmt_typecheck(t, &sig) == nmt_typecheck(u, &sig);
        }
        std::cout << (equal ? "equal" : "not-equal") << "\n";
        if (!equal) return not_equal;
        if (!derive) return ok;
        RuleSet rs = nom ? nmt_rules(ws.theory(), sig) : smt_rules(ws.theory(), sig);
        SearchResult r = search_eq(t, u, rs, sopt);
        if (!r.found) {
            std::cout << "no derivation within budget (explored " << r.explored << ")\n";
            return budget;
        }
        std::cout << r.derivation.text();
        return ok;
    }
    if (*translate) {
        if (dir == "nom") {
            Term t = ws.load(file, false);
            Signature osig = sig;
            Arity a = smt_typecheck(t, osig);
            NameList in = in_given ? parse_name_list(in_list, true) : ordinal_names(a.dom);
            NameList out = out_given ? parse_name_list(out_list, true) : ordinal_names(a.cod);
            std::cout << print_nmt(nom_term(t, in, out, osig)) << "\n";
        } else {
            Term t = ws.load(file, true);
            nmt_typecheck(t, &sig);
            std::cout << print_smt(ord_term(t)) << "\n";
        }
        return ok;
    }
    if (*render) {
        Term t = ws.load(file, nom);
        if (!nom) {
            Arity a = smt_typecheck(t, sig);
            t = nom_term(t, ordinal_names(a.dom), ordinal_names(a.cod), sig);
        } else {
            nmt_typecheck(t, &sig);
        }
        std::cout << to_dot(port_graph(t));
        return ok;
    }
    if (*subst) {
        Term t = ws.load(file, true);
        nmt_typecheck(t, &sig);
        SemMap s = detail::eval_nmt_raw(t, theory_signature(Theory::nR));
        std::cout << list_str(apply_subst(s, parse_name_list(apply_list, true))) << "\n";
        return ok;
    }
    if (*sound) {
        Theory th = ws.theory();
        if (is_free(th)) throw UnsupportedGenerator("soundness needs an interpreted theory");
        RuleSet rs = is_nominal(th) ? nmt_rules(th) : smt_rules(th);
        SoundnessReport rep = check_rule_soundness(rs, th, samples, seed);
        for (auto& r : rep.rules) std::cout << r.rule << ": " << r.checked << " instances\n";
        for (auto& f : rep.failures)
            std::cout << "FAIL " << f.rule << ": " << print_term(f.lhs) << "  vs  " << print_term(f.rhs) << " ("
                      << f.detail << ")\n";
        std::cout << (rep.ok() ? "sound" : "unsound") << "\n";
        return rep.ok() ? ok : not_equal;
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return parse_error;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return type_error;
    }
}
