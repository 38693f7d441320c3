#pragma once

#include "errors.hpp"

#include <map>
#include <string>
#include <utility>

namespace nomdiag {

/// Ordered theories B..R, nominal theories nB..nR, and the two free (uninterpreted) signatures.
enum class Theory { B, I, S, F, P, R, Free, nB, nI, nS, nF, nP, nR, nFree };

/// Classes of finite maps, ordered so that every class is included in the later ones it joins to.
enum class Kind { bij, inj, surj, fun, pfun, rel };

inline bool is_nominal(Theory t) { return t >= Theory::nB; }
inline bool is_free(Theory t) { return t == Theory::Free || t == Theory::nFree; }

inline Theory nominal_of(Theory t) {
    return is_nominal(t) ? t : static_cast<Theory>(static_cast<int>(t) + 7);
}
inline Theory ordered_of(Theory t) {
    return is_nominal(t) ? static_cast<Theory>(static_cast<int>(t) - 7) : t;
}

inline Kind kind_of(Theory t) {
    switch (ordered_of(t)) {
    case Theory::B: return Kind::bij;
    case Theory::I: return Kind::inj;
    case Theory::S: return Kind::surj;
    case Theory::F: return Kind::fun;
    case Theory::P: return Kind::pfun;
    default: return Kind::rel;
    }
}

inline const char* theory_name(Theory t) {
    static const char* names[] = {"B", "I", "S", "F", "P", "R", "free",
                                  "nB", "nI", "nS", "nF", "nP", "nR", "nfree"};
    return names[static_cast<int>(t)];
}

inline Theory parse_theory(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Theory::nFree); ++i)
        if (s == theory_name(static_cast<Theory>(i))) return static_cast<Theory>(i);
    throw ParseError("unknown theory '" + s + "'");
}

inline const char* kind_name(Kind k) {
    static const char* names[] = {"bij", "inj", "surj", "fun", "pfun", "rel"};
    return names[static_cast<int>(k)];
}

inline Kind parse_kind(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Kind::rel); ++i)
        if (s == kind_name(static_cast<Kind>(i))) return static_cast<Kind>(i);
    throw ParseError("unknown kind '" + s + "'");
}

/// Least class containing both: inj and surj meet at fun.
inline Kind kind_join(Kind a, Kind b) {
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    if (a == Kind::bij) return b;
    if (b <= Kind::fun) return Kind::fun;
    return b;
}

inline bool kind_leq(Kind a, Kind b) { return kind_join(a, b) == b; }

struct Arity {
    std::size_t dom = 0, cod = 0;
    bool operator==(const Arity&) const = default;
};

/// Generator labels with arities. For nominal theories the arity is the size of the name lists.
struct Signature {
    Theory theory = Theory::nFree;
    std::map<std::string, Arity> gens;

    bool has(const std::string& label) const { return gens.count(label) != 0; }
    const Arity& arity(const std::string& label) const {
        auto it = gens.find(label);
        if (it == gens.end()) throw UnknownGenerator("generator '" + label + "' not in signature");
        return it->second;
    }
};

// Labels shared by the ordered and nominal theories:
// u = unit (η), m = merge (μ), k = discard (ε̂ / η̂), c = copy (δ̂ / μ̂).
namespace label {
inline const std::string unit = "u";
inline const std::string merge = "m";
inline const std::string discard = "k";
inline const std::string copy = "c";
} // namespace label

inline Signature theory_signature(Theory t) {
    Signature s;
    s.theory = t;
    Theory o = ordered_of(t);
    if (o == Theory::I || o == Theory::F || o == Theory::P || o == Theory::R) s.gens[label::unit] = {0, 1};
    if (o == Theory::S || o == Theory::F || o == Theory::P || o == Theory::R) s.gens[label::merge] = {2, 1};
    if (o == Theory::P || o == Theory::R) s.gens[label::discard] = {1, 0};
    if (o == Theory::R) s.gens[label::copy] = {1, 2};
    return s;
}

inline Signature smt_theory_signature(Theory t) { return theory_signature(ordered_of(t)); }
inline Signature nmt_theory_signature(Theory t) { return theory_signature(nominal_of(t)); }

/// Kind of the map a built-in generator denotes.
inline Kind generator_kind(const std::string& label) {
    if (label == label::unit) return Kind::inj;
    if (label == label::merge) return Kind::surj;
    if (label == label::discard) return Kind::pfun;
    return Kind::rel;
}

} // namespace nomdiag
