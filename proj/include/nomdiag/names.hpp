#pragma once

#include "errors.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace nomdiag {

/// An atom. `a12` is stored as base "a", index 12 so that a2 < a10.
/// Machine-made names use the bases "_" and "_p", which user input never produces.
struct Name {
    std::string base;
    std::optional<std::uint64_t> index;

    auto operator<=>(const Name&) const = default;
    bool operator==(const Name&) const = default;

    std::string str() const {
        return index ? base + std::to_string(*index) : base;
    }

    bool is_machine() const { return !base.empty() && base[0] == '_'; }

    static Name machine(std::uint64_t i) { return Name{"_", i}; }
    static Name ordinal(std::uint64_t i) { return Name{"_p", i}; }

    // Splits a trailing digit run into the index unless it has a leading zero.
    static Name split(std::string_view s) {
        std::size_t k = s.size();
        while (k > 0 && s[k - 1] >= '0' && s[k - 1] <= '9') --k;
        if (k == 0 || k == s.size() || (s[k] == '0' && s.size() - k > 1))
            return Name{std::string(s), std::nullopt};
        return Name{std::string(s.substr(0, k)), std::stoull(std::string(s.substr(k)))};
    }

    /// User syntax `[a-z][a-z0-9]*`; with `allow_machine`, also `_<digits>` and `_p<digits>`.
    static Name parse(std::string_view s, bool allow_machine = false) {
        auto digits = [](std::string_view d) {
            if (d.empty()) return false;
            for (char c : d)
                if (c < '0' || c > '9') return false;
            return true;
        };
        if (!s.empty() && s[0] == '_') {
            if (!allow_machine)
                throw ParseError("name '" + std::string(s) + "' uses the reserved '_' prefix");
            if (digits(s.substr(1))) return Name{"_", std::stoull(std::string(s.substr(1)))};
            if (s.size() > 2 && s[1] == 'p' && digits(s.substr(2)))
                return Name{"_p", std::stoull(std::string(s.substr(2)))};
            throw ParseError("malformed machine name '" + std::string(s) + "'");
        }
        if (s.empty() || s[0] < 'a' || s[0] > 'z')
            throw ParseError("bad name '" + std::string(s) + "'");
        for (char c : s)
            if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')))
                throw ParseError("bad name '" + std::string(s) + "'");
        return split(s);
    }
};

inline Name operator""_n(const char* s, std::size_t len) { return Name::parse({s, len}, true); }

using NameSet = std::set<Name>;
using NameList = std::vector<Name>;

/// Finitely supported permutation; only non-fixed points are stored.
class FinPerm {
public:
    FinPerm() = default;

    /// Throws TypeViolation unless `m` restricted to its moved points is a bijection of its key set.
    static FinPerm from_map(const std::map<Name, Name>& m) {
        FinPerm p;
        NameSet keys, vals;
        for (auto& [k, v] : m) {
            if (k == v) continue;
            p.moved_.emplace(k, v);
            keys.insert(k);
            vals.insert(v);
        }
        if (keys != vals) throw TypeViolation("map is not a permutation of its moved points");
        return p;
    }

    Name operator()(const Name& x) const {
        auto it = moved_.find(x);
        return it == moved_.end() ? x : it->second;
    }

    const std::map<Name, Name>& moved() const { return moved_; }
    bool is_identity() const { return moved_.empty(); }
    bool operator==(const FinPerm&) const = default;

    std::string str() const {
        if (moved_.empty()) return "()";
        std::string out;
        NameSet seen;
        for (auto& [start, _] : moved_) {
            if (seen.count(start)) continue;
            out += "(";
            Name x = start;
            bool first = true;
            do {
                if (!first) out += " ";
                first = false;
                out += x.str();
                seen.insert(x);
                x = (*this)(x);
            } while (x != start);
            out += ")";
        }
        return out;
    }

private:
    std::map<Name, Name> moved_;
};

inline FinPerm transposition(const Name& a, const Name& b) {
    if (a == b) return {};
    return FinPerm::from_map({{a, b}, {b, a}});
}

/// (p∘q)(x) = p(q(x))
inline FinPerm perm_compose(const FinPerm& p, const FinPerm& q) {
    std::map<Name, Name> m;
    for (auto& [k, _] : q.moved()) m[k] = p(q(k));
    for (auto& [k, _] : p.moved())
        if (!m.count(k)) m[k] = p(q(k));
    return FinPerm::from_map(m);
}

inline FinPerm perm_inverse(const FinPerm& p) {
    std::map<Name, Name> m;
    for (auto& [k, v] : p.moved()) m[v] = k;
    return FinPerm::from_map(m);
}

inline NameSet perm_apply_set(const FinPerm& p, const NameSet& a) {
    NameSet out;
    for (auto& x : a) out.insert(p(x));
    return out;
}

inline NameList perm_apply_list(const FinPerm& p, const NameList& a) {
    NameList out;
    out.reserve(a.size());
    for (auto& x : a) out.push_back(p(x));
    return out;
}

inline NameSet perm_support(const FinPerm& p) {
    NameSet out;
    for (auto& [k, _] : p.moved()) out.insert(k);
    return out;
}

inline bool separated(const NameSet& a, const NameSet& b) {
    for (auto& x : a)
        if (b.count(x)) return false;
    return true;
}

/// k machine names `_i`, smallest indices first, none in `avoid`.
inline NameList fresh_names(const NameSet& avoid, std::size_t k) {
    NameList out;
    for (std::uint64_t i = 0; out.size() < k; ++i) {
        Name n = Name::machine(i);
        if (!avoid.count(n)) out.push_back(n);
    }
    return out;
}

inline NameList enumerate(const NameSet& a) { return NameList(a.begin(), a.end()); }

inline NameSet set_union(const NameSet& a, const NameSet& b) {
    NameSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline NameSet set_minus(const NameSet& a, const NameSet& b) {
    NameSet out;
    for (auto& x : a)
        if (!b.count(x)) out.insert(x);
    return out;
}

inline std::string set_str(const NameSet& a) {
    std::string out = "{";
    bool first = true;
    for (auto& x : a) {
        if (!first) out += ",";
        first = false;
        out += x.str();
    }
    return out + "}";
}

inline std::string list_str(const NameList& a, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += sep;
        out += a[i].str();
    }
    return out;
}

inline bool duplicate_free(const NameList& a) {
    return NameSet(a.begin(), a.end()).size() == a.size();
}

} // namespace nomdiag
