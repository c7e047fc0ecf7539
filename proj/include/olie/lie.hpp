#pragma once

/* Lie polynomials in the NLSBW basis and their associative expansions.
 *
 * A LiePoly is a finite Scalar-combination of basis trees (NLSBW), stored in
 * a map ordered descending by the forget word, so begin() is the leading
 * term.  An AssocPoly is the analogous combination of words.  iota expands a
 * basis tree into the enveloping algebra (anti-symmetrizing every pair
 * node); from_assoc inverts it on the Lie subspace by leading-term
 * elimination, which works because expansion is triangular: the expansion of
 * a basis tree is its forget word plus strictly smaller words.
 */

#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "lyndon.hpp"
#include "scalar.hpp"

namespace olie {

struct WordDesc {
    Ord o;
    bool operator()(Word a, Word b) const { return compare(o, a, b) == Ordering::GT; }
};

struct TreeDesc {
    Ord o;
    bool operator()(Tree a, Tree b) const {
        if (a == b) return false;
        Ordering c = compare(o, a.forget(), b.forget());
        check(c != Ordering::EQ,
              "TreeDesc: distinct trees with equal underlying word: " + a.str() +
                  " vs " + b.str());
        return c == Ordering::GT;
    }
};

namespace detail {

template <class Map>
std::string format_terms(const Map& terms) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms) {
        std::string cs = c.str();
        bool negative = c.is_constant() && cs.size() && cs[0] == '-';
        if (first) {
            if (c.is_one())
                os << key.str();
            else if (c == Scalar(-1))
                os << "- " << key.str();
            else if (c.is_constant())
                os << cs << " * " << key.str();
            else
                os << "(" << cs << ") * " << key.str();
            first = false;
            continue;
        }
        if (!c.is_constant()) {
            os << " + (" << cs << ") * " << key.str();
        } else if (negative) {
            std::string mag = (-c).str();
            os << " - " << (mag == "1" ? key.str() : mag + " * " + key.str());
        } else {
            os << " + " << (cs == "1" ? key.str() : cs + " * " + key.str());
        }
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace detail

class AssocPoly {
  public:
    using Terms = std::map<Word, Scalar, WordDesc>;

    explicit AssocPoly(const Ord& o) : o_(o), t_(WordDesc{o}) {}

    const Ord& ord() const { return o_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    const Terms& terms() const { return t_; }

    void add(Word w, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.try_emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    std::pair<Word, Scalar> leading() const {
        check(!t_.empty(), "AssocPoly::leading: zero polynomial");
        return *t_.begin();
    }

    void scale(const Scalar& c) {
        if (c.is_zero()) {
            t_.clear();
            return;
        }
        for (auto& [w, v] : t_) v *= c;
    }

    void axpy(const Scalar& c, const AssocPoly& p) {
        if (c.is_zero()) return;
        for (const auto& [w, v] : p.t_) add(w, c * v);
    }

    std::string str() const { return detail::format_terms(t_); }

  private:
    Ord o_;
    Terms t_;
};

inline AssocPoly assoc_mul(const AssocPoly& a, const AssocPoly& b) {
    AssocPoly out(a.ord());
    for (const auto& [u, cu] : a.terms())
        for (const auto& [v, cv] : b.terms()) out.add(concat(u, v), cu * cv);
    return out;
}

class LiePoly {
  public:
    using Terms = std::map<Tree, Scalar, TreeDesc>;

    explicit LiePoly(const Ord& o) : o_(o), t_(TreeDesc{o}) {}

    const Ord& ord() const { return o_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    const Terms& terms() const { return t_; }

    void add(Tree t, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.try_emplace(t, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    std::pair<Tree, Scalar> leading() const {
        check(!t_.empty(), "LiePoly::leading: zero polynomial");
        return *t_.begin();
    }

    Word leading_word() const { return leading().first.forget(); }

    void scale(const Scalar& c) {
        if (c.is_zero()) {
            t_.clear();
            return;
        }
        for (auto& [t, v] : t_) v *= c;
    }

    void axpy(const Scalar& c, const LiePoly& p) {
        if (c.is_zero()) return;
        for (const auto& [t, v] : p.t_) add(t, c * v);
    }

    LiePoly monic() const {
        check(!t_.empty(), "LiePoly::monic: zero polynomial");
        LiePoly out = *this;
        out.scale(leading().second.inverse());
        return out;
    }

    std::string str() const { return detail::format_terms(t_); }

  private:
    Ord o_;
    Terms t_;
};

namespace detail {

/* Expansion of a basis tree into the enveloping algebra, with integer
 * coefficients.  Pure in the tree: no order involved. */
using ExpandTerms = std::vector<std::pair<uint32_t, long long>>;

inline const ExpandTerms& expand_terms(Tree t) {
    thread_local std::unordered_map<uint32_t, std::unique_ptr<ExpandTerms>> memo;
    if (auto it = memo.find(t.id()); it != memo.end()) return *it->second;

    ExpandTerms out;
    if (t.is_leaf()) {
        out.emplace_back(letter_word(t.leaf_sym()).id(), 1);
    } else if (t.is_op()) {
        for (auto [wid, c] : expand_terms(t.child()))
            out.emplace_back(op_word(Word(wid)).id(), c);
    } else {
        const ExpandTerms l = expand_terms(t.left());   // copies: recursion may rehash
        const ExpandTerms r = expand_terms(t.right());
        std::unordered_map<uint32_t, long long> acc;
        for (auto [u, cu] : l)
            for (auto [v, cv] : r) acc[concat(Word(u), Word(v)).id()] += cu * cv;
        for (auto [v, cv] : r)
            for (auto [u, cu] : l) acc[concat(Word(v), Word(u)).id()] -= cu * cv;
        for (auto [wid, c] : acc)
            if (c != 0) out.emplace_back(wid, c);
        std::sort(out.begin(), out.end());
    }
    auto ptr = std::make_unique<ExpandTerms>(std::move(out));
    auto& slot = memo[t.id()];
    slot = std::move(ptr);
    return *slot;
}

}  // namespace detail

inline AssocPoly expand(Tree t, const Ord& o) {
    AssocPoly out(o);
    for (auto [wid, c] : detail::expand_terms(t)) out.add(Word(wid), Scalar(c));
    return out;
}

inline AssocPoly iota(const LiePoly& f) {
    AssocPoly out(f.ord());
    for (const auto& [t, c] : f.terms())
        for (auto [wid, k] : detail::expand_terms(t)) out.add(Word(wid), c * Scalar(k));
    return out;
}

/* Inverse of iota on the Lie subspace.  Errors if some leading word along
 * the elimination is not ALSBW, i.e. the input is not the expansion of a Lie
 * polynomial. */
inline LiePoly from_assoc(AssocPoly p) {
    const Ord& o = p.ord();
    LiePoly out(o);
    while (!p.is_zero()) {
        auto [w, c] = p.leading();
        check(is_alsbw(w, o),
              "from_assoc: not in the Lie subspace, leading word " + w.str());
        Tree t = nlsbw_of(w, o);
        out.add(t, c);
        for (auto [wid, k] : detail::expand_terms(t)) p.add(Word(wid), -(c * Scalar(k)));
    }
    return out;
}

namespace detail {

using BasisTerms = std::vector<std::pair<uint32_t, long long>>;

inline long long scalar_to_ll(const Scalar& s) {
    check(s.is_constant(), "scalar_to_ll: not a constant");
    mpq_class q = s.as_rational();
    check(q.get_den() == 1, "scalar_to_ll: not an integer");
    check(q.get_num().fits_slong_p(), "scalar_to_ll: out of range");
    return q.get_num().get_si();
}

/* Bracket of two basis trees, re-expressed in the basis.  Coefficients are
 * integers, so the result caches per (a, b, order). */
inline const BasisTerms& bracket_basis(Tree a, Tree b, const Ord& o) {
    thread_local std::unordered_map<CmpKey, std::unique_ptr<BasisTerms>, CmpKeyHash>
        memo;
    CmpKey key{(uint64_t(o.alph->id()) << 33) | (uint64_t(o.kind) << 32) | a.id(),
               uint64_t(b.id())};
    if (auto it = memo.find(key); it != memo.end()) return *it->second;

    AssocPoly ea = expand(a, o), eb = expand(b, o);
    AssocPoly prod = assoc_mul(ea, eb);
    prod.axpy(Scalar(-1), assoc_mul(eb, ea));
    LiePoly lie = from_assoc(std::move(prod));
    BasisTerms out;
    for (const auto& [t, c] : lie.terms()) out.emplace_back(t.id(), scalar_to_ll(c));

    auto& slot = memo[key];
    slot = std::make_unique<BasisTerms>(std::move(out));
    return *slot;
}

}  // namespace detail

inline LiePoly bracket(const LiePoly& f, const LiePoly& g) {
    check(f.ord() == g.ord(), "bracket: mixed orders");
    LiePoly out(f.ord());
    for (const auto& [s, cs] : f.terms())
        for (const auto& [t, ct] : g.terms()) {
            const Scalar c = cs * ct;
            for (auto [tid, k] : detail::bracket_basis(s, t, f.ord()))
                out.add(Tree(tid), c * Scalar(k));
        }
    return out;
}

/* Apply the operator to every term.  op_node of a basis tree is again a
 * basis tree, with the same coefficient. */
inline LiePoly op_apply(const LiePoly& f) {
    LiePoly out(f.ord());
    for (const auto& [t, c] : f.terms()) out.add(op_node(t), c);
    return out;
}

/* Rewrite an arbitrary tree as a combination of basis trees. */
inline LiePoly to_basis(Tree t, const Ord& o) {
    if (t.is_leaf()) {
        LiePoly out(o);
        out.add(t, Scalar(1));
        return out;
    }
    if (t.is_op()) return op_apply(to_basis(t.child(), o));
    return bracket(to_basis(t.left(), o), to_basis(t.right(), o));
}

}  // namespace olie
