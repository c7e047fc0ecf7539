#pragma once

/* Lyndon-Shirshov machinery over an arbitrary prime order.
 *
 * A word is an associative Lyndon-Shirshov word (ALSW) when it is strictly
 * lex-greater than every proper suffix (equivalently uv > vu for every
 * factorization).  The bracketed-word variant (ALSBW) additionally requires
 * every operator payload to be ALSBW, with the top-level prime sequence
 * tested against the restriction of the chosen monomial order to primes.
 *
 * The Shirshov standard bracketing splits w = uv at the longest proper ALSW
 * suffix v and recurses; operator primes bracket as an operator node around
 * the payload's bracketing.  nlsbw_of is that bracketing applied to an
 * ALSBW, and the image is exactly the non-associative basis (NLSBW).
 */

#include <unordered_map>
#include <vector>

#include "order.hpp"

namespace olie {

template <class Cmp>
bool is_alsw_span(std::span<const Prime> ps, Cmp&& cmp) {
    for (size_t i = 1; i < ps.size(); ++i)
        if (lex_compare(ps, ps.subspan(i), cmp) != Ordering::GT) return false;
    return true;
}

/* Top-level test only; operator payloads are not inspected. */
inline bool is_alsw(Word w, const Ord& o) {
    return is_alsw_span(std::span<const Prime>(w.primes()), PrimeOrd{o});
}

namespace detail {

inline std::unordered_map<CmpKey, int8_t, CmpKeyHash>& alsbw_memo() {
    thread_local std::unordered_map<CmpKey, int8_t, CmpKeyHash> m;
    return m;
}

inline std::unordered_map<CmpKey, uint32_t, CmpKeyHash>& nlsbw_memo() {
    thread_local std::unordered_map<CmpKey, uint32_t, CmpKeyHash> m;
    return m;
}

inline CmpKey ord_word_key(const Ord& o, Word w) {
    return CmpKey{(uint64_t(o.alph->id()) << 1) | uint64_t(o.kind), uint64_t(w.id())};
}

}  // namespace detail

inline bool is_alsbw(Word w, const Ord& o) {
    auto key = detail::ord_word_key(o, w);
    auto& memo = detail::alsbw_memo();
    if (auto it = memo.find(key); it != memo.end()) return it->second != 0;
    bool ok = true;
    for (Prime p : w.primes())
        if (p.is_op() && !is_alsbw(p.payload(), o)) {
            ok = false;
            break;
        }
    if (ok) ok = is_alsw(w, o);
    memo.emplace(key, ok ? 1 : 0);
    return ok;
}

/* Standard bracketing of an ALSW (over the prime order of o).  Errors if any
 * level fails the ALSW test. */
inline Tree shirshov_bracketing(Word w, const Ord& o) {
    check(is_alsw(w, o), "shirshov_bracketing: not an ALSW: " + w.str());
    if (w.size() == 1) {
        Prime p = w[0];
        if (p.is_letter()) return leaf(p.letter_sym());
        return op_node(shirshov_bracketing(p.payload(), o));
    }
    std::span<const Prime> ps(w.primes());
    size_t split = w.size() - 1;  // a single prime is always ALSW
    for (size_t i = 1; i + 1 < w.size(); ++i)
        if (is_alsw_span(ps.subspan(i), PrimeOrd{o})) {
            split = i;
            break;
        }
    return pair_node(shirshov_bracketing(subrange(w, 0, split), o),
                     shirshov_bracketing(subrange(w, split, w.size() - split), o));
}

inline Tree nlsbw_of(Word w, const Ord& o) {
    auto key = detail::ord_word_key(o, w);
    auto& memo = detail::nlsbw_memo();
    if (auto it = memo.find(key); it != memo.end()) return Tree(it->second);
    check(is_alsbw(w, o), "nlsbw_of: not an ALSBW: " + w.str());
    Tree t = shirshov_bracketing(w, o);
    memo.emplace(key, t.id());
    return t;
}

namespace detail {

/* The atoms of a tree at its own level: leaves and operator nodes reachable
 * without entering an operator payload. */
inline void tree_atoms(Tree t, std::vector<Tree>& out) {
    if (t.is_pair()) {
        tree_atoms(t.left(), out);
        tree_atoms(t.right(), out);
    } else {
        out.push_back(t);
    }
}

}  // namespace detail

/* Non-associative Lyndon-Shirshov test at one level (atoms are opaque):
 * (a) the underlying word is ALSW, (b) both children of a pair are NLSW,
 * (c) in ((u1 u2) v) the word of v is lex >= the word of u2. */
inline bool is_nlsw(Tree t, const Ord& o) {
    if (!is_alsw_span(std::span<const Prime>(t.forget().primes()), PrimeOrd{o}))
        return false;
    if (!t.is_pair()) return true;
    Tree u = t.left(), v = t.right();
    if (!is_nlsw(u, o) || !is_nlsw(v, o)) return false;
    if (u.is_pair()) {
        Word u2 = u.right().forget(), vw = v.forget();
        if (lex_compare(std::span<const Prime>(vw.primes()),
                        std::span<const Prime>(u2.primes()), PrimeOrd{o}) == Ordering::LT)
            return false;
    }
    return true;
}

/* NLSW at every level: the tree itself and, recursively, every operator
 * payload. */
inline bool is_nlsbw(Tree t, const Ord& o) {
    if (!is_nlsw(t, o)) return false;
    std::vector<Tree> atoms;
    detail::tree_atoms(t, atoms);
    for (Tree a : atoms)
        if (a.is_op() && !is_nlsbw(a.child(), o)) return false;
    return true;
}

/* All ALSBW within the given bounds, sorted descending under the order.
 * Level iteration: words found so far feed new operator primes until no new
 * word appears. */
inline std::vector<Word> enumerate_alsbw(const Ord& o, int max_deg, int max_odeg,
                                         int max_dep) {
    check(max_deg >= 1, "enumerate_alsbw: max_deg must be >= 1");
    std::vector<Word> result;

    std::vector<Prime> pool;
    for (Sym s : o.alph->letters()) pool.push_back(Prime::letter(s));

    std::vector<Prime> cur;
    auto dfs = [&](auto&& self, int deg_left, int odeg_left) -> void {
        if (!cur.empty() && is_alsw_span(std::span<const Prime>(cur), PrimeOrd{o}))
            result.push_back(make_word(cur));
        for (Prime p : pool) {
            int d, od;
            if (p.is_letter()) {
                d = 1;
                od = 0;
            } else {
                d = p.payload().deg() + 1;
                od = p.payload().odeg() + 1;
            }
            if (d > deg_left || od > odeg_left) continue;
            cur.push_back(p);
            self(self, deg_left - d, odeg_left - od);
            cur.pop_back();
        }
    };

    for (;;) {
        result.clear();
        dfs(dfs, max_deg, max_odeg);
        // offer every newly found word as an operator prime, within bounds
        size_t added = 0;
        for (Word w : result) {
            if (w.deg() + 1 > max_deg || w.odeg() + 1 > max_odeg || w.dep() + 1 > max_dep)
                continue;
            Prime cand = Prime::op(w.id());
            bool known = false;
            for (Prime p : pool)
                if (p == cand) {
                    known = true;
                    break;
                }
            if (!known) {
                pool.push_back(cand);
                ++added;
            }
        }
        if (added == 0) break;
    }

    std::sort(result.begin(), result.end(),
              [&](Word a, Word b) { return compare(o, a, b) == Ordering::GT; });
    return result;
}

}  // namespace olie
