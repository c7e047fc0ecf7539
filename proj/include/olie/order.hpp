#pragma once

/* The two invariant monomial orders on bracketed words.
 *
 * Both are defined by induction on operator depth.  Writing u = u_1...u_m as
 * its prime sequence:
 *
 *   Dl:  compare (deg u, breadth u, u_1, ..., u_m) lexicographically, except
 *        that two single-operator-prime words compare by their payloads.
 *
 *   dt:  compare (letter-degree u, u_1, ..., u_m) lexicographically, with
 *        the same payload rule for two single-operator-prime words, and an
 *        operator prime always beats a letter.
 *
 * In both orders primes compare as breadth-one words, which bottoms out at
 * the alphabet order on letters; an operator prime beats a letter in Dl too
 * (its deg is at least 2).  Equality is structural equality.
 *
 * lex_compare is the plain sequence order of well-ordered alphabets extended
 * to the free monoid with the EMPTY WORD GREATEST: 1 > u for nonempty u, so
 * a proper prefix dominates (x > xx).  The Lyndon-Shirshov machinery builds
 * on lex_compare over the prime order induced by Dl or dt.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>

#include "word.hpp"

namespace olie {

enum class Kind : uint8_t { dt, Dl };

inline const char* kind_name(Kind k) { return k == Kind::dt ? "dt" : "Dl"; }

inline Kind kind_from_string(std::string_view s) {
    if (s == "dt") return Kind::dt;
    if (s == "Dl") return Kind::Dl;
    fail("unknown order '" + std::string(s) + "' (expected dt or Dl)");
}

/* Comparison context: which alphabet and which of the two orders. */
struct Ord {
    const Alphabet* alph = nullptr;
    Kind kind = Kind::dt;

    bool operator==(const Ord& o) const {
        return alph->id() == o.alph->id() && kind == o.kind;
    }
};

template <class Cmp>
Ordering lex_compare(std::span<const Prime> u, std::span<const Prime> v, Cmp&& cmp) {
    size_t n = std::min(u.size(), v.size());
    for (size_t i = 0; i < n; ++i) {
        Ordering c = cmp(u[i], v[i]);
        if (c != Ordering::EQ) return c;
    }
    if (u.size() == v.size()) return Ordering::EQ;
    return u.size() < v.size() ? Ordering::GT : Ordering::LT;  // empty word greatest
}

inline Ordering compare(const Ord& o, Word u, Word v);

inline Ordering prime_compare(const Ord& o, Prime a, Prime b) {
    if (a == b) return Ordering::EQ;
    if (a.is_letter() && b.is_letter()) return o.alph->cmp(a.letter_sym(), b.letter_sym());
    if (a.is_op() && b.is_op()) return compare(o, a.payload(), b.payload());
    return a.is_op() ? Ordering::GT : Ordering::LT;  // operator prime beats letter
}

namespace detail {

struct CmpKey {
    uint64_t a, b;
    bool operator==(const CmpKey&) const = default;
};
struct CmpKeyHash {
    size_t operator()(const CmpKey& k) const {
        uint64_t x = k.a * 0x9e3779b97f4a7c15ull ^ k.b;
        x ^= x >> 29;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 32;
        return size_t(x);
    }
};

inline std::unordered_map<CmpKey, int8_t, CmpKeyHash>& cmp_memo() {
    thread_local std::unordered_map<CmpKey, int8_t, CmpKeyHash> m;
    return m;
}

}  // namespace detail

inline Ordering compare(const Ord& o, Word u, Word v) {
    if (u == v) return Ordering::EQ;
    detail::CmpKey key{(uint64_t(o.alph->id()) << 1) | uint64_t(o.kind),
                       (uint64_t(u.id()) << 32) | v.id()};
    auto& memo = detail::cmp_memo();
    if (auto it = memo.find(key); it != memo.end()) return static_cast<Ordering>(it->second);

    Ordering r;
    bool u_op1 = u.size() == 1 && u[0].is_op();
    bool v_op1 = v.size() == 1 && v[0].is_op();
    if (u_op1 && v_op1) {
        r = compare(o, u[0].payload(), v[0].payload());
    } else if (o.kind == Kind::dt && u_op1 && v.size() == 1) {
        r = Ordering::GT;  // operator prime beats letter
    } else if (o.kind == Kind::dt && v_op1 && u.size() == 1) {
        r = Ordering::LT;
    } else {
        int du = o.kind == Kind::dt ? u.deg() - u.odeg() : u.deg();
        int dv = o.kind == Kind::dt ? v.deg() - v.odeg() : v.deg();
        if (du != dv) {
            r = du > dv ? Ordering::GT : Ordering::LT;
        } else if (o.kind == Kind::Dl && u.size() != v.size()) {
            r = u.size() > v.size() ? Ordering::GT : Ordering::LT;
        } else {
            r = Ordering::EQ;
            size_t n = std::min(u.size(), v.size());
            for (size_t i = 0; i < n; ++i) {
                r = prime_compare(o, u[i], v[i]);
                if (r != Ordering::EQ) break;
            }
            // equal degree forbids one prime sequence being a proper prefix
            // of the other (every prime holds at least one letter)
            check(r != Ordering::EQ || u.size() == v.size(),
                  "compare: prefix tie between " + u.str() + " and " + v.str());
        }
    }
    memo.emplace(key, static_cast<int8_t>(r));
    return r;
}

/* The restriction of the full order to primes, packaged for lex_compare. */
struct PrimeOrd {
    Ord o;
    Ordering operator()(Prime a, Prime b) const { return prime_compare(o, a, b); }
};

// ------------------------------------------------------- property sampling
//
// Deterministic random harnesses for the two order axioms.  Each takes the
// comparator under test as a callable so a deliberately broken comparator
// can be fed in to confirm the harness actually finds violations.

struct RandomWords {
    const Alphabet* alph;
    std::mt19937_64 rng;
    int max_deg, max_odeg;

    RandomWords(const Alphabet& a, uint64_t seed, int maxdeg, int maxodeg)
        : alph(&a), rng(seed), max_deg(maxdeg), max_odeg(maxodeg) {}

    size_t pick(size_t n) { return size_t(rng() % n); }

    /* A random word with deg <= deg_budget, odeg <= odeg_budget. */
    Word word(int deg_budget, int odeg_budget) {
        std::vector<Prime> ps;
        int d = 1 + int(pick(size_t(deg_budget)));
        while (d > 0) {
            if (odeg_budget > 0 && d >= 2 && pick(3) == 0) {
                int inner_d = 1 + int(pick(size_t(d - 1)));
                Word inner = word(inner_d, odeg_budget - 1);
                ps.push_back(Prime::op(inner.id()));
                d -= inner.deg() + 1;
                odeg_budget -= inner.odeg() + 1;
            } else {
                ps.push_back(Prime::letter(alph->letters()[pick(alph->letters().size())]));
                d -= 1;
            }
        }
        return make_word(ps);
    }

    Word word() { return word(max_deg, max_odeg); }

    Prime prime() {
        Word w = word();
        if (w.size() == 1) return w[0];
        return Prime::op(w.id());
    }

    StarWord star_context() {
        Word w = word();
        auto cs = contexts(w);
        return cs[pick(cs.size())].first;
    }
};

struct MonomialCx {
    Word u, v;
    StarWord q;
};

/* Searches for u > v with q<u> <= q<v>; nullopt means no violation found. */
template <class CmpFn>
std::optional<MonomialCx> monomial_counterexample(CmpFn&& cmp, const Alphabet& alph,
                                                  int samples, uint64_t seed,
                                                  int max_deg = 6, int max_odeg = 2) {
    RandomWords gen(alph, seed, max_deg, max_odeg);
    for (int i = 0; i < samples; ++i) {
        Word u = gen.word(), v = gen.word();
        Ordering c = cmp(u, v);
        if (c == Ordering::EQ) continue;
        if (c == Ordering::LT) std::swap(u, v);
        StarWord q = gen.star_context();
        if (cmp(substitute(q, u), substitute(q, v)) != Ordering::GT)
            return MonomialCx{u, v, q};
    }
    return std::nullopt;
}

struct InvarianceCx {
    Word w1, w2;
};

/* Searches for a pair of permuted prime tuples on which the full order and
 * the lex extension of its prime restriction disagree. */
template <class CmpFn, class PrimeCmpFn>
std::optional<InvarianceCx> invariance_counterexample(CmpFn&& cmp, PrimeCmpFn&& pcmp,
                                                      const Alphabet& alph, int samples,
                                                      uint64_t seed, int max_deg = 6,
                                                      int max_odeg = 2) {
    RandomWords gen(alph, seed, max_deg, max_odeg);
    for (int i = 0; i < samples; ++i) {
        size_t n = 1 + gen.pick(4);
        std::vector<Prime> ps;
        int budget = std::max(2, max_deg / int(n));
        for (size_t j = 0; j < n; ++j) {
            Word w = gen.word(budget, max_odeg);
            ps.push_back(w.size() == 1 ? w[0] : Prime::op(w.id()));
        }
        std::vector<Prime> qs = ps;
        for (size_t j = qs.size(); j > 1; --j) std::swap(qs[j - 1], qs[gen.pick(j)]);
        Word w1 = make_word(ps), w2 = make_word(qs);
        Ordering full = cmp(w1, w2);
        Ordering lex = lex_compare(std::span<const Prime>(ps), std::span<const Prime>(qs),
                                   pcmp);
        if (full != lex) return InvarianceCx{w1, w2};
    }
    return std::nullopt;
}

}  // namespace olie
