#pragma once

/* The identity catalog and rule instantiation.
 *
 * Each catalog entry is a bilinear template over placeholders X and Y, built
 * from the Lie bracket, the operator, and Scalar coefficients (possibly
 * involving the parameter a).  Instantiating a template at ALSBW arguments
 * u >= v and normalizing to monic form yields a rewrite rule; the set of all
 * such rules (degenerate u = v included when nonzero) is what the engine
 * checks for the diamond property.
 *
 * match_leading finds every rule whose leading word occurs at a given word.
 * Candidates come from the template's associative shapes: expanding the
 * template over a formal two-letter alphabet gives finitely many patterns
 * with one X and one Y each, and the leading word of any instance is one of
 * those patterns evaluated at the argument leading words.  Each candidate is
 * confirmed by full instantiation and leading recomputation, so false
 * positives are impossible and the shape scan only bounds the search.
 */

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "cache.hpp"
#include "lie.hpp"

namespace olie {

struct Template {
    struct Node {
        enum Kind : uint8_t { X, Y, Op, Pair } k;
        int a = -1, b = -1;
    };
    std::vector<Node> nodes;
    std::vector<std::pair<Scalar, int>> terms;

    int x() {
        nodes.push_back({Node::X, -1, -1});
        return int(nodes.size()) - 1;
    }
    int y() {
        nodes.push_back({Node::Y, -1, -1});
        return int(nodes.size()) - 1;
    }
    int op(int a) {
        nodes.push_back({Node::Op, a, -1});
        return int(nodes.size()) - 1;
    }
    int pair(int a, int b) {
        nodes.push_back({Node::Pair, a, b});
        return int(nodes.size()) - 1;
    }
    void term(const Scalar& c, int root) { terms.emplace_back(c, root); }
};

struct Rule {
    std::string family;
    std::string variant;  // "" except for the parametric B families
    int op_degree = 1;
    Kind order = Kind::dt;
    bool parametric = false;  // coefficients involve the parameter
    /* Instance-set policy.  When false, the set keeps only argument pairs
     * (u, v) whose designated leading shape evaluates to a basis word; for
     * swap-antisymmetric rules that picks one representative per unordered
     * pair, and for bracket-led rules it is the classical concatenation
     * criterion.  When true every ordered pair is an instance. */
    bool all_pairs = false;
    Template tmpl;

    std::string name() const {
        return variant.empty() ? family : family + "[" + variant + "]";
    }
};

inline const std::vector<std::string>& family_ids() {
    static const std::vector<std::string> ids = {
        "d1_m",       "d1_right",  "d1_left",   "d1_diff",  "d1_left_m",
        "d1_right_m", "d2_m",      "d2_right",  "d2_left",  "d2_diff",
        "d2_left_m",  "d2_right_m", "rota_baxter", "nijenhuis", "avg",
        "inv_avg",    "newA_right", "newA_left", "newB_right", "newB_left",
        "newC",       "P1",        "P2",        "P3",       "P4",
        "P5"};
    return ids;
}

inline std::vector<std::string> rule_variants(const std::string& family) {
    if (family == "newB_right" || family == "newB_left") return {"case1", "case2"};
    return {""};
}

/* Build one catalog entry.  For newB_right / newB_left the variant selects
 * the generic-parameter form ("case1", the default) or the fixed form at
 * parameter -1 ("case2"). */
inline Rule make_rule(const std::string& family, const std::string& variant = "") {
    Rule r;
    r.family = family;
    Template& t = r.tmpl;
    const Scalar one(1), minus(-1);

    // shorthand builders; opd wraps in as many operators as the family uses
    auto X = [&] { return t.x(); };
    auto Y = [&] { return t.y(); };
    auto Op = [&](int a) { return t.op(a); };
    auto Op2 = [&](int a) { return t.op(t.op(a)); };
    auto Br = [&](int a, int b) { return t.pair(a, b); };

    auto d1_family = [&](auto&& wrap) {
        // the six one-parameter-operator shapes, shared by both depths
        if (family.ends_with("_m") && !family.ends_with("left_m") &&
            !family.ends_with("right_m")) {
            t.term(one, wrap(Br(X(), Y())));
        } else if (family.ends_with("left_m")) {
            t.term(one, Br(wrap(X()), Y()));
        } else if (family.ends_with("right_m")) {
            t.term(one, Br(X(), wrap(Y())));
        } else if (family.ends_with("right")) {
            t.term(one, wrap(Br(X(), Y())));
            t.term(minus, Br(X(), wrap(Y())));
        } else if (family.ends_with("left")) {
            t.term(one, wrap(Br(X(), Y())));
            t.term(minus, Br(wrap(X()), Y()));
        } else {  // diff
            t.term(one, wrap(Br(X(), Y())));
            t.term(minus, Br(wrap(X()), Y()));
            t.term(minus, Br(X(), wrap(Y())));
        }
    };

    // one-sided monomial brackets are not swap-antisymmetric and carry no
    // orientation in their instance sets
    auto one_sided = [&] {
        return family.ends_with("left_m") || family.ends_with("right_m");
    };

    if (family.starts_with("d1_")) {
        r.op_degree = 1;
        r.order = Kind::dt;
        r.all_pairs = one_sided();
        d1_family(Op);
    } else if (family.starts_with("d2_")) {
        r.op_degree = 2;
        r.order = Kind::dt;
        r.all_pairs = one_sided();
        d1_family(Op2);
    } else if (family == "rota_baxter") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        t.term(one, Br(Op(X()), Op(Y())));
        t.term(minus, Op(Br(Op(X()), Y())));
        t.term(minus, Op(Br(X(), Op(Y()))));
    } else if (family == "nijenhuis") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        t.term(one, Br(Op(X()), Op(Y())));
        t.term(minus, Op(Br(Op(X()), Y())));
        t.term(minus, Op(Br(X(), Op(Y()))));
        t.term(one, Op2(Br(X(), Y())));
    } else if (family == "avg") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        t.term(one, Br(Op(X()), Op(Y())));
        t.term(minus, Op(Br(X(), Op(Y()))));
    } else if (family == "inv_avg") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        t.term(one, Br(Op(X()), Op(Y())));
        t.term(minus, Op(Br(Op(X()), Y())));
    } else if (family == "newA_right") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        t.term(one, Br(X(), Op2(Y())));
        t.term(one, Op2(Br(X(), Y())));
        t.term(one, Op(Br(X(), Op(Y()))));
    } else if (family == "newA_left") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        t.term(one, Br(Op2(X()), Y()));
        t.term(one, Op2(Br(X(), Y())));
        t.term(one, Op(Br(Op(X()), Y())));
    } else if (family == "newB_right" || family == "newB_left") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        r.variant = variant.empty() ? "case1" : variant;
        check(r.variant == "case1" || r.variant == "case2",
              "make_rule: unknown variant '" + variant + "' for " + family);
        const bool right = family == "newB_right";
        if (r.variant == "case1") {
            r.parametric = true;
            const Scalar a = Scalar::param();
            t.term(one, Op2(Br(X(), Y())));
            t.term(a, right ? Op(Br(X(), Op(Y()))) : Op(Br(Op(X()), Y())));
            t.term(-(a + Scalar(1)),
                   right ? Br(X(), Op2(Y())) : Br(Op2(X()), Y()));
        } else {
            t.term(one, right ? Op(Br(X(), Op(Y()))) : Op(Br(Op(X()), Y())));
            t.term(minus, Op2(Br(X(), Y())));
        }
    } else if (family == "newC") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        t.term(one, Br(Op2(X()), Y()));
        t.term(one, Op2(Br(X(), Y())));
        t.term(one, Br(X(), Op2(Y())));
        t.term(Scalar(2), Br(Op(X()), Op(Y())));
        t.term(Scalar(-2), Op(Br(Op(X()), Y())));
        t.term(Scalar(-2), Op(Br(X(), Op(Y()))));
    } else if (family == "P1") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        t.term(one, Br(Op2(X()), Y()));
        t.term(minus, Op(Br(Op(X()), Y())));
    } else if (family == "P2") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        t.term(one, Op(Br(Op(X()), Y())));
    } else if (family == "P3") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        t.term(one, Br(X(), Op2(Y())));
        t.term(minus, Op(Br(X(), Op(Y()))));
    } else if (family == "P4") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        r.all_pairs = true;
        t.term(one, Op(Br(X(), Op(Y()))));
    } else if (family == "P5") {
        r.op_degree = 2;
        r.order = Kind::Dl;
        t.term(one, Br(Op(X()), Op(Y())));
    } else {
        fail("make_rule: unknown family '" + family + "'");
    }

    if (!(family == "newB_right" || family == "newB_left"))
        check(variant.empty(), "make_rule: family " + family + " has no variants");
    return r;
}

/* Default argument bounds used by the checker and the CLI. */
inline int default_max_odeg(const Rule& r) { return r.op_degree; }

struct ParamMode {
    bool symbolic = true;
    mpq_class value{0};

    std::string str() const {
        if (symbolic) return "symbolic";
        return value.get_str();
    }
};

/* Monic rule instance at ALSBW arguments, or the zero polynomial when the
 * template vanishes there (e.g. a monomial bracket at u = v). */
inline LiePoly instantiate(const Rule& r, Word u, Word v, const Ord& o,
                           const ParamMode& pm) {
    check(is_alsbw(u, o), "instantiate: first argument not ALSBW: " + u.str());
    check(is_alsbw(v, o), "instantiate: second argument not ALSBW: " + v.str());
    LiePoly lu(o), lv(o);
    lu.add(nlsbw_of(u, o), Scalar(1));
    lv.add(nlsbw_of(v, o), Scalar(1));

    std::function<LiePoly(int)> eval = [&](int n) -> LiePoly {
        const Template::Node& nd = r.tmpl.nodes[size_t(n)];
        switch (nd.k) {
            case Template::Node::X: return lu;
            case Template::Node::Y: return lv;
            case Template::Node::Op: return op_apply(eval(nd.a));
            default: return bracket(eval(nd.a), eval(nd.b));
        }
    };

    LiePoly acc(o);
    for (const auto& [c, root] : r.tmpl.terms) {
        Scalar cc = pm.symbolic ? c : c.eval_at(pm.value);
        if (cc.is_zero()) continue;
        acc.axpy(cc, eval(root));
    }
    if (acc.is_zero()) return acc;
    return acc.monic();
}

namespace detail {

inline const Alphabet& pattern_alphabet() {
    static const Alphabet a("X>Y");
    return a;
}

inline Tree pattern_tree(const Template& t, int n, Sym px, Sym py) {
    const Template::Node& nd = t.nodes[size_t(n)];
    switch (nd.k) {
        case Template::Node::X: return leaf(px);
        case Template::Node::Y: return leaf(py);
        case Template::Node::Op: return op_node(pattern_tree(t, nd.a, px, py));
        default:
            return pair_node(pattern_tree(t, nd.a, px, py),
                             pattern_tree(t, nd.b, px, py));
    }
}

struct PatBinding {
    std::optional<Word> x, y;
};

/* Exact match of a shape against a prime run.  Pattern letters are variable
 * slots binding nonempty runs; pattern operator primes must align with
 * operator primes and match their payloads completely. */
inline void match_pattern(std::span<const Prime> pat, std::span<const Prime> tgt,
                          Sym px, Sym py, const PatBinding& cur,
                          std::vector<PatBinding>& out) {
    if (pat.empty()) {
        if (tgt.empty()) out.push_back(cur);
        return;
    }
    const Prime p0 = pat.front();
    if (p0.is_letter()) {
        const size_t rest = pat.size() - 1;
        if (tgt.size() < 1 + rest) return;
        for (size_t len = 1; len + rest <= tgt.size(); ++len) {
            Word bound = make_word(tgt.first(len));
            PatBinding nb = cur;
            if (p0.letter_sym() == px)
                nb.x = bound;
            else if (p0.letter_sym() == py)
                nb.y = bound;
            else
                return;
            match_pattern(pat.subspan(1), tgt.subspan(len), px, py, nb, out);
        }
    } else {
        if (!tgt.front().is_op()) return;
        std::vector<PatBinding> subs;
        match_pattern(std::span<const Prime>(p0.payload().primes()),
                      std::span<const Prime>(tgt.front().payload().primes()), px, py,
                      cur, subs);
        for (const auto& nb : subs)
            match_pattern(pat.subspan(1), tgt.subspan(1), px, py, nb, out);
    }
}

/* Substitute argument words for the pattern letters of an associative shape,
 * recursing into operator payloads. */
inline Word splice_pattern(Word shape, Sym px, Sym py, Word u, Word v) {
    std::vector<Prime> ps;
    for (Prime p : shape.primes()) {
        if (p.is_letter()) {
            const Word& arg = (p.letter_sym() == px) ? u : v;
            ps.insert(ps.end(), arg.primes().begin(), arg.primes().end());
        } else {
            ps.push_back(Prime::op(
                splice_pattern(p.payload(), px, py, u, v).id()));
        }
    }
    return make_word(ps);
}

}  // namespace detail

/* Associative shapes whose evaluations at argument leading words are the
 * only possible instance leading words. */
inline std::vector<Word> leading_patterns(const Rule& r) {
    const Alphabet& pa = detail::pattern_alphabet();
    const Sym px = pa.letters()[0], py = pa.letters()[1];
    std::set<uint32_t> seen;
    std::vector<Word> out;
    for (const auto& [c, root] : r.tmpl.terms) {
        Tree pt = detail::pattern_tree(r.tmpl, root, px, py);
        for (auto [wid, k] : detail::expand_terms(pt))
            if (seen.insert(wid).second) out.push_back(Word(wid));
    }
    std::sort(out.begin(), out.end(),
              [](Word a, Word b) { return a.str() < b.str(); });
    return out;
}

class RuleSet {
  public:
    RuleSet(Rule r, const Ord& o, ParamMode pm = {})
        : r_(std::move(r)), o_(o), pm_(std::move(pm)) {
        patterns_ = leading_patterns(r_);
        px_ = detail::pattern_alphabet().letters()[0];
        py_ = detail::pattern_alphabet().letters()[1];
        if (!r_.all_pairs) {
            Ord po{&detail::pattern_alphabet(), r_.order};
            LiePoly sp = instantiate(r_, letter_word(px_), letter_word(py_), po, pm_);
            check(!sp.is_zero(), "RuleSet: rule vanishes at distinct letters");
            shape_ = sp.leading_word();
        }
    }

    RuleSet(const RuleSet&) = delete;
    RuleSet& operator=(const RuleSet&) = delete;

    const Rule& rule() const { return r_; }
    const Ord& ord() const { return o_; }
    const ParamMode& param() const { return pm_; }
    const std::vector<Word>& patterns() const { return patterns_; }

    std::string instance_label(Word u, Word v) const {
        return r_.name() + "(" + u.str() + " ; " + v.str() + ")";
    }

    /* Whether the ordered argument pair (u, v) belongs to the rule's instance
     * set.  Equal arguments always do (the instance may still vanish).  For
     * one-orientation rules the test is whether the designated leading shape,
     * evaluated at the pair, is a basis word; that admits exactly one of
     * (u, v) and (v, u) for distinct basis words. */
    bool pair_in_set(Word u, Word v) const {
        if (r_.all_pairs || u == v) return true;
        return is_alsbw(detail::splice_pattern(shape_, px_, py_, u, v), o_);
    }

    /* Monic instance at an admitted pair, or null when it vanishes.  Served
     * from a bounded cache; the returned pointer stays valid regardless of
     * eviction. */
    std::shared_ptr<const LiePoly> instance(Word u, Word v) const {
        check(pair_in_set(u, v),
              "RuleSet::instance: argument pair is outside the instance set");
        const std::array<uint32_t, 2> key{u.id(), v.id()};
        if (auto hit = inst_.get(key)) return *hit;
        LiePoly p = instantiate(r_, u, v, o_, pm_);
        std::shared_ptr<const LiePoly> sp;
        if (!p.is_zero()) sp = std::make_shared<const LiePoly>(std::move(p));
        return inst_.put(key, std::move(sp));
    }

    struct Match {
        StarWord q;
        Word u, v;
    };

    /* Every (placement, argument pair) whose monic instance has leading word
     * exactly at the given position of w.  Deterministic order: contexts of
     * w from the left outward, shapes in fixed order, split lengths
     * ascending. */
    std::vector<Match> match_leading(Word w) const {
        std::vector<Match> out;
        for (const auto& [q, p] : contexts(w)) {
            std::set<std::pair<uint32_t, uint32_t>> taken;
            for (Word pat : patterns_) {
                if (p.odeg() < pat.odeg() || p.deg() < pat.deg() ||
                    p.size() < pat.size())
                    continue;
                std::vector<detail::PatBinding> bs;
                detail::match_pattern(std::span<const Prime>(pat.primes()),
                                      std::span<const Prime>(p.primes()), px_, py_,
                                      {}, bs);
                for (const auto& b : bs) {
                    if (!b.x || !b.y) continue;
                    Word u = *b.x, v = *b.y;
                    if (!is_alsbw(u, o_) || !is_alsbw(v, o_)) continue;
                    if (!pair_in_set(u, v)) continue;
                    if (taken.count({u.id(), v.id()})) continue;
                    const auto ins = instance(u, v);
                    if (!ins || ins->leading_word() != p) continue;
                    taken.insert({u.id(), v.id()});
                    out.push_back(Match{q, u, v});
                }
            }
        }
        return out;
    }

  private:
    Rule r_;
    Ord o_;
    ParamMode pm_;
    std::vector<Word> patterns_;
    Word shape_;  // designated leading shape; unset for all-pairs rules
    Sym px_ = 0, py_ = 0;
    mutable detail::LruCache<std::array<uint32_t, 2>, LiePoly, detail::IdsHash>
        inst_{detail::cache_capacity("OLIE_INSTANCE_CACHE", 16384)};
};

}  // namespace olie
