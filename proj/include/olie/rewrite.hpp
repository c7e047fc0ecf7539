#pragma once

/* The rewriting engine: special normal s-words, head reduction with traces,
 * composition discovery, the bounded diamond check, and a dimension-count
 * cross-check by exact linear algebra.
 *
 * A special normal s-word for a rule instance s and placement q is a Lie
 * element V with leading word q<sbar> (coefficient 1) whose associative
 * expansion equals q<expand(s)> plus a combination of q_i<expand(s)> with
 * q_i<sbar> strictly below q<sbar>.  Construction: start from the standard
 * bracketing of q<sbar> and cancel the residual top-down, either absorbing
 * the current residual leading via another placement of sbar or correcting
 * V by a bracketing of the leading word; both moves strictly lower the
 * residual leading, and a depth-first search over the (rare) choice points
 * finds a valid combination or fails loudly.  The three defining properties
 * hold by construction and are asserted.
 */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "olpi.hpp"

namespace olie {

namespace detail {

inline StarWord star_then(Word tail) {
    std::vector<Prime> ps;
    ps.push_back(Prime::letter(star_sym()));
    ps.insert(ps.end(), tail.primes().begin(), tail.primes().end());
    return StarWord(make_word(ps));
}

inline StarWord then_star(Word head) {
    std::vector<Prime> ps(head.primes().begin(), head.primes().end());
    ps.push_back(Prime::letter(star_sym()));
    return StarWord(make_word(ps));
}

inline AssocPoly substitute_all(const StarWord& q, const AssocPoly& p) {
    AssocPoly out(p.ord());
    for (const auto& [t, c] : p.terms()) out.add(substitute(q, t), c);
    return out;
}

}  // namespace detail

struct SWord {
    StarWord q;
    Word u, v;  // rule instance arguments
    LiePoly value;
};

inline SWord special_sword(const RuleSet& rs, const StarWord& q, Word u, Word v) {
    const Ord& o = rs.ord();
    const auto s = rs.instance(u, v);
    check(s != nullptr, "special_sword: instance vanishes at (" + u.str() + ", " +
                            v.str() + ")");
    const Word sbar = s->leading_word();
    const Word w = substitute(q, sbar);
    check(is_alsbw(w, o), "special_sword: " + w.str() + " is not ALSBW");
    if (q.is_identity()) return {q, u, v, *s};

    const AssocPoly es = iota(*s);
    const AssocPoly base = detail::substitute_all(q, es);

    struct State {
        AssocPoly r;
        LiePoly V;
    };
    State st{AssocPoly(o), LiePoly(o)};
    st.V.add(nlsbw_of(w, o), Scalar(1));
    st.r = iota(st.V);
    st.r.axpy(Scalar(-1), base);

    constexpr size_t kStepCap = 20000;
    size_t steps = 0;

    std::function<bool(State&)> search = [&](State& st_) -> bool {
        while (!st_.r.is_zero()) {
            check(++steps <= kStepCap, "special_sword: step cap exceeded at " +
                                           w.str());
            auto [m, c] = st_.r.leading();
            check(compare(o, w, m) == Ordering::GT,
                  "special_sword: residual " + m.str() + " not below " + w.str());
            std::vector<StarWord> qs = placements(m, sbar);
            const bool correctable = is_alsbw(m, o);
            auto apply = [&](State& target, size_t opt) {
                if (opt < qs.size()) {
                    target.r.axpy(-c, detail::substitute_all(qs[opt], es));
                } else {
                    target.V.add(nlsbw_of(m, o), -c);
                    for (auto [wid, k] : detail::expand_terms(nlsbw_of(m, o)))
                        target.r.add(Word(wid), -(c * Scalar(k)));
                }
            };
            const size_t options = qs.size() + (correctable ? 1 : 0);
            if (options == 0) return false;
            if (options == 1) {
                apply(st_, 0);
                continue;
            }
            for (size_t i = 0; i < options; ++i) {
                State branch = st_;
                apply(branch, i);
                if (search(branch)) {
                    st_ = std::move(branch);
                    return true;
                }
            }
            return false;
        }
        return true;
    };

    check(search(st), "special_sword: no valid construction for placement " +
                          q.str() + " of " + sbar.str());
    auto [lt, lc] = st.V.leading();
    check(lt.forget() == w && lc.is_one(),
          "special_sword: constructed value has wrong leading term");
    return {q, u, v, std::move(st.V)};
}

struct TraceStep {
    size_t step = 0;
    std::string rule;
    std::string placement;
    Scalar coeff;
    Word before;
    std::optional<Word> after;
};

struct ReduceResult {
    LiePoly remainder;
    std::vector<TraceStep> trace;
    bool hit_cap = false;
};

struct Composition {
    std::string kind;  // "intersection" or "including"
    Word w;
    Word fu, fv, gu, gv;
    LiePoly value;
};

class Engine {
  public:
    explicit Engine(const RuleSet& rs) : rs_(rs) {}

    const RuleSet& rules() const { return rs_; }

    std::shared_ptr<const LiePoly> sword_value(const StarWord& q, Word u,
                                               Word v) const {
        const std::array<uint32_t, 3> key{q.word().id(), u.id(), v.id()};
        if (auto hit = sw_.get(key)) return *hit;
        SWord sw = special_sword(rs_, q, u, v);
        return sw_.put(key,
                       std::make_shared<const LiePoly>(std::move(sw.value)));
    }

    /* Head reduction.  Each step fires the first matching rule placement in
     * the deterministic match order (leftmost-innermost position, then shape
     * and split order); pick_last flips the choice to probe confluence.  If
     * below is set, every head along the way must lie strictly under it. */
    ReduceResult reduce(LiePoly h, std::optional<Word> below, size_t max_steps,
                        bool pick_last = false) const {
        const Ord& o = rs_.ord();
        ReduceResult res{std::move(h), {}, false};
        while (!res.remainder.is_zero()) {
            auto [t, c] = res.remainder.leading();
            const Word m = t.forget();
            if (below)
                check(compare(o, *below, m) == Ordering::GT,
                      "reduce: head " + m.str() + " not below " + below->str());
            auto matches = rs_.match_leading(m);
            if (matches.empty()) break;
            if (res.trace.size() >= max_steps) {
                res.hit_cap = true;
                break;
            }
            const auto& pick = pick_last ? matches.back() : matches.front();
            const auto V = sword_value(pick.q, pick.u, pick.v);
            res.remainder.axpy(-c, *V);
            TraceStep ts;
            ts.step = res.trace.size() + 1;
            ts.rule = rs_.instance_label(pick.u, pick.v);
            ts.placement = pick.q.str();
            ts.coeff = c;
            ts.before = m;
            if (!res.remainder.is_zero()) {
                const Word m2 = res.remainder.leading_word();
                check(compare(o, m, m2) == Ordering::GT,
                      "reduce: leading did not descend at " + m.str());
                ts.after = m2;
            }
            res.trace.push_back(std::move(ts));
        }
        return res;
    }

    /* All compositions of the ordered instance pair (f, g): intersections
     * where a proper suffix of fbar overlaps a proper prefix of gbar and the
     * joined word is ALSBW, and inclusions of gbar anywhere inside fbar. */
    std::vector<Composition> compositions(Word fu, Word fv, Word gu, Word gv,
                                          int ambient_deg_cap = 0) const {
        const Ord& o = rs_.ord();
        const auto f = rs_.instance(fu, fv);
        const auto g = rs_.instance(gu, gv);
        std::vector<Composition> out;
        if (!f || !g) return out;
        const Word fb = f->leading_word(), gb = g->leading_word();

        for (size_t len = 1; len < std::min(fb.size(), gb.size()); ++len) {
            bool match = true;
            for (size_t i = 0; i < len && match; ++i)
                match = fb[fb.size() - len + i] == gb[i];
            if (!match) continue;
            const Word tail = subrange(gb, len, gb.size() - len);
            const Word head = subrange(fb, 0, fb.size() - len);
            const Word w = concat(fb, tail);
            if (ambient_deg_cap > 0 && w.deg() > ambient_deg_cap) continue;
            if (!is_alsbw(w, o)) continue;
            const StarWord qf = detail::star_then(tail);
            const StarWord qg = detail::then_star(head);
            LiePoly val = *sword_value(qf, fu, fv);
            val.axpy(Scalar(-1), *sword_value(qg, gu, gv));
            if (!val.is_zero())
                check(compare(o, w, val.leading_word()) == Ordering::GT,
                      "compositions: intersection value not below ambient word");
            out.push_back({"intersection", w, fu, fv, gu, gv, std::move(val)});
        }

        if (ambient_deg_cap == 0 || fb.deg() <= ambient_deg_cap) {
            for (const StarWord& q : placements(fb, gb)) {
                LiePoly val = *f;
                val.axpy(Scalar(-1), *sword_value(q, gu, gv));
                if (!val.is_zero())
                    check(compare(o, fb, val.leading_word()) == Ordering::GT,
                          "compositions: including value not below ambient word");
                out.push_back({"including", fb, fu, fv, gu, gv, std::move(val)});
            }
        }
        return out;
    }

  private:
    const RuleSet& rs_;
    mutable detail::LruCache<std::array<uint32_t, 3>, LiePoly, detail::IdsHash>
        sw_{detail::cache_capacity("OLIE_SWORD_CACHE", 8192)};
};

struct Bounds {
    int max_deg = 3;
    int max_odeg = 1;
    int max_dep = -1;         // -1: same as max_odeg
    int ambient_deg_cap = 0;  // 0: uncapped

    int dep() const { return max_dep >= 0 ? max_dep : max_odeg; }
};

inline std::vector<std::pair<Word, Word>> enumerate_instances(const RuleSet& rs,
                                                              const Bounds& b) {
    auto args = enumerate_alsbw(rs.ord(), b.max_deg, b.max_odeg, b.dep());
    std::vector<std::pair<Word, Word>> out;
    for (size_t i = 0; i < args.size(); ++i)
        for (size_t j = 0; j < args.size(); ++j)
            if (rs.pair_in_set(args[i], args[j]) && rs.instance(args[i], args[j]))
                out.emplace_back(args[i], args[j]);
    return out;
}

struct CompositionReport {
    std::string kind;
    std::string w;
    std::string f, g;
    bool trivial = false;
    bool capped = false;
    size_t steps = 0;  // reduction length; the trace itself is kept only for
                       // non-trivial witnesses unless keep_trivial_traces is set
    std::vector<TraceStep> trace;
};

struct GSReport {
    std::string family;
    Kind order = Kind::dt;
    Bounds bounds;
    ParamMode param;
    bool parametric = false;
    size_t instance_count = 0;
    std::vector<CompositionReport> compositions;
    std::string verdict;  // "GS-at-scale" | "not-GS-at-scale" | "incomplete"
    long long elapsed_ms = 0;
};

struct CheckCaps {
    size_t max_compositions = 2'000'000;
    size_t max_reduce_steps = 100'000;
    bool keep_trivial_traces = false;
};

/* Compositions are discovered and reduced pair by pair so that at most one
 * composition value is alive per worker; holding the whole list would run to
 * gigabytes for the wide-shape families.  Workers claim (f, g) index pairs
 * and write into per-pair slots, so the report order (f ascending, then g,
 * then discovery order within the pair) does not depend on the job count. */
inline GSReport check_gs(const RuleSet& rs, const Bounds& b, size_t jobs = 1,
                         const CheckCaps& caps = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    Engine eng(rs);
    GSReport rep;
    rep.family = rs.rule().name();
    rep.order = rs.ord().kind;
    rep.bounds = b;
    rep.param = rs.param();
    rep.parametric = rs.rule().parametric;

    const auto inst = enumerate_instances(rs, b);
    rep.instance_count = inst.size();

    const size_t npairs = inst.size() * inst.size();
    std::vector<std::vector<CompositionReport>> slots(npairs);
    std::atomic<size_t> next{0};
    std::atomic<size_t> total{0};
    std::atomic<bool> truncated{false};
    std::atomic<bool> capped{false};
    auto worker = [&] {
        for (;;) {
            const size_t k = next.fetch_add(1);
            if (k >= npairs || truncated.load()) return;
            const auto& [fu, fv] = inst[k / inst.size()];
            const auto& [gu, gv] = inst[k % inst.size()];
            auto found =
                eng.compositions(fu, fv, gu, gv, b.ambient_deg_cap);
            if (total.fetch_add(found.size()) + found.size() >
                caps.max_compositions) {
                truncated.store(true);
                return;
            }
            auto& out = slots[k];
            out.reserve(found.size());
            for (auto& c : found) {
                CompositionReport r;
                r.kind = c.kind;
                r.w = c.w.str();
                r.f = rs.instance_label(c.fu, c.fv);
                r.g = rs.instance_label(c.gu, c.gv);
                ReduceResult rr = eng.reduce(std::move(c.value), c.w,
                                             caps.max_reduce_steps);
                r.trivial = rr.remainder.is_zero() && !rr.hit_cap;
                r.capped = rr.hit_cap;
                if (rr.hit_cap) capped.store(true);
                r.steps = rr.trace.size();
                if (!r.trivial || caps.keep_trivial_traces)
                    r.trace = std::move(rr.trace);
                out.push_back(std::move(r));
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    size_t count = 0;
    for (const auto& s : slots) count += s.size();
    rep.compositions.reserve(count);
    for (auto& s : slots)
        for (auto& r : s) rep.compositions.push_back(std::move(r));

    const bool any_nontrivial = std::any_of(
        rep.compositions.begin(), rep.compositions.end(),
        [](const CompositionReport& c) { return !c.trivial && !c.capped; });
    if (any_nontrivial)
        rep.verdict = "not-GS-at-scale";
    else if (truncated.load() || capped.load())
        rep.verdict = "incomplete";
    else
        rep.verdict = "GS-at-scale";

    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rep;
}

struct CDReport {
    std::string family;
    Kind order = Kind::dt;
    int max_deg = 0;
    size_t slice_dim = 0;
    size_t irreducible = 0;
    size_t rank = 0;
    bool balanced = false;
};

/* Within the slice spanned by basis trees of deg <= max_deg: count the
 * irreducible basis words, compute the rank of the span of all special
 * s-word values leading in the slice, and compare against the slice
 * dimension.  A null rule set leaves the whole slice irreducible. */
inline CDReport cd_dimension_check(const RuleSet* rs, const Ord& o, int max_deg) {
    CDReport rep;
    rep.family = rs ? rs->rule().name() : "(none)";
    rep.order = o.kind;
    rep.max_deg = max_deg;

    const auto basis = enumerate_alsbw(o, max_deg, max_deg, max_deg);
    rep.slice_dim = basis.size();
    std::map<uint32_t, size_t> col;
    for (size_t i = 0; i < basis.size(); ++i) col[basis[i].id()] = i;

    std::map<size_t, std::vector<Scalar>> pivots;  // pivot column -> unit row
    auto add_row = [&](std::vector<Scalar> row) {
        for (size_t k = 0; k < row.size(); ++k) {
            if (row[k].is_zero()) continue;
            auto it = pivots.find(k);
            if (it == pivots.end()) {
                const Scalar inv = row[k].inverse();
                for (size_t j = k; j < row.size(); ++j) row[j] *= inv;
                pivots.emplace(k, std::move(row));
                return;
            }
            const Scalar f = row[k];
            const auto& p = it->second;
            for (size_t j = k; j < row.size(); ++j) row[j] -= f * p[j];
        }
    };

    if (rs) {
        Engine eng(*rs);
        for (Word w : basis) {
            auto matches = rs->match_leading(w);
            if (matches.empty()) {
                ++rep.irreducible;
                continue;
            }
            for (const auto& m : matches) {
                const auto sv = eng.sword_value(m.q, m.u, m.v);
                const LiePoly& val = *sv;
                std::vector<Scalar> row(basis.size(), Scalar(0));
                for (const auto& [t, c] : val.terms()) {
                    auto it = col.find(t.forget().id());
                    check(it != col.end(),
                          "cd_dimension_check: value escapes the slice");
                    row[it->second] = c;
                }
                add_row(std::move(row));
            }
        }
    } else {
        rep.irreducible = basis.size();
    }

    rep.rank = pivots.size();
    rep.balanced = rep.irreducible + rep.rank == rep.slice_dim;
    return rep;
}

}  // namespace olie
