/* olie-gsb: command-line surface over the engine.
 *
 * Exit codes: 0 success (for check-gs: closed at the given bounds), 1 a
 * non-trivial composition was found (so CI can assert negatives), 2 usage,
 * IO, or resource-cap errors.  Output for a fixed configuration does not
 * depend on the job count; wall-clock timing is opt-in for that reason.
 */

#include <CLI11.hpp>

#include <olie/report_json.hpp>
#include <olie/rewrite.hpp>
#include <olie/text.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace olie;

namespace {

const char* ord_name(Ordering o) {
    switch (o) {
        case Ordering::LT: return "LT";
        case Ordering::EQ: return "EQ";
        default: return "GT";
    }
}

size_t env_size(const char* name, size_t dflt) {
    const char* v = std::getenv(name);
    if (!v || !*v) return dflt;
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    check(end && *end == '\0', std::string("bad ") + name + ": '" + v + "'");
    return size_t(n);
}

/* Common per-subcommand configuration; every knob has a flag, and the
 * parallelism / cap knobs also read environment defaults. */
struct Opts {
    std::string alphabet = "x>y>z";
    std::string order;  // empty: the family's designated order
    std::string family;
    std::string variant;
    std::string alpha;      // numeric parameter sample; empty means symbolic
    std::string report;     // JSON output path; empty prints to stdout
    int max_deg = 3;
    int max_odeg = -1;      // -1: the family's operator degree
    int max_dep = -1;
    int ambient_cap = 0;
    size_t jobs = env_size("OLIE_JOBS", 1);
    size_t max_comps = env_size("OLIE_MAX_COMPOSITIONS", 2'000'000);
    size_t max_steps = env_size("OLIE_MAX_REDUCE_STEPS", 100'000);
    bool timing = false;
    bool traces = false;
    bool json = false;

    void add_alphabet(CLI::App* c) {
        c->add_option("--alphabet", alphabet, "letters, greatest first, e.g. \"x>y>z\"");
    }
    void add_order(CLI::App* c, bool required) {
        auto* o = c->add_option("--order", order, "monomial order: dt | Dl");
        if (required) o->required();
    }
    void add_family(CLI::App* c) {
        c->add_option("--family", family, "identity family id (see list-families)")
            ->required();
        c->add_option("--variant", variant, "family variant, e.g. case1 | case2");
        c->add_option("--alpha", alpha,
                      "numeric parameter sample, e.g. 2/3 (default: symbolic)");
        c->add_flag("--symbolic", "keep the parameter symbolic (the default)");
    }
    void add_bounds(CLI::App* c) {
        c->add_option("--max-deg", max_deg, "argument degree bound");
        c->add_option("--max-odeg", max_odeg,
                      "argument operator-degree bound (default: operator degree of the family)");
        c->add_option("--max-dep", max_dep, "argument depth bound (default: max-odeg)");
    }

    Kind kind(const Rule* r) const {
        if (!order.empty()) return kind_from_string(order);
        check(r != nullptr, "an --order is required here");
        return r->order;
    }
    ParamMode pm() const {
        if (alpha.empty()) return {};
        ParamMode m;
        m.symbolic = false;
        m.value = mpq_class(alpha);
        m.value.canonicalize();
        return m;
    }
    Bounds bounds(const Rule& r) const {
        return Bounds{max_deg, max_odeg >= 0 ? max_odeg : default_max_odeg(r),
                      max_dep, ambient_cap};
    }
    void emit(const nlohmann::ordered_json& j) const {
        if (report.empty()) {
            std::cout << j.dump(2) << "\n";
            return;
        }
        std::ofstream out(report);
        check(out.good(), "cannot open report file '" + report + "'");
        out << j.dump(2) << "\n";
        check(out.good(), "cannot write report file '" + report + "'");
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Groebner-Shirshov checker for operated Lie identities"};
    app.require_subcommand(1);
    Opts o;

    auto* list = app.add_subcommand("list-families", "catalog of identity families");

    auto* cmp = app.add_subcommand("compare", "compare two words under an order");
    o.add_alphabet(cmp);
    o.add_order(cmp, true);
    std::vector<std::string> cmp_words;
    cmp->add_option("words", cmp_words, "two words")->expected(2);

    auto* lsw = app.add_subcommand("lsw", "Lyndon-Shirshov word utilities");
    lsw->require_subcommand(1);
    auto* lsw_is = lsw->add_subcommand("is-alsw", "test words for the ALSW property");
    auto* lsw_br = lsw->add_subcommand("bracket", "Shirshov standard bracketing");
    auto* lsw_en = lsw->add_subcommand("enumerate", "basis words within bounds");
    std::vector<std::string> lsw_words;
    for (CLI::App* c : {lsw_is, lsw_br}) {
        o.add_alphabet(c);
        o.add_order(c, true);
        c->add_option("words", lsw_words, "input words")->required();
        c->add_flag("--json", o.json, "JSON-lines output");
    }
    o.add_alphabet(lsw_en);
    o.add_order(lsw_en, true);
    o.add_bounds(lsw_en);
    lsw_en->add_flag("--json", o.json, "JSON-lines output");

    auto* norm = app.add_subcommand("normalize",
                                    "rewrite a bracketed expression in the basis");
    o.add_alphabet(norm);
    o.add_order(norm, true);
    std::string norm_expr;
    norm->add_option("expr", norm_expr, "Lie expression, e.g. \"((x y) z) - (x (y z))\"")
        ->required();

    auto* inst = app.add_subcommand("instantiate", "rule instance at argument words");
    o.add_alphabet(inst);
    o.add_family(inst);
    o.add_order(inst, false);
    std::vector<std::string> inst_words;
    inst->add_option("words", inst_words, "two argument words")->expected(2);

    auto* red = app.add_subcommand("reduce", "head-reduce an expression by a family");
    o.add_alphabet(red);
    o.add_family(red);
    o.add_order(red, false);
    std::string red_expr, red_below;
    red->add_option("expr", red_expr, "Lie expression")->required();
    red->add_option("--below", red_below, "ambient word guard");
    red->add_flag("--trace", o.traces, "print the reduction trace");

    auto* gs = app.add_subcommand("check-gs", "bounded composition check");
    o.add_alphabet(gs);
    o.add_family(gs);
    o.add_order(gs, false);
    o.add_bounds(gs);
    gs->add_option("--ambient-cap", o.ambient_cap,
                   "skip compositions above this ambient degree (0: none)");
    gs->add_option("--jobs", o.jobs, "worker threads (env OLIE_JOBS)");
    gs->add_option("--max-compositions", o.max_comps,
                   "composition cap (env OLIE_MAX_COMPOSITIONS)");
    gs->add_option("--max-reduce-steps", o.max_steps,
                   "per-composition step cap (env OLIE_MAX_REDUCE_STEPS)");
    gs->add_option("--report", o.report, "write the JSON report here");
    gs->add_flag("--timing", o.timing, "include wall time in the report");
    gs->add_flag("--trace", o.traces, "keep traces for trivial compositions too");

    auto* cd = app.add_subcommand("cd-check", "dimension cross-check in a degree slice");
    o.add_alphabet(cd);
    cd->add_option("--family", o.family, "identity family (omit: no rules)");
    cd->add_option("--variant", o.variant, "family variant");
    cd->add_option("--alpha", o.alpha, "numeric parameter sample");
    o.add_order(cd, false);
    cd->add_option("--max-deg", o.max_deg, "slice degree bound");
    cd->add_option("--report", o.report, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*list) {
            for (const auto& id : family_ids()) {
                const Rule r = make_rule(id);
                std::cout << id << "\torder=" << kind_name(r.order)
                          << "\top_degree=" << r.op_degree;
                const auto vars = rule_variants(id);
                if (vars.size() > 1) {
                    std::cout << "\tvariants=";
                    for (size_t i = 0; i < vars.size(); ++i)
                        std::cout << (i ? "," : "") << vars[i];
                }
                std::cout << "\n";
            }
            return 0;
        }

        Alphabet alph(o.alphabet);

        if (*cmp) {
            Ord ord{&alph, o.kind(nullptr)};
            const Word u = parse_word(alph, cmp_words[0]);
            const Word v = parse_word(alph, cmp_words[1]);
            std::cout << ord_name(compare(ord, u, v)) << "\n";
            return 0;
        }

        if (*lsw) {
            Ord ord{&alph, o.kind(nullptr)};
            if (*lsw_is) {
                for (const auto& s : lsw_words) {
                    const Word w = parse_word(alph, s);
                    if (o.json) {
                        nlohmann::ordered_json j;
                        j["word"] = w.str();
                        j["alsw"] = is_alsw(w, ord);
                        std::cout << j.dump() << "\n";
                    } else {
                        std::cout << w.str() << "\t"
                                  << (is_alsw(w, ord) ? "true" : "false") << "\n";
                    }
                }
            } else if (*lsw_br) {
                for (const auto& s : lsw_words) {
                    const Word w = parse_word(alph, s);
                    const Tree t = shirshov_bracketing(w, ord);
                    if (o.json) {
                        nlohmann::ordered_json j;
                        j["word"] = w.str();
                        j["bracket"] = t.str();
                        std::cout << j.dump() << "\n";
                    } else {
                        std::cout << w.str() << "\t" << t.str() << "\n";
                    }
                }
            } else {
                const int od = o.max_odeg >= 0 ? o.max_odeg : o.max_deg;
                const int dp = o.max_dep >= 0 ? o.max_dep : od;
                for (Word w : enumerate_alsbw(ord, o.max_deg, od, dp)) {
                    if (o.json) {
                        nlohmann::ordered_json j;
                        j["word"] = w.str();
                        std::cout << j.dump() << "\n";
                    } else {
                        std::cout << w.str() << "\n";
                    }
                }
            }
            return 0;
        }

        if (*norm) {
            Ord ord{&alph, o.kind(nullptr)};
            LiePoly p(ord);
            for (const auto& [c, t] : parse_poly_terms(alph, norm_expr))
                p.axpy(c, to_basis(t, ord));
            std::cout << p.str() << "\n";
            return 0;
        }

        if (*cd && o.family.empty()) {
            Ord ord{&alph, o.kind(nullptr)};
            const CDReport rep = cd_dimension_check(nullptr, ord, o.max_deg);
            o.emit(to_json(rep));
            return rep.balanced ? 0 : 1;
        }

        // the remaining subcommands revolve around one rule family
        Rule rule = make_rule(o.family, o.variant);
        Ord ord{&alph, o.kind(&rule)};
        if (!o.order.empty()) rule.order = ord.kind;
        RuleSet rs(std::move(rule), ord, o.pm());

        if (*inst) {
            const Word u = parse_word(alph, inst_words[0]);
            const Word v = parse_word(alph, inst_words[1]);
            check(rs.pair_in_set(u, v), "argument pair (" + u.str() + ", " +
                                            v.str() + ") is outside the instance set");
            const auto f = rs.instance(u, v);
            std::cout << (f ? f->str() : "0") << "\n";
            return 0;
        }

        if (*red) {
            LiePoly p(ord);
            for (const auto& [c, t] : parse_poly_terms(alph, red_expr))
                p.axpy(c, to_basis(t, ord));
            Engine eng(rs);
            std::optional<Word> below;
            if (!red_below.empty()) below = parse_word(alph, red_below);
            ReduceResult rr = eng.reduce(std::move(p), below, o.max_steps);
            if (o.traces)
                for (const TraceStep& t : rr.trace)
                    std::cout << "# " << t.step << "\t" << t.rule << "\t@ "
                              << t.placement << "\tcoeff " << t.coeff.str()
                              << "\t" << t.before.str() << " -> "
                              << (t.after ? t.after->str() : "0") << "\n";
            check(!rr.hit_cap, "reduction step cap exceeded");
            std::cout << rr.remainder.str() << "\n";
            return 0;
        }

        if (*gs) {
            CheckCaps caps{o.max_comps, o.max_steps, o.traces};
            const GSReport rep = check_gs(rs, o.bounds(rs.rule()), o.jobs, caps);
            o.emit(to_json(rep, o.timing, o.traces));
            if (rep.verdict == "GS-at-scale") return 0;
            if (rep.verdict == "not-GS-at-scale") return 1;
            std::cerr << "olie-gsb: resource caps exceeded; the check is incomplete\n";
            return 2;
        }

        if (*cd) {
            const CDReport rep = cd_dimension_check(&rs, ord, o.max_deg);
            o.emit(to_json(rep));
            return rep.balanced ? 0 : 1;
        }
    } catch (const error& e) {
        std::cerr << "olie-gsb: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "olie-gsb: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
