#include <catch2/catch_amalgamated.hpp>

#include <olie/olpi.hpp>
#include <olie/text.hpp>

#include <set>
#include <string>
#include <vector>

using namespace olie;

static const Alphabet& axyz() {
    static Alphabet a("x>y>z");
    return a;
}

static Word W(const char* s) { return parse_word(axyz(), s); }
static Tree T(const char* s) { return parse_tree(axyz(), s); }

static Ord ord_of(const Rule& r) { return Ord{&axyz(), r.order}; }

/* A pattern evaluated at argument leading words: X and Y splice in the prime
 * runs of u and v at every level. */
static Word eval_pattern(Word pat, Word u, Word v) {
    std::vector<Prime> out;
    for (Prime p : pat.primes()) {
        if (p.is_letter()) {
            const Word& w = sym_name(p.letter_sym()) == "X" ? u : v;
            out.insert(out.end(), w.primes().begin(), w.primes().end());
        } else {
            out.push_back(Prime::op(eval_pattern(p.payload(), u, v).id()));
        }
    }
    return make_word(out);
}

TEST_CASE("catalog inventory") {
    const auto& ids = family_ids();
    REQUIRE(ids.size() == 26);
    REQUIRE(std::set<std::string>(ids.begin(), ids.end()).size() == 26);

    int deg1 = 0, deg2 = 0;
    for (const auto& id : ids) {
        for (const auto& var : rule_variants(id)) {
            Rule r = make_rule(id, var);
            REQUIRE(r.family == id);
            REQUIRE(!r.tmpl.terms.empty());
            if (r.op_degree == 1) {
                REQUIRE(r.order == Kind::dt);
            } else {
                REQUIRE(r.op_degree == 2);
            }
            REQUIRE(default_max_odeg(r) == r.op_degree);
        }
        (id.starts_with("d1_") ? deg1 : deg2) += 1;
        if (id.starts_with("d1_") || id.starts_with("d2_"))
            REQUIRE(make_rule(id).order == Kind::dt);
        else
            REQUIRE(make_rule(id).order == Kind::Dl);
    }
    REQUIRE(deg1 == 6);
    REQUIRE(deg2 == 20);

    REQUIRE(rule_variants("newB_right") == std::vector<std::string>{"case1", "case2"});
    REQUIRE(rule_variants("newB_left") == std::vector<std::string>{"case1", "case2"});
    REQUIRE(rule_variants("avg") == std::vector<std::string>{""});
    REQUIRE(make_rule("newB_left", "case2").name() == "newB_left[case2]");
    REQUIRE(make_rule("avg").name() == "avg");
    REQUIRE(make_rule("newB_right").parametric);
    REQUIRE(!make_rule("newB_right", "case2").parametric);

    REQUIRE_THROWS_AS(make_rule("unknown"), error);
    REQUIRE_THROWS_AS(make_rule("avg", "case1"), error);
    REQUIRE_THROWS_AS(make_rule("newB_right", "case3"), error);
}

TEST_CASE("instance fixtures") {
    ParamMode sym;

    Rule d1m = make_rule("d1_m");
    REQUIRE(instantiate(d1m, W("x"), W("y"), ord_of(d1m), sym).str() == "P((x y))");
    REQUIRE(instantiate(d1m, W("x"), W("x"), ord_of(d1m), sym).is_zero());

    Rule d1r = make_rule("d1_right");
    REQUIRE(instantiate(d1r, W("x"), W("y"), ord_of(d1r), sym).str() ==
            "P((x y)) + (P(y) x)");
    REQUIRE(instantiate(d1r, W("x"), W("x"), ord_of(d1r), sym).str() == "(P(x) x)");

    Rule avg = make_rule("avg");
    LiePoly a = instantiate(avg, W("x"), W("y"), ord_of(avg), sym);
    REQUIRE(a.str() == "(P(x) P(y)) + P((P(y) x))");
    REQUIRE(a.leading_word() == W("P(x) P(y)"));
    REQUIRE(instantiate(avg, W("x"), W("x"), ord_of(avg), sym).str() ==
            "P((P(x) x))");

    Rule p1 = make_rule("P1");
    LiePoly f = instantiate(p1, W("x"), W("y"), ord_of(p1), sym);
    REQUIRE(f.leading_word() == W("P(P(x)) y"));

    REQUIRE_THROWS_AS(instantiate(avg, W("y x"), W("x"), ord_of(avg), sym), error);
}

TEST_CASE("parametric family") {
    ParamMode sym;
    Rule b1 = make_rule("newB_right");  // case1 by default
    Ord o = ord_of(b1);

    LiePoly f = instantiate(b1, W("x"), W("y"), o, sym);
    REQUIRE(f.leading().first == T("(P(P(y)) x)"));
    REQUIRE(f.leading().second.is_one());

    const Scalar a = Scalar::param(), one(1);
    std::map<std::string, Scalar> got;
    for (const auto& [t, c] : f.terms()) got.emplace(t.str(), c);
    REQUIRE(got.size() == 3);
    REQUIRE(got.at("(P(P(y)) x)") == one);
    REQUIRE(got.at("P(P((x y)))") == one / (a + one));
    REQUIRE(got.at("P((P(y) x))") == -a / (a + one));

    // the fixed variant agrees with the generic one specialized at -1
    Rule b2 = make_rule("newB_right", "case2");
    LiePoly g2 = instantiate(b2, W("x"), W("y"), o, sym);
    ParamMode at_m1{false, mpq_class(-1)};
    REQUIRE(instantiate(b1, W("x"), W("y"), o, at_m1).str() == g2.str());
    REQUIRE(g2.str() == "P((P(y) x)) + P(P((x y)))");

    // sampling at a regular value matches evaluating the symbolic instance
    ParamMode at3{false, mpq_class(3)};
    LiePoly h = instantiate(b1, W("x"), W("y"), o, at3);
    for (const auto& [t, c] : h.terms())
        REQUIRE(c == got.at(t.str()).eval_at(mpq_class(3)));
}

TEST_CASE("leading shape inventory") {
    auto strs = [](const std::vector<Word>& ws) {
        std::vector<std::string> out;
        for (Word w : ws) out.push_back(w.str());
        return out;
    };

    REQUIRE(strs(leading_patterns(make_rule("d1_m"))) ==
            std::vector<std::string>{"P(X Y)", "P(Y X)"});
    REQUIRE(strs(leading_patterns(make_rule("avg"))) ==
            std::vector<std::string>{"P(P(Y) X)", "P(X P(Y))", "P(X) P(Y)",
                                     "P(Y) P(X)"});
    REQUIRE(leading_patterns(make_rule("newC")).size() == 12);
}

TEST_CASE("instance leading words stay inside the shape bound") {
    ParamMode sym;
    for (const auto& id : family_ids()) {
        for (const auto& var : rule_variants(id)) {
            Rule r = make_rule(id, var);
            Ord o = ord_of(r);
            RuleSet rs(std::move(r), o);
            auto args = enumerate_alsbw(o, 2, 1, 1);
            for (Word u : args)
                for (Word v : args) {
                    if (!rs.pair_in_set(u, v)) continue;
                    const auto f = rs.instance(u, v);
                    if (!f) continue;
                    REQUIRE(f->leading().second.is_one());
                    Word lead = f->leading_word();
                    bool covered = false;
                    for (Word pat : rs.patterns())
                        if (eval_pattern(pat, u, v) == lead) covered = true;
                    REQUIRE(covered);
                }
        }
    }
}

TEST_CASE("match fixtures") {
    Rule avg = make_rule("avg");
    Ord o = ord_of(avg);
    RuleSet rs(std::move(avg), o);

    auto ms = rs.match_leading(W("P(x) P(y) P(z)"));
    REQUIRE(ms.size() == 2);
    REQUIRE(ms[0].q.str() == "* P(z)");
    REQUIRE(ms[0].u == W("x"));
    REQUIRE(ms[0].v == W("y"));
    REQUIRE(ms[1].q.str() == "P(x) *");
    REQUIRE(ms[1].u == W("y"));
    REQUIRE(ms[1].v == W("z"));

    REQUIRE(rs.match_leading(W("P(x) P(y)")).size() == 1);
    // shape P(X P(Y)) occurs but the confirmed leading is P(x) P(y), not this
    REQUIRE(rs.match_leading(W("P(x P(y))")).empty());
    REQUIRE(rs.match_leading(W("x")).empty());

    Rule d1m = make_rule("d1_m");
    Ord odt = ord_of(d1m);
    RuleSet rdt(std::move(d1m), odt);
    ms = rdt.match_leading(W("P(x y z)"));
    REQUIRE(ms.size() == 2);
    REQUIRE(ms[0].q.str() == "*");
    REQUIRE(ms[0].u == W("x"));
    REQUIRE(ms[0].v == W("y z"));
    REQUIRE(ms[1].q.str() == "*");
    REQUIRE(ms[1].u == W("x y"));
    REQUIRE(ms[1].v == W("z"));

    // one-orientation rules reject pairs outside their instance set
    Rule d1r = make_rule("d1_right");
    RuleSet rone(std::move(d1r), odt);
    REQUIRE(!rone.pair_in_set(W("y"), W("x")));
    REQUIRE_THROWS_AS(rone.instance(W("y"), W("x")), error);
}

TEST_CASE("matching finds every instance at its own leading word") {
    ParamMode sym;
    for (const char* fam : {"d1_right", "d2_diff", "avg", "nijenhuis", "newC", "P3"}) {
        Rule r = make_rule(fam);
        Ord o = ord_of(r);
        RuleSet rs(std::move(r), o);
        auto args = enumerate_alsbw(o, 2, 1, 1);
        for (Word u : args)
            for (Word v : args) {
                if (!rs.pair_in_set(u, v)) continue;
                const auto f = rs.instance(u, v);
                if (!f) continue;
                bool found = false;
                for (const auto& m : rs.match_leading(f->leading_word()))
                    if (m.q.is_identity() && m.u == u && m.v == v) found = true;
                REQUIRE(found);
            }
    }
}
