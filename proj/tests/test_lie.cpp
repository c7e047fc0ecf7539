#include <catch2/catch_amalgamated.hpp>

#include <olie/lie.hpp>
#include <olie/text.hpp>

#include <map>
#include <random>
#include <string>

using namespace olie;

static const Alphabet& axyz() {
    static Alphabet a("x>y>z");
    return a;
}

static Ord dt() { return Ord{&axyz(), Kind::dt}; }

static Word W(const char* s) { return parse_word(axyz(), s); }
static Tree T(const char* s) { return parse_tree(axyz(), s); }

static LiePoly mk(Tree t, const Ord& o, long c = 1) {
    LiePoly p(o);
    p.add(t, Scalar(c));
    return p;
}

/* Oracle: expand a bracketed tree over strings, fully independent of the
 * word machinery.  Pair nodes antisymmetrize, operator nodes wrap. */
static std::map<std::string, long long> naive(Tree t) {
    std::map<std::string, long long> out;
    if (t.is_leaf()) {
        out[sym_name(t.leaf_sym())] = 1;
        return out;
    }
    if (t.is_op()) {
        for (auto& [k, c] : naive(t.child())) out["P(" + k + ")"] = c;
        return out;
    }
    auto l = naive(t.left()), r = naive(t.right());
    for (auto& [k1, c1] : l)
        for (auto& [k2, c2] : r) {
            out[k1 + " " + k2] += c1 * c2;
            out[k2 + " " + k1] -= c1 * c2;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

static std::map<std::string, long long> as_map(const AssocPoly& p) {
    std::map<std::string, long long> out;
    for (auto& [w, c] : p.terms()) {
        mpq_class q = c.as_rational();
        REQUIRE(q.get_den() == 1);
        out[w.str()] = static_cast<long long>(q.get_num().get_si());
    }
    return out;
}

static Tree random_tree(std::mt19937_64& rng, int deg_budget, int odeg_budget) {
    if (deg_budget <= 1 || rng() % 4 == 0)
        return leaf(axyz().letters()[rng() % axyz().letters().size()]);
    if (odeg_budget > 0 && rng() % 3 == 0)
        return op_node(random_tree(rng, deg_budget - 1, odeg_budget - 1));
    int dl = 1 + int(rng() % uint64_t(deg_budget - 1));
    return pair_node(random_tree(rng, dl, odeg_budget),
                     random_tree(rng, deg_budget - dl, odeg_budget));
}

TEST_CASE("polynomial containers") {
    Ord o = dt();

    AssocPoly p(o);
    REQUIRE(p.is_zero());
    REQUIRE(p.str() == "0");
    p.add(W("x y"), Scalar(1));
    p.add(W("P(x)"), Scalar(-2));
    REQUIRE(p.size() == 2);
    REQUIRE(p.leading().first == W("x y"));
    REQUIRE(p.str() == "x y - 2 * P(x)");
    p.add(W("x y"), Scalar(-1));  // cancels the whole term
    REQUIRE(p.size() == 1);
    p.scale(Scalar(0));
    REQUIRE(p.is_zero());
    REQUIRE_THROWS_AS(p.leading(), error);

    LiePoly f(o);
    f.add(T("(x y)"), Scalar::param());
    REQUIRE(f.str() == "(a) * (x y)");
    f.add(T("x"), Scalar(1));
    REQUIRE(f.leading_word() == W("x y"));
    LiePoly m = f.monic();
    REQUIRE(m.leading().second.is_one());

    // distinct trees over the same word cannot share a polynomial
    LiePoly bad(o);
    bad.add(T("(x (y z))"), Scalar(1));
    REQUIRE_THROWS_AS(bad.add(T("((x y) z)"), Scalar(1)), error);
}

TEST_CASE("expansion fixture") {
    Ord o = dt();
    AssocPoly e = expand(T("(x (y z))"), o);
    REQUIRE(as_map(e) == std::map<std::string, long long>{
                             {"x y z", 1}, {"x z y", -1}, {"y z x", -1}, {"z y x", 1}});

    e = expand(T("P((x y))"), o);
    REQUIRE(as_map(e) ==
            std::map<std::string, long long>{{"P(x y)", 1}, {"P(y x)", -1}});
}

TEST_CASE("expansion matches the string oracle") {
    std::mt19937_64 rng(2024);
    Ord o = dt();
    for (int i = 0; i < 300; ++i) {
        Tree t = random_tree(rng, 5, 2);
        REQUIRE(as_map(expand(t, o)) == naive(t));
    }
}

TEST_CASE("expansion is triangular on the basis") {
    for (Kind k : {Kind::dt, Kind::Dl}) {
        Ord o{&axyz(), k};
        for (Word w : enumerate_alsbw(o, 4, 2, 2)) {
            AssocPoly e = expand(nlsbw_of(w, o), o);
            auto [lead, c] = e.leading();
            REQUIRE(lead == w);
            REQUIRE(c.is_one());
        }
    }
}

TEST_CASE("basis bracket fixtures") {
    Ord o = dt();
    LiePoly x = mk(T("x"), o), xy = mk(T("(x y)"), o);

    LiePoly b = bracket(x, xy);
    REQUIRE(b.size() == 1);
    REQUIRE(b.leading().first == T("(x (x y))"));
    REQUIRE(b.leading().second.is_one());

    LiePoly c = bracket(xy, x);
    REQUIRE(c.size() == 1);
    REQUIRE(c.leading().first == T("(x (x y))"));
    REQUIRE(c.leading().second == Scalar(-1));

    REQUIRE(bracket(x, x).is_zero());

    // a bracket whose literal tree is not basis-shaped gets rewritten
    LiePoly d = bracket(mk(T("y"), o), mk(T("(x z)"), o));
    REQUIRE(d.size() == 1);
    REQUIRE(d.leading().first == T("((x z) y)"));
    REQUIRE(d.leading().second == Scalar(-1));
    AssocPoly want(o);
    for (auto& [s, cc] : naive(pair_node(T("y"), T("(x z)"))))
        want.add(parse_word(axyz(), s), Scalar(cc));
    REQUIRE(as_map(iota(d)) == as_map(want));
}

TEST_CASE("round trip through the enveloping algebra") {
    std::mt19937_64 rng(77);
    for (Kind k : {Kind::dt, Kind::Dl}) {
        Ord o{&axyz(), k};
        auto basis = enumerate_alsbw(o, 4, 1, 1);
        for (int i = 0; i < 60; ++i) {
            LiePoly f(o);
            for (int j = 0; j < 4; ++j) {
                long c = long(rng() % 7) - 3;
                f.add(nlsbw_of(basis[rng() % basis.size()], o), Scalar(c));
            }
            LiePoly g = from_assoc(iota(f));
            REQUIRE(g.str() == f.str());
        }
    }
}

TEST_CASE("rewriting arbitrary trees into the basis") {
    std::mt19937_64 rng(4242);
    Ord o = dt();
    for (int i = 0; i < 200; ++i) {
        Tree t = random_tree(rng, 5, 2);
        LiePoly f = to_basis(t, o);
        for (auto& [bt, c] : f.terms()) REQUIRE(is_nlsbw(bt, o));
        REQUIRE(as_map(iota(f)) == naive(t));
    }
    // a non-Lie element is rejected by the inverse
    AssocPoly p(o);
    p.add(W("x y"), Scalar(1));
    REQUIRE_THROWS_AS(from_assoc(p), error);
}

TEST_CASE("antisymmetry and Jacobi on samples") {
    std::mt19937_64 rng(99);
    Ord o = dt();
    auto basis = enumerate_alsbw(o, 3, 1, 1);
    auto pickt = [&]() { return nlsbw_of(basis[rng() % basis.size()], o); };

    for (int i = 0; i < 80; ++i) {
        LiePoly f = mk(pickt(), o, long(rng() % 5) - 2);
        LiePoly g = mk(pickt(), o, long(rng() % 5) - 2);
        LiePoly h = mk(pickt(), o);

        LiePoly anti = bracket(f, g);
        anti.axpy(Scalar(1), bracket(g, f));
        REQUIRE(anti.is_zero());

        LiePoly jac = bracket(bracket(f, g), h);
        jac.axpy(Scalar(1), bracket(bracket(g, h), f));
        jac.axpy(Scalar(1), bracket(bracket(h, f), g));
        REQUIRE(jac.is_zero());
    }
}

TEST_CASE("operator application") {
    Ord o = dt();
    auto basis = enumerate_alsbw(o, 3, 1, 1);
    for (Word w : basis) {
        Tree t = nlsbw_of(w, o);
        LiePoly f = op_apply(mk(t, o));
        REQUIRE(f.size() == 1);
        REQUIRE(f.leading().first == op_node(t));
        // expansion commutes with wrapping
        auto wrapped = as_map(expand(op_node(t), o));
        std::map<std::string, long long> manual;
        for (auto& [s, c] : as_map(expand(t, o))) manual["P(" + s + ")"] = c;
        REQUIRE(wrapped == manual);
    }
}
