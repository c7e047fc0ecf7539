#pragma once

/* Concrete syntax.
 *
 *   word  :=  prime+                      primes separated by whitespace
 *   prime :=  LETTER | "P(" word ")" | "*"
 *   tree  :=  LETTER | "P(" tree ")" | "(" tree tree ")" | "*"
 *
 * Letters must be declared in the alphabet; "*" is only accepted where a
 * star-word is expected.  Polynomial input is a +/- separated list of
 * addends, each an optional scalar factor, a "*", and a tree:
 *
 *   poly   :=  ['-'] addend (('+'|'-') addend)*
 *   addend :=  [scalar '*'] tree
 *   scalar :=  NUMBER['/'NUMBER] | 'a' | '(' scalar-expression ')'
 *
 * Scalar expressions support + - * / ^ over numbers and the parameter `a`.
 */

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scalar.hpp"
#include "word.hpp"

namespace olie {

namespace detail {

struct Lexer {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* where) {
        if (!eat(c))
            fail(std::string("parse: expected '") + c + "' " + where + " at offset " +
                 std::to_string(pos) + " in '" + std::string(s) + "'");
    }
    bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    std::string ident() {
        skip_ws();
        check(pos < s.size() && ident_start(s[pos]),
              "parse: expected identifier at offset " + std::to_string(pos) + " in '" +
                  std::string(s) + "'");
        size_t b = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return std::string(s.substr(b, pos - b));
    }
    std::string number() {
        skip_ws();
        size_t b = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        check(pos > b, "parse: expected number at offset " + std::to_string(b) + " in '" +
                           std::string(s) + "'");
        return std::string(s.substr(b, pos - b));
    }
};

/* A prime starts with a letter, "P(", or (when allowed) "*".  "P" is the
 * operator only when followed by "("; the alphabet rejects it as a letter. */
inline bool at_prime(Lexer& lx, bool allow_star) {
    char c = lx.peek();
    return lx.ident_start(c) || (allow_star && c == '*');
}

inline Prime parse_prime(Lexer& lx, const Alphabet& alph, bool allow_star);

inline Word parse_word_body(Lexer& lx, const Alphabet& alph, bool allow_star) {
    std::vector<Prime> ps;
    while (at_prime(lx, allow_star)) ps.push_back(parse_prime(lx, alph, allow_star));
    check(!ps.empty(), "parse: expected a word at offset " + std::to_string(lx.pos) +
                           " in '" + std::string(lx.s) + "'");
    return make_word(ps);
}

inline Prime parse_prime(Lexer& lx, const Alphabet& alph, bool allow_star) {
    if (allow_star && lx.eat('*')) return Prime::letter(star_sym());
    std::string id = lx.ident();
    if (id == "P") {
        lx.expect('(', "after operator P");
        Word inner = parse_word_body(lx, alph, allow_star);
        lx.expect(')', "closing operator P");
        return Prime::op(inner.id());
    }
    Sym s = sym(id);
    if (!alph.contains(s))
        fail("parse: letter '" + id + "' not in alphabet " + alph.str());
    return Prime::letter(s);
}

inline Tree parse_tree_body(Lexer& lx, const Alphabet& alph) {
    if (lx.eat('(')) {
        Tree l = parse_tree_body(lx, alph);
        Tree r = parse_tree_body(lx, alph);
        lx.expect(')', "closing pair");
        return pair_node(l, r);
    }
    std::string id = lx.ident();
    if (id == "P") {
        lx.expect('(', "after operator P");
        Tree t = parse_tree_body(lx, alph);
        lx.expect(')', "closing operator P");
        return op_node(t);
    }
    Sym s = sym(id);
    if (!alph.contains(s))
        fail("parse: letter '" + id + "' not in alphabet " + alph.str());
    return leaf(s);
}

// scalar-expression grammar: sum -> prod (('+'|'-') prod)*,
// prod -> pow (('*'|'/') pow)*, pow -> atom ['^' NUMBER],
// atom -> RATIONAL | 'a' | '(' sum ')' | '-' atom
inline Scalar parse_scalar_sum(Lexer& lx);

inline Scalar parse_scalar_atom(Lexer& lx) {
    if (lx.eat('-')) return -parse_scalar_atom(lx);
    if (lx.eat('(')) {
        Scalar v = parse_scalar_sum(lx);
        lx.expect(')', "closing scalar group");
        return v;
    }
    char c = lx.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string n = lx.number();
        if (lx.pos < lx.s.size() && lx.s[lx.pos] == '/') {  // rational literal p/q
            ++lx.pos;
            n += "/" + lx.number();
        }
        return Scalar::rational(n);
    }
    std::string id = lx.ident();
    check(id == "a", "parse: unknown scalar symbol '" + id + "' (parameter is 'a')");
    return Scalar::param();
}

inline Scalar parse_scalar_pow(Lexer& lx) {
    Scalar base = parse_scalar_atom(lx);
    if (lx.eat('^')) {
        long e = std::stol(lx.number());
        Scalar r(1);
        for (long i = 0; i < e; ++i) r *= base;
        return r;
    }
    return base;
}

inline Scalar parse_scalar_prod(Lexer& lx) {
    Scalar v = parse_scalar_pow(lx);
    for (;;) {
        if (lx.eat('*'))
            v *= parse_scalar_pow(lx);
        else if (lx.eat('/'))
            v = v / parse_scalar_pow(lx);
        else
            return v;
    }
}

inline Scalar parse_scalar_sum(Lexer& lx) {
    Scalar v = parse_scalar_prod(lx);
    for (;;) {
        if (lx.eat('+'))
            v += parse_scalar_prod(lx);
        else if (lx.eat('-'))
            v -= parse_scalar_prod(lx);
        else
            return v;
    }
}

}  // namespace detail

inline Word parse_word(const Alphabet& alph, std::string_view s) {
    detail::Lexer lx{s};
    Word w = detail::parse_word_body(lx, alph, false);
    check(lx.eof(), "parse: trailing input in '" + std::string(s) + "'");
    return w;
}

inline StarWord parse_star_word(const Alphabet& alph, std::string_view s) {
    detail::Lexer lx{s};
    Word w = detail::parse_word_body(lx, alph, true);
    check(lx.eof(), "parse: trailing input in '" + std::string(s) + "'");
    return StarWord(w);
}

inline Tree parse_tree(const Alphabet& alph, std::string_view s) {
    detail::Lexer lx{s};
    Tree t = detail::parse_tree_body(lx, alph);
    check(lx.eof(), "parse: trailing input in '" + std::string(s) + "'");
    return t;
}

inline Scalar parse_scalar(std::string_view s) {
    detail::Lexer lx{s};
    Scalar v = detail::parse_scalar_sum(lx);
    check(lx.eof(), "parse: trailing input in '" + std::string(s) + "'");
    return v;
}

/* Polynomial input as (coefficient, tree) addends; combining like terms and
 * basis normalization are the caller's concern.  A coefficient is a single
 * scalar factor ("2", "1/2", "a", "a^2", or a parenthesized expression)
 * followed by '*'; compound coefficients need parentheses: "(2*a) * (x y)". */
inline std::vector<std::pair<Scalar, Tree>> parse_poly_terms(const Alphabet& alph,
                                                             std::string_view s) {
    detail::Lexer lx{s};
    std::vector<std::pair<Scalar, Tree>> out;
    bool neg = lx.eat('-');
    for (;;) {
        Scalar c = neg ? Scalar(-1) : Scalar(1);
        char ch = lx.peek();
        bool got = false;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            c *= detail::parse_scalar_pow(lx);
            lx.expect('*', "between coefficient and tree");
        } else if (ch == 'a' || ch == '(') {
            // "(" and "a" can open either a scalar factor or a tree (pair /
            // leaf named a); a scalar factor is always followed by '*'
            size_t save = lx.pos;
            try {
                Scalar v = detail::parse_scalar_pow(lx);
                if (lx.peek() == '*') {
                    lx.eat('*');
                    c *= v;
                    got = true;
                }
            } catch (const error&) {
            }
            if (!got) lx.pos = save;
        }
        out.emplace_back(c, detail::parse_tree_body(lx, alph));
        if (lx.eat('+'))
            neg = false;
        else if (lx.eat('-'))
            neg = true;
        else
            break;
    }
    check(lx.eof(), "parse: trailing input in '" + std::string(s) + "'");
    return out;
}

}  // namespace olie
