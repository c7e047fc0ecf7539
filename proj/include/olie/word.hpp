#pragma once

/* Bracketed words and bracketed trees.
 *
 * A Word is a nonempty sequence of primes; a prime is either a letter or the
 * operator P(-) applied to a Word.  A Tree is the non-associative version:
 * leaves, operator nodes, and pairs.  Both are hash-consed into global pools,
 * so values are 32-bit ids, structural equality is id equality, and the
 * breadth/dep/deg/odeg metrics are computed once at interning time.
 *
 * Star-words are Words containing exactly one occurrence of the reserved
 * letter `*`; substitution splices the replacement's primes in place of the
 * star (wrapping operators are preserved when the star sits inside a
 * payload).
 *
 * The pools are append-only and safe for concurrent use: lookups and inserts
 * take a mutex, while reads through an already-obtained id are lock-free
 * (block addresses never move once published).
 */

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "base.hpp"

namespace olie {

// ---------------------------------------------------------------- symbols

using Sym = uint32_t;

namespace detail {

/* Append-only store with stable addresses and lock-free indexed reads. */
template <class T>
class Arena {
  public:
    uint32_t push(T v) {
        std::lock_guard lk(mu_);
        uint32_t idx = size_;
        uint32_t blk = idx / kBlock, off = idx % kBlock;
        if (off == 0) blocks_[blk].store(new T[kBlock], std::memory_order_release);
        blocks_[blk].load(std::memory_order_relaxed)[off] = std::move(v);
        ++size_;
        return idx;
    }
    const T& operator[](uint32_t i) const {
        return blocks_[i / kBlock].load(std::memory_order_acquire)[i % kBlock];
    }

  private:
    static constexpr uint32_t kBlock = 4096;
    std::array<std::atomic<T*>, 1 << 16> blocks_{};
    uint32_t size_ = 0;
    std::mutex mu_;
};

struct SymPool {
    std::mutex mu;
    std::unordered_map<std::string, Sym> index;
    Arena<std::string> names;

    static SymPool& inst() {
        static SymPool p;
        return p;
    }
};

}  // namespace detail

inline Sym sym(std::string_view name) {
    check(!name.empty(), "sym: empty name");
    auto& p = detail::SymPool::inst();
    std::lock_guard lk(p.mu);
    std::string key(name);
    auto it = p.index.find(key);
    if (it != p.index.end()) return it->second;
    Sym s = p.names.push(key);
    p.index.emplace(std::move(key), s);
    return s;
}

inline const std::string& sym_name(Sym s) { return detail::SymPool::inst().names[s]; }

/* The reserved hole marker of star-words. */
inline Sym star_sym() {
    static const Sym s = sym("*");
    return s;
}

// --------------------------------------------------------------- alphabet

/* A well-ordered finite letter set, declared greatest-first ("x>y>z").
 * Letters compare by declaration rank; unknown letters are an error. */
class Alphabet {
  public:
    explicit Alphabet(std::string_view decl) {
        size_t pos = 0;
        while (pos <= decl.size()) {
            size_t gt = decl.find('>', pos);
            std::string_view tok = decl.substr(pos, gt == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : gt - pos);
            while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
            while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
            check(!tok.empty(), "Alphabet: empty letter in '" + std::string(decl) + "'");
            check(tok != "*", "Alphabet: '*' is reserved for star-words");
            check(tok != "P", "Alphabet: 'P' is reserved for the operator");
            Sym s = sym(tok);
            check(!rank_.count(s), "Alphabet: duplicate letter '" + std::string(tok) + "'");
            rank_.emplace(s, static_cast<int>(letters_.size()));
            letters_.push_back(s);
            if (gt == std::string_view::npos) break;
            pos = gt + 1;
        }
        check(!letters_.empty(), "Alphabet: no letters");
        static std::atomic<uint32_t> next{1};
        id_ = next.fetch_add(1);
    }

    uint32_t id() const { return id_; }
    const std::vector<Sym>& letters() const { return letters_; }
    bool contains(Sym s) const { return rank_.count(s) != 0; }

    int rank(Sym s) const {  // 0 = greatest
        auto it = rank_.find(s);
        if (it == rank_.end()) fail("Alphabet: letter '" + sym_name(s) + "' not declared");
        return it->second;
    }

    Ordering cmp(Sym a, Sym b) const {
        int ra = rank(a), rb = rank(b);
        return ra < rb ? Ordering::GT : ra > rb ? Ordering::LT : Ordering::EQ;
    }

    std::string str() const {
        std::string out;
        for (size_t i = 0; i < letters_.size(); ++i) {
            if (i) out += ">";
            out += sym_name(letters_[i]);
        }
        return out;
    }

  private:
    std::vector<Sym> letters_;
    std::unordered_map<Sym, int> rank_;
    uint32_t id_ = 0;
};

// ------------------------------------------------------------------ words

class Word;

/* One prime, packed into 32 bits: low bit tags letter vs operator. */
struct Prime {
    uint32_t bits = 0;

    static Prime letter(Sym s) { return Prime{(s << 1) | 0u}; }
    static Prime op(uint32_t word_id) { return Prime{(word_id << 1) | 1u}; }

    bool is_letter() const { return (bits & 1u) == 0; }
    bool is_op() const { return (bits & 1u) != 0; }
    Sym letter_sym() const { return bits >> 1; }
    uint32_t payload_id() const { return bits >> 1; }
    inline Word payload() const;

    bool operator==(const Prime&) const = default;
};

namespace detail {

struct WordData {
    std::vector<Prime> ps;
    int32_t deg = 0;   // letters + operators, '*' counts as a letter
    int32_t odeg = 0;  // operators
    int32_t dep = 0;   // operator nesting depth
    int32_t stars = 0; // '*' occurrences at any level
};

struct WordPool {
    std::mutex mu;
    std::unordered_map<uint64_t, std::vector<uint32_t>> index;  // hash -> candidate ids
    Arena<WordData> data;

    static WordPool& inst() {
        static WordPool p;
        return p;
    }
};

inline uint64_t hash_primes(std::span<const Prime> ps) {
    uint64_t h = 1469598103934665603ull;
    for (Prime p : ps) {
        h ^= p.bits;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

class Word {
  public:
    Word() = default;  // invalid handle; only assigned-from values are usable
    explicit Word(uint32_t id) : id_(id) {}

    uint32_t id() const { return id_; }
    bool valid() const { return id_ != UINT32_MAX; }
    bool operator==(const Word&) const = default;

    const std::vector<Prime>& primes() const { return data().ps; }
    size_t size() const { return data().ps.size(); }  // breadth
    Prime operator[](size_t i) const { return data().ps[i]; }
    int deg() const { return data().deg; }
    int odeg() const { return data().odeg; }
    int dep() const { return data().dep; }
    int stars() const { return data().stars; }

    std::string str() const;

  private:
    uint32_t id_ = UINT32_MAX;
    const detail::WordData& data() const { return detail::WordPool::inst().data[id_]; }
};

inline Word Prime::payload() const { return Word(payload_id()); }

inline Word make_word(std::span<const Prime> ps) {
    check(!ps.empty(), "make_word: words are nonempty");
    auto& pool = detail::WordPool::inst();
    uint64_t h = detail::hash_primes(ps);
    std::lock_guard lk(pool.mu);
    auto& bucket = pool.index[h];
    for (uint32_t id : bucket) {
        const auto& d = pool.data[id];
        if (d.ps.size() == ps.size() && std::equal(d.ps.begin(), d.ps.end(), ps.begin()))
            return Word(id);
    }
    detail::WordData d;
    d.ps.assign(ps.begin(), ps.end());
    for (Prime p : ps) {
        if (p.is_letter()) {
            d.deg += 1;
            if (p.letter_sym() == star_sym()) d.stars += 1;
        } else {
            const auto& inner = pool.data[p.payload_id()];
            d.deg += inner.deg + 1;
            d.odeg += inner.odeg + 1;
            d.dep = std::max(d.dep, inner.dep + 1);
            d.stars += inner.stars;
        }
    }
    uint32_t id = pool.data.push(std::move(d));
    bucket.push_back(id);
    return Word(id);
}

inline Word make_word(const std::vector<Prime>& ps) {
    return make_word(std::span<const Prime>(ps.data(), ps.size()));
}

inline Word letter_word(Sym s) {
    Prime p = Prime::letter(s);
    return make_word(std::span<const Prime>(&p, 1));
}

inline Word op_word(Word w) {  // the single-prime word P(w)
    Prime p = Prime::op(w.id());
    return make_word(std::span<const Prime>(&p, 1));
}

inline Word concat(Word a, Word b) {
    std::vector<Prime> ps = a.primes();
    ps.insert(ps.end(), b.primes().begin(), b.primes().end());
    return make_word(ps);
}

inline Word subrange(Word w, size_t from, size_t len) {
    check(len > 0 && from + len <= w.size(), "subrange: out of bounds");
    return make_word(std::span<const Prime>(w.primes().data() + from, len));
}

inline std::string Word::str() const {
    std::string out;
    for (size_t i = 0; i < size(); ++i) {
        if (i) out += " ";
        Prime p = (*this)[i];
        if (p.is_letter())
            out += sym_name(p.letter_sym());
        else
            out += "P(" + p.payload().str() + ")";
    }
    return out;
}

// ------------------------------------------------------------------ trees

enum class TreeTag : uint8_t { Leaf, Op, Pair };

class Tree;

namespace detail {

struct TreeData {
    TreeTag tag;
    uint32_t a = 0, b = 0;  // Leaf: a = Sym; Op: a = child; Pair: a, b = children
    uint32_t forget = 0;    // word id of the underlying associative word
};

struct TreePool {
    std::mutex mu;
    std::unordered_map<uint64_t, uint32_t> index;
    Arena<TreeData> data;

    static TreePool& inst() {
        static TreePool p;
        return p;
    }
};

inline uint64_t tree_key(TreeTag t, uint32_t a, uint32_t b) {
    return (uint64_t(t) << 62) | (uint64_t(a) << 31) | b;
}

}  // namespace detail

class Tree {
  public:
    Tree() = default;
    explicit Tree(uint32_t id) : id_(id) {}

    uint32_t id() const { return id_; }
    bool valid() const { return id_ != UINT32_MAX; }
    bool operator==(const Tree&) const = default;

    TreeTag tag() const { return data().tag; }
    bool is_leaf() const { return tag() == TreeTag::Leaf; }
    bool is_op() const { return tag() == TreeTag::Op; }
    bool is_pair() const { return tag() == TreeTag::Pair; }
    Sym leaf_sym() const { return data().a; }
    Tree child() const { return Tree(data().a); }  // pre: is_op()
    Tree left() const { return Tree(data().a); }   // pre: is_pair()
    Tree right() const { return Tree(data().b); }  // pre: is_pair()

    Word forget() const { return Word(data().forget); }
    int deg() const { return forget().deg(); }
    int odeg() const { return forget().odeg(); }

    std::string str() const {
        switch (tag()) {
            case TreeTag::Leaf: return sym_name(leaf_sym());
            case TreeTag::Op: return "P(" + child().str() + ")";
            case TreeTag::Pair: return "(" + left().str() + " " + right().str() + ")";
        }
        return "?";
    }

  private:
    uint32_t id_ = UINT32_MAX;
    const detail::TreeData& data() const { return detail::TreePool::inst().data[id_]; }
};

namespace detail {

inline Tree intern_tree(TreeTag tag, uint32_t a, uint32_t b, uint32_t forget_id) {
    auto& pool = TreePool::inst();
    uint64_t key = tree_key(tag, a, b);
    std::lock_guard lk(pool.mu);
    auto it = pool.index.find(key);
    if (it != pool.index.end()) return Tree(it->second);
    TreeData d{tag, a, b, forget_id};
    uint32_t id = pool.data.push(d);
    pool.index.emplace(key, id);
    return Tree(id);
}

}  // namespace detail

inline Tree leaf(Sym s) { return detail::intern_tree(TreeTag::Leaf, s, 0, letter_word(s).id()); }

inline Tree op_node(Tree t) {
    return detail::intern_tree(TreeTag::Op, t.id(), 0, op_word(t.forget()).id());
}

inline Tree pair_node(Tree l, Tree r) {
    return detail::intern_tree(TreeTag::Pair, l.id(), r.id(),
                               concat(l.forget(), r.forget()).id());
}

// ------------------------------------------------------------- star-words

/* A Word over X u {*} with exactly one star.  q<u> splices u's primes into
 * the hole. */
class StarWord {
  public:
    explicit StarWord(Word w) : w_(w) {
        check(w.stars() == 1, "StarWord: expected exactly one '*' in " + w.str());
    }

    static StarWord hole() { return StarWord(letter_word(star_sym())); }

    Word word() const { return w_; }
    bool is_identity() const { return w_.size() == 1 && w_[0].is_letter(); }
    bool operator==(const StarWord&) const = default;
    std::string str() const { return w_.str(); }

  private:
    Word w_;
};

inline Word substitute(const StarWord& q, Word u) {
    struct Rec {
        Word u;
        Word run(Word w) {
            std::vector<Prime> out;
            for (Prime p : w.primes()) {
                if (p.is_letter()) {
                    if (p.letter_sym() == star_sym())
                        out.insert(out.end(), u.primes().begin(), u.primes().end());
                    else
                        out.push_back(p);
                } else if (p.payload().stars() > 0) {
                    out.push_back(Prime::op(run(p.payload()).id()));
                } else {
                    out.push_back(p);
                }
            }
            return make_word(out);
        }
    };
    return Rec{u}.run(q.word());
}

namespace detail {

/* Replace the prime run [from, from+len) of w by a single star. */
inline Word puncture(Word w, size_t from, size_t len) {
    std::vector<Prime> ps;
    const auto& src = w.primes();
    ps.insert(ps.end(), src.begin(), src.begin() + from);
    ps.push_back(Prime::letter(star_sym()));
    ps.insert(ps.end(), src.begin() + from + len, src.end());
    return make_word(ps);
}

/* Replace prime i of w by P(inner). */
inline Word replace_op(Word w, size_t i, Word inner) {
    std::vector<Prime> ps = w.primes();
    ps[i] = Prime::op(inner.id());
    return make_word(ps);
}

}  // namespace detail

/* All star-words q with q<p> = w, i.e. every occurrence of p as a contiguous
 * prime run at any nesting level of w.  Order: the current level left to
 * right, then descents into operator payloads left to right. */
inline std::vector<StarWord> placements(Word w, Word p) {
    std::vector<StarWord> out;
    size_t n = w.size(), k = p.size();
    if (k <= n) {
        for (size_t i = 0; i + k <= n; ++i) {
            bool hit = true;
            for (size_t j = 0; j < k; ++j)
                if (!(w[i + j] == p[j])) {
                    hit = false;
                    break;
                }
            if (hit) out.emplace_back(detail::puncture(w, i, k));
        }
    }
    for (size_t i = 0; i < n; ++i) {
        if (!w[i].is_op()) continue;
        for (const StarWord& inner : placements(w[i].payload(), p))
            out.emplace_back(detail::replace_op(w, i, inner.word()));
    }
    return out;
}

/* Every (context, subword) decomposition of w: q<p> = w with p a contiguous
 * prime run at any level.  Same traversal order as placements; at one level
 * runs are ordered by start position, then by length. */
inline void contexts(Word w, std::vector<std::pair<StarWord, Word>>& out) {
    size_t n = w.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t len = 1; i + len <= n; ++len)
            out.emplace_back(StarWord(detail::puncture(w, i, len)), subrange(w, i, len));
    for (size_t i = 0; i < n; ++i) {
        if (!w[i].is_op()) continue;
        std::vector<std::pair<StarWord, Word>> inner;
        contexts(w[i].payload(), inner);
        for (auto& [q, p] : inner)
            out.emplace_back(StarWord(detail::replace_op(w, i, q.word())), p);
    }
}

inline std::vector<std::pair<StarWord, Word>> contexts(Word w) {
    std::vector<std::pair<StarWord, Word>> out;
    contexts(w, out);
    return out;
}

}  // namespace olie
