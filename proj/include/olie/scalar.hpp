#pragma once

/* Exact coefficient arithmetic.
 *
 * Scalars live in Q(a), the field of rational functions in one formal
 * parameter `a` over the rationals.  Plain rationals embed as constant
 * functions, so one type serves both the parameter-free identities and the
 * one-parameter families.  Representation: num/den with den monic and
 * gcd(num, den) = 1; zero is 0/1.  Coefficients use GMP rationals, so all
 * arithmetic is arbitrary precision.
 */

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "base.hpp"

namespace olie {

/* Dense univariate polynomial over Q.  coeff(i) multiplies a^i; the
 * coefficient vector never has trailing zeros. */
class QPoly {
  public:
    QPoly() = default;
    QPoly(const mpq_class& v) {
        if (v != 0) {
            c_.push_back(v);
            c_.back().canonicalize();  // two-arg mpq_class ctors skip this
        }
    }
    QPoly(long v) : QPoly(mpq_class(v)) {}

    static QPoly var() {  // the polynomial `a`
        QPoly p;
        p.c_ = {mpq_class(0), mpq_class(1)};
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const mpq_class& lc() const { return c_.back(); }  // pre: !is_zero()
    mpq_class coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : mpq_class(0);
    }

    bool operator==(const QPoly& o) const { return c_ == o.c_; }

    QPoly operator-() const {
        QPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    QPoly operator+(const QPoly& o) const {
        QPoly r;
        size_t n = std::max(c_.size(), o.c_.size());
        r.c_.resize(n);
        for (size_t i = 0; i < n; ++i) r.c_[i] = coeff(int(i)) + o.coeff(int(i));
        r.trim();
        return r;
    }

    QPoly operator-(const QPoly& o) const { return *this + (-o); }

    QPoly operator*(const QPoly& o) const {
        if (is_zero() || o.is_zero()) return QPoly();
        QPoly r;
        r.c_.assign(c_.size() + o.c_.size() - 1, mpq_class(0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
        r.trim();
        return r;
    }

    /* Division with remainder; the divisor must be nonzero. */
    std::pair<QPoly, QPoly> divmod(const QPoly& d) const {
        check(!d.is_zero(), "QPoly: division by zero polynomial");
        QPoly q, r = *this;
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int k = r.degree() - d.degree();
            mpq_class f = r.lc() / d.lc();
            QPoly term;
            term.c_.assign(size_t(k) + 1, mpq_class(0));
            term.c_[size_t(k)] = f;
            q = q + term;
            r = r - term * d;
        }
        return {q, r};
    }

    mpq_class eval(const mpq_class& x) const {
        mpq_class acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    QPoly monic() const {
        if (is_zero()) return *this;
        QPoly r = *this;
        mpq_class l = lc();
        for (auto& x : r.c_) x /= l;
        return r;
    }

    /* Renders e.g. "a^2 - 2*a + 1"; the zero polynomial renders as "0". */
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            mpq_class v = coeff(i);
            if (v == 0) continue;
            bool first = out.empty();
            bool neg = v < 0;
            mpq_class av = abs(v);
            if (first)
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            std::string mag = av.get_str();
            if (i == 0) {
                out += mag;
            } else {
                if (av != 1) out += mag + "*";
                out += (i == 1) ? "a" : "a^" + std::to_string(i);
            }
        }
        return out;
    }

  private:
    std::vector<mpq_class> c_;

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

inline QPoly gcd(QPoly x, QPoly y) {
    while (!y.is_zero()) {
        QPoly r = x.divmod(y).second;
        x = std::move(y);
        y = r.monic();  // keep coefficients small
    }
    return x.monic();
}

class Scalar {
  public:
    Scalar() : num_(), den_(1) {}
    Scalar(long v) : num_(v), den_(1) {}
    Scalar(const mpq_class& v) : num_(v), den_(1) {}
    Scalar(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static Scalar param() { return Scalar(QPoly::var(), QPoly(1)); }
    static Scalar rational(const std::string& s) {
        mpq_class v;
        if (v.set_str(s, 10) != 0) fail("Scalar: bad rational literal '" + s + "'");
        v.canonicalize();
        return Scalar(v);
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == QPoly(1) && den_ == QPoly(1); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() <= 0; }

    /* pre: is_constant() */
    mpq_class as_rational() const {
        check(is_constant(), "Scalar: not a constant: " + str());
        if (is_zero()) return mpq_class(0);
        return num_.coeff(0) / den_.coeff(0);
    }

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }

    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar operator-() const {
        Scalar r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Scalar operator+(const Scalar& o) const {
        return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Scalar operator-(const Scalar& o) const { return *this + (-o); }
    Scalar operator*(const Scalar& o) const { return Scalar(num_ * o.num_, den_ * o.den_); }
    Scalar operator/(const Scalar& o) const {
        check(!o.is_zero(), "Scalar: division by zero");
        return Scalar(num_ * o.den_, den_ * o.num_);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar inverse() const {
        check(!is_zero(), "Scalar: inverse of zero");
        return Scalar(den_, num_);
    }

    /* Substitute a concrete rational for the parameter.  Values at which the
     * denominator vanishes are rejected by name so callers can report which
     * parameter choices are excluded. */
    Scalar eval_at(const mpq_class& v) const {
        mpq_class d = den_.eval(v);
        if (d == 0)
            fail("Scalar: parameter value a = " + mpq_class(v).get_str() +
                 " is a pole of " + str());
        return Scalar(num_.eval(v) / d);
    }

    /* Constants render as `p/q`; polynomials render bare; proper rational
     * functions render as `(num)/(den)`. */
    std::string str() const {
        if (den_ == QPoly(1)) {
            if (num_.degree() <= 0) return is_zero() ? "0" : num_.coeff(0).get_str();
            return num_.str();
        }
        if (num_.degree() <= 0 && den_.degree() <= 0) {
            mpq_class v = num_.coeff(0) / den_.coeff(0);
            return v.get_str();
        }
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    QPoly num_, den_;

    void reduce() {
        check(!den_.is_zero(), "Scalar: zero denominator");
        if (num_.is_zero()) {
            den_ = QPoly(1);
            return;
        }
        QPoly g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.divmod(g).first;
            den_ = den_.divmod(g).first;
        }
        mpq_class l = den_.lc();
        if (l != 1) {
            QPoly d(l);
            num_ = num_.divmod(d).first;
            den_ = den_.divmod(d).first;
        }
    }
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace olie
