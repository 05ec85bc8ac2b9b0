// Scalar coefficients (exact rational or floating complex, tagged) and
// univariate coefficient polynomials in a distinguished variable.

#ifndef SPARSOLVE_COEFFICIENT_HPP
#define SPARSOLVE_COEFFICIENT_HPP

#include "sparsolve/rational.hpp"

#include <cassert>
#include <complex>
#include <string>
#include <vector>

namespace sparsolve {

using Cplx = std::complex<double>;

// A coefficient is either an exact rational (the usual case: parsed input and
// everything the combinatorial phase touches) or a floating complex scalar.
// Arithmetic stays exact as long as both operands are exact and degrades to
// floating point otherwise.
class Coefficient {
public:
    Coefficient() : exact_(true), rat_(0) {}
    Coefficient(const Rat& r) : exact_(true), rat_(r) {}
    Coefficient(int v) : exact_(true), rat_(v) {}
    Coefficient(double v) : exact_(false), flt_(v, 0.0) {}
    Coefficient(const Cplx& v) : exact_(false), flt_(v) {}

    bool is_exact() const { return exact_; }
    bool is_zero() const { return exact_ ? rat_ == 0 : flt_ == 0.0; }

    const Rat& rational() const {
        assert(exact_);
        return rat_;
    }

    // Floating view, exact in the rational case up to one rounding.
    Cplx value() const { return exact_ ? Cplx(to_double(rat_), 0.0) : flt_; }

    Coefficient operator-() const {
        return exact_ ? Coefficient(Rat(-rat_)) : Coefficient(-flt_);
    }

    Coefficient operator+(const Coefficient& o) const {
        if (exact_ && o.exact_) return Coefficient(Rat(rat_ + o.rat_));
        return Coefficient(value() + o.value());
    }
    Coefficient operator-(const Coefficient& o) const { return *this + (-o); }
    Coefficient operator*(const Coefficient& o) const {
        if (exact_ && o.exact_) return Coefficient(Rat(rat_ * o.rat_));
        return Coefficient(value() * o.value());
    }

    bool operator==(const Coefficient& o) const {
        if (exact_ != o.exact_) return false;
        return exact_ ? rat_ == o.rat_ : flt_ == o.flt_;
    }

    std::string str() const {
        if (exact_) return rat_.str();
        std::string s = std::to_string(flt_.real());
        if (flt_.imag() != 0.0) s += "+" + std::to_string(flt_.imag()) + "i";
        return s;
    }

private:
    bool exact_;
    Rat rat_;
    Cplx flt_{0.0, 0.0};
};

// Polynomial in one distinguished variable (the hidden coordinate, or the
// symbolic u of the linear-form augmentation) with Coefficient coefficients.
// Invariant: no trailing zero coefficient, so degree() is exact; the zero
// polynomial has an empty coefficient list.
class CoeffPoly {
public:
    CoeffPoly() = default;
    CoeffPoly(const Coefficient& c) {
        if (!c.is_zero()) c_.push_back(c);
    }
    CoeffPoly(const Rat& r) : CoeffPoly(Coefficient(r)) {}

    static CoeffPoly monomial(const Coefficient& c, std::size_t power) {
        CoeffPoly p;
        if (c.is_zero()) return p;
        p.c_.assign(power + 1, Coefficient());
        p.c_[power] = c;
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    // Degree of the zero polynomial is reported as -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Coefficient coeff(std::size_t k) const {
        return k < c_.size() ? c_[k] : Coefficient();
    }

    bool is_exact() const {
        for (const auto& c : c_)
            if (!c.is_exact()) return false;
        return true;
    }

    CoeffPoly& operator+=(const CoeffPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
        trim();
        return *this;
    }

    CoeffPoly operator*(const Coefficient& s) const {
        CoeffPoly r;
        if (s.is_zero()) return r;
        r.c_ = c_;
        for (auto& c : r.c_) c = c * s;
        r.trim();
        return r;
    }

    Cplx eval(const Cplx& x) const {
        Cplx v = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) v = v * x + c_[k].value();
        return v;
    }

    // Exact evaluation; requires every coefficient exact.
    Rat eval_exact(const Rat& x) const {
        Rat v = 0;
        for (std::size_t k = c_.size(); k-- > 0;) v = v * x + c_[k].rational();
        return v;
    }

    std::string str(const std::string& var) const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c_[k].str() + ")";
            if (k >= 1) s += "*" + var;
            if (k >= 2) s += "^" + std::to_string(k);
        }
        return s.empty() ? "0" : s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Coefficient> c_;
};

}  // namespace sparsolve

#endif  // SPARSOLVE_COEFFICIENT_HPP
