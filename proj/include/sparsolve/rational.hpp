// Exact rational scalar type and small helpers shared by the combinatorial phase.

#ifndef SPARSOLVE_RATIONAL_HPP
#define SPARSOLVE_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sparsolve {

// GMP-backed rational, always kept in lowest terms with positive denominator
// by the backend.  All polytope geometry, liftings and matrix assembly run on
// this type; conversion to double happens only at the dense-numerics boundary.
using Rat = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

using RatVec = std::vector<Rat>;

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline RatVec operator+(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RatVec operator-(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline std::string to_string(const Rat& x) { return x.str(); }

// Exact floor/ceil; mpq keeps denominators positive so truncation adjusts by
// the sign of the numerator only.
inline BigInt rat_floor(const Rat& x) {
    BigInt q = numerator(x) / denominator(x);
    if (numerator(x) < 0 && q * denominator(x) != numerator(x)) --q;
    return q;
}

inline BigInt rat_ceil(const Rat& x) {
    BigInt q = numerator(x) / denominator(x);
    if (numerator(x) > 0 && q * denominator(x) != numerator(x)) ++q;
    return q;
}

// Deterministic source for every random draw in the library.  A fixed seed
// fixes liftings, perturbations and u-polynomial coefficients, hence the
// whole run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
    }

    std::uint64_t raw() { return gen_(); }

    double uniform_real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    // Derive an independent child generator; used so that retries draw fresh
    // values while the parent stream stays reproducible.
    Rng fork() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ULL); }

private:
    std::mt19937_64 gen_;
};

}  // namespace sparsolve

#endif  // SPARSOLVE_RATIONAL_HPP
