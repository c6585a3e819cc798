#ifndef LIEODE_TEST_UTIL_HPP
#define LIEODE_TEST_UTIL_HPP

#include <cstdint>
#include <vector>

#include "lieode/jet_expr.hpp"

namespace testutil {

// Deterministic generator for property-style tests.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int range(int lo, int hi) { return lo + int(next() % std::uint64_t(hi - lo + 1)); }
    lieode::Rat coeff() {
        int n = range(-5, 5);
        if (n == 0) n = 1;
        return lieode::Rat(n, range(1, 3));
    }

  private:
    std::uint64_t s_;
};

// Atom families that stay closed under mutual products.
enum class Atoms { none, trig, exp };

// Random differential polynomial of order <= max_order with small integer
// data; optionally throws in negative y powers or atoms of one closed family.
inline lieode::JetExpr random_expr(Rng& rng, int max_order, int max_terms, Atoms atoms = Atoms::none,
                                   bool allow_neg_y = false) {
    using lieode::JetExpr;
    std::vector<lieode::Term> terms;
    int nterms = rng.range(1, max_terms);
    for (int i = 0; i < nterms; ++i) {
        lieode::Term t;
        t.coeff = rng.coeff();
        t.x_pow = rng.range(0, 2);
        int ypow = rng.range(allow_neg_y ? -2 : 0, 2);
        t.y_pow = lieode::Rat(ypow);
        for (int k = 1; k <= max_order; ++k)
            if (rng.range(0, 2) == 0) t.jets.push_back({k, rng.range(1, 2)});
        if (atoms != Atoms::none && rng.range(0, 2) == 0) {
            lieode::AtomArg arg{lieode::Rat(rng.range(1, 2)), -1};
            lieode::AtomKind kind = atoms == Atoms::exp ? lieode::AtomKind::exp_x
                                    : rng.range(0, 1) == 0 ? lieode::AtomKind::sin_x
                                                           : lieode::AtomKind::cos_x;
            t.atom = lieode::Atom{kind, arg, 0};
        }
        terms.push_back(std::move(t));
    }
    return JetExpr::from_terms(std::move(terms));
}

// Polynomial sample path y(x) = sum c_i x^i and its derivatives.
struct PolyPath {
    std::vector<double> c;

    double deriv(int order, double x) const {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) {
            if (int(i) < order) break;
            double f = c[i];
            for (int j = 0; j < order; ++j) f *= double(int(i) - j);
            acc += f * std::pow(x, int(i) - order);
        }
        return acc;
    }
    std::vector<double> jets(int up_to, double x) const {
        std::vector<double> v(std::size_t(up_to) + 1);
        for (int k = 0; k <= up_to; ++k) v[std::size_t(k)] = deriv(k, x);
        return v;
    }
};

inline PolyPath random_path(Rng& rng, int degree) {
    PolyPath p;
    for (int i = 0; i <= degree; ++i) p.c.push_back(rng.range(-3, 3) * 0.5 + 0.25);
    return p;
}

} // namespace testutil

#endif
