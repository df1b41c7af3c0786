#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmf {

using Z = mpz_class;
using Q = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DefinitenessError : Error {
    using Error::Error;
};
struct ArgumentError : Error {
    using Error::Error;
};

// Dense row-major matrix.
template <class T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    Mat(std::initializer_list<std::initializer_list<T>> init) {
        rows = init.size();
        cols = rows ? init.begin()->size() : 0;
        for (auto& row : init) {
            if (row.size() != cols) throw ArgumentError("ragged matrix literal");
            for (auto& x : row) a.push_back(x);
        }
    }

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
    }
    Mat transpose() const {
        Mat t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
};

using IntMat = Mat<Z>;
using RatMat = Mat<Q>;
using ZVec = std::vector<Z>;
using QVec = std::vector<Q>;

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
    if (x.cols != y.rows) throw ArgumentError("matrix dimension mismatch");
    Mat<T> r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (sgn(x(i, k)) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

RatMat to_rat(const IntMat& m);

// Row-style Hermite normal form: rows of m generate the lattice, result = transform * m,
// upper echelon with positive pivots and entries above each pivot in [0, pivot).
// Zero rows are moved to the bottom.
struct HnfResult {
    IntMat h;
    IntMat transform;
};
HnfResult hnf(const IntMat& m);
// Same echelon form without the transform, zero rows dropped.
IntMat hnf_basis(const IntMat& m);

// LLL on a positive definite symmetric Gram matrix (delta = 3/4), exact rationals.
// Returns unimodular T (columns = new basis in old coordinates); reduced Gram = T^t g T.
IntMat lll_gram(const RatMat& g);

struct GramForm {
    RatMat g;
    bool definite = false;
};
// Exact definiteness test by leading principal minors.
bool is_positive_definite(const RatMat& g);
GramForm make_gram(const RatMat& g);

struct ShortVectors {
    std::vector<ZVec> vectors;        // one per +-pair, lexicographically sorted
    std::map<Q, std::size_t> counts;  // value -> number of +-pairs
};
// Nonzero x with x^t g x <= bound, one representative per +-pair (the lexicographically larger).
ShortVectors short_vectors(const GramForm& g, const Q& bound);
// For an integral-valued form (x^t g x in Z for integer x): counts[v] = number of +-pairs with
// value v, for 1 <= v <= bound. counts[0] is unused.
std::vector<std::size_t> count_by_value(const RatMat& g, long bound);
// Stops and returns true as soon as a vector of value exactly `target` is found.
bool represents(const RatMat& g, const Q& target);
// Low-level enumerator on a positive definite integer matrix a.
// Calls f(y, y^t a y) once per +-pair of nonzero y with y^t a y <= bound; y is normalized so its
// first nonzero coordinate is positive. Returning false from f stops the enumeration.
void enumerate_int(const IntMat& a, const Z& bound,
                   const std::function<bool(const ZVec&, const Z&)>& f);

int kronecker(const Z& a, const Z& n);
int hilbert_symbol(const Q& a, const Q& b, long place);  // place 0 means infinity
int hilbert_symbol(const Q& a, const Q& b, const Z& p);
int hilbert_symbol_infinity(const Q& a, const Q& b);

Z divisor_sum_constrained(const Z& n, const Z& a, const Z& b);
std::vector<std::pair<Z, unsigned>> factor(const Z& n);
std::vector<Z> divisors(const Z& n);
bool is_prime(const Z& n);
unsigned valuation(Z n, const Z& p);
Z next_prime(const Z& n);
bool is_squarefree(const Z& n);

std::string to_string(const Q& q);

}  // namespace qmf
