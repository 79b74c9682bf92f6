#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dioph {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;

enum class ErrorKind {
    DependentInput,
    UndecidablePrecision,
    TieDetected,
    RationalTermination,
    NotSpanning,
    PreconditionViolated,
    NoIndependentTriple,
    DomainError,
    NotPrimitive,
    InternalCertificateFailure,
    StepTooLarge,
    InsufficientDepth,
    ParseError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);
    ErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

struct Interval {
    Rat lo, hi;

    Interval() = default;
    Interval(Rat l, Rat h);
    static Interval point(const Rat& x) { return Interval(x, x); }

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool positive() const { return lo > 0; }
    bool negative() const { return hi < 0; }

    Interval operator-() const { return Interval(-hi, -lo); }
    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval abs() const;
};

Interval hull(const Interval& a, const Interval& b);
Interval imax(const Interval& a, const Interval& b);
Interval imin(const Interval& a, const Interval& b);

// Default refinement budget in bits; DIOPH_PRECISION_BITS overrides it.
unsigned precision_bits();
void set_precision_bits(unsigned bits);

// Rational enclosure of sqrt(x) for x >= 0 with width at most 2^-bits (relative to 1).
Interval sqrt_enclosure(const Rat& x, unsigned bits);

class CertifiedReal {
public:
    CertifiedReal();
    CertifiedReal(long v);
    CertifiedReal(const Int& v);
    CertifiedReal(const Rat& v);
    template <class T>
    CertifiedReal(const __gmp_expr<mpz_t, T>& e) : CertifiedReal(Int(e)) {}
    template <class T>
    CertifiedReal(const __gmp_expr<mpq_t, T>& e) : CertifiedReal(Rat(e)) {}

    // (a + b*sqrt(D)) / c
    static CertifiedReal surd(const Rat& a, const Rat& b, const Int& D, const Rat& c);
    static CertifiedReal sqrt_of(const Int& D);
    // Inexact value known only to lie in [lo, hi].
    static CertifiedReal enclosed(const Rat& lo, const Rat& hi);

    bool is_exact() const { return exact_; }
    bool is_rational() const;
    std::optional<Rat> as_rational() const;
    bool is_exact_zero() const;

    Interval enclose(unsigned bits) const;
    Interval refine_to(const Rat& width) const;

    CertifiedReal operator-() const;
    friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b);
    CertifiedReal pow(unsigned n) const;
    CertifiedReal abs() const;

    // -1, 0, +1, or nullopt if the sign cannot be decided within `bits`.
    std::optional<int> sign(unsigned bits) const;
    // Sign or throw UndecidablePrecision.
    int sign_or_throw(const std::string& what) const;

    std::string to_string(int digits = 20) const;
    std::string describe() const;

    // Exact form r + sum c_D sqrt(D) with D square-free > 1.
    const Rat& rational_part() const { return r_; }
    const std::map<Int, Rat>& radicals() const { return terms_; }

private:
    bool exact_ = true;
    bool normalized_ = true;
    Rat r_;
    std::map<Int, Rat> terms_;
    Interval iv_;

    void add_term(const Int& D, const Rat& c);
    void drop_zeros();
};

enum class Ordering { Less, Equal, Greater, TieUndecided };
const char* to_string(Ordering o);

Ordering certified_compare(const CertifiedReal& a, const CertifiedReal& b, const Rat& max_width);
// Compare with the global precision budget; throws UndecidablePrecision on failure.
Ordering compare_or_throw(const CertifiedReal& a, const CertifiedReal& b, const std::string& what);
CertifiedReal cmax(const CertifiedReal& a, const CertifiedReal& b);
CertifiedReal cmin(const CertifiedReal& a, const CertifiedReal& b);

// Evaluates lhs <= rhs (or <) with certified arithmetic.
bool certified_le(const CertifiedReal& lhs, const CertifiedReal& rhs, const std::string& what);
bool certified_lt(const CertifiedReal& lhs, const CertifiedReal& rhs, const std::string& what);

// Split D = s^2 * f with f square-free; returns false if factoring was incomplete.
bool squarefree_split(const Int& D, Int& square_root_part, Int& squarefree_part);

// n/d in canonical form.
inline Rat frac(const Int& n, const Int& d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

Int floor_rat(const Rat& x);
Int ceil_rat(const Rat& x);
Int round_nearest(const Rat& x);
std::string rat_decimal(const Rat& x, int digits);
std::string rat_sci(const Rat& x, int digits);

// Integer-vector geometry.
Int dot(const IntVec& a, const IntVec& b);
IntVec add(const IntVec& a, const IntVec& b);
IntVec sub(const IntVec& a, const IntVec& b);
IntVec scale(const Int& k, const IntVec& a);
IntVec cross(const IntVec& a, const IntVec& b);
Int content(const IntVec& v);
bool is_primitive(const IntVec& v);
Int det(std::vector<IntVec> rows);
Int det3(const IntVec& a, const IntVec& b, const IntVec& c);

std::vector<Int> minors2(const IntVec& v0, const IntVec& v1);
// All k x k minors of the k x n matrix with the given rows.
std::vector<Int> maximal_minors(const std::vector<IntVec>& rows);
std::size_t rank(const std::vector<IntVec>& rows);

Int fundamental_volume_sq(const IntVec& v0, const IntVec& v1);
bool is_complete(const IntVec& v0, const IntVec& v1);
// Squared volume of span(rows) ∩ Z^n: (sum of squared minors) / gcd(minors)^2.
Int completed_volume_sq(const std::vector<IntVec>& rows);

std::string vec_string(const IntVec& v);

}  // namespace dioph
