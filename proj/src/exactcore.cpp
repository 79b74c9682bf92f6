#include "dioph/exactcore.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace dioph {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::DependentInput: return "DependentInput";
        case ErrorKind::UndecidablePrecision: return "UndecidablePrecision";
        case ErrorKind::TieDetected: return "TieDetected";
        case ErrorKind::RationalTermination: return "RationalTermination";
        case ErrorKind::NotSpanning: return "NotSpanning";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::NoIndependentTriple: return "NoIndependentTriple";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::NotPrimitive: return "NotPrimitive";
        case ErrorKind::InternalCertificateFailure: return "InternalCertificateFailure";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::InsufficientDepth: return "InsufficientDepth";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

Interval::Interval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) std::swap(lo, hi);
}

Interval operator+(const Interval& a, const Interval& b) { return Interval(a.lo + b.lo, a.hi + b.hi); }
Interval operator-(const Interval& a, const Interval& b) { return Interval(a.lo - b.hi, a.hi - b.lo); }

Interval operator*(const Interval& a, const Interval& b) {
    Rat p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    Rat lo = p[0], hi = p[0];
    for (int i = 1; i < 4; ++i) {
        if (p[i] < lo) lo = p[i];
        if (p[i] > hi) hi = p[i];
    }
    return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0 && b.hi >= 0) throw Error(ErrorKind::UndecidablePrecision, "interval division by an enclosure of zero");
    Rat inv_lo = 1 / b.hi, inv_hi = 1 / b.lo;
    return a * Interval(inv_lo, inv_hi);
}

Interval Interval::abs() const {
    if (lo >= 0) return *this;
    if (hi <= 0) return -*this;
    Rat m = -lo > hi ? Rat(-lo) : hi;
    return Interval(0, m);
}

Interval hull(const Interval& a, const Interval& b) {
    return Interval(a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi);
}
Interval imax(const Interval& a, const Interval& b) {
    return Interval(a.lo > b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi);
}
Interval imin(const Interval& a, const Interval& b) {
    return Interval(a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi);
}

namespace {

unsigned g_precision_bits = 0;

unsigned bits_for_width(const Rat& w) {
    if (w <= 0) return precision_bits();
    // 2^-bits <= w
    size_t nb = mpz_sizeinbase(w.get_num_mpz_t(), 2);
    size_t db = mpz_sizeinbase(w.get_den_mpz_t(), 2);
    long b = static_cast<long>(db) - static_cast<long>(nb) + 2;
    return static_cast<unsigned>(std::max<long>(b, 8));
}

Rat pow2(long e) {
    Rat r(1);
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), e);
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), -e);
    return r;
}

unsigned magnitude_bits(const Rat& c) {
    Int a = abs(c.get_num()) / c.get_den() + 1;
    return static_cast<unsigned>(mpz_sizeinbase(a.get_mpz_t(), 2));
}

}  // namespace

unsigned precision_bits() {
    if (g_precision_bits == 0) {
        g_precision_bits = 4096;
        if (const char* env = std::getenv("DIOPH_PRECISION_BITS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 32) g_precision_bits = static_cast<unsigned>(v);
        }
    }
    return g_precision_bits;
}

void set_precision_bits(unsigned bits) { g_precision_bits = std::max(32u, bits); }

Interval sqrt_enclosure(const Rat& x, unsigned bits) {
    if (x < 0) throw Error(ErrorKind::DomainError, "square root of a negative number");
    if (x == 0) return Interval::point(0);
    // sqrt(p/q) = sqrt(p*q)/q
    Int pq = x.get_num() * x.get_den();
    Int scaled = pq << (2 * bits);
    Int s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    Rat denom(x.get_den() << bits);
    Rat lo = Rat(s) / denom;
    lo.canonicalize();
    if (s * s == scaled) return Interval::point(lo);
    Rat hi = Rat(s + 1) / denom;
    hi.canonicalize();
    return Interval(lo, hi);
}

bool squarefree_split(const Int& D, Int& root, Int& free) {
    if (D <= 0) throw Error(ErrorKind::DomainError, "radicand must be positive");
    root = 1;
    free = 1;
    Int m = D;
    const unsigned long limit = 1000000;
    unsigned long p = 2;
    for (; p <= limit; p += (p == 2 ? 1 : 2)) {
        Int pp = Int(p) * p;
        if (pp > m) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            int e = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            }
            for (int i = 0; i < e / 2; ++i) root *= p;
            if (e % 2) free *= p;
        }
    }
    if (m == 1) return true;
    if (p > limit) {
        if (mpz_perfect_square_p(m.get_mpz_t())) {
            Int s;
            mpz_sqrt(s.get_mpz_t(), m.get_mpz_t());
            root *= s;
            return true;
        }
        free *= m;
        // Every remaining prime factor exceeds the limit, so m < limit^3 has at most two of them.
        return m < Int(limit) * limit * limit;
    }
    free *= m;
    return true;
}

CertifiedReal::CertifiedReal() : r_(0) {}
CertifiedReal::CertifiedReal(long v) : r_(v) {}
CertifiedReal::CertifiedReal(const Int& v) : r_(v) {}
CertifiedReal::CertifiedReal(const Rat& v) : r_(v) {}

void CertifiedReal::add_term(const Int& D, const Rat& c) {
    if (c == 0) return;
    if (D == 1) {
        r_ += c;
        return;
    }
    auto it = terms_.find(D);
    if (it == terms_.end())
        terms_.emplace(D, c);
    else
        it->second += c;
}

void CertifiedReal::drop_zeros() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

CertifiedReal CertifiedReal::surd(const Rat& a, const Rat& b, const Int& D, const Rat& c) {
    if (c == 0) throw Error(ErrorKind::DomainError, "surd with zero denominator");
    if (D <= 0) throw Error(ErrorKind::DomainError, "surd radicand must be positive");
    CertifiedReal x;
    Int root, free;
    x.normalized_ = squarefree_split(D, root, free);
    x.r_ = a / c;
    x.add_term(free, b * Rat(root) / c);
    x.drop_zeros();
    return x;
}

CertifiedReal CertifiedReal::sqrt_of(const Int& D) { return surd(0, 1, D, 1); }

CertifiedReal CertifiedReal::enclosed(const Rat& lo, const Rat& hi) {
    CertifiedReal x;
    x.exact_ = false;
    x.iv_ = Interval(lo, hi);
    if (x.iv_.lo == x.iv_.hi) {
        x.exact_ = true;
        x.r_ = x.iv_.lo;
    }
    return x;
}

bool CertifiedReal::is_rational() const { return exact_ && terms_.empty(); }

std::optional<Rat> CertifiedReal::as_rational() const {
    if (is_rational()) return r_;
    return std::nullopt;
}

bool CertifiedReal::is_exact_zero() const { return exact_ && terms_.empty() && r_ == 0; }

Interval CertifiedReal::enclose(unsigned bits) const {
    if (!exact_) return iv_;
    Interval acc = Interval::point(r_);
    if (terms_.empty()) return acc;
    unsigned extra = 2;
    for (size_t n = terms_.size(); n > 1; n >>= 1) ++extra;
    for (const auto& [D, c] : terms_) {
        unsigned b = bits + extra + magnitude_bits(c);
        Interval s = sqrt_enclosure(Rat(D), b);
        acc = acc + s * Interval::point(c);
    }
    return acc;
}

Interval CertifiedReal::refine_to(const Rat& width) const {
    if (!exact_) return iv_;
    return enclose(bits_for_width(width));
}

namespace {

CertifiedReal inexact_binary(const CertifiedReal& a, const CertifiedReal& b, char op) {
    Rat w = 0;
    if (!a.is_exact()) w = a.enclose(0).width();
    if (!b.is_exact()) {
        Rat wb = b.enclose(0).width();
        if (w == 0 || (wb > 0 && wb < w)) w = wb;
    }
    unsigned bits = w > 0 ? std::min(bits_for_width(w) + 32, precision_bits()) : 128;
    Interval x = a.enclose(bits), y = b.enclose(bits);
    Interval r = op == '+' ? x + y : op == '-' ? x - y : x * y;
    return CertifiedReal::enclosed(r.lo, r.hi);
}

}  // namespace

CertifiedReal CertifiedReal::operator-() const {
    CertifiedReal x = *this;
    if (!exact_) {
        x.iv_ = -iv_;
        return x;
    }
    x.r_ = -r_;
    for (auto& [D, c] : x.terms_) c = -c;
    return x;
}

CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    if (!a.exact_ || !b.exact_) return inexact_binary(a, b, '+');
    CertifiedReal x = a;
    x.normalized_ = a.normalized_ && b.normalized_;
    x.r_ += b.r_;
    for (const auto& [D, c] : b.terms_) x.add_term(D, c);
    x.drop_zeros();
    return x;
}

CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) { return a + (-b); }

CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
    if (!a.exact_ || !b.exact_) return inexact_binary(a, b, '*');
    CertifiedReal x;
    x.normalized_ = a.normalized_ && b.normalized_;
    x.r_ = a.r_ * b.r_;
    for (const auto& [D, c] : b.terms_) x.add_term(D, a.r_ * c);
    for (const auto& [D, c] : a.terms_) x.add_term(D, b.r_ * c);
    for (const auto& [D1, c1] : a.terms_) {
        for (const auto& [D2, c2] : b.terms_) {
            Int g = gcd(D1, D2);
            Int f = (D1 / g) * (D2 / g);
            x.add_term(f, c1 * c2 * Rat(g));
        }
    }
    x.drop_zeros();
    return x;
}

CertifiedReal CertifiedReal::pow(unsigned n) const {
    CertifiedReal acc(1L), base = *this;
    while (n) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return acc;
}

std::optional<int> CertifiedReal::sign(unsigned bits) const {
    if (!exact_) {
        if (iv_.lo > 0) return 1;
        if (iv_.hi < 0) return -1;
        if (iv_.lo == 0 && iv_.hi == 0) return 0;
        return std::nullopt;
    }
    if (terms_.empty()) return sgn(r_);
    if (terms_.size() == 1 && normalized_) {
        // r + c*sqrt(D): decide by squaring.
        const auto& [D, c] = *terms_.begin();
        int sr = sgn(r_), sc = sgn(c);
        if (sr == 0) return sc;
        if (sr == sc) return sr;
        Rat lhs = r_ * r_, rhs = c * c * Rat(D);
        if (lhs > rhs) return sr;
        if (lhs < rhs) return sc;
        return 0;
    }
    for (unsigned b = 64;; b *= 2) {
        unsigned use = std::min(b, bits);
        Interval e = enclose(use);
        if (e.lo > 0) return 1;
        if (e.hi < 0) return -1;
        if (use >= bits) break;
    }
    return std::nullopt;
}

int CertifiedReal::sign_or_throw(const std::string& what) const {
    auto s = sign(precision_bits());
    if (!s) throw Error(ErrorKind::UndecidablePrecision, what);
    return *s;
}

CertifiedReal CertifiedReal::abs() const {
    auto s = sign(precision_bits());
    if (s) return *s < 0 ? -*this : *this;
    Interval e = enclose(precision_bits()).abs();
    return enclosed(e.lo, e.hi);
}

std::string CertifiedReal::to_string(int digits) const {
    Interval e = enclose(static_cast<unsigned>(digits * 4 + 16));
    return rat_sci(e.mid(), digits);
}

std::string CertifiedReal::describe() const {
    std::ostringstream os;
    if (!exact_) {
        os << "[" << iv_.lo.get_str() << ", " << iv_.hi.get_str() << "]";
        return os.str();
    }
    os << r_.get_str();
    for (const auto& [D, c] : terms_) os << " + (" << c.get_str() << ")*sqrt(" << D.get_str() << ")";
    return os.str();
}

const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::Less: return "less";
        case Ordering::Equal: return "equal";
        case Ordering::Greater: return "greater";
        case Ordering::TieUndecided: return "tie-undecided";
    }
    return "?";
}

Ordering certified_compare(const CertifiedReal& a, const CertifiedReal& b, const Rat& max_width) {
    if (max_width <= 0) throw Error(ErrorKind::DomainError, "max_width must be positive");
    unsigned limit = bits_for_width(max_width);
    if (a.is_exact() && b.is_exact()) {
        CertifiedReal d = a - b;
        if (d.is_exact_zero()) return Ordering::Equal;
        auto s = d.sign(limit);
        if (s) return *s < 0 ? Ordering::Less : *s > 0 ? Ordering::Greater : Ordering::Equal;
        return Ordering::TieUndecided;
    }
    Interval x = a.enclose(limit), y = b.enclose(limit);
    if (x.hi < y.lo) return Ordering::Less;
    if (x.lo > y.hi) return Ordering::Greater;
    return Ordering::TieUndecided;
}

Ordering compare_or_throw(const CertifiedReal& a, const CertifiedReal& b, const std::string& what) {
    Ordering o = certified_compare(a, b, pow2(-static_cast<long>(precision_bits())));
    if (o == Ordering::TieUndecided) throw Error(ErrorKind::UndecidablePrecision, what);
    return o;
}

CertifiedReal cmax(const CertifiedReal& a, const CertifiedReal& b) {
    Ordering o = certified_compare(a, b, pow2(-static_cast<long>(precision_bits())));
    if (o == Ordering::Less) return b;
    if (o != Ordering::TieUndecided) return a;
    unsigned bits = precision_bits();
    Interval r = imax(a.enclose(bits), b.enclose(bits));
    return CertifiedReal::enclosed(r.lo, r.hi);
}

CertifiedReal cmin(const CertifiedReal& a, const CertifiedReal& b) {
    Ordering o = certified_compare(a, b, pow2(-static_cast<long>(precision_bits())));
    if (o == Ordering::Greater) return b;
    if (o != Ordering::TieUndecided) return a;
    unsigned bits = precision_bits();
    Interval r = imin(a.enclose(bits), b.enclose(bits));
    return CertifiedReal::enclosed(r.lo, r.hi);
}

bool certified_le(const CertifiedReal& lhs, const CertifiedReal& rhs, const std::string& what) {
    Ordering o = compare_or_throw(lhs, rhs, what);
    return o != Ordering::Greater;
}

bool certified_lt(const CertifiedReal& lhs, const CertifiedReal& rhs, const std::string& what) {
    return compare_or_throw(lhs, rhs, what) == Ordering::Less;
}

Int floor_rat(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Int ceil_rat(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Int round_nearest(const Rat& x) { return floor_rat(x + Rat(1, 2)); }

std::string rat_decimal(const Rat& x, int digits) {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Int n = round_nearest(x * Rat(scale));
    bool neg = n < 0;
    if (neg) n = -n;
    std::string s = n.get_str();
    if (digits > 0) {
        if (static_cast<int>(s.size()) <= digits) s = std::string(digits - s.size() + 1, '0') + s;
        s.insert(s.size() - digits, ".");
    }
    return (neg ? "-" : "") + s;
}

std::string rat_sci(const Rat& x, int digits) {
    if (x == 0) return "0";
    Rat a = x < 0 ? Rat(-x) : x;
    long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
    auto p10 = [](long k) {
        Int t;
        mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
        return k < 0 ? Rat(Int(1), t) : Rat(t);
    };
    while (a >= p10(e + 1)) ++e;
    while (a < p10(e)) --e;
    Int m = round_nearest(a / p10(e - digits + 1));
    Int lim;
    mpz_ui_pow_ui(lim.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    if (m >= lim) {
        ++e;
        m = round_nearest(a / p10(e - digits + 1));
    }
    std::string s = m.get_str();
    std::string out = (x < 0 ? "-" : "") + s.substr(0, 1);
    if (s.size() > 1) out += "." + s.substr(1);
    out += "e" + std::string(e < 0 ? "-" : "+") + std::to_string(e < 0 ? -e : e);
    return out;
}

Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IntVec add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

IntVec sub(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

IntVec scale(const Int& k, const IntVec& a) {
    IntVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
    return r;
}

IntVec cross(const IntVec& a, const IntVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Int content(const IntVec& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

bool is_primitive(const IntVec& v) { return content(v) == 1; }

Int det(std::vector<IntVec> m) {
    // Bareiss fraction-free elimination.
    size_t n = m.size();
    if (n == 0) return 1;
    int sign = 1;
    Int prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

Int det3(const IntVec& a, const IntVec& b, const IntVec& c) { return dot(a, cross(b, c)); }

std::vector<Int> minors2(const IntVec& v0, const IntVec& v1) {
    std::vector<Int> out;
    for (size_t i = 0; i < v0.size(); ++i)
        for (size_t j = i + 1; j < v0.size(); ++j) out.push_back(v0[i] * v1[j] - v0[j] * v1[i]);
    return out;
}

std::vector<Int> maximal_minors(const std::vector<IntVec>& rows) {
    size_t k = rows.size();
    size_t n = k ? rows[0].size() : 0;
    std::vector<Int> out;
    if (k == 0 || k > n) return out;
    std::vector<size_t> cols(k);
    for (size_t i = 0; i < k; ++i) cols[i] = i;
    while (true) {
        std::vector<IntVec> sub(k, IntVec(k));
        for (size_t r = 0; r < k; ++r)
            for (size_t c = 0; c < k; ++c) sub[r][c] = rows[r][cols[c]];
        out.push_back(det(sub));
        size_t i = k;
        while (i > 0 && cols[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cols[i - 1];
        for (size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
    }
    return out;
}

std::size_t rank(const std::vector<IntVec>& rows) {
    std::vector<IntVec> m = rows;
    size_t r = 0;
    size_t n = m.empty() ? 0 : m[0].size();
    for (size_t c = 0; c < n && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        for (size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            Int a = m[r][c], b = m[i][c];
            for (size_t j = c; j < n; ++j) m[i][j] = m[i][j] * a - m[r][j] * b;
        }
        ++r;
    }
    return r;
}

Int fundamental_volume_sq(const IntVec& v0, const IntVec& v1) {
    Int s = 0;
    for (const auto& m : minors2(v0, v1)) s += m * m;
    if (s == 0) throw Error(ErrorKind::DependentInput, "vectors " + vec_string(v0) + " and " + vec_string(v1) + " are dependent");
    return s;
}

bool is_complete(const IntVec& v0, const IntVec& v1) {
    Int g = 0;
    for (const auto& m : minors2(v0, v1)) g = gcd(g, m);
    if (g == 0) throw Error(ErrorKind::DependentInput, "vectors " + vec_string(v0) + " and " + vec_string(v1) + " are dependent");
    return g == 1;
}

Int completed_volume_sq(const std::vector<IntVec>& rows) {
    Int s = 0, g = 0;
    for (const auto& m : maximal_minors(rows)) {
        s += m * m;
        g = gcd(g, m);
    }
    if (g == 0) throw Error(ErrorKind::DependentInput, "rows are linearly dependent");
    return s / (g * g);
}

std::string vec_string(const IntVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s + ")";
}

}  // namespace dioph
