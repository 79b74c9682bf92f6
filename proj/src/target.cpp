#include "dioph/target.hpp"

#include <regex>

namespace dioph {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\n");
    return s.substr(a, b - a + 1);
}

Rat parse_rational(const std::string& text) {
    static const std::regex frac(R"(^([+-]?\d+)(?:/(\d+))?$)");
    static const std::regex dec(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
    std::smatch m;
    std::string s = trim(text);
    if (std::regex_match(s, m, frac)) {
        Int num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str());
        Int den = m[2].matched ? Int(m[2].str()) : Int(1);
        if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
        Rat r(num, den);
        r.canonicalize();
        return r;
    }
    if (std::regex_match(s, m, dec) && (m[2].length() + m[3].length()) > 0) {
        std::string digits = m[2].str() + m[3].str();
        long exp10 = -static_cast<long>(m[3].length());
        if (m[4].matched) exp10 += std::stol(m[4].str());
        Int n(digits.empty() ? "0" : digits);
        Int p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        Rat r = exp10 < 0 ? Rat(n, p) : Rat(n * p);
        r.canonicalize();
        return m[1].str() == "-" ? Rat(-r) : r;
    }
    throw Error(ErrorKind::ParseError, "cannot parse number '" + s + "'");
}

}  // namespace

bool TargetVector::exact() const {
    for (const auto& a : alpha)
        if (!a.is_exact()) return false;
    return true;
}

CertifiedReal parse_component(const std::string& raw) {
    std::string text = trim(raw);
    static const std::regex surd_re(
        R"(^surd:\(\s*([+-]?\d+(?:/\d+)?)\s*([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*(\d+)(.*)$)");
    static const std::regex rat_re(R"(^rat:\s*([+-]?\d+(?:/\d+)?)(.*)$)");
    static const std::regex dec_re(R"(^dec:\s*([+-]?\d*\.?\d*(?:[eE][+-]?\d+)?)\s*~\s*([0-9./eE+-]+?)((?:\s+[+-].*)?)$)");
    static const std::regex offset_re(R"(^\s*([+-])\s*(\d+(?:/\d+)?)(.*)$)");

    std::smatch m;
    CertifiedReal value;
    std::string rest;
    if (std::regex_match(text, m, surd_re)) {
        Rat a = parse_rational(m[1].str());
        Rat b = parse_rational(m[3].str());
        if (m[2].str() == "-") b = -b;
        Int D(m[4].str());
        Rat c = parse_rational(m[5].str());
        if (c == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
        value = CertifiedReal::surd(a, b, D, c);
        rest = m[6].str();
    } else if (std::regex_match(text, m, rat_re)) {
        value = CertifiedReal(parse_rational(m[1].str()));
        rest = m[2].str();
    } else if (std::regex_match(text, m, dec_re)) {
        Rat mid = parse_rational(m[1].str());
        Rat rad = parse_rational(m[2].str());
        if (rad < 0) throw Error(ErrorKind::ParseError, "negative radius in '" + text + "'");
        value = CertifiedReal::enclosed(mid - rad, mid + rad);
        rest = m[3].str();
    } else {
        throw Error(ErrorKind::ParseError, "unrecognized target component '" + text + "'");
    }
    while (!trim(rest).empty()) {
        if (!std::regex_match(rest, m, offset_re))
            throw Error(ErrorKind::ParseError, "trailing text '" + trim(rest) + "' in '" + text + "'");
        Rat off = parse_rational(m[2].str());
        value = m[1].str() == "-" ? value - CertifiedReal(off) : value + CertifiedReal(off);
        rest = m[3].str();
    }
    return value;
}

TargetVector parse_target(const std::string& text) {
    TargetVector t;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (trim(part).empty()) throw Error(ErrorKind::ParseError, "empty component in target '" + text + "'");
        t.alpha.push_back(parse_component(part));
        t.source.push_back(trim(part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return t;
}

TargetVector make_target(std::vector<CertifiedReal> alpha) {
    TargetVector t;
    for (const auto& a : alpha) t.source.push_back(a.describe());
    t.alpha = std::move(alpha);
    return t;
}

CertifiedReal norm_sq_with_one(const TargetVector& t) {
    CertifiedReal s(1L);
    for (const auto& a : t.alpha) s = s + a * a;
    return s;
}

}  // namespace dioph
