#include "nfsusy/rational.hpp"

#include <cctype>

#include "nfsusy/errors.hpp"

namespace nfsusy {

namespace {

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParameterError("empty rational literal");
  try {
    if (s.find('/') != std::string::npos) {
      Rational r(s, 10);
      if (sgn(r.get_den()) == 0) throw ParameterError("zero denominator in '" + text + "'");
      r.canonicalize();
      return r;
    }
    std::size_t epos = s.find_first_of("eE");
    long exp10 = 0;
    std::string mant = s;
    if (epos != std::string::npos) {
      exp10 = std::stol(s.substr(epos + 1));
      mant = s.substr(0, epos);
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant = mant.substr(1);
    }
    std::size_t dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(mant.size() - dot - 1);
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
    }
    if (digits.empty()) throw ParameterError("malformed rational literal '" + text + "'");
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParameterError("malformed rational literal '" + text + "'");
      }
    }
    Rational r(mpz_class(digits, 10));
    r *= pow10(exp10);
    if (neg) r = -r;
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParameterError("malformed rational literal '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ParameterError("rational literal out of range '" + text + "'");
  }
}

std::string to_string(const Rational& r) { return r.get_str(10); }

bool rational_sqrt(const Rational& r, Rational& root) {
  if (sgn(r) < 0) return false;
  mpz_class n = r.get_num();
  mpz_class d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  root = Rational(sn, sd);
  root.canonicalize();
  return true;
}

}  // namespace nfsusy
