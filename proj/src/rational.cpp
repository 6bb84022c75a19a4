#include "polycc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace polycc {

Rat make_rat(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("malformed rational: '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

Rat parse_decimal(std::string_view text) {
  std::string_view mant = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    std::string_view exp_part = text.substr(e + 1);
    mpz_class z = parse_integer(exp_part, text);
    if (!z.fits_slong_p() || abs(z) > 4096) throw ParseError("exponent out of range: '" + std::string(text) + "'");
    exponent = z.get_si();
  }
  bool neg = false;
  if (!mant.empty() && (mant.front() == '-' || mant.front() == '+')) {
    neg = mant.front() == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = mant.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mant.substr(0, dot);
    std::string_view fp = mant.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw ParseError("malformed rational: '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(mant)) throw ParseError("malformed rational: '" + std::string(text) + "'");
    digits = std::string(mant);
  }
  mpz_class num(digits, 10);
  long scale = exponent - frac_len;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rat r = scale >= 0 ? Rat(num * ten_pow) : Rat(num, ten_pow);
  r.canonicalize();
  return neg ? Rat(-r) : r;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  if (text.empty()) throw ParseError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);
  return Rat(parse_integer(text, text));
}

std::string format_rat(const Rat& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rat& value) { return value.get_d(); }

double sqrt_to_double(const Rat& value) {
  if (value < 0) throw std::domain_error("sqrt of negative rational");
  mpf_class x(value, 256);
  mpf_class root(0, 256);
  mpf_sqrt(root.get_mpf_t(), x.get_mpf_t());
  return root.get_d();
}

Rat sqrt_upper_bound(const Rat& value) {
  if (value < 0) throw std::domain_error("sqrt of negative rational");
  // ceil(sqrt(value) * 10^12) via integer square root of value * 10^24.
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 12);
  Rat scaled = value * Rat(scale * scale);
  mpz_class floor_scaled = scaled.get_num() / scaled.get_den();
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), floor_scaled.get_mpz_t());
  while (Rat(root * root) < scaled) ++root;
  Rat r(root, scale);
  r.canonicalize();
  return r;
}

Rat pow(const Rat& base, unsigned exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace polycc
