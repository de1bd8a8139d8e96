#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>

#include <stdexcept>
#include <string>
#include <string_view>

namespace goedel {

// Exact truth values. Goedel connectives only compare, so arithmetic is rare
// and arbitrary precision costs little.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational rational(long long num, long long den = 1) {
  return Rational(Integer(num), Integer(den));
}

// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  };
  trim(s);
  if (s.empty()) throw Error("empty rational");
  auto is_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    trim(a);
    trim(b);
    if (!is_int(a) || !is_int(b)) throw Error("malformed rational '" + s + "'");
    Integer den(b);
    if (den == 0) throw Error("zero denominator in '" + s + "'");
    return Rational(Integer(a), den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (!is_int(whole) || (!frac.empty() && !is_int(frac)) || (!frac.empty() && (frac[0] == '-' || frac[0] == '+')))
      throw Error("malformed rational '" + s + "'");
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer f = frac.empty() ? Integer(0) : Integer(frac);
    Rational r{Integer(whole)};
    Rational part(f, scale);
    return neg ? r - part : r + part;
  }
  if (!is_int(s)) throw Error("malformed rational '" + s + "'");
  return Rational(Integer(s));
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace goedel
