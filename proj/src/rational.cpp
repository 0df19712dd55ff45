#include "satseek/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

namespace satseek {

namespace {

std::int64_t parse_integer(std::string_view text, std::size_t offset, std::size_t* end) {
  std::size_t i = offset;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
    throw std::invalid_argument("invalid rational '" + std::string(text) +
                                "': expected digit at position " + std::to_string(i));
  }
  std::int64_t value = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    const int digit = text[i] - '0';
    if (value > (INT64_MAX - digit) / 10) {
      throw std::invalid_argument("invalid rational '" + std::string(text) +
                                  "': integer overflow at position " + std::to_string(i));
    }
    value = value * 10 + digit;
    ++i;
  }
  *end = i;
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t begin = 0;
  std::size_t finish = text.size();
  while (begin < finish && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (finish > begin && std::isspace(static_cast<unsigned char>(text[finish - 1]))) --finish;
  const std::string_view body = text.substr(begin, finish - begin);
  if (body.empty()) {
    throw std::invalid_argument("invalid rational '" + std::string(text) + "': empty");
  }

  std::size_t pos = 0;
  const std::int64_t numerator = parse_integer(body, 0, &pos);
  std::int64_t denominator = 1;
  if (pos < body.size()) {
    if (body[pos] != '/') {
      throw std::invalid_argument("invalid rational '" + std::string(text) +
                                  "': unexpected character at position " +
                                  std::to_string(begin + pos));
    }
    const std::int64_t den = parse_integer(body, pos + 1, &pos);
    if (pos != body.size()) {
      throw std::invalid_argument("invalid rational '" + std::string(text) +
                                  "': unexpected character at position " +
                                  std::to_string(begin + pos));
    }
    if (den == 0) {
      throw std::invalid_argument("invalid rational '" + std::string(text) +
                                  "': zero denominator");
    }
    denominator = den;
  }
  return {numerator, denominator};
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double rational_to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Rational rational_lcm(const Rational& a, const Rational& b) {
  if (a.numerator() <= 0 || b.numerator() <= 0) {
    throw std::invalid_argument("rational_lcm requires positive arguments");
  }
  const std::int64_t num = std::lcm(a.numerator(), b.numerator());
  const std::int64_t den = std::gcd(a.denominator(), b.denominator());
  return {num, den};
}

}  // namespace satseek
