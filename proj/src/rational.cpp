#include "cdc/rational.hpp"

#include <charconv>
#include <cstdlib>

#include "cdc/errors.hpp"

namespace cdc {

std::string format_rational(const Rational& x) {
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParameterError("cannot parse rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ParameterError("cannot parse empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.size() > 15) throw ParameterError("too many decimals in '" + std::string(text) + "'");
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative) int_part.remove_prefix(1);
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t scale = 1;
    for (std::size_t d = 0; d < frac_part.size(); ++d) scale *= 10;
    std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    Rational value = Rational(whole) + Rational(frac, scale);
    return negative ? -value : value;
  }
  return Rational(parse_int(text, text));
}

std::string to_decimal(const Rational& x, int digits) {
  std::int64_t scale = 1;
  for (int d = 0; d < digits; ++d) scale *= 10;
  // |x| * scale rounded half away from zero, using 128-bit intermediates.
  __int128 num = x.numerator();
  __int128 den = x.denominator();
  bool negative = num < 0;
  if (negative) num = -num;
  __int128 scaled = (num * scale * 2 + den) / (den * 2);
  std::int64_t int_part = static_cast<std::int64_t>(scaled / scale);
  std::int64_t frac_part = static_cast<std::int64_t>(scaled % scale);
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += std::to_string(int_part);
  if (digits > 0) {
    std::string frac = std::to_string(frac_part);
    out += "." + std::string(digits - frac.size(), '0') + frac;
  }
  return out;
}

double to_double(const Rational& x) {
  return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

}  // namespace cdc
