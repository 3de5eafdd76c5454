#include "gowers/core.hpp"

#include <cctype>

namespace gowers {

Player parse_player(const std::string& s) {
  if (s == "I") return Player::I;
  if (s == "II") return Player::II;
  throw SpecInvalid("unknown player '" + s + "'");
}

static std::int64_t parse_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw SpecInvalid("malformed rational '" + whole + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw SpecInvalid("malformed rational '" + whole + "'");
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw SpecInvalid("malformed rational '" + whole + "'");
  return std::stoll(s);
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    auto num = parse_int(s.substr(0, slash), s);
    auto den = parse_int(s.substr(slash + 1), s);
    if (den == 0) throw SpecInvalid("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(parse_int(s, s));
  std::string whole = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  if (frac.empty() || frac.size() > 15) throw SpecInvalid("malformed rational '" + s + "'");
  bool negative = !whole.empty() && whole[0] == '-';
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  std::int64_t w = parse_int(whole, s);
  std::int64_t f = parse_int(frac, s);
  Rational magnitude = Rational(negative ? -w : w) + Rational(f, den);
  return negative ? -magnitude : magnitude;
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw SpecInvalid("rationals must be given as strings such as \"3/20\"", {{"value", j}});
}

std::string bits_key(const Bits& b) {
  std::string key;
  key.reserve(b.num_blocks() * 8 + 4);
  std::vector<Bits::block_type> blocks;
  boost::to_block_range(b, std::back_inserter(blocks));
  for (auto block : blocks) key.append(reinterpret_cast<const char*>(&block), sizeof(block));
  key += std::to_string(b.size());
  return key;
}

std::vector<int> bits_list(const Bits& b) {
  std::vector<int> out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(static_cast<int>(i));
  return out;
}

Bits bits_from_list(std::size_t n, const std::vector<int>& xs) {
  Bits b(n);
  for (int x : xs) b.set(static_cast<std::size_t>(x));
  return b;
}

json Error::to_json() const {
  return json{{"error", code_}, {"message", what()}, {"detail", detail_}};
}

}  // namespace gowers
