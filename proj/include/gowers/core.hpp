#pragma once

#include <boost/dynamic_bitset.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gowers {

using json = nlohmann::json;
using Rational = boost::rational<std::int64_t>;
using Bits = boost::dynamic_bitset<std::uint64_t>;

using PointId = int;
using SubspaceId = int;
using History = std::vector<PointId>;

enum class Player { I, II };

inline Player opponent(Player p) { return p == Player::I ? Player::II : Player::I; }
inline const char* player_name(Player p) { return p == Player::I ? "I" : "II"; }
Player parse_player(const std::string& s);

// Accepts "3/20", "7", "-1/2" and finite decimals such as "0.15".
Rational parse_rational(const std::string& s);
std::string format_rational(const Rational& r);
Rational rational_from_json(const json& j);

std::string bits_key(const Bits& b);
std::vector<int> bits_list(const Bits& b);
Bits bits_from_list(std::size_t n, const std::vector<int>& xs);

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, json detail = json::object())
      : std::runtime_error(message), code_(std::move(code)), detail_(std::move(detail)) {}
  const std::string& code() const { return code_; }
  const json& detail() const { return detail_; }
  json to_json() const;

 private:
  std::string code_;
  json detail_;
};

#define GOWERS_ERROR(Name)                                                  \
  struct Name : Error {                                                     \
    explicit Name(const std::string& message, json detail = json::object()) \
        : Error(#Name, message, std::move(detail)) {}                       \
  }

GOWERS_ERROR(IllegalPosition);
GOWERS_ERROR(IllegalMove);
GOWERS_ERROR(NotTerminal);
GOWERS_ERROR(ExhaustionBudget);
GOWERS_ERROR(FiniteExhaustion);
GOWERS_ERROR(StrategyIncomplete);
GOWERS_ERROR(PigeonholeUnavailable);
GOWERS_ERROR(SpecInvalid);
GOWERS_ERROR(PaletteNotClosedUnderMeet);
GOWERS_ERROR(KindMismatch);
GOWERS_ERROR(NoMetric);
GOWERS_ERROR(NotDense);
GOWERS_ERROR(UnverifiedInput);

#undef GOWERS_ERROR

}  // namespace gowers
