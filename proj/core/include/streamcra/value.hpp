#pragma once

#include <compare>
#include <string>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace streamcra {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Unit {
  friend bool operator==(const Unit&, const Unit&) = default;
};

/// Word over a registry's output alphabet; one character per letter.
struct Str {
  std::string text;
  friend bool operator==(const Str&, const Str&) = default;
};

/// Positive infinity, the zero of the tropical semiring.
struct Infinity {
  friend bool operator==(const Infinity&, const Infinity&) = default;
};

class Value {
 public:
  enum class Kind { Unit, Int, Rat, Str, Inf };

  Value() : repr_(Unit{}) {}
  Value(Unit u) : repr_(u) {}
  Value(Int i) : repr_(std::move(i)) {}
  Value(Rat r) : repr_(std::move(r)) {}
  Value(Str s) : repr_(std::move(s)) {}
  Value(Infinity i) : repr_(i) {}

  static Value integer(long long v) { return Value(Int(v)); }
  static Value word(std::string s) { return Value(Str{std::move(s)}); }
  static Value inf() { return Value(Infinity{}); }

  Kind kind() const { return static_cast<Kind>(repr_.index()); }
  bool is_unit() const { return kind() == Kind::Unit; }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_rat() const { return kind() == Kind::Rat; }
  bool is_str() const { return kind() == Kind::Str; }
  bool is_inf() const { return kind() == Kind::Inf; }

  const Int& as_int() const;
  const Rat& as_rat() const;
  const std::string& as_str() const;

  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) { return a.repr_ == b.repr_; }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  std::variant<Unit, Int, Rat, Str, Infinity> repr_;
};

std::ostream& operator<<(std::ostream& os, const Value& v);

}  // namespace streamcra
