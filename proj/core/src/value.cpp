#include "streamcra/value.hpp"

#include <ostream>

#include "streamcra/error.hpp"

namespace streamcra {

const Int& Value::as_int() const {
  if (!is_int()) fail(ErrorCode::ValueParseError, "value " + to_string() + " is not an integer");
  return std::get<Int>(repr_);
}

const Rat& Value::as_rat() const {
  if (!is_rat()) fail(ErrorCode::ValueParseError, "value " + to_string() + " is not a rational");
  return std::get<Rat>(repr_);
}

const std::string& Value::as_str() const {
  if (!is_str()) fail(ErrorCode::ValueParseError, "value " + to_string() + " is not a word");
  return std::get<Str>(repr_).text;
}

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::Unit: return "()";
    case Kind::Int: return std::get<Int>(repr_).str();
    case Kind::Rat: {
      const Rat& r = std::get<Rat>(repr_);
      if (denominator(r) == 1) return numerator(r).str();
      return numerator(r).str() + "/" + denominator(r).str();
    }
    case Kind::Str: return std::get<Str>(repr_).text;
    case Kind::Inf: return "inf";
  }
  return "?";
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  switch (a.kind()) {
    case Value::Kind::Unit:
    case Value::Kind::Inf: return std::strong_ordering::equal;
    case Value::Kind::Int: {
      const Int& x = a.as_int();
      const Int& y = b.as_int();
      return x < y ? std::strong_ordering::less
                   : (y < x ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    case Value::Kind::Rat: {
      const Rat& x = a.as_rat();
      const Rat& y = b.as_rat();
      return x < y ? std::strong_ordering::less
                   : (y < x ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    case Value::Kind::Str: return a.as_str() <=> b.as_str();
  }
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.to_string(); }

}  // namespace streamcra
