#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamcra/value.hpp"

namespace streamcra {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct AlgebraicTags {
  bool associative = false;
  bool commutative = false;
  std::optional<Value> identity;
  std::optional<Value> absorbing;
  std::optional<Value> right_mult_const;
};

struct Operation {
  std::string name;
  std::size_t arity = 0;
  std::function<Value(std::span<const Value>)> eval;
  AlgebraicTags tags;
};

using OpRef = std::shared_ptr<const Operation>;

/// A carrier set with one associative operation and its identity.
struct Monoid {
  std::string name;
  std::vector<std::string> alphabet;  // free monoid generators
  std::function<Value(const Value&, const Value&)> dot;
  Value one;
  std::function<Value(std::string_view)> parse;
  std::function<Value(std::mt19937_64&)> sample;
};

struct Semiring {
  std::string name;
  std::function<Value(const Value&, const Value&)> plus;
  std::function<Value(const Value&, const Value&)> times;
  Value zero;
  Value one;
  std::function<Value(std::string_view)> parse;
  std::function<Value(std::mt19937_64&)> sample;
};

/// nat-arith, int-arith, rat-arith, tropical, boolean.
Semiring semiring_by_name(std::string_view name);
/// free (needs alphabet), int-add, int-mul.
Monoid monoid_by_name(std::string_view name, const std::vector<std::string>& alphabet = {});
/// The multiplicative monoid (D, times, one) of a semiring.
Monoid multiplicative_monoid(const Semiring& s);

/// Names of violated laws; empty when every sampled instance holds.
std::vector<std::string> check_semiring_laws(const Semiring& s, std::uint64_t seed, int samples = 200);
std::vector<std::string> check_monoid_laws(const Monoid& m, std::uint64_t seed, int samples = 200);

enum class DomainKind { Int, Rat, Str, Semiring, MonoidUnary };

const char* domain_name(DomainKind k);

struct RegistryDescriptor {
  std::string domain;  // int | rat | str | semiring | monoid-unary
  std::vector<std::string> alphabet;
  std::optional<std::vector<std::string>> ops;  // default catalogue when absent
  std::string semiring;                         // domain == semiring
  std::string monoid;                           // domain == monoid-unary
};

/// Immutable set of named operations over one value domain. Parametric
/// families such as rmul[d] resolve on lookup when enabled.
class OperationRegistry {
 public:
  DomainKind kind() const { return kind_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<OpRef>& ops() const { return ops_; }
  const std::set<std::string>& families() const { return families_; }
  const RegistryDescriptor& descriptor() const { return descriptor_; }

  /// nullptr if the name is neither declared nor an instance of an enabled family.
  OpRef find(std::string_view name) const;
  /// Throws UnknownOperation.
  OpRef lookup(std::string_view name) const;
  /// First declared arity-0 operation, nullptr if none.
  OpRef first_constant() const;
  bool unary_only() const;

  const Semiring* semiring() const { return semiring_ ? &*semiring_ : nullptr; }
  const Monoid* monoid() const { return monoid_ ? &*monoid_ : nullptr; }

  Value parse_value(std::string_view text) const;
  Value sample_value(std::mt19937_64& rng) const;
  bool same_domain(const OperationRegistry& other) const;

 private:
  friend std::shared_ptr<const OperationRegistry> make_registry(const RegistryDescriptor&,
                                                                std::uint64_t);
  OpRef instantiate(std::string_view family, std::string_view param) const;

  DomainKind kind_ = DomainKind::Int;
  std::vector<std::string> alphabet_;
  std::vector<OpRef> ops_;
  std::map<std::string, OpRef, std::less<>> by_name_;
  std::set<std::string> families_;
  std::optional<Semiring> semiring_;
  std::optional<Monoid> monoid_;
  RegistryDescriptor descriptor_;
};

using RegistryRef = std::shared_ptr<const OperationRegistry>;

/// Errors: UnknownDomain, UnknownOperation, PartialOperationRejected,
/// AlgebraicTagViolation (randomized tag checks seeded by `seed`).
RegistryRef make_registry(const RegistryDescriptor& desc, std::uint64_t seed = kDefaultSeed);

}  // namespace streamcra
