#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "unirat/mpoly.hpp"
#include "unirat/rational.hpp"

namespace unirat {

// Ordered variable names for the text grammar. Index i of a polynomial is
// printed as names[i].
class VarNames {
 public:
  VarNames() = default;
  explicit VarNames(std::vector<std::string> names) : names_(std::move(names)) {}

  // prefix0, prefix1, ..., prefix{count-1} starting at `first`.
  static VarNames indexed(const std::string& prefix, std::size_t count, std::size_t first = 0);
  // The default coordinate names x0..x{n-1}.
  static VarNames coords(std::size_t n) { return indexed("x", n); }

  VarNames operator+(const VarNames& tail) const;

  std::size_t size() const { return names_.size(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  // Index of `name`, or size() when absent.
  std::size_t find(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

// Polynomial text grammar: terms joined by '+'/'-'; a term is a product
// joined by '*' of rational constants ("a" or "a/b") and powers "name" or
// "name^e". Whitespace is ignored. Throws MalformedInput with the offending
// position on any error, including names not in `names`.
MPoly<Rational> parse_poly(std::string_view text, const VarNames& names);

// Canonical rendering: grevlex-descending terms, coefficient first.
std::string format_poly(const MPoly<Rational>& p, const VarNames& names);

}  // namespace unirat
