#include "unirat/poly_text.hpp"

#include <cctype>
#include <sstream>

#include "unirat/errors.hpp"

namespace unirat {

VarNames VarNames::indexed(const std::string& prefix, std::size_t count, std::size_t first) {
  std::vector<std::string> n;
  for (std::size_t i = 0; i < count; ++i) n.push_back(prefix + std::to_string(first + i));
  return VarNames(std::move(n));
}

VarNames VarNames::operator+(const VarNames& tail) const {
  std::vector<std::string> n = names_;
  n.insert(n.end(), tail.names_.begin(), tail.names_.end());
  return VarNames(std::move(n));
}

std::size_t VarNames::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return names_.size();
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VarNames& names) : names_(names) {
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s_.push_back(ch);
  }

  MPoly<Rational> parse() {
    MPoly<Rational> acc(names_.size());
    if (s_.empty()) error("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      Rational sign(1);
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        if (s_[pos_] == '-') sign = Rational(-1);
        ++pos_;
      } else if (!first) {
        error("expected '+' or '-'");
      }
      auto [m, c] = term();
      acc.add_term(m, c * sign);
      first = false;
    }
    return acc;
  }

 private:
  std::pair<Monomial, Rational> term() {
    Monomial m(names_.size());
    Rational c(1);
    factor(m, c);
    while (pos_ < s_.size() && s_[pos_] == '*') {
      ++pos_;
      factor(m, c);
    }
    return {m, c};
  }

  void factor(Monomial& m, Rational& c) {
    if (pos_ >= s_.size()) error("unexpected end of input");
    char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string num = digits();
      std::string den = "1";
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        den = digits();
        if (den.empty()) error("expected denominator digits");
      }
      c *= Rational::parse(num + "/" + den);
      return;
    }
    if (!std::isalpha(static_cast<unsigned char>(ch))) error(std::string("unexpected character '") + ch + "'");
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    std::size_t idx = names_.find(name);
    if (idx == names_.size()) error("unknown variable '" + name + "'");
    unsigned long e = 1;
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      std::string d = digits();
      if (d.empty()) error("expected exponent digits");
      e = std::stoul(d);
      if (e > 60000) error("exponent too large");
    }
    m.set(idx, static_cast<Monomial::Exp>(m[idx] + e));
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::MalformedInput, msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
  const VarNames& names_;
};

}  // namespace

MPoly<Rational> parse_poly(std::string_view text, const VarNames& names) { return Parser(text, names).parse(); }

std::string format_poly(const MPoly<Rational>& p, const VarNames& names) {
  if (names.size() != p.nvars()) fail(ErrorKind::InvalidArgument, "name count differs from variable count");
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c.abs();
    if (c.sign() < 0) os << "-";
    else if (!first) os << "+";
    first = false;
    bool need_star = false;
    if (!a.is_one() || m.degree() == 0) {
      os << a;
      need_star = true;
    }
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (!m[i]) continue;
      if (need_star) os << "*";
      os << names[i];
      if (m[i] > 1) os << "^" << m[i];
      need_star = true;
    }
  }
  return os.str();
}

}  // namespace unirat
