#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace unirat {

// Every failure surfaced by the library carries one of these kinds so that
// callers (and the CLI exit-code mapping) can branch without string matching.
enum class ErrorKind {
  InvalidArgument,
  BadPrime,
  OddCharacteristic,
  NotDivisible,
  SingularPoint,
  PointNotOnVariety,
  PointNotOnQuadric,
  SingularBasePoint,
  LineInsideCubic,
  VertexOnBase,
  TangentsCoincide,
  DegenerateConic,
  SectionSingular,
  PoleHit,
  ChartVanishes,
  ArityMismatch,
  MalformedInput,
  DegreeCeilingExceeded,
  BudgetExceeded,
  NotEmptyModP,
  IdentityFails,
  RankDeficient,
  AbsorptionFails,
  LambdaZero,
  InterpolationAmbiguous,
  InterpolationEmpty,
  NoRationalPoint,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// PoleHit remembers the offending node so a caller can report it.
class PoleHit : public Error {
 public:
  explicit PoleHit(std::int64_t node)
      : Error(ErrorKind::PoleHit, "division by zero at node " + std::to_string(node)), node_(node) {}
  std::int64_t node() const { return node_; }

 private:
  std::int64_t node_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace unirat
