#include "unirat/errors.hpp"

namespace unirat {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::BadPrime:
      return "BadPrime";
    case ErrorKind::OddCharacteristic:
      return "OddCharacteristic";
    case ErrorKind::NotDivisible:
      return "NotDivisible";
    case ErrorKind::SingularPoint:
      return "SingularPoint";
    case ErrorKind::PointNotOnVariety:
      return "PointNotOnVariety";
    case ErrorKind::PointNotOnQuadric:
      return "PointNotOnQuadric";
    case ErrorKind::SingularBasePoint:
      return "SingularBasePoint";
    case ErrorKind::LineInsideCubic:
      return "LineInsideCubic";
    case ErrorKind::VertexOnBase:
      return "VertexOnBase";
    case ErrorKind::TangentsCoincide:
      return "TangentsCoincide";
    case ErrorKind::DegenerateConic:
      return "DegenerateConic";
    case ErrorKind::SectionSingular:
      return "SectionSingular";
    case ErrorKind::PoleHit:
      return "PoleHit";
    case ErrorKind::ChartVanishes:
      return "ChartVanishes";
    case ErrorKind::ArityMismatch:
      return "ArityMismatch";
    case ErrorKind::MalformedInput:
      return "MalformedInput";
    case ErrorKind::DegreeCeilingExceeded:
      return "DegreeCeilingExceeded";
    case ErrorKind::BudgetExceeded:
      return "BudgetExceeded";
    case ErrorKind::NotEmptyModP:
      return "NotEmptyModP";
    case ErrorKind::IdentityFails:
      return "IdentityFails";
    case ErrorKind::RankDeficient:
      return "RankDeficient";
    case ErrorKind::AbsorptionFails:
      return "AbsorptionFails";
    case ErrorKind::LambdaZero:
      return "LambdaZero";
    case ErrorKind::InterpolationAmbiguous:
      return "InterpolationAmbiguous";
    case ErrorKind::InterpolationEmpty:
      return "InterpolationEmpty";
    case ErrorKind::NoRationalPoint:
      return "NoRationalPoint";
  }
  return "Unknown";
}

}  // namespace unirat
