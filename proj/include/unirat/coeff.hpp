#pragma once

namespace unirat {

// Zero test resolved by argument-dependent lookup at instantiation, so
// coefficient types declared later work too, and class members named is_zero
// do not hide it.
template <class T>
bool coeff_is_zero(const T& c) {
  return is_zero(c);
}

}  // namespace unirat
