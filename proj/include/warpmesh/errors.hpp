#pragma once

#include <stdexcept>

namespace warpmesh {

// Invalid construction parameters (e.g. a lattice smaller than 2 sections).
class invalid_size : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation applied to the wrong kind of object, e.g. an FDS step on a TWM state.
class usage_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Argument outside the mathematical domain of a map (frequency out of range, ...).
class numerical_domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace warpmesh
