#pragma once

#include <stdexcept>

namespace fraclayer {

struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct not_a_layer_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct precondition_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct fit_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace fraclayer
