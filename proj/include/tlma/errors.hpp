#pragma once

#include <stdexcept>

namespace tlma {

// Config or scenario file syntax/schema problems.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Filesystem failures.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace tlma
