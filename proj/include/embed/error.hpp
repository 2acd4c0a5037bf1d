#pragma once

#include <stdexcept>
#include <string>

namespace embed {

enum class ErrorKind {
  invalid_parameter,  // parameter outside its admissible range
  unsupported,        // characteristic tail vanishes on the support, atom at zero, ...
  unbalanced,         // D(inf) != G(-inf)
  inadmissible,       // atomic solver could not close the construction
  use_atomic,         // signed solver was handed an atomic law
  use_positive,       // signed solver was handed a one-sided law
  out_of_scope,       // mixed atomic + continuous signed law
  configuration,      // bad config / sampler setup
};

const char* to_string(ErrorKind kind);

class EmbedError : public std::runtime_error {
 public:
  EmbedError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace embed
